/**
 * Gateway client: service catalog, request building, and the console
 * session state machine. No DOM access here, so everything is testable
 * under node against a recording fake gateway.
 */

export type ServiceKind = "classification" | "regression" | "retrieval";
export type InputKind = "image" | "id";

export interface ServiceInfo {
  route: string;
  method: "GET" | "POST";
  kind: ServiceKind;
  input: InputKind;
  label: string;
  scoreRange?: [number, number];
}

/** The eight published services, in catalog order. */
export const SERVICES: ServiceInfo[] = [
  { route: "cv/mcloud/skin", method: "POST", kind: "classification", input: "image", label: "Skin disease recognition" },
  { route: "cv/fbp", method: "POST", kind: "regression", input: "image", label: "Facial beauty prediction", scoreRange: [1, 5] },
  { route: "cv/nsfw", method: "POST", kind: "classification", input: "image", label: "Sensitive-image recognition" },
  { route: "cv/pdr", method: "POST", kind: "classification", input: "image", label: "Plant disease recognition" },
  { route: "cv/food", method: "POST", kind: "classification", input: "image", label: "Food recognition" },
  { route: "cv/plant", method: "POST", kind: "classification", input: "image", label: "Plant recognition" },
  { route: "cv/facesearch", method: "POST", kind: "retrieval", input: "image", label: "Face retrieval" },
  { route: "dm/zhihuliveeval", method: "GET", kind: "regression", input: "id", label: "Zhihu Live rating", scoreRange: [0, 5] },
];

export function findService(route: string): ServiceInfo {
  const service = SERVICES.find((s) => s.route === route);
  if (!service) {
    throw new Error(`unknown service route: ${route}`);
  }
  return service;
}

export const TERMINAL_WEB = 0;
export const API_KEY_HEADER = "X-API-Key";

export interface ApiEnvelope {
  status: number;
  message: string;
  elapse: number;
  results?: unknown;
}

export interface LabelScore {
  label: string;
  confidence: number;
}

export interface FaceMatch {
  person_id: string;
  similarity: number;
}

export interface LogRow {
  username: string;
  api_name: string;
  api_elapse: number;
  api_call_datetime: string;
  terminal_type: number;
  img_path: string;
}

export type RecognitionSource =
  | { kind: "file"; bytes: Uint8Array }
  | { kind: "url"; url: string }
  | { kind: "id"; id: string };

/** Base64 without call-stack-sized apply() tricks; fine for multi-MB files. */
export function toBase64(bytes: Uint8Array): string {
  let binary = "";
  const chunk = 0x8000;
  for (let i = 0; i < bytes.length; i += chunk) {
    binary += String.fromCharCode(...bytes.subarray(i, i + chunk));
  }
  return btoa(binary);
}

export interface BuiltRequest {
  url: string;
  init: RequestInit;
}

function joinUrl(baseUrl: string, path: string): string {
  return baseUrl.replace(/\/+$/, "") + path;
}

/**
 * Build the HTTP request for one recognition call, exactly as the gateway
 * documents it: POST services carry JSON {imgraw|imgurl, terminal_type}
 * with the key in the X-API-Key header; the GET service carries id and
 * terminal_type as query parameters.
 */
export function buildRecognitionRequest(
  baseUrl: string,
  service: ServiceInfo,
  source: RecognitionSource,
  apiKey: string,
): BuiltRequest {
  if (service.method === "GET") {
    if (source.kind !== "id") {
      throw new Error(`${service.route} expects an id input`);
    }
    const query = new URLSearchParams({
      id: source.id,
      terminal_type: String(TERMINAL_WEB),
    });
    return {
      url: joinUrl(baseUrl, `/api/${service.route}?${query.toString()}`),
      init: { method: "GET", headers: { [API_KEY_HEADER]: apiKey } },
    };
  }
  let body: Record<string, unknown>;
  if (source.kind === "file") {
    body = { imgraw: toBase64(source.bytes), terminal_type: TERMINAL_WEB };
  } else if (source.kind === "url") {
    body = { imgurl: source.url, terminal_type: TERMINAL_WEB };
  } else {
    throw new Error(`${service.route} expects an image input`);
  }
  return {
    url: joinUrl(baseUrl, `/api/${service.route}`),
    init: {
      method: "POST",
      headers: {
        [API_KEY_HEADER]: apiKey,
        "Content-Type": "application/json",
      },
      body: JSON.stringify(body),
    },
  };
}

export function buildLogsRequest(
  baseUrl: string,
  apiKey: string,
  filter: { apiName?: string; limit?: number } = {},
): BuiltRequest {
  const query = new URLSearchParams();
  if (filter.apiName) {
    query.set("api_name", filter.apiName);
  }
  query.set("limit", String(filter.limit ?? 20));
  return {
    url: joinUrl(baseUrl, `/api/logs?${query.toString()}`),
    init: { method: "GET", headers: { [API_KEY_HEADER]: apiKey } },
  };
}

/** Every way a submission can end; errors surface, never swallowed. */
export type SubmitOutcome =
  | { state: "ok"; envelope: ApiEnvelope; service: ServiceInfo }
  | { state: "api-error"; httpStatus: number; envelope: ApiEnvelope }
  | { state: "http-error"; httpStatus: number; detail: string }
  | { state: "network-error"; detail: string }
  | { state: "busy" };

export type LogsOutcome =
  | { state: "ok"; rows: LogRow[] }
  | { state: "api-error"; httpStatus: number; envelope: ApiEnvelope }
  | { state: "http-error"; httpStatus: number; detail: string }
  | { state: "network-error"; detail: string };

async function outcomeFromResponse(response: Response): Promise<
  | { state: "ok"; envelope: ApiEnvelope }
  | { state: "api-error"; httpStatus: number; envelope: ApiEnvelope }
  | { state: "http-error"; httpStatus: number; detail: string }
> {
  const text = await response.text();
  let envelope: ApiEnvelope | null = null;
  try {
    const parsed = JSON.parse(text);
    if (parsed && typeof parsed.status === "number") {
      envelope = parsed as ApiEnvelope;
    }
  } catch {
    envelope = null;
  }
  if (response.ok && envelope && envelope.status === 0) {
    return { state: "ok", envelope };
  }
  if (envelope) {
    return { state: "api-error", httpStatus: response.status, envelope };
  }
  return {
    state: "http-error",
    httpStatus: response.status,
    detail: text.slice(0, 200) || response.statusText,
  };
}

/**
 * One user's console session. The key lives only in this object (memory),
 * never in persistent browser storage. At most one recognition request is
 * in flight: submit() reports "busy" instead of double-sending.
 */
export class ConsoleSession {
  apiKey = "";
  baseUrl = "";
  selectedRoute: string = SERVICES[0].route;
  pending = false;
  lastOutcome: SubmitOutcome | null = null;

  private fetcher: typeof fetch;

  constructor(fetcher: typeof fetch = fetch) {
    this.fetcher = fetcher;
  }

  get service(): ServiceInfo {
    return findService(this.selectedRoute);
  }

  canSubmit(): boolean {
    return !this.pending && this.apiKey.length > 0;
  }

  async submit(source: RecognitionSource): Promise<SubmitOutcome> {
    if (this.pending) {
      return { state: "busy" };
    }
    this.pending = true;
    try {
      const service = this.service;
      const { url, init } = buildRecognitionRequest(
        this.baseUrl, service, source, this.apiKey,
      );
      let response: Response;
      try {
        response = await this.fetcher(url, init);
      } catch (error) {
        const outcome: SubmitOutcome = {
          state: "network-error",
          detail: error instanceof Error ? error.message : String(error),
        };
        this.lastOutcome = outcome;
        return outcome;
      }
      const base = await outcomeFromResponse(response);
      const outcome: SubmitOutcome =
        base.state === "ok" ? { ...base, service } : base;
      this.lastOutcome = outcome;
      return outcome;
    } finally {
      this.pending = false;
    }
  }

  async fetchLogs(filter: { apiName?: string; limit?: number } = {}): Promise<LogsOutcome> {
    const { url, init } = buildLogsRequest(this.baseUrl, this.apiKey, filter);
    let response: Response;
    try {
      response = await this.fetcher(url, init);
    } catch (error) {
      return {
        state: "network-error",
        detail: error instanceof Error ? error.message : String(error),
      };
    }
    const base = await outcomeFromResponse(response);
    if (base.state === "ok") {
      const rows = Array.isArray(base.envelope.results)
        ? (base.envelope.results as LogRow[])
        : [];
      return { state: "ok", rows };
    }
    return base;
  }
}
