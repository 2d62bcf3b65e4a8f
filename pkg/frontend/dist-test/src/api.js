/**
 * Gateway client: service catalog, request building, and the console
 * session state machine. No DOM access here, so everything is testable
 * under node against a recording fake gateway.
 */
/** The eight published services, in catalog order. */
export const SERVICES = [
    { route: "cv/mcloud/skin", method: "POST", kind: "classification", input: "image", label: "Skin disease recognition" },
    { route: "cv/fbp", method: "POST", kind: "regression", input: "image", label: "Facial beauty prediction", scoreRange: [1, 5] },
    { route: "cv/nsfw", method: "POST", kind: "classification", input: "image", label: "Sensitive-image recognition" },
    { route: "cv/pdr", method: "POST", kind: "classification", input: "image", label: "Plant disease recognition" },
    { route: "cv/food", method: "POST", kind: "classification", input: "image", label: "Food recognition" },
    { route: "cv/plant", method: "POST", kind: "classification", input: "image", label: "Plant recognition" },
    { route: "cv/facesearch", method: "POST", kind: "retrieval", input: "image", label: "Face retrieval" },
    { route: "dm/zhihuliveeval", method: "GET", kind: "regression", input: "id", label: "Zhihu Live rating", scoreRange: [0, 5] },
];
export function findService(route) {
    const service = SERVICES.find((s) => s.route === route);
    if (!service) {
        throw new Error(`unknown service route: ${route}`);
    }
    return service;
}
export const TERMINAL_WEB = 0;
export const API_KEY_HEADER = "X-API-Key";
/** Base64 without call-stack-sized apply() tricks; fine for multi-MB files. */
export function toBase64(bytes) {
    let binary = "";
    const chunk = 0x8000;
    for (let i = 0; i < bytes.length; i += chunk) {
        binary += String.fromCharCode(...bytes.subarray(i, i + chunk));
    }
    return btoa(binary);
}
function joinUrl(baseUrl, path) {
    return baseUrl.replace(/\/+$/, "") + path;
}
/**
 * Build the HTTP request for one recognition call, exactly as the gateway
 * documents it: POST services carry JSON {imgraw|imgurl, terminal_type}
 * with the key in the X-API-Key header; the GET service carries id and
 * terminal_type as query parameters.
 */
export function buildRecognitionRequest(baseUrl, service, source, apiKey) {
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
    let body;
    if (source.kind === "file") {
        body = { imgraw: toBase64(source.bytes), terminal_type: TERMINAL_WEB };
    }
    else if (source.kind === "url") {
        body = { imgurl: source.url, terminal_type: TERMINAL_WEB };
    }
    else {
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
export function buildLogsRequest(baseUrl, apiKey, filter = {}) {
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
async function outcomeFromResponse(response) {
    const text = await response.text();
    let envelope = null;
    try {
        const parsed = JSON.parse(text);
        if (parsed && typeof parsed.status === "number") {
            envelope = parsed;
        }
    }
    catch {
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
    constructor(fetcher = fetch) {
        this.apiKey = "";
        this.baseUrl = "";
        this.selectedRoute = SERVICES[0].route;
        this.pending = false;
        this.lastOutcome = null;
        this.fetcher = fetcher;
    }
    get service() {
        return findService(this.selectedRoute);
    }
    canSubmit() {
        return !this.pending && this.apiKey.length > 0;
    }
    async submit(source) {
        if (this.pending) {
            return { state: "busy" };
        }
        this.pending = true;
        try {
            const service = this.service;
            const { url, init } = buildRecognitionRequest(this.baseUrl, service, source, this.apiKey);
            let response;
            try {
                response = await this.fetcher(url, init);
            }
            catch (error) {
                const outcome = {
                    state: "network-error",
                    detail: error instanceof Error ? error.message : String(error),
                };
                this.lastOutcome = outcome;
                return outcome;
            }
            const base = await outcomeFromResponse(response);
            const outcome = base.state === "ok" ? { ...base, service } : base;
            this.lastOutcome = outcome;
            return outcome;
        }
        finally {
            this.pending = false;
        }
    }
    async fetchLogs(filter = {}) {
        const { url, init } = buildLogsRequest(this.baseUrl, this.apiKey, filter);
        let response;
        try {
            response = await this.fetcher(url, init);
        }
        catch (error) {
            return {
                state: "network-error",
                detail: error instanceof Error ? error.message : String(error),
            };
        }
        const base = await outcomeFromResponse(response);
        if (base.state === "ok") {
            const rows = Array.isArray(base.envelope.results)
                ? base.envelope.results
                : [];
            return { state: "ok", rows };
        }
        return base;
    }
}
