/**
 * Pure rendering helpers: outcomes and log rows to display strings.
 * Kept DOM-free so the same logic is asserted in node tests.
 */

import type {
  ApiEnvelope,
  FaceMatch,
  LabelScore,
  LogRow,
  ServiceInfo,
  SubmitOutcome,
} from "./api.js";

const TERMINAL_LABELS = ["web", "android", "ios", "miniprogram", "api"];

export function terminalLabel(terminalType: number): string {
  return TERMINAL_LABELS[terminalType] ?? `type-${terminalType}`;
}

export function formatConfidence(confidence: number): string {
  return `${(confidence * 100).toFixed(1)}%`;
}

export interface ResultView {
  heading: string;
  lines: string[];
  gauge?: { value: number; low: number; high: number };
}

export function describeResults(service: ServiceInfo, envelope: ApiEnvelope): ResultView {
  const elapsed = `${envelope.elapse.toFixed(1)} ms`;
  if (service.kind === "classification") {
    const entries = (envelope.results as LabelScore[]) ?? [];
    return {
      heading: `${service.label} — ${elapsed}`,
      lines: entries.map((e) => `${e.label} ${formatConfidence(e.confidence)}`),
    };
  }
  if (service.kind === "regression") {
    const score = (envelope.results as { score: number }).score;
    const [low, high] = service.scoreRange ?? [0, 5];
    return {
      heading: `${service.label} — ${elapsed}`,
      lines: [`score ${score.toFixed(3)} (range ${low}–${high})`],
      gauge: { value: score, low, high },
    };
  }
  const matches = (envelope.results as FaceMatch[]) ?? [];
  return {
    heading: `${service.label} — ${elapsed}`,
    lines: matches.map(
      (m) => `${m.person_id} similarity ${m.similarity.toFixed(4)}`,
    ),
  };
}

/** Distinct, visible message per failure state; nothing is swallowed. */
export function describeFailure(outcome: SubmitOutcome): string {
  switch (outcome.state) {
    case "busy":
      return "a request is already in flight";
    case "network-error":
      return `network failure: ${outcome.detail}`;
    case "http-error":
      return `HTTP ${outcome.httpStatus}: ${outcome.detail}`;
    case "api-error": {
      const label = outcome.httpStatus === 401 ? "unauthorized" : `error ${outcome.envelope.status}`;
      return `${label} (HTTP ${outcome.httpStatus}): ${outcome.envelope.message}`;
    }
    default:
      return "";
  }
}

export interface LogCells {
  apiName: string;
  elapse: string;
  datetime: string;
  terminal: string;
}

export function logRowCells(row: LogRow): LogCells {
  return {
    apiName: row.api_name,
    elapse: `${row.api_elapse.toFixed(1)} ms`,
    datetime: row.api_call_datetime.replace("T", " ").replace("Z", " UTC"),
    terminal: terminalLabel(row.terminal_type),
  };
}

export function emptyLogMessage(apiName?: string): string {
  return apiName ? `no calls recorded for ${apiName}` : "no calls recorded yet";
}
