/** DOM wiring for the console page. All logic lives in api.ts/render.ts. */

import { ConsoleSession, SERVICES, findService, type RecognitionSource } from "./api.js";
import {
  describeFailure,
  describeResults,
  emptyLogMessage,
  logRowCells,
} from "./render.js";

const session = new ConsoleSession();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const apiKeyInput = el<HTMLInputElement>("api-key");
const baseUrlInput = el<HTMLInputElement>("base-url");
const serviceSelect = el<HTMLSelectElement>("service");
const fileInput = el<HTMLInputElement>("file-input");
const urlInput = el<HTMLInputElement>("url-input");
const idInput = el<HTMLInputElement>("id-input");
const submitButton = el<HTMLButtonElement>("submit");
const resultPanel = el<HTMLDivElement>("result");
const imageRow = el<HTMLDivElement>("image-inputs");
const idRow = el<HTMLDivElement>("id-inputs");
const logFilter = el<HTMLInputElement>("log-filter");
const logLimit = el<HTMLInputElement>("log-limit");
const refreshButton = el<HTMLButtonElement>("refresh-logs");
const logBody = el<HTMLTableSectionElement>("log-body");
const logEmpty = el<HTMLDivElement>("log-empty");

for (const service of SERVICES) {
  const option = document.createElement("option");
  option.value = service.route;
  option.textContent = `${service.route} — ${service.label}`;
  serviceSelect.appendChild(option);
}

function syncInputs(): void {
  session.selectedRoute = serviceSelect.value;
  const wantsId = findService(serviceSelect.value).input === "id";
  idRow.hidden = !wantsId;
  imageRow.hidden = wantsId;
}
serviceSelect.addEventListener("change", syncInputs);
syncInputs();

function setBusy(busy: boolean): void {
  submitButton.disabled = busy;
  submitButton.textContent = busy ? "Running…" : "Submit";
}

function show(message: string, tone: "ok" | "error" | "muted"): void {
  resultPanel.className = `panel ${tone}`;
  resultPanel.textContent = message;
}

async function currentSource(): Promise<RecognitionSource | null> {
  if (findService(serviceSelect.value).input === "id") {
    const id = idInput.value.trim();
    if (!id) {
      show("enter an id first", "error");
      return null;
    }
    return { kind: "id", id };
  }
  const file = fileInput.files?.[0];
  if (file) {
    const buffer = await file.arrayBuffer();
    return { kind: "file", bytes: new Uint8Array(buffer) };
  }
  const url = urlInput.value.trim();
  if (url) {
    return { kind: "url", url };
  }
  show("choose a file or enter an image URL", "error");
  return null;
}

submitButton.addEventListener("click", async () => {
  session.apiKey = apiKeyInput.value.trim();
  session.baseUrl = baseUrlInput.value.trim();
  if (!session.canSubmit()) {
    show(session.pending ? "a request is already in flight" : "enter your API key", "error");
    return;
  }
  const source = await currentSource();
  if (!source) {
    return;
  }
  setBusy(true);
  try {
    const outcome = await session.submit(source);
    if (outcome.state === "ok") {
      const view = describeResults(outcome.service, outcome.envelope);
      const body = view.lines.length ? view.lines.join("\n") : "(no results)";
      show(`${view.heading}\n${body}`, "ok");
      void refreshLogs();
    } else {
      show(describeFailure(outcome), "error");
    }
  } finally {
    setBusy(false);
  }
});

async function refreshLogs(): Promise<void> {
  session.apiKey = apiKeyInput.value.trim();
  session.baseUrl = baseUrlInput.value.trim();
  if (!session.apiKey) {
    return;
  }
  const apiName = logFilter.value.trim() || undefined;
  const limit = Number(logLimit.value) || 20;
  const outcome = await session.fetchLogs({ apiName, limit });
  logBody.replaceChildren();
  if (outcome.state !== "ok") {
    logEmpty.hidden = false;
    logEmpty.textContent = describeFailure(outcome);
    return;
  }
  if (outcome.rows.length === 0) {
    logEmpty.hidden = false;
    logEmpty.textContent = emptyLogMessage(apiName);
    return;
  }
  logEmpty.hidden = true;
  for (const row of outcome.rows) {
    const cells = logRowCells(row);
    const tr = document.createElement("tr");
    for (const value of [cells.apiName, cells.elapse, cells.datetime, cells.terminal]) {
      const td = document.createElement("td");
      td.textContent = value;
      tr.appendChild(td);
    }
    logBody.appendChild(tr);
  }
}

refreshButton.addEventListener("click", () => void refreshLogs());
