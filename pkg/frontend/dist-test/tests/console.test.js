/**
 * Contract tests: the console must emit requests exactly as the gateway
 * documents them, and render what comes back. A recording fake gateway
 * (plain node:http) captures every request for inspection.
 */
import assert from "node:assert/strict";
import http from "node:http";
import { test, after } from "node:test";
import { ConsoleSession, SERVICES, TERMINAL_WEB, buildLogsRequest, buildRecognitionRequest, findService, toBase64, } from "../src/api.js";
import { describeFailure, describeResults, emptyLogMessage, formatConfidence, logRowCells, terminalLabel, } from "../src/render.js";
const recorded = [];
let responder = defaultResponder;
function envelope(results) {
    const payload = { status: 0, message: "OK", elapse: 1.5, results };
    return JSON.stringify(payload);
}
function defaultResponder(req) {
    const route = req.path.replace(/^\/api\//, "").split("?")[0];
    if (route === "logs") {
        return { status: 200, body: envelope([]) };
    }
    const service = SERVICES.find((s) => s.route === route);
    if (!service) {
        return { status: 404, body: JSON.stringify({ status: -404, message: "no such route", elapse: 0.1 }) };
    }
    if (service.kind === "classification") {
        return {
            status: 200,
            body: envelope([
                { label: "rose", confidence: 0.91 },
                { label: "tulip", confidence: 0.09 },
            ]),
        };
    }
    if (service.kind === "regression") {
        return { status: 200, body: envelope({ score: 4.2 }) };
    }
    return {
        status: 200,
        body: envelope([{ person_id: "person-01", similarity: 0.9931 }]),
    };
}
const server = http.createServer((req, res) => {
    const chunks = [];
    req.on("data", (chunk) => chunks.push(chunk));
    req.on("end", () => {
        const entry = {
            method: req.method ?? "",
            path: req.url ?? "",
            headers: req.headers,
            body: Buffer.concat(chunks).toString("utf-8"),
        };
        recorded.push(entry);
        const reply = responder(entry);
        const send = () => {
            res.writeHead(reply.status, { "Content-Type": "application/json" });
            res.end(reply.body);
        };
        if (reply.delayMs) {
            setTimeout(send, reply.delayMs);
        }
        else {
            send();
        }
    });
});
const baseUrl = await new Promise((resolve) => {
    server.listen(0, "127.0.0.1", () => {
        const address = server.address();
        if (address === null || typeof address === "string") {
            throw new Error("no address");
        }
        resolve(`http://127.0.0.1:${address.port}`);
    });
});
after(() => server.close());
function freshSession(key = "console-key-1") {
    const session = new ConsoleSession();
    session.apiKey = key;
    session.baseUrl = baseUrl;
    return session;
}
function sourceFor(route) {
    return findService(route).input === "id"
        ? { kind: "id", id: "item-42" }
        : { kind: "file", bytes: new Uint8Array([1, 2, 3, 250, 251, 252]) };
}
test("submit emits a schema-conformant request for each of the 8 routes", async () => {
    for (const service of SERVICES) {
        recorded.length = 0;
        const session = freshSession();
        session.selectedRoute = service.route;
        const source = sourceFor(service.route);
        const outcome = await session.submit(source);
        assert.equal(outcome.state, "ok", `${service.route}: ${JSON.stringify(outcome)}`);
        assert.equal(recorded.length, 1);
        const req = recorded[0];
        assert.equal(req.method, service.method, service.route);
        assert.equal(req.headers["x-api-key"], "console-key-1", service.route);
        if (service.method === "POST") {
            assert.equal(req.path, `/api/${service.route}`);
            assert.match(String(req.headers["content-type"]), /application\/json/);
            const body = JSON.parse(req.body);
            assert.deepEqual(Object.keys(body).sort(), ["imgraw", "terminal_type"]);
            assert.equal(body.terminal_type, TERMINAL_WEB);
            const decoded = Buffer.from(body.imgraw, "base64");
            assert.deepEqual([...decoded], [1, 2, 3, 250, 251, 252]);
        }
        else {
            const [path, query] = req.path.split("?");
            assert.equal(path, `/api/${service.route}`);
            const params = new URLSearchParams(query);
            assert.equal(params.get("id"), "item-42");
            assert.equal(params.get("terminal_type"), String(TERMINAL_WEB));
            assert.equal(req.body, "");
        }
    }
});
test("imgurl submissions carry the URL instead of inline bytes", async () => {
    recorded.length = 0;
    const session = freshSession();
    session.selectedRoute = "cv/plant";
    const outcome = await session.submit({ kind: "url", url: "http://img.example/leaf.jpg" });
    assert.equal(outcome.state, "ok");
    const body = JSON.parse(recorded[0].body);
    assert.deepEqual(Object.keys(body).sort(), ["imgurl", "terminal_type"]);
    assert.equal(body.imgurl, "http://img.example/leaf.jpg");
    assert.equal(body.terminal_type, TERMINAL_WEB);
});
test("classification results render as label + percentage lines", async () => {
    const session = freshSession();
    session.selectedRoute = "cv/plant";
    const outcome = await session.submit(sourceFor("cv/plant"));
    assert.equal(outcome.state, "ok");
    if (outcome.state !== "ok")
        return;
    const view = describeResults(outcome.service, outcome.envelope);
    assert.equal(view.lines[0], "rose 91.0%");
    assert.equal(view.lines[1], "tulip 9.0%");
});
test("regression results render a score gauge within the contract range", async () => {
    const session = freshSession();
    session.selectedRoute = "dm/zhihuliveeval";
    const outcome = await session.submit({ kind: "id", id: "zl-1" });
    assert.equal(outcome.state, "ok");
    if (outcome.state !== "ok")
        return;
    const view = describeResults(outcome.service, outcome.envelope);
    assert.ok(view.gauge);
    assert.equal(view.gauge?.low, 0);
    assert.equal(view.gauge?.high, 5);
    assert.equal(view.gauge?.value, 4.2);
    assert.match(view.lines[0], /score 4\.200/);
});
test("retrieval results render person ids with similarity", async () => {
    const session = freshSession();
    session.selectedRoute = "cv/facesearch";
    const outcome = await session.submit(sourceFor("cv/facesearch"));
    assert.equal(outcome.state, "ok");
    if (outcome.state !== "ok")
        return;
    const view = describeResults(outcome.service, outcome.envelope);
    assert.match(view.lines[0], /person-01 similarity 0\.9931/);
});
test("wrong key produces a visible unauthorized state", async () => {
    responder = () => ({
        status: 401,
        body: JSON.stringify({ status: -401, message: "unknown API key", elapse: 0.2 }),
    });
    try {
        const session = freshSession("wrong-key");
        session.selectedRoute = "cv/plant";
        const outcome = await session.submit(sourceFor("cv/plant"));
        assert.equal(outcome.state, "api-error");
        const message = describeFailure(outcome);
        assert.match(message, /unauthorized/);
        assert.match(message, /401/);
        assert.match(message, /unknown API key/);
    }
    finally {
        responder = defaultResponder;
    }
});
test("non-envelope failures and network failures are distinct states", async () => {
    responder = () => ({ status: 500, body: "<html>boom</html>" });
    try {
        const session = freshSession();
        session.selectedRoute = "cv/plant";
        const outcome = await session.submit(sourceFor("cv/plant"));
        assert.equal(outcome.state, "http-error");
        assert.match(describeFailure(outcome), /HTTP 500/);
    }
    finally {
        responder = defaultResponder;
    }
    const offline = new ConsoleSession();
    offline.apiKey = "k";
    offline.baseUrl = "http://127.0.0.1:9";
    const outcome = await offline.submit(sourceFor("cv/plant"));
    assert.equal(outcome.state, "network-error");
    assert.match(describeFailure(outcome), /network failure/);
});
test("at most one recognition request is in flight", async () => {
    responder = (req) => ({ ...defaultResponder(req), delayMs: 80 });
    try {
        const session = freshSession();
        session.selectedRoute = "cv/plant";
        const first = session.submit(sourceFor("cv/plant"));
        assert.equal(session.pending, true);
        assert.equal(session.canSubmit(), false);
        const second = await session.submit(sourceFor("cv/plant"));
        assert.equal(second.state, "busy");
        assert.match(describeFailure(second), /already in flight/);
        const firstOutcome = await first;
        assert.equal(firstOutcome.state, "ok");
        assert.equal(session.pending, false);
    }
    finally {
        responder = defaultResponder;
    }
});
test("log view requests and renders query results with terminal_type=web", async () => {
    const rows = [
        {
            username: "tester",
            api_name: "cv/plant",
            api_elapse: 12.34,
            api_call_datetime: "2026-08-08T10:00:00.500Z",
            terminal_type: 0,
            img_path: "imgraw:abc",
        },
    ];
    responder = (req) => req.path.startsWith("/api/logs")
        ? { status: 200, body: envelope(rows) }
        : defaultResponder(req);
    try {
        recorded.length = 0;
        const session = freshSession();
        const outcome = await session.fetchLogs({ apiName: "cv/plant", limit: 5 });
        assert.equal(outcome.state, "ok");
        if (outcome.state !== "ok")
            return;
        const req = recorded[0];
        const [path, query] = req.path.split("?");
        assert.equal(path, "/api/logs");
        const params = new URLSearchParams(query);
        assert.equal(params.get("api_name"), "cv/plant");
        assert.equal(params.get("limit"), "5");
        assert.equal(req.headers["x-api-key"], "console-key-1");
        assert.equal(outcome.rows.length, 1);
        const cells = logRowCells(outcome.rows[0]);
        assert.equal(cells.terminal, "web");
        assert.equal(cells.apiName, "cv/plant");
        assert.match(cells.elapse, /12\.3 ms/);
        assert.match(cells.datetime, /2026-08-08 10:00:00\.500 UTC/);
    }
    finally {
        responder = defaultResponder;
    }
});
test("empty log states render a message instead of a blank table", () => {
    assert.equal(emptyLogMessage(), "no calls recorded yet");
    assert.equal(emptyLogMessage("cv/none"), "no calls recorded for cv/none");
});
test("builders validate input kinds against the service", () => {
    const plant = findService("cv/plant");
    assert.throws(() => buildRecognitionRequest(baseUrl, plant, { kind: "id", id: "x" }, "k"), /expects an image input/);
    const live = findService("dm/zhihuliveeval");
    assert.throws(() => buildRecognitionRequest(baseUrl, live, { kind: "file", bytes: new Uint8Array([1]) }, "k"), /expects an id input/);
    const logs = buildLogsRequest("http://x/", "k", {});
    assert.equal(logs.url, "http://x/api/logs?limit=20");
});
test("toBase64 matches Buffer for odd sizes", () => {
    for (const size of [1, 2, 3, 255, 256, 1000, 70000]) {
        const bytes = new Uint8Array(size).map((_, i) => (i * 7 + 3) % 256);
        assert.equal(toBase64(bytes), Buffer.from(bytes).toString("base64"), `size=${size}`);
    }
});
test("terminal labels cover the full enum", () => {
    assert.deepEqual([0, 1, 2, 3, 4].map(terminalLabel), ["web", "android", "ios", "miniprogram", "api"]);
    assert.equal(terminalLabel(9), "type-9");
    assert.equal(formatConfidence(0.732), "73.2%");
});
