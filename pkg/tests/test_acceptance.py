"""Acceptance suite: the platform's exit criteria, one test per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion. The 20-QPS stability check drives the full local stack for a
minute, so the suite takes a little over 60 seconds.
"""

from __future__ import annotations

import base64
import json
import random
import time
import urllib.error
import urllib.request

import pytest

from modelgate import metrics
from modelgate.core import FaceIndex, default_registry, embed_bytes
from modelgate.gateway import Worker, WorkerPool
from modelgate.loadgen import (
    StressPlan,
    StressRunner,
    StressTarget,
    bench_throughput,
    render_report,
    warmup_count,
)
from modelgate.persistence import Store
from conftest import TEST_KEY, make_server
from fakes import ScriptedTransport
from oracles import (
    accuracy_reference,
    cosine_scan,
    mae_reference,
    pearson_reference,
    percentile_reference,
)

ROUTES = {
    "cv/mcloud/skin": "POST",
    "cv/fbp": "POST",
    "cv/nsfw": "POST",
    "cv/pdr": "POST",
    "cv/food": "POST",
    "cv/plant": "POST",
    "cv/facesearch": "POST",
    "dm/zhihuliveeval": "GET",
}


def _announce(name: str) -> None:
    print(f"PASS  {name}")


def _imgraw(blob: bytes) -> str:
    return base64.b64encode(blob).decode("ascii")


def _http(server, method, path, *, key=TEST_KEY, body=None):
    headers = {}
    if key is not None:
        headers["X-API-Key"] = key
    data = None
    if body is not None:
        data = json.dumps(body).encode()
        headers["Content-Type"] = "application/json"
    request = urllib.request.Request(
        server.base_url + path, data=data, headers=headers, method=method
    )
    try:
        with urllib.request.urlopen(request, timeout=10) as response:
            return response.status
    except urllib.error.HTTPError as exc:
        exc.read()
        return exc.code


def test_metric_oracle_equivalence():
    """PC/MAE/accuracy match a brute-force reimplementation on 1000 inputs."""
    started = time.perf_counter()
    rng = random.Random(0xACCE97)
    labels = ["a", "b", "c", "d"]
    checked = 0
    while checked < 1000:
        n = rng.randint(2, 80)
        x = [rng.uniform(-50, 50) for _ in range(n)]
        y = [rng.uniform(-50, 50) for _ in range(n)]
        if max(x) - min(x) < 1e-6 or max(y) - min(y) < 1e-6:
            continue
        assert abs(metrics.pearson_correlation(x, y) - pearson_reference(x, y)) <= 1e-9
        assert abs(metrics.mean_absolute_error(x, y) - mae_reference(x, y)) <= 1e-9
        preds = [rng.choice(labels) for _ in range(n)]
        truths = [rng.choice(labels) for _ in range(n)]
        assert abs(metrics.accuracy(preds, truths) - accuracy_reference(preds, truths)) <= 1e-9
        checked += 1

    # symmetry and affine invariance property sweeps
    for _ in range(300):
        n = rng.randint(2, 40)
        x = [rng.uniform(-20, 20) for _ in range(n)]
        y = [rng.uniform(-20, 20) for _ in range(n)]
        if max(x) - min(x) < 1e-6 or max(y) - min(y) < 1e-6:
            continue
        pc = metrics.pearson_correlation(x, y)
        assert abs(pc - metrics.pearson_correlation(y, x)) <= 1e-12
        a = rng.uniform(0.1, 30.0)
        b = rng.uniform(-100.0, 100.0)
        assert metrics.pearson_correlation([a * v + b for v in x], y) == pytest.approx(pc, abs=1e-9)
        assert metrics.pearson_correlation([-a * v + b for v in x], y) == pytest.approx(-pc, abs=1e-9)
        assert abs(pc) <= 1.0 + 1e-12

    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"metric oracle check took {elapsed:.2f}s"
    _announce("metric oracle equivalence (1000 inputs, affine/symmetry suites)")


def test_percentile_exactness():
    """Nearest-rank P99 over 1..100 is 99; monotone in p on 200 multisets."""
    started = time.perf_counter()
    samples = list(range(1, 101))
    random.Random(3).shuffle(samples)
    assert metrics.percentile_nearest_rank(samples, 0.99) == 99

    rng = random.Random(0x9E7C)
    for _ in range(200):
        n = rng.randint(1, 60)
        multiset = [round(rng.uniform(0, 500), 2) for _ in range(n)]
        previous = None
        for hundredths in range(1, 101):
            value = metrics.percentile_nearest_rank(multiset, hundredths / 100)
            assert value in multiset
            assert value == percentile_reference(multiset, hundredths / 100)
            if previous is not None:
                assert value >= previous
            previous = value

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"percentile check took {elapsed:.2f}s"
    _announce("percentile exactness (P99 rank rule + monotonicity)")


def test_api_conformance(tmp_path):
    """All 8 (path, method) pairs accepted; 405/404/401/400 contracts hold."""
    started = time.perf_counter()
    server = make_server(tmp_path)
    server.start()
    try:
        payload = {"imgraw": _imgraw(b"conformance probe")}
        for route, method in ROUTES.items():
            if method == "POST":
                assert _http(server, "POST", f"/api/{route}", body=payload) == 200, route
            else:
                assert _http(server, "GET", f"/api/{route}?id=zl-1") == 200, route
            other = "GET" if method == "POST" else "POST"
            other_body = payload if other == "POST" else None
            assert _http(server, other, f"/api/{route}", body=other_body) == 405, route
        assert _http(server, "POST", "/api/cv/doesnotexist", body=payload) == 404
        assert _http(server, "POST", "/api/cv/plant", key=None, body=payload) == 401
        assert _http(server, "POST", "/api/cv/plant", body={"imgraw": "!!!"}) == 400
    finally:
        server.close()
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"conformance check took {elapsed:.2f}s"
    _announce("API conformance (8 routes, 405/404/401/400)")


def test_twenty_qps_for_sixty_seconds(tmp_path):
    """Paced 20 QPS for 60 s against the full local stack: zero errors."""
    server = make_server(tmp_path)
    server.start()
    try:
        targets = []
        for route, method in ROUTES.items():
            if method == "POST":
                params = {"imgraw": _imgraw(route.encode() + bytes(range(64)))}
            else:
                params = {"id": "zl-stress"}
            targets.append(StressTarget(route, method, params))
        plan = StressPlan(
            targets=tuple(targets),
            virtual_users=20,
            duration_s=60.0,
            target_qps=20.0,
            user_key=TEST_KEY,
            base_url=server.base_url,
        )
        report = StressRunner(plan).run()
    finally:
        server.close()

    assert 55.0 <= report.wall_time_s <= 90.0
    assert report.attempts >= 1000
    assert report.errors == 0, f"stress run saw {report.errors} errors"
    assert len(report.rows) == len(ROUTES)
    for row in report.rows:
        assert row.error_count == 0, row
        assert row.p99_ms < 1000.0, row

    # the rendered table parses back into exactly one row per route
    rendered = render_report(report)
    lines = rendered.splitlines()
    table_rows = []
    for line in lines[2:]:
        if not line.strip():
            break
        table_rows.append([cell.strip() for cell in line.split("|")])
    assert len(table_rows) == len(ROUTES)
    assert {row[0] for row in table_rows} == set(ROUTES)
    for row in table_rows:
        assert row[3] == "0"  # ERROR column
    _announce(
        f"20-QPS stability (attempts={report.attempts}, errors=0, "
        f"max p99={max(r.p99_ms for r in report.rows):.1f} ms)"
    )


def test_lossless_aggregation():
    """Report stats equal the metrics module on a known 10,000-value multiset."""
    started = time.perf_counter()
    rng = random.Random(0x10551)
    multiset = [round(rng.uniform(1.0, 250.0), 3) for _ in range(10_000)]
    plan = StressPlan(
        targets=(StressTarget("cv/plant", "POST", {"imgraw": "aGk="}),),
        virtual_users=1,
        total_requests=len(multiset),
        user_key="fake",
    )
    report = StressRunner(plan, transport=ScriptedTransport(multiset)).run()

    assert report.attempts == len(multiset)
    assert report.successes == len(multiset)
    assert sorted(report.route_samples["cv/plant"]) == sorted(multiset)

    skip = warmup_count(len(multiset))
    assert skip == 500
    expected = metrics.summarize_latencies("cv/plant", multiset[skip:])
    row = report.rows[0]
    assert row.avg_latency_ms == expected.avg_latency_ms  # exact
    assert row.p99_ms == expected.p99_ms  # exact
    assert row.sample_count == len(multiset)

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"lossless aggregation took {elapsed:.2f}s"
    _announce("lossless aggregation (10,000 injected latencies, exact stats)")


def test_round_robin_fairness():
    """3 healthy workers share 3000 dispatches exactly; downed worker gets 0."""
    started = time.perf_counter()
    pool = WorkerPool([Worker("w1"), Worker("w2"), Worker("w3")])
    for _ in range(3000):
        pool.dispatch()
    assert pool.dispatch_counts() == {"w1": 1000, "w2": 1000, "w3": 1000}

    pool.get("w2").healthy = False
    before = pool.get("w2").dispatched
    for _ in range(900):
        pool.dispatch()
    counts = pool.dispatch_counts()
    assert counts["w2"] == before  # zero dispatches after going unhealthy
    assert counts["w1"] == 1000 + 450
    assert counts["w3"] == 1000 + 450

    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"fairness check took {elapsed:.2f}s"
    _announce("round-robin fairness (3000 dispatches, mid-run failure)")


def test_one_request_one_log_and_durability(tmp_path):
    """500 mixed post-auth requests -> exactly 500 records, reopen-stable."""
    started = time.perf_counter()
    server = make_server(tmp_path)
    db_path = server.store.path
    server.start()
    post_auth = 0
    try:
        payload = {"imgraw": _imgraw(b"logging probe")}
        routes = [r for r, m in ROUTES.items() if m == "POST"]
        for i in range(500):
            kind = i % 10
            if kind < 6:  # valid recognition calls across routes
                assert _http(server, "POST", f"/api/{routes[i % len(routes)]}", body=payload) == 200
            elif kind < 8:  # malformed image: 400, still logged
                assert _http(server, "POST", "/api/cv/plant", body={"imgraw": "%%"}) == 400
            elif kind == 8:  # missing params: 400, still logged
                assert _http(server, "POST", "/api/cv/food", body={}) == 400
            else:  # valid GET route
                assert _http(server, "GET", f"/api/dm/zhihuliveeval?id=item-{i}") == 200
            post_auth += 1
        # pre-auth rejections must not add records
        assert _http(server, "GET", "/api/cv/plant") == 405
        assert _http(server, "POST", "/api/cv/ghost", body=payload) == 404
        assert _http(server, "POST", "/api/cv/plant", key="nope", body=payload) == 401
        server.log_writer.flush()
        assert server.store.count_calls() == post_auth == 500
        rows_before = server.store.query_calls(limit=1000)
        assert len(rows_before) == 500
    finally:
        server.close()  # flushes the writer, closes the store

    with Store(db_path) as reopened:
        rows_after = reopened.query_calls(limit=1000)
    assert rows_after == rows_before  # field-identical after reopen

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"logging/durability check took {elapsed:.2f}s"
    _announce("one-request-one-log + durability (500 records, reopen-stable)")


def test_throughput_bench_batched_speedup():
    """Batched inference beats naive by the published-order ratio."""
    started = time.perf_counter()
    registry = default_registry()
    naive = bench_throughput(registry, "delay-10ms", mode="naive", items=100)
    batched = bench_throughput(
        registry, "delay-10ms", mode="batched", items=100, batch_size=10
    )
    ratio = batched.fps / naive.fps
    assert ratio >= 3.3, f"batched/naive ratio {ratio:.2f} below 3.3"
    assert ratio <= 12.0, f"batched/naive ratio {ratio:.2f} above 12"

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"throughput bench took {elapsed:.2f}s"
    _announce(
        f"throughput bench (naive={naive.fps:.1f} fps, "
        f"batched={batched.fps:.1f} fps, ratio={ratio:.2f})"
    )


def test_retrieval_matches_exhaustive_scan():
    """Top-k face search equals a brute-force cosine scan, ties included."""
    started = time.perf_counter()
    rng = random.Random(0xFACE5)
    index = FaceIndex()
    blobs = {}
    for i in range(48):
        person = f"person-{i:03d}"
        blob = bytes(rng.randrange(256) for _ in range(96))
        blobs[person] = blob
        index.enroll(person, blob)
    # force an exact tie pair to pin the lexicographic tie order
    twin_blob = bytes(rng.randrange(256) for _ in range(96))
    blobs["twin-b"] = twin_blob
    blobs["twin-a"] = twin_blob
    index.enroll("twin-b", twin_blob)
    index.enroll("twin-a", twin_blob)

    entries = {pid: embed_bytes(blob).vector for pid, blob in blobs.items()}
    for trial in range(10):
        query = bytes(rng.randrange(256) for _ in range(96))
        for k in (1, 5, 50):
            expected = cosine_scan(embed_bytes(query).vector, entries, k)
            assert index.search(query, k=k) == expected, (trial, k)
    # tie order directly
    tie = index.search(twin_blob, k=2)
    assert [pid for pid, _ in tie] == ["twin-a", "twin-b"]

    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"retrieval oracle took {elapsed:.2f}s"
    _announce("retrieval oracle (50 enrollments, k in {1,5,50}, tie order)")
