"""Shared fixtures: registries, stores, and a running gateway."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles / fakes

from modelgate.core import FaceIndex, default_registry, seed_faces
from modelgate.gateway import GatewayConfig, GatewayServer
from modelgate.persistence import Store


@pytest.fixture
def registry():
    return default_registry()


@pytest.fixture
def store(tmp_path):
    with Store(tmp_path / "test.db") as s:
        yield s


@pytest.fixture
def seeded_faces():
    index = FaceIndex()
    seed_faces(index)
    return index


def make_server(tmp_path, **config_kwargs) -> GatewayServer:
    config = GatewayConfig(
        listen="127.0.0.1:0", data_dir=tmp_path / "data", **config_kwargs
    )
    server = GatewayServer(config, seed_demo_faces=True)
    server.store.create_user(
        "tester",
        email="tester@example.com",
        organization="qa",
        userkey="test-key-1",
        password="pw",
    )
    return server


@pytest.fixture
def server(tmp_path):
    srv = make_server(tmp_path)
    srv.start()
    yield srv
    srv.close()


TEST_KEY = "test-key-1"
