from __future__ import annotations

import json
import socket
import threading
import time
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fig3_bytes() -> bytes:
    return (DATA_DIR / "fig3.yaml").read_bytes()


@pytest.fixture(scope="session")
def fig3_golden() -> dict:
    return json.loads((DATA_DIR / "fig3_seeds.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def golden_embeddings() -> dict:
    return json.loads((DATA_DIR / "golden_embeddings.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def synthetic_dataset_dir(tmp_path_factory) -> Path:
    from utterancesmith.datasets import write_synthetic_dataset

    out = tmp_path_factory.mktemp("synthetic")
    write_synthetic_dataset(out, seed=0)
    return out


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class UvicornThread:
    """Run an ASGI app on a real socket for wire-protocol tests."""

    def __init__(self, app, port: int):
        import uvicorn

        self.port = port
        config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(target=self.server.run, daemon=True)

    def __enter__(self):
        self.thread.start()
        deadline = time.time() + 10
        while not self.server.started:
            if time.time() > deadline:
                raise RuntimeError("server did not start in time")
            time.sleep(0.01)
        return self

    def __exit__(self, *exc):
        self.server.should_exit = True
        self.thread.join(timeout=10)

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}"
