import hashlib
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import pytest

from metricmatch.remote import MAX_BATCH, RemoteBackend, RemoteError, embed_remote

DIM = 6


def stub_vector(text):
    digest = hashlib.sha256(text.encode()).digest()
    return [b / 255.0 for b in digest[:DIM]]


class StubHandler(BaseHTTPRequestHandler):
    fail_next = False

    def log_message(self, *args):
        pass

    def _send(self, code, body):
        payload = json.dumps(body).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self):
        if self.path == "/health":
            self._send(200, {"status": "ok", "model": "stub", "dim": DIM})
        else:
            self._send(404, {"error": "not found"})

    def do_POST(self):
        if self.path != "/embed":
            self._send(404, {"error": "not found"})
            return
        if StubHandler.fail_next:
            StubHandler.fail_next = False
            self._send(500, {"error": "synthetic failure"})
            return
        length = int(self.headers["Content-Length"])
        body = json.loads(self.rfile.read(length))
        texts = body["texts"]
        rows = [stub_vector(t) for t in texts]
        if body.get("normalize"):
            rows = [(np.asarray(r) / np.linalg.norm(r)).tolist() for r in rows]
        self._send(200, {"model": "stub", "dim": DIM, "embeddings": rows})


@pytest.fixture(scope="module")
def endpoint():
    server = ThreadingHTTPServer(("127.0.0.1", 0), StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


def test_single_text_normalized(endpoint):
    out = embed_remote(["hello"], endpoint, "stub", normalize=True)
    assert len(out) == 1
    assert np.linalg.norm(out[0].values) == pytest.approx(1.0, abs=1e-6)


def test_empty_batch_rejected_locally():
    with pytest.raises(RemoteError, match="empty batch"):
        embed_remote([], "http://127.0.0.1:1", "stub")


def test_deterministic_within_run(endpoint):
    a = embed_remote(["same text"], endpoint, "stub")[0]
    b = embed_remote(["same text"], endpoint, "stub")[0]
    assert np.allclose(a.values, b.values, atol=1e-6)


def test_order_preserved_across_chunks(endpoint):
    texts = [f"sentinel text {i}" for i in range(MAX_BATCH + 10)]
    out = embed_remote(texts, endpoint, "stub", parallel=4)
    assert len(out) == len(texts)
    for text, e in zip(texts, out):
        assert np.allclose(e.values, stub_vector(text), atol=1e-12)


def test_service_error_passthrough(endpoint):
    StubHandler.fail_next = True
    with pytest.raises(RemoteError, match="500"):
        embed_remote(["x"], endpoint, "stub", retries=0)


def test_connection_failure_raises_after_retries():
    with pytest.raises(RemoteError, match="cannot reach"):
        embed_remote(["x"], "http://127.0.0.1:9", "stub", retries=0, timeout=0.5)


def test_remote_backend_reads_health_dim(endpoint):
    backend = RemoteBackend(endpoint, "stub")
    assert backend.dim == DIM
    out = backend.embed_batch(["a", "b"])
    assert [e.dim for e in out] == [DIM, DIM]
