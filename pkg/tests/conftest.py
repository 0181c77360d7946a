from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


class MockCompletionServer:
    """Tiny chat-completions endpoint for tests.

    ``behavior`` maps a user message to either a completion string or a
    callable returning (status_code, payload_dict). Unknown messages get
    echoed back prefixed with ``echo:``.
    """

    def __init__(self):
        self.behavior: dict = {}
        self.default = lambda msg: f"echo: {msg}"
        self.requests: list[dict] = []

        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # silence
                pass

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                body = json.loads(self.rfile.read(length) or b"{}")
                server.requests.append(body)
                if self.path != "/v1/chat/completions":
                    self.send_response(404)
                    self.end_headers()
                    return
                user = next(
                    (m["content"] for m in body.get("messages", []) if m["role"] == "user"),
                    "",
                )
                action = server.behavior.get(user, None)
                if callable(action):
                    status, payload = action(user)
                elif action is not None:
                    status, payload = 200, {"choices": [{"message": {"content": action}}]}
                else:
                    status, payload = 200, {
                        "choices": [{"message": {"content": server.default(user)}}]
                    }
                data = json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self):
        self._thread.start()
        return self

    def stop(self):
        self._httpd.shutdown()
        self._httpd.server_close()


@pytest.fixture
def mock_server():
    server = MockCompletionServer().start()
    yield server
    server.stop()


@pytest.fixture(autouse=True)
def _no_sleep(monkeypatch):
    """Retry backoff must not slow the suite down."""
    import redshell_eval.genclient as genclient

    monkeypatch.setattr(genclient.time, "sleep", lambda _s: None)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
