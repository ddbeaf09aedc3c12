"""End-to-end test of `azed serve` as a real process, including a hard
kill and restart over the same store directory."""

import signal
import socket
import subprocess
import sys
import time

import httpx
import pytest

E1_TEXT = "info-about(dog(), non-subjectivity(nice-kind()))"


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def _start(store, port):
    proc = subprocess.Popen(
        [
            sys.executable, "-m", "azed", "serve",
            "--store", str(store),
            "--listen", f"127.0.0.1:{port}",
        ],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base = f"http://127.0.0.1:{port}"
    deadline = time.time() + 15
    while time.time() < deadline:
        try:
            if httpx.get(base + "/rules", timeout=1).status_code == 200:
                return proc, base
        except httpx.HTTPError:
            time.sleep(0.1)
        if proc.poll() is not None:
            break
    proc.kill()
    pytest.fail("service did not come up")


def test_kill_and_restart_preserves_documents(tmp_path):
    store = tmp_path / "docs"
    port = _free_port()
    proc, base = _start(store, port)
    try:
        created = httpx.post(base + "/documents", json={"pieces": [E1_TEXT]}).json()
        doc_id = created["id"]
        patched = httpx.patch(
            f"{base}/documents/{doc_id}/pieces/0/node/0",
            json={"revision": 1, "replace": "nice-kind()"},
        )
        assert patched.status_code == 200
        expected = httpx.get(f"{base}/documents/{doc_id}").json()
    finally:
        proc.send_signal(signal.SIGKILL)
        proc.wait()

    proc, base = _start(store, _free_port())
    try:
        revived = httpx.get(f"{base}/documents/{doc_id}")
        assert revived.status_code == 200
        assert revived.json() == expected
    finally:
        proc.send_signal(signal.SIGKILL)
        proc.wait()
