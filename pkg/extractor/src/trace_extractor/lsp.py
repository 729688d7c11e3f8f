"""Minimal JSON-RPC client for a language server over stdio."""

from __future__ import annotations

import itertools
import json
import queue
import subprocess
import threading
import time
from typing import Any, Sequence

__all__ = ["LspClient", "LspError", "LspTimeout"]


class LspError(Exception):
    pass


class LspTimeout(LspError):
    pass


class LspClient:
    """Content-Length framed JSON-RPC over a subprocess's stdin/stdout.

    A background thread parses incoming messages into a queue; request()
    drains it, answering server-to-client requests with null so the session
    never deadlocks, and dropping notifications.
    """

    def __init__(self, cmd: Sequence[str], cwd: str | None = None) -> None:
        self.proc = subprocess.Popen(
            list(cmd),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            cwd=cwd,
        )
        self._ids = itertools.count(1)
        self._send_lock = threading.Lock()
        self._incoming: queue.Queue[dict | None] = queue.Queue()
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    def _send(self, msg: dict) -> None:
        data = json.dumps(msg).encode("utf-8")
        frame = b"Content-Length: %d\r\n\r\n%b" % (len(data), data)
        with self._send_lock:
            try:
                self.proc.stdin.write(frame)
                self.proc.stdin.flush()
            except (BrokenPipeError, ValueError) as exc:
                raise LspError(f"server pipe closed: {exc}") from exc

    def _read_loop(self) -> None:
        f = self.proc.stdout
        try:
            while True:
                length = None
                while True:
                    line = f.readline()
                    if not line:
                        return
                    line = line.strip()
                    if not line:
                        break
                    key, _, value = line.partition(b":")
                    if key.lower() == b"content-length":
                        length = int(value.strip())
                if length is None:
                    return
                body = f.read(length)
                if len(body) < length:
                    return
                try:
                    self._incoming.put(json.loads(body))
                except json.JSONDecodeError:
                    return
        finally:
            self._incoming.put(None)

    def notify(self, method: str, params: Any) -> None:
        self._send({"jsonrpc": "2.0", "method": method, "params": params})

    def request(self, method: str, params: Any, timeout: float = 60.0) -> Any:
        rid = next(self._ids)
        self._send({"jsonrpc": "2.0", "id": rid, "method": method, "params": params})
        deadline = time.monotonic() + timeout
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise LspTimeout(f"{method}: no response within {timeout}s")
            try:
                msg = self._incoming.get(timeout=remaining)
            except queue.Empty:
                raise LspTimeout(f"{method}: no response within {timeout}s") from None
            if msg is None:
                raise LspError(f"{method}: server closed the connection")
            if msg.get("id") == rid and "method" not in msg:
                if "error" in msg:
                    raise LspError(f"{method}: {msg['error']}")
                return msg.get("result")
            if "id" in msg and "method" in msg:
                self._send({"jsonrpc": "2.0", "id": msg["id"], "result": None})

    def close(self) -> None:
        try:
            self.request("shutdown", None, timeout=2.0)
            self.notify("exit", None)
        except LspError:
            pass
        try:
            self.proc.terminate()
            self.proc.wait(timeout=5.0)
        except (OSError, subprocess.TimeoutExpired):
            self.proc.kill()
