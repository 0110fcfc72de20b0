"""Standard-stream transport: one JSON-RPC document per line, UTF-8.

Frames are handled by a bounded worker pool; responses are written whole
lines under a lock, so pipelined requests cannot interleave bytes.  A
malformed frame gets a -32700 response and the loop keeps reading.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor

from .dispatcher import Dispatcher

DEFAULT_WORKERS = 8


def serve_stdio(dispatcher: Dispatcher, stdin, stdout,
                workers: int = DEFAULT_WORKERS) -> int:
    """Run until EOF on stdin; returns the number of frames handled."""
    write_lock = threading.Lock()
    handled = 0

    def handle(line: str):
        response = dispatcher.dispatch_line(line)
        if response is None:
            return
        with write_lock:
            stdout.write(response)
            stdout.write("\n")
            stdout.flush()

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = []
        for line in stdin:
            line = line.strip()
            if not line:
                continue
            handled += 1
            futures.append(pool.submit(handle, line))
        for future in futures:
            future.result()
    return handled
