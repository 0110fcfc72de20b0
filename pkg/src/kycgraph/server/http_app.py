"""FastAPI application wrapping the dispatcher.

POST /rpc takes one JSON-RPC request per call and returns the dispatcher's
canonical bytes, so HTTP and stdio transports answer identically.  The
endpoint must speak JSON-RPC errors for malformed bodies instead of
framework 422s, so it reads the raw body and parses it itself.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request, Response
from fastapi.staticfiles import StaticFiles

from .dispatcher import Dispatcher, dumps
from .models import HealthResponse, GraphStats


def create_app(dispatcher: Dispatcher, console_dir: str | None = None
               ) -> FastAPI:
    app = FastAPI(title="kycgraph tool server", docs_url=None, redoc_url=None)

    @app.post("/rpc")
    async def rpc(request: Request) -> Response:
        body = await request.body()
        response = dispatcher.dispatch_line(body.decode("utf-8", "replace"))
        if response is None:  # notification
            return Response(status_code=204)
        return Response(content=response, media_type="application/json")

    @app.get("/healthz")
    def healthz() -> HealthResponse:
        info = dispatcher.server_info()
        return HealthResponse(
            status="ok",
            version=info["version"],
            graph=GraphStats(nodes=info["nodes"], edges=info["edges"],
                             by_label=info["by_label"]),
            latest_transaction=info["latest_transaction"],
            read_only=info["read_only"],
        )

    @app.get("/requestlog")
    def requestlog(limit: int = 200) -> Response:
        entries = dispatcher.request_log[-limit:]
        return Response(content=dumps(entries), media_type="application/json")

    if console_dir and os.path.isdir(console_dir):
        app.mount("/console", StaticFiles(directory=console_dir, html=True),
                  name="console")

    return app
