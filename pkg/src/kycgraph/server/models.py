"""Pydantic envelope and health models for the HTTP surface."""

from __future__ import annotations

from pydantic import BaseModel, Field


class RpcRequest(BaseModel):
    jsonrpc: str = "2.0"
    id: int | str | None = None
    method: str
    params: dict | None = None


class RpcErrorBody(BaseModel):
    code: int
    message: str
    data: object | None = None


class RpcResponse(BaseModel):
    jsonrpc: str = "2.0"
    id: int | str | None = None
    result: object | None = None
    error: RpcErrorBody | None = None


class GraphStats(BaseModel):
    nodes: int
    edges: int
    by_label: dict[str, int] = Field(default_factory=dict)


class HealthResponse(BaseModel):
    status: str
    version: str
    graph: GraphStats
    latest_transaction: str
    read_only: bool
