"""JSON-RPC tool server: dispatcher, catalog, transports, clients."""

from .catalog import TOOL_CATALOG
from .dispatcher import Dispatcher
from .client import LocalToolClient, HttpToolClient

__all__ = ["TOOL_CATALOG", "Dispatcher", "LocalToolClient", "HttpToolClient"]
