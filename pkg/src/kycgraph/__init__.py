"""Embedded KYC investigation graph: store, query engine, tools, server, agent, eval."""

__version__ = "0.1.0"
