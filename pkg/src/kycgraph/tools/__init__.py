"""The twelve KYC investigation tools."""

from .kit import ToolKit, TOOL_NAMES

__all__ = ["ToolKit", "TOOL_NAMES"]
