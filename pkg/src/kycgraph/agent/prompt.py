"""System prompt for the investigation agent, served from a bundled
resource so the bytes are stable across runs."""

from importlib import resources


def render_system_prompt() -> str:
    return (resources.files("kycgraph.agent") / "data" / "system_prompt.txt") \
        .read_text(encoding="utf-8")
