"""Investigation agent: reasoning loop, transports, transcripts, audit."""

from .loop import investigate, AgentLoop
from .prompt import render_system_prompt
from .transcript import AgentTranscript, AnswerDocument, StepRecord
from .transports import ChatTransport, ScriptedTransport, RemoteChatTransport
from .audit import audit_transcript

__all__ = ["investigate", "AgentLoop", "render_system_prompt",
           "AgentTranscript", "AnswerDocument", "StepRecord", "ChatTransport",
           "ScriptedTransport", "RemoteChatTransport", "audit_transcript"]
