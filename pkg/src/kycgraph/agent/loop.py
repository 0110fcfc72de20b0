"""The investigation loop: question in, evidence-grounded transcript out.

One investigation is strictly sequential (tool calls never interleave
within a transcript) so serialized transcripts replay identically; many
investigations may run concurrently against one tool server.
"""

from __future__ import annotations

import json
import time

from .audit import audit_transcript
from .prompt import render_system_prompt
from .transcript import AgentTranscript, coerce_answer
from .transports import ChatTransport, SERVER_CONTEXT_PREFIX, TransportReply
from ..errors import KycGraphError, TransportError

DEFAULT_BUDGET = 8


class InvestigationFailed(KycGraphError):
    """Transport gave up; carries whatever transcript was gathered."""

    def __init__(self, message: str, transcript: AgentTranscript):
        super().__init__(message)
        self.transcript = transcript


class AgentLoop:
    def __init__(self, client, transport: ChatTransport,
                 budget: int = DEFAULT_BUDGET):
        if budget < 1:
            raise ValueError("budget must be >= 1")
        self.client = client
        self.transport = transport
        self.budget = budget

    def investigate(self, question: str) -> AgentTranscript:
        transcript = AgentTranscript(question=question,
                                     backend=self.transport.name,
                                     budget=self.budget)
        tool_schemas = self.client.list_tools()
        info = self.client.server_info()
        messages = [
            {"role": "system", "content": render_system_prompt()},
            {"role": "system", "content": SERVER_CONTEXT_PREFIX + json.dumps(
                info, sort_keys=True)},
            {"role": "user", "content": question},
        ]
        asked_for_final = False
        while True:
            try:
                reply: TransportReply = self.transport.send(messages,
                                                            tool_schemas)
            except TransportError as exc:
                raise InvestigationFailed(str(exc), transcript) from exc
            if reply.text is not None:
                transcript.answer = coerce_answer(reply.text)
                break
            if not reply.tool_calls:
                raise InvestigationFailed(
                    "transport returned neither tool calls nor an answer",
                    transcript)
            for name, params in reply.tool_calls:
                if len(transcript.steps) >= self.budget:
                    if asked_for_final:
                        raise InvestigationFailed(
                            "transport kept requesting tools after the "
                            "budget note", transcript)
                    transcript.limitation = (
                        f"tool budget of {self.budget} exhausted before the "
                        f"plan completed")
                    messages.append({"role": "system",
                                     "content": "BUDGET_EXHAUSTED"})
                    asked_for_final = True
                    break
                started = time.perf_counter()
                response = self.client.call(name, params)
                elapsed_ms = (time.perf_counter() - started) * 1000.0
                step = transcript.add_step(name, params, response, elapsed_ms)
                messages.append({
                    "role": "assistant",
                    "tool_calls": [{
                        "id": f"step-{step.index}",
                        "type": "function",
                        "function": {"name": name,
                                     "arguments": json.dumps(params,
                                                             sort_keys=True)},
                    }],
                    "content": None,
                })
                messages.append({
                    "role": "tool",
                    "tool_call_id": f"step-{step.index}",
                    "content": json.dumps(_result_view(response),
                                          sort_keys=True),
                })
        audit_transcript(transcript)
        if transcript.limitation and transcript.answer is not None and \
                transcript.limitation not in transcript.answer.key_findings:
            transcript.answer.key_findings.append(
                f"limitation: {transcript.limitation}")
        return transcript


def _result_view(response: dict) -> dict:
    """What the model sees of a tool response: result or error, not the
    RPC envelope bookkeeping."""
    if "error" in response:
        return {"error": response["error"]}
    return response.get("result") or {}


def investigate(question: str, transport: ChatTransport, client,
                budget: int = DEFAULT_BUDGET) -> AgentTranscript:
    return AgentLoop(client, transport, budget).investigate(question)
