"""Chat-completion transports: the deterministic scripted backend and a
remote HTTP backend speaking a chat-completions-style JSON contract.

A transport is stateless between calls: everything it needs is in the
message list, so a serialized conversation replays identically.
"""

from __future__ import annotations

import json
import os
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import httpx

from ..errors import BackendUnavailableError, TransportError, \
    UnsupportedQuestionError
from ..templates import match_question
from .transcript import AnswerDocument

SERVER_CONTEXT_PREFIX = "SERVER_CONTEXT: "


@dataclass
class TransportReply:
    tool_calls: list = field(default_factory=list)  # of (name, params)
    text: str | None = None


class ChatTransport(ABC):
    name = "abstract"

    @abstractmethod
    def send(self, messages: list, tool_schemas: list) -> TransportReply:
        """Next action given the conversation so far: tool calls or final
        answer text."""


class _Anchor:
    """Duck-typed stand-in for a ToolKit inside template builders: provides
    the reproducible window anchor and the high-risk jurisdiction list."""

    def __init__(self, now: str, high_risk_jurisdictions: list):
        self.now = now
        self.high_risk_jurisdictions = high_risk_jurisdictions


def _find_context(messages: list) -> _Anchor:
    for message in messages:
        content = message.get("content") or ""
        if message.get("role") == "system" and \
                content.startswith(SERVER_CONTEXT_PREFIX):
            data = json.loads(content[len(SERVER_CONTEXT_PREFIX):])
            return _Anchor(data.get("latest_transaction") or
                           "1970-01-01T00:00:00Z",
                           data.get("high_risk_jurisdictions") or [])
    return _Anchor("1970-01-01T00:00:00Z", [])


def _find_question(messages: list) -> str:
    for message in messages:
        if message.get("role") == "user":
            return message.get("content") or ""
    return ""


def _tool_results(messages: list) -> list:
    results = []
    for message in messages:
        if message.get("role") == "tool":
            try:
                results.append(json.loads(message.get("content") or "null"))
            except json.JSONDecodeError:
                results.append(None)
    return results


def _budget_exhausted(messages: list) -> bool:
    return any(m.get("role") == "system" and m.get("content") == "BUDGET_EXHAUSTED"
               for m in messages)


class ScriptedTransport(ChatTransport):
    """Deterministic rule-table backend over the benchmark templates.

    The question is matched to a template; the template's tool plan is
    issued one call per turn; the final answer is rendered from the tool
    payloads by the same formatter that produces benchmark ground truth.
    Unsupported questions fail loudly instead of guessing.
    """

    name = "scripted"

    def send(self, messages: list, tool_schemas: list) -> TransportReply:
        question = _find_question(messages)
        anchor = _find_context(messages)
        matched = match_question(question, anchor)
        if matched is None:
            raise UnsupportedQuestionError(
                f"the scripted backend has no template for: {question!r}")
        template, slots = matched
        plan = template.tool_plan(slots, anchor)
        results = _tool_results(messages)

        failure = self._failure_answer(question, results)
        if failure is not None:
            return TransportReply(text=failure.render())

        if _budget_exhausted(messages) or len(results) >= len(plan):
            n_queries = len(template.build_queries(slots, anchor))
            tables = []
            for result in results[:n_queries]:
                payload = (result or {}).get("payload")
                if isinstance(payload, dict) and "rows" in payload:
                    tables.append(payload)
            if len(tables) < n_queries:
                doc = AnswerDocument(
                    direct_answer=f"The investigation budget was exhausted "
                                  f"before all evidence for {question!r} "
                                  f"could be gathered.",
                    supporting_details=[],
                    key_findings=["partial evidence only: tool budget "
                                  "exhausted"])
                return TransportReply(text=doc.render())
            try:
                parts = template.build_answer(slots, tables, anchor)
            except (IndexError, KeyError):
                # an expected row is absent: say so instead of inferring
                doc = AnswerDocument(
                    direct_answer="The requested information is not "
                                  "available: the referenced entity was not "
                                  "found in the graph.",
                    supporting_details=[],
                    key_findings=["no matching records; nothing was inferred"])
                return TransportReply(text=doc.render())
            doc = AnswerDocument(parts.direct, parts.details, parts.findings)
            return TransportReply(text=doc.render())
        return TransportReply(tool_calls=[plan[len(results)]])

    @staticmethod
    def _failure_answer(question: str, results: list) -> AnswerDocument | None:
        for result in results:
            if not isinstance(result, dict):
                continue
            error = result.get("error")
            if not error:
                continue
            if error.get("code") == 1001:
                return AnswerDocument(
                    direct_answer=f"The requested entity was not found in "
                                  f"the graph: {error.get('message', '')}",
                    supporting_details=[],
                    key_findings=["entity absent from the knowledge graph; "
                                  "no data was fabricated"])
            return AnswerDocument(
                direct_answer=f"The investigation could not be completed: "
                              f"{error.get('message', 'tool error')}",
                supporting_details=[],
                key_findings=[f"tool error code = {error.get('code')}"])
        return None


class RemoteChatTransport(ChatTransport):
    """Chat-completions HTTP backend with function calling.

    Endpoint and model are configuration; the API key comes only from the
    environment.  Failures surface as retriable transport errors, never as
    fabricated answers.
    """

    name = "remote"
    key_env = "KYCGRAPH_LLM_API_KEY"

    def __init__(self, endpoint: str, model: str, *, timeout: float = 60.0,
                 max_retries: int = 3, client: httpx.Client | None = None):
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.timeout = timeout
        self.max_retries = max_retries
        self._client = client or httpx.Client(timeout=timeout)

    def send(self, messages: list, tool_schemas: list) -> TransportReply:
        api_key = os.environ.get(self.key_env)
        if not api_key:
            raise BackendUnavailableError(
                f"remote backend needs {self.key_env} in the environment")
        body = {
            "model": self.model,
            "messages": messages,
            "tools": [{"type": "function",
                       "function": {"name": entry["name"],
                                    "description": entry["description"],
                                    "parameters": entry["params_schema"]}}
                      for entry in tool_schemas],
        }
        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            if attempt:
                time.sleep(min(2.0 ** attempt * 0.25, 4.0))
            try:
                response = self._client.post(
                    f"{self.endpoint}/chat/completions", json=body,
                    headers={"Authorization": f"Bearer {api_key}"})
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code in (401, 403):
                raise BackendUnavailableError(
                    f"remote backend rejected credentials "
                    f"(HTTP {response.status_code})")
            if response.status_code >= 500:
                last_error = TransportError(
                    f"remote backend HTTP {response.status_code}")
                continue
            if response.status_code != 200:
                raise TransportError(
                    f"remote backend HTTP {response.status_code}: "
                    f"{response.text[:500]}")
            return self._parse(response.json())
        raise TransportError(
            f"remote backend failed after {self.max_retries} attempts: "
            f"{last_error}")

    @staticmethod
    def _parse(data: dict) -> TransportReply:
        try:
            message = data["choices"][0]["message"]
        except (KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed completion response: {exc}")
        calls = message.get("tool_calls") or []
        if calls:
            parsed = []
            for call in calls:
                function = call.get("function", {})
                try:
                    arguments = json.loads(function.get("arguments") or "{}")
                except json.JSONDecodeError:
                    arguments = {}
                parsed.append((function.get("name", ""), arguments))
            return TransportReply(tool_calls=parsed)
        return TransportReply(text=message.get("content") or "")
