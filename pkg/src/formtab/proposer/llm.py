"""Client for an external chat-completion text-generation service.

The service address and credential come from the FORM_LLM_URL and
FORM_LLM_KEY environment variables (overridable on the backend config).
Requests carry ``{"model": ..., "messages": [{"role", "content"}, ...]}``
and replies are parsed from the assistant message text with a tolerant
bracketed-list reader: every well-formed entry becomes a ground atom,
everything else is dropped with a warning.
"""

from __future__ import annotations

import json
import logging
import os
import re
import time
from dataclasses import dataclass

import requests

from ..errors import (BackendUnavailableError, FormtabError,
                      ProposalFailedError)
from ..relations import GroundAtom, GroundGraph, Scene, resolve_relation

log = logging.getLogger(__name__)

ENV_URL = "FORM_LLM_URL"
ENV_KEY = "FORM_LLM_KEY"


@dataclass(frozen=True)
class ProposerBackend:
    """Which proposer runs and, for the llm kind, how to reach it."""

    kind: str = "program"
    model: str = "default"
    endpoint: str | None = None
    api_key: str | None = None
    timeout: float = 60.0
    attempts: int = 3
    retry_wait: float = 1.0
    max_reflect: int = 3

    def resolved_endpoint(self) -> str:
        url = self.endpoint or os.environ.get(ENV_URL, "")
        if not url:
            raise BackendUnavailableError(
                "no service endpoint: set %s or backend.endpoint" % ENV_URL)
        return url

    def resolved_key(self) -> str | None:
        return self.api_key or os.environ.get(ENV_KEY) or None


PROGRAM_BACKEND = ProposerBackend(kind="program")

# innermost bracketed group: no '[' or ']' inside
_ENTRY = re.compile(r"\[([^\[\]]+)\]")


def parse_reply(text: str, scene: Scene) -> list[GroundAtom]:
    """Ground atoms from every well-formed bracketed entry in the text.

    Malformed entries, unknown relations, wrong arities and names absent
    from the scene are skipped with a warning; nothing raises.
    """
    atoms: list[GroundAtom] = []
    names = set(scene.names)
    for match in _ENTRY.finditer(text or ""):
        raw = "[" + match.group(1) + "]"
        try:
            entry = json.loads(raw)
        except ValueError:
            log.warning("dropping unparseable entry %r", raw)
            continue
        if (not isinstance(entry, list) or len(entry) < 2
                or not all(isinstance(e, str) for e in entry)):
            log.warning("dropping malformed entry %r", raw)
            continue
        rel, args = entry[0], tuple(entry[1:])
        try:
            rel = resolve_relation(rel)
            missing = [a for a in args if a not in names]
            if missing:
                log.warning("dropping %s%r: unknown object(s) %s",
                            rel, args, ", ".join(missing))
                continue
            atoms.append(GroundAtom(rel, args))
        except FormtabError as exc:
            log.warning("dropping entry %r: %s", raw, exc)
    return atoms


def _reply_text(payload: dict) -> str:
    choices = payload.get("choices")
    if isinstance(choices, list) and choices:
        message = choices[0].get("message", {})
        return str(message.get("content", ""))
    return str(payload.get("content", ""))


def request_completion(messages: list[dict],
                       backend: ProposerBackend) -> str:
    """POST the chat request, retrying with exponential backoff."""
    url = backend.resolved_endpoint()
    headers = {"Content-Type": "application/json"}
    key = backend.resolved_key()
    if key:
        headers["Authorization"] = "Bearer " + key
    body = {"model": backend.model, "messages": messages}
    last: Exception | None = None
    for attempt in range(backend.attempts):
        if attempt:
            time.sleep(backend.retry_wait * 2.0 ** (attempt - 1))
        try:
            resp = requests.post(url, json=body, headers=headers,
                                 timeout=backend.timeout)
            resp.raise_for_status()
            return _reply_text(resp.json())
        except (requests.RequestException, ValueError) as exc:
            last = exc
            log.warning("service request failed (attempt %d/%d): %s",
                        attempt + 1, backend.attempts, exc)
    raise BackendUnavailableError(
        "service unreachable after %d attempts: %s" % (backend.attempts, last))


def propose_llm(scene: Scene, instruction: str, family: str,
                backend: ProposerBackend,
                extra_user_message: str | None = None) -> GroundGraph:
    """One proposal round trip; raises if nothing usable comes back."""
    from .prompts import build_prompt

    messages = build_prompt(scene, instruction, family)
    if extra_user_message:
        messages = messages + [{"role": "user", "content": extra_user_message}]
    reply = request_completion(messages, backend)
    atoms = parse_reply(reply, scene)
    if not atoms:
        raise ProposalFailedError("service reply contained no parseable "
                                  "relation entries")
    return GroundGraph(atoms).deduplicated()


def conflict_report(conflicts: list, unconstrained: list) -> str:
    """Plain-text issue summary appended when re-prompting the service."""
    lines = ["Your previous proposal has issues; fix them and output the "
             "full corrected list."]
    for earlier, later in conflicts:
        lines.append("- conflict: %s%r contradicts %s%r"
                     % (later.relation, later.args,
                        earlier.relation, earlier.args))
    for name in unconstrained:
        lines.append("- object %s has no relation constraining it" % name)
    return "\n".join(lines)
