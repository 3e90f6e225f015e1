"""Wire envelopes: JSON messages over a persistent per-client stream.

Encoding is canonical (sorted keys, tight separators) so a projection
broadcast to the same player is byte-identical across runs; the plan-privacy
acceptance check compares these exact bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from ..errors import ProtocolError

PROTOCOL_VERSION = 1

# client -> server
CLIENT_KINDS = (
    "hello",
    "resume",
    "select_hand",
    "select_move",
    "attach",
    "submit_plan",
    "declare_tie",
    "forfeit",
    "ping",
)
# server -> client
SERVER_KINDS = (
    "queued",
    "match_found",
    "state",
    "phase_change",
    "timer_sync",
    "plan_ack",
    "resolved",
    "round_end",
    "match_end",
    "pong",
    "error",
)


def encode_envelope(seq: int, kind: str, payload: dict, match_id: str | None = None,
                    ack: int | None = None) -> bytes:
    return json.dumps(
        {"v": PROTOCOL_VERSION, "seq": seq, "kind": kind, "match_id": match_id,
         "ack": ack, "payload": payload},
        sort_keys=True,
        separators=(",", ":"),
    ).encode()


def decode_envelope(data: bytes | str) -> dict:
    """Parse and shape-check a client envelope; ProtocolError on any defect."""
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProtocolError(f"envelope is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ProtocolError("envelope must be a JSON object")
    seq = doc.get("seq")
    if not isinstance(seq, int) or isinstance(seq, bool) or seq < 1:
        raise ProtocolError("envelope needs a positive integer seq")
    kind = doc.get("kind")
    if kind not in CLIENT_KINDS:
        raise ProtocolError(f"unknown message kind {kind!r}")
    payload = doc.get("payload", {})
    if not isinstance(payload, dict):
        raise ProtocolError("payload must be an object")
    version = doc.get("v", PROTOCOL_VERSION)
    if version != PROTOCOL_VERSION:
        raise ProtocolError(f"protocol version {version} unsupported (server speaks {PROTOCOL_VERSION})")
    return {"seq": seq, "kind": kind, "payload": payload}


@dataclass
class Delivery:
    """One server message addressed by connection key (client ref or token)."""

    to: str
    kind: str
    payload: dict
    match_id: str | None = None
    reply: bool = False  # direct response to the sender's command; carries ack


@dataclass
class Connection:
    """Per-connection outgoing stream: assigns seq and encodes envelopes."""

    send_bytes: Callable[[bytes], None]
    seq: int = 0
    closed: bool = False
    token: str | None = None  # learned when a match_found passes through

    def send(self, kind: str, payload: dict, match_id: str | None = None,
             ack: int | None = None) -> bytes:
        self.seq += 1
        data = encode_envelope(self.seq, kind, payload, match_id, ack)
        self.send_bytes(data)
        return data


@dataclass
class Router:
    """Address -> connection registry shared by the socket layer and tests."""

    connections: dict[str, Connection] = field(default_factory=dict)

    def register(self, address: str, connection: Connection) -> None:
        self.connections[address] = connection

    def rebind(self, old: str, new: str) -> None:
        if old in self.connections:
            self.connections[new] = self.connections.pop(old)

    def drop(self, address: str) -> None:
        self.connections.pop(address, None)

    def dispatch(self, deliveries: list[Delivery], ack_for: dict[str, int] | None = None) -> None:
        for delivery in deliveries:
            connection = self.connections.get(delivery.to)
            if connection is None or connection.closed:
                continue
            ack = (ack_for or {}).get(delivery.to) if delivery.reply else None
            connection.send(delivery.kind, delivery.payload, delivery.match_id, ack)
