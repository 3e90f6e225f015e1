"""Network service: lobby pairing, authoritative sessions, timers, uploads."""
from .app import create_app
from .protocol import PROTOCOL_VERSION, Connection, Delivery, Router, decode_envelope, encode_envelope
from .service import MatchService, Session
from .storage import AssetRef, BlobStore

__all__ = [
    "create_app",
    "PROTOCOL_VERSION",
    "Connection",
    "Delivery",
    "Router",
    "decode_envelope",
    "encode_envelope",
    "MatchService",
    "Session",
    "AssetRef",
    "BlobStore",
]
