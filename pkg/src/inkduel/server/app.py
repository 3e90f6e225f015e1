"""HTTP/WebSocket transport around the match service.

One persistent websocket per client carries the JSON envelope stream;
uploads travel over a separate request/response endpoint so images never
block the interactive stream. The service itself is synchronous and only
ever called from the event loop, which serializes commands per match.
"""
from __future__ import annotations

import asyncio
import contextlib
import uuid

from fastapi import FastAPI, Request, Response, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..errors import (
    BadMedia,
    GameError,
    NameTaken,
    ProtocolError,
    SessionNotFound,
    TooLarge,
)
from .protocol import Connection, Router, decode_envelope
from .service import MatchService

_ERROR_STATUS = {
    TooLarge: 413,
    BadMedia: 415,
    SessionNotFound: 404,
    NameTaken: 409,
    ProtocolError: 400,
}


def _status_for(exc: GameError) -> int:
    for kind, status in _ERROR_STATUS.items():
        if isinstance(exc, kind):
            return status
    return 409  # game-rule rejection


def create_app(service: MatchService, *, tick_interval: float = 0.25,
               static_dir: str | None = None) -> FastAPI:
    router = Router()

    async def timer_loop():
        while True:
            await asyncio.sleep(tick_interval)
            router.dispatch(service.tick())

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        service.sweep_expired()
        timer_task = asyncio.create_task(timer_loop())
        try:
            yield
        finally:
            timer_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await timer_task

    app = FastAPI(title="inkduel match server", lifespan=lifespan)
    app.state.service = service
    app.state.router = router

    @app.get("/healthz")
    async def healthz():
        return {"ok": True, "sessions": len(service.sessions)}

    @app.get("/catalog")
    async def get_catalog():
        return JSONResponse(service.catalog.to_dict(),
                            headers={"ETag": service.catalog.digest})

    @app.get("/assets/{token}")
    async def get_asset(token: str):
        found = service.store.load(token)
        if found is None:
            return JSONResponse({"error": "asset_not_found"}, status_code=404)
        data, media = found
        return Response(content=data, media_type=f"image/{media}")

    @app.post("/matches/{match_id}/assets")
    async def upload_asset(match_id: str, request: Request, token: str):
        data = await request.body()
        media_type = request.headers.get("content-type", "application/octet-stream")
        try:
            ref, deliveries = service.store_upload(token, data, media_type)
        except GameError as exc:
            return JSONResponse({"error": exc.code, "message": str(exc)},
                                status_code=_status_for(exc))
        router.dispatch(deliveries)
        return ref.to_dict()

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        client_ref = f"conn-{uuid.uuid4().hex}"
        outbox: asyncio.Queue[bytes] = asyncio.Queue()
        connection = Connection(send_bytes=outbox.put_nowait)
        router.register(client_ref, connection)

        async def writer():
            while True:
                data = await outbox.get()
                await ws.send_text(data.decode())

        writer_task = asyncio.create_task(writer())
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    envelope = decode_envelope(raw)
                    deliveries = _route(service, envelope, client_ref, connection.token)
                except GameError as exc:
                    seq = _best_effort_seq(raw)
                    connection.send("error", {"code": exc.code, "message": str(exc)}, ack=seq)
                    continue
                for delivery in deliveries:
                    # pairing may happen in either player's handler; bind both
                    # tokens to their live connections as the event passes by
                    if delivery.kind == "match_found":
                        target = router.connections.get(delivery.to)
                        if target is not None:
                            target.token = delivery.payload["token"]
                            router.register(target.token, target)
                if envelope["kind"] == "resume":
                    connection.token = envelope["payload"].get("token")
                    router.register(connection.token, connection)
                ack_for = {client_ref: envelope["seq"]}
                if connection.token:
                    ack_for[connection.token] = envelope["seq"]
                router.dispatch(deliveries, ack_for=ack_for)
        except WebSocketDisconnect:
            pass
        finally:
            writer_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await writer_task
            service.leave_lobby(client_ref)
            router.drop(client_ref)
            if connection.token and router.connections.get(connection.token) is connection:
                router.drop(connection.token)

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="client")

    return app


def _route(service: MatchService, envelope: dict, client_ref: str, token: str | None):
    kind = envelope["kind"]
    payload = envelope["payload"]
    if kind == "hello":
        return service.join_lobby(str(payload.get("name", "")), client_ref,
                                  room=payload.get("room"))
    if kind == "resume":
        return service.resume(str(payload.get("token", "")))
    if token is None:
        raise ProtocolError(f"{kind} requires a session; say hello or resume first")
    return service.handle_command(token, kind, payload)


def _best_effort_seq(raw: str) -> int | None:
    import json

    try:
        doc = json.loads(raw)
        seq = doc.get("seq")
        return seq if isinstance(seq, int) and not isinstance(seq, bool) else None
    except Exception:
        return None
