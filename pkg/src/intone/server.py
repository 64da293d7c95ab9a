"""Websocket streaming service around the live engine.

One engine loop is the single writer of session state: it drains steering
input, steps a control frame, and broadcasts the resulting FrameMessage to
every connected client. Clients synthesize audio locally from the
parameter frames; the server renders the same stream into its local sink
(optionally captured to a WAV) so the mirrored and authoritative audio stay
aligned. Slow clients have stale frames dropped rather than stalling the
loop. Message schema: docs/protocol.md.
"""

from __future__ import annotations

import asyncio
import contextlib
import io
import json
import logging
import time

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, PlainTextResponse

from .audiofile import write_wav
from .config import EngineConfig
from .live import PROTOCOL_SCHEMA_VERSION, LiveEngine, SteerError
from .pipeline import write_trace_rows

logger = logging.getLogger(__name__)

_CLIENT_QUEUE_FRAMES = 90  # ~3 s of backlog before a slow client drops frames


def create_app(
    config: EngineConfig,
    capture_wav: str | None = None,
    frame_limit: int | None = None,
    paced: bool = True,
    wait_for_clients: int = 0,
    ui_dir: str | None = None,
) -> FastAPI:
    """Build the service.

    `frame_limit` bounds the session, `paced=False` runs the loop as fast as
    possible, and `wait_for_clients` holds frame zero until that many
    websocket clients are connected; all three exist for tests and tooling.
    `ui_dir` optionally mounts a built studio frontend at the root path.
    """
    engine = LiveEngine(config)
    engine.keep_audio = capture_wav is not None
    clients: set[asyncio.Queue] = set()

    async def engine_loop() -> None:
        while len(clients) < wait_for_clients:
            await asyncio.sleep(0.005)
        start = time.monotonic()
        try:
            while frame_limit is None or engine.frame_idx < frame_limit:
                frame = engine.step_frame()
                for queue in clients:
                    if queue.full():
                        queue.get_nowait()  # drop the stalest frame
                    queue.put_nowait(frame)
                if paced:
                    deadline = start + engine.frame_idx / engine.frame_rate
                    delay = deadline - time.monotonic()
                    if delay > 0:
                        await asyncio.sleep(delay)
                    # When behind, run the next frame immediately: logical
                    # frame times never skip, wall time stretches.
                else:
                    await asyncio.sleep(0)
        except asyncio.CancelledError:
            raise
        except Exception:
            logger.exception("engine loop crashed")

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(engine_loop())
        yield
        task.cancel()
        with contextlib.suppress(asyncio.CancelledError):
            await task
        if capture_wav is not None and engine.blocks:
            write_wav(engine.blocks, capture_wav, config.synth.sample_rate)
            logger.info("captured session audio to %s", capture_wav)

    app = FastAPI(title="intone live service", lifespan=lifespan)
    app.state.engine = engine

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"ok": True, "frame": engine.frame_idx}

    @app.get("/session/info")
    async def session_info() -> dict:
        return {
            "schema": PROTOCOL_SCHEMA_VERSION,
            "frame_rate": engine.frame_rate,
            "frame": engine.frame_idx,
            "actors": sorted(engine.actors),
        }

    @app.get("/session/steer-log")
    async def steer_log() -> JSONResponse:
        return JSONResponse(engine.steer_log)

    @app.get("/session/trace.csv")
    async def trace_csv() -> PlainTextResponse:
        buf = io.StringIO()
        write_trace_rows(buf, engine.trace.rows)
        return PlainTextResponse(buf.getvalue(), media_type="text/csv")

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket) -> None:
        await websocket.accept()
        await websocket.send_json(
            {
                "type": "hello",
                "schema": PROTOCOL_SCHEMA_VERSION,
                "engine": "intone",
                "frame_rate": engine.frame_rate,
            }
        )
        queue: asyncio.Queue = asyncio.Queue(maxsize=_CLIENT_QUEUE_FRAMES)
        clients.add(queue)
        send_lock = asyncio.Lock()  # frames and replies share one socket

        async def send(payload: dict) -> None:
            async with send_lock:
                await websocket.send_json(payload)

        async def sender() -> None:
            while True:
                await send(await queue.get())

        send_task = asyncio.create_task(sender())
        try:
            while True:
                raw = await websocket.receive_text()
                reply = handle_client_message(engine, raw)
                await send(reply)
                if reply.get("close"):
                    break
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            clients.discard(queue)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="studio")

    return app


def handle_client_message(engine: LiveEngine, raw: str) -> dict:
    """Dispatch one inbound message; always returns a reply payload."""
    try:
        msg = json.loads(raw)
    except json.JSONDecodeError as exc:
        return {"type": "error", "reason": f"invalid JSON: {exc}"}
    if not isinstance(msg, dict):
        return {"type": "error", "reason": "message must be a JSON object"}

    kind = msg.get("type")
    if kind == "hello":
        schema = msg.get("schema")
        if schema != PROTOCOL_SCHEMA_VERSION:
            return {
                "type": "error",
                "reason": f"unsupported schema {schema!r}, server speaks {PROTOCOL_SCHEMA_VERSION}",
                "close": True,
            }
        return {"type": "hello_ack", "schema": PROTOCOL_SCHEMA_VERSION}
    if kind == "steer":
        try:
            ack = engine.apply_steer(msg)
        except SteerError as exc:
            return {"type": "error", "reason": str(exc)}
        return {"type": "ack", **ack}
    return {"type": "error", "reason": f"unknown message type {kind!r}"}
