"""Websocket gateway between the running engine and the operator console.

One asyncio task owns the engine and ticks it at a fixed interval; operator
connections only enqueue commands and read immutable frame snapshots, so
the engine stays single-writer.  Commands are applied at tick boundaries;
an ``ack`` names the tick whose frame first reflects the command.  Slow
clients are coalesced to the latest frame, never reordered.
"""

from __future__ import annotations

import asyncio
import contextlib

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .engine import CommandError, Engine
from . import wire


class Gateway:
    def __init__(self, engine: Engine, tick_interval: float | None = None):
        self.engine = engine
        self.tick_interval = engine.world.dt if tick_interval is None else tick_interval
        self.commands: asyncio.Queue = asyncio.Queue()
        self.latest_frame: dict | None = None
        self.frame_cond = asyncio.Condition()
        self.operator: WebSocket | None = None
        self._task: asyncio.Task | None = None

    async def start(self) -> None:
        self._task = asyncio.create_task(self._engine_loop())

    async def stop(self) -> None:
        if self._task is not None:
            self._task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await self._task
            self._task = None

    async def _engine_loop(self) -> None:
        while True:
            replies: list[tuple[asyncio.Queue, dict]] = []
            while not self.commands.empty():
                outbox, seq, cmd = self.commands.get_nowait()
                try:
                    self.engine.apply_command(cmd)
                except CommandError as exc:
                    replies.append((outbox, wire.reject_message(seq, str(exc))))
                else:
                    replies.append(
                        (outbox, wire.ack_message(seq, self.engine.tick_count + 1))
                    )
            record = self.engine.tick()
            frame = wire.frame_message(self.engine, record)
            for outbox, msg in replies:
                outbox.put_nowait(msg)
            async with self.frame_cond:
                self.latest_frame = frame
                self.frame_cond.notify_all()
            await asyncio.sleep(self.tick_interval)


def create_app(engine: Engine, tick_interval: float | None = None) -> FastAPI:
    gateway = Gateway(engine, tick_interval)

    @contextlib.asynccontextmanager
    async def _lifespan(_app: FastAPI):
        await gateway.start()
        try:
            yield
        finally:
            await gateway.stop()

    app = FastAPI(title="swarmsteer gateway", lifespan=_lifespan)
    app.state.gateway = gateway

    @app.get("/scene")
    async def scene() -> dict:
        return wire.scene_message(engine.world)

    @app.get("/snapshot")
    async def snapshot() -> dict:
        if gateway.latest_frame is None:
            return {"v": wire.WIRE_VERSION, "type": "frame", "tick": 0}
        return gateway.latest_frame

    @app.websocket("/ws")
    async def operator_ws(ws: WebSocket) -> None:
        await ws.accept()
        if gateway.operator is not None:
            await ws.send_text(
                wire.encode(wire.reject_message(None, "operator session already active"))
            )
            await ws.close()
            return
        gateway.operator = ws
        outbox: asyncio.Queue = asyncio.Queue()
        try:
            await ws.send_text(wire.encode(wire.scene_message(engine.world)))
            sender = asyncio.create_task(_send_loop(gateway, ws, outbox))
            try:
                await _recv_loop(gateway, ws, outbox)
            finally:
                sender.cancel()
                with contextlib.suppress(asyncio.CancelledError):
                    await sender
        except WebSocketDisconnect:
            pass
        finally:
            gateway.operator = None

    return app


async def _send_loop(gateway: Gateway, ws: WebSocket, outbox: asyncio.Queue) -> None:
    last_tick = -1
    while True:
        while not outbox.empty():
            await ws.send_text(wire.encode(outbox.get_nowait()))
        frame = gateway.latest_frame
        if frame is not None and frame["tick"] > last_tick:
            last_tick = frame["tick"]
            await ws.send_text(wire.encode(frame))
            continue
        async with gateway.frame_cond:
            if outbox.empty() and (
                gateway.latest_frame is None or gateway.latest_frame["tick"] <= last_tick
            ):
                await gateway.frame_cond.wait()


async def _recv_loop(gateway: Gateway, ws: WebSocket, outbox: asyncio.Queue) -> None:
    last_seq = None
    while True:
        text = await ws.receive_text()
        try:
            msg = wire.decode(text)
            seq, cmd = wire.command_from_message(msg)
            if last_seq is not None and seq <= last_seq:
                raise wire.WireError(
                    f"seq {seq} not increasing (last was {last_seq})"
                )
        except wire.WireError as exc:
            outbox.put_nowait(wire.reject_message(None, str(exc)))
            async with gateway.frame_cond:
                gateway.frame_cond.notify_all()
            continue
        last_seq = seq
        gateway.commands.put_nowait((outbox, seq, cmd))


def serve(engine: Engine, port: int, host: str = "127.0.0.1") -> None:
    """Blocking: run the gateway with real-time tick pacing."""
    import uvicorn

    uvicorn.run(create_app(engine), host=host, port=port, log_level="warning")
