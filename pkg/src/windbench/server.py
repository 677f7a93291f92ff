"""Live bench service speaking the operator wire protocol.

Newline-terminated JSON messages over a WebSocket (so browsers can
connect directly).  Message kinds: hello, command, command-reply,
telemetry, event.  Commands carry a client-assigned id echoed in the
reply and are applied strictly between simulation chunks, never
concurrently with stepping.
"""

from __future__ import annotations

import asyncio
import json
from importlib import metadata

from websockets.asyncio.server import serve as ws_serve
from websockets.exceptions import ConnectionClosed

from .config import BenchConfig
from .errors import BenchError, ProtocolError, SimulationError
from .runtime import SimState, _decode_violations

PROTOCOL_VERSION = 1

# commands a read-only viewer may issue; everything else needs the
# operator role granted in the client hello
_VIEWER_COMMANDS = frozenset({"status"})

_SERVER_COMMANDS = frozenset({"load_scenario", "start", "pause", "status"})
_STATE_COMMANDS = frozenset(
    {"set_wind", "inject_gust", "set_mode", "set_setpoint", "trip_reset"}
)


def _version() -> str:
    try:
        return metadata.version("windbench")
    except metadata.PackageNotFoundError:
        return "unknown"


class BenchServer:
    """One shared bench, many console clients."""

    def __init__(
        self,
        config: BenchConfig,
        scenario: str = "const8",
        pace: bool = True,
        decimation: int | None = None,
    ) -> None:
        self.config = config
        self.pace = pace
        self.decimation = (
            config.simulation.decimation if decimation is None else decimation
        )
        if self.decimation < 1:
            raise ProtocolError(f"decimation must be positive, got {self.decimation}")
        self.scenario_name = scenario
        self.state = SimState(config, config.scenario(scenario))
        self.paused = False
        self._total_steps = self._steps_for(self.state)
        self._clients: dict = {}  # websocket -> role
        self._wake = asyncio.Event()
        self._seen_mask = 0
        self._server = None
        self._sim_task: asyncio.Task | None = None

    # -- lifecycle -----------------------------------------------------

    async def start(self, host: str = "127.0.0.1", port: int = 0) -> int:
        """Bind and start stepping; returns the bound port."""
        self._server = await ws_serve(self._handle_client, host, port)
        self._sim_task = asyncio.create_task(self._sim_loop())
        return self._server.sockets[0].getsockname()[1]

    async def stop(self) -> None:
        if self._sim_task is not None:
            self._sim_task.cancel()
            try:
                await self._sim_task
            except asyncio.CancelledError:
                pass
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()

    def _steps_for(self, state: SimState) -> int:
        return int(round(state.scenario.duration / state.dt))

    # -- client handling -----------------------------------------------

    async def _handle_client(self, websocket) -> None:
        await _send(
            websocket,
            {
                "kind": "hello",
                "protocol_version": PROTOCOL_VERSION,
                "server": "windbench",
                "version": _version(),
                "scenario": self.scenario_name,
                "paused": self.paused,
            },
        )
        try:
            raw = await websocket.recv()
            msg = _parse(raw)
            if msg.get("kind") != "hello":
                await _send(
                    websocket,
                    _event("protocol-error", 0.0, {"error": "expected a hello first"}),
                )
                return
            if msg.get("protocol_version") != PROTOCOL_VERSION:
                await _send(
                    websocket,
                    _event(
                        "protocol-mismatch",
                        0.0,
                        {
                            "server_version": PROTOCOL_VERSION,
                            "client_version": msg.get("protocol_version"),
                        },
                    ),
                )
                return
            role = msg.get("role", "viewer")
            if role not in ("viewer", "operator"):
                await _send(
                    websocket,
                    _event("protocol-error", 0.0, {"error": f"unknown role {role!r}"}),
                )
                return
            self._clients[websocket] = role
            # joiners immediately see the current state
            await _send(
                websocket,
                {"kind": "telemetry", "sample": self.state.last_sample.as_dict()},
            )
            async for raw in websocket:
                await self._handle_message(websocket, role, raw)
        except (ConnectionClosed, ProtocolError):
            pass
        finally:
            self._clients.pop(websocket, None)

    async def _handle_message(self, websocket, role: str, raw) -> None:
        try:
            msg = _parse(raw)
        except ProtocolError as exc:
            await _send(
                websocket, _event("protocol-error", self.state.t, {"error": str(exc)})
            )
            return
        if msg.get("kind") != "command":
            await _send(
                websocket,
                _event(
                    "protocol-error",
                    self.state.t,
                    {"error": f"unexpected kind {msg.get('kind')!r}"},
                ),
            )
            return
        cmd_id = msg.get("id")
        name = msg.get("name")
        args = msg.get("args") or {}
        reply = {"kind": "command-reply", "id": cmd_id, "ok": False}
        if not isinstance(name, str):
            reply["error"] = "command needs a string name"
            await _send(websocket, reply)
            return
        if role != "operator" and name not in _VIEWER_COMMANDS:
            reply["error"] = f"role {role!r} may not issue {name!r}"
            await _send(websocket, reply)
            return
        try:
            result, events = self._execute(name, args)
        except (BenchError, ProtocolError) as exc:
            reply["error"] = str(exc)
            await _send(websocket, reply)
            return
        reply["ok"] = True
        reply["result"] = result
        await _send(websocket, reply)
        for event in events:
            await self._broadcast(event)
        self._wake.set()

    def _execute(self, name: str, args: dict) -> tuple[dict, list[dict]]:
        """Run one command between chunks; returns (result, events)."""
        if not isinstance(args, dict):
            raise ProtocolError("command args must be a mapping")
        if name == "status":
            status = self.state.status()
            status["scenario"] = self.scenario_name
            status["paused"] = self.paused
            status["protocol_version"] = PROTOCOL_VERSION
            return status, []
        if name == "load_scenario":
            target = args.get("name")
            if not isinstance(target, str):
                raise ProtocolError("load_scenario needs a scenario name")
            scenario = self.config.scenario(target)
            self.state = SimState(self.config, scenario)
            self.scenario_name = target
            self._total_steps = self._steps_for(self.state)
            self.paused = True
            self._seen_mask = 0
            return (
                {"scenario": target, "paused": True},
                [_event("scenario-loaded", self.state.t, {"scenario": target})],
            )
        if name == "start":
            if self.state.steps_done >= self._total_steps:
                raise ProtocolError("scenario complete; load it again to restart")
            self.paused = False
            return {"paused": False}, []
        if name == "pause":
            self.paused = True
            return {"paused": True}, []
        if name in _STATE_COMMANDS:
            result = self.state.apply_command(name, args)
            events = []
            if name == "trip_reset":
                self._seen_mask = 0
                events.append(_event("reset", self.state.t, {}))
            return result, events
        raise ProtocolError(f"unknown command {name!r}")

    # -- simulation loop -------------------------------------------------

    async def _sim_loop(self) -> None:
        loop = asyncio.get_running_loop()
        target_wall = loop.time()
        while True:
            if self.paused or self.state.steps_done >= self._total_steps:
                self._wake.clear()
                await self._wake.wait()
                target_wall = loop.time()
                continue
            chunk = min(self.decimation, self._total_steps - self.state.steps_done)
            was_tripped = self.state.trip_latched
            try:
                out_f, out_i = self.state.advance(chunk)
            except SimulationError as exc:
                self.paused = True
                await self._broadcast(
                    _event("error", self.state.t, {"error": str(exc)})
                )
                continue
            await self._emit_events(out_f, out_i, was_tripped)
            await self._broadcast(
                {"kind": "telemetry", "sample": self.state.last_sample.as_dict()}
            )
            if self.state.steps_done >= self._total_steps:
                self.paused = True
                await self._broadcast(
                    _event(
                        "scenario-complete",
                        self.state.t,
                        {"scenario": self.scenario_name},
                    )
                )
            if self.pace:
                target_wall += chunk * self.state.dt
                delay = target_wall - loop.time()
                if delay > 0:
                    await asyncio.sleep(delay)
                else:
                    target_wall = loop.time()
            else:
                # stay cooperative even when free-running
                await asyncio.sleep(0)

    async def _emit_events(self, out_f, out_i, was_tripped: bool) -> None:
        if not was_tripped and bool(out_i[-1, 1]):
            idx = int((out_i[:, 1] != 0).argmax())
            await self._broadcast(
                _event(
                    "trip",
                    float(out_f[idx, 0]),
                    {
                        "violations": list(_decode_violations(int(out_i[idx, 2]))),
                        "u_star": float(out_f[idx, 8]),
                    },
                )
            )
        mask_union = 0
        for mask in out_i[:, 2]:
            mask_union |= int(mask)
        new_bits = mask_union & ~self._seen_mask
        if new_bits:
            self._seen_mask |= mask_union
            idx = int(((out_i[:, 2] & new_bits) != 0).argmax())
            await self._broadcast(
                _event(
                    "violation",
                    float(out_f[idx, 0]),
                    {"violations": list(_decode_violations(new_bits))},
                )
            )

    async def _broadcast(self, message: dict) -> None:
        if not self._clients:
            return
        text = json.dumps(message) + "\n"
        dead = []
        for websocket in list(self._clients):
            try:
                await websocket.send(text)
            except ConnectionClosed:
                dead.append(websocket)
        for websocket in dead:
            self._clients.pop(websocket, None)


def _event(name: str, t: float, data: dict) -> dict:
    return {"kind": "event", "event": name, "t": t, "data": data}


def _parse(raw) -> dict:
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8", errors="replace")
    try:
        msg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"malformed message: {exc}") from exc
    if not isinstance(msg, dict):
        raise ProtocolError("message must be a JSON object")
    return msg


async def _send(websocket, message: dict) -> None:
    try:
        await websocket.send(json.dumps(message) + "\n")
    except ConnectionClosed:
        pass


async def serve_async(
    config: BenchConfig,
    host: str = "127.0.0.1",
    port: int = 8765,
    scenario: str = "const8",
    pace: bool = True,
) -> None:
    """Run the bench service until cancelled."""
    server = BenchServer(config, scenario=scenario, pace=pace)
    bound = await server.start(host, port)
    print(f"windbench serving ws://{host}:{bound} (scenario {scenario!r})")
    try:
        await asyncio.Future()
    finally:
        await server.stop()


def serve(
    config: BenchConfig,
    host: str = "127.0.0.1",
    port: int = 8765,
    scenario: str = "const8",
    pace: bool = True,
) -> None:
    """Blocking entry point for the CLI."""
    try:
        asyncio.run(serve_async(config, host, port, scenario, pace))
    except KeyboardInterrupt:
        pass
