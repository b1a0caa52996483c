"""Scenarios, the deterministic event loop and the per-tick metrics trace."""
from __future__ import annotations

import io
import json
import math
import random
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterator

from .network import Network
from .world import Call, Event, Move, SimulationError, UnknownSubscriberError, World


class ScenarioError(SimulationError):
    pass


@dataclass(frozen=True)
class RandomWalk:
    ticks: int
    step: float = 0.5  # km per move
    p_call: float = 0.2
    seed: int | None = None
    bounds: tuple[float, float, float, float] | None = None  # x0, y0, x1, y1
    margin: float = 1.0  # km added around the network when bounds is None


@dataclass(frozen=True)
class Scenario:
    subscribers: tuple[str, ...]
    start: dict[str, tuple[float, float] | None] = field(default_factory=dict)
    profiles: dict[str, dict] = field(default_factory=dict)
    events: tuple[Event, ...] = ()
    random_walk: RandomWalk | None = None

    def __post_init__(self):
        if len(set(self.subscribers)) != len(self.subscribers):
            raise ScenarioError("duplicate subscriber ids")
        known = set(self.subscribers)
        for i, e in enumerate(self.events):
            if e.subscriber not in known:
                raise UnknownSubscriberError(f"events[{i}]: unknown subscriber {e.subscriber!r}")
        if self.events and self.random_walk is not None:
            raise ScenarioError("give either scripted events or random_walk, not both")


def scenario_from_dict(doc: dict) -> Scenario:
    subs, start, profiles = [], {}, {}
    for s in doc.get("subscribers", []):
        if isinstance(s, dict):
            sid = str(s["id"])
            start[sid] = (float(s["x"]), float(s["y"])) if "x" in s else None
            if "profile" in s:
                profiles[sid] = dict(s["profile"])
        else:
            sid = str(s)
            start[sid] = None
        subs.append(sid)
    events = []
    for i, e in enumerate(doc.get("events", [])):
        kind = str(e.get("type", "")).lower()
        try:
            if kind == "move":
                events.append(Move(str(e["subscriber"]), float(e["x"]), float(e["y"])))
            elif kind == "call":
                events.append(Call(str(e["subscriber"])))
            else:
                raise ScenarioError(f"events[{i}]: unknown event type {kind!r}")
        except KeyError as exc:
            raise ScenarioError(f"events[{i}]: missing {exc}") from None
    rw = None
    if "random_walk" in doc:
        r = doc["random_walk"]
        rw = RandomWalk(
            ticks=int(r["ticks"]),
            step=float(r.get("step", 0.5)),
            p_call=float(r.get("p_call", 0.2)),
            seed=r.get("seed"),
            bounds=tuple(r["bounds"]) if "bounds" in r else None,
            margin=float(r.get("margin", 1.0)),
        )
    return Scenario(tuple(subs), start, profiles, tuple(events), rw)


def load_scenario(path: str | Path) -> Scenario:
    return scenario_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class TickMetrics:
    tick: int
    event: str
    subscriber: str
    serving_cell: str
    serving_rx_dbm: float | None
    location_updates: int
    profile_transfers: int
    paging_requests: int
    cells_paged: int
    failed_pages: int
    dropped_signals: int
    attached: int


CSV_COLUMNS = tuple(f.name for f in fields(TickMetrics))


@dataclass(frozen=True)
class Trace:
    rows: tuple[TickMetrics, ...]
    final: dict[str, int]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(CSV_COLUMNS) + "\n")
        for r in self.rows:
            vals = []
            for name in CSV_COLUMNS:
                v = getattr(r, name)
                if v is None:
                    vals.append("")
                elif isinstance(v, float):
                    vals.append(f"{v:.6f}")
                else:
                    vals.append(str(v))
            buf.write(",".join(vals) + "\n")
        return buf.getvalue()


def _reflect(v: float, lo: float, hi: float) -> float:
    span = hi - lo
    if span <= 0:
        return lo
    t = (v - lo) % (2 * span)
    return lo + (t if t <= span else 2 * span - t)


def _walk_bounds(rw: RandomWalk, network: Network):
    if rw.bounds is not None:
        return rw.bounds
    x0, y0, x1, y1 = network.bounds()
    return (x0 - rw.margin, y0 - rw.margin, x1 + rw.margin, y1 + rw.margin)


def initial_positions(scenario: Scenario, network: Network, rng: random.Random | None):
    pos = {}
    for s in scenario.subscribers:
        p = scenario.start.get(s)
        if p is None:
            if rng is None:
                # scripted runs without coordinates start at the first cell
                c = network.cells[0]
                p = (c.x, c.y)
            else:
                x0, y0, x1, y1 = _walk_bounds(scenario.random_walk, network)
                p = (rng.uniform(x0, x1), rng.uniform(y0, y1))
        pos[s] = p
    return pos


def _random_events(world: World, rw: RandomWalk, rng: random.Random, network: Network) -> Iterator[Event]:
    x0, y0, x1, y1 = _walk_bounds(rw, network)
    subs = world.subscribers
    for _ in range(rw.ticks):
        sub = subs[rng.randrange(len(subs))]
        if rng.random() < rw.p_call:
            yield Call(sub)
            continue
        angle = rng.uniform(0.0, 2.0 * math.pi)
        x, y = world.positions[sub]
        yield Move(sub, _reflect(x + rw.step * math.cos(angle), x0, x1),
                   _reflect(y + rw.step * math.sin(angle), y0, y1))


def run(
    scenario: Scenario,
    network: Network,
    seed: int | None = None,
    check_invariants: bool = False,
    on_tick: Callable[[World, Event], None] | None = None,
) -> Trace:
    """Run a scenario to completion; one event per tick.

    Random walks need a seed, from ``seed`` or the scenario; ``seed`` wins.
    """
    rng = None
    if scenario.random_walk is not None:
        seed = scenario.random_walk.seed if seed is None else seed
        if seed is None:
            raise ScenarioError("random_walk scenario needs an explicit seed")
        rng = random.Random(int(seed))
    if not scenario.subscribers and (scenario.events or scenario.random_walk):
        raise ScenarioError("scenario has events but no subscribers")

    world = World(network, initial_positions(scenario, network, rng), scenario.profiles)
    if check_invariants:
        world.check_invariants()
    if rng is not None and scenario.subscribers:
        events = _random_events(world, scenario.random_walk, rng, network)
    else:
        events = iter(scenario.events)

    rows = []
    for event in events:
        world.step(event)
        if check_invariants:
            world.check_invariants()
        if on_tick is not None:
            on_tick(world, event)
        sub = event.subscriber
        c = world.counters
        rows.append(
            TickMetrics(
                tick=world.tick,
                event="move" if isinstance(event, Move) else "call",
                subscriber=sub,
                serving_cell=str(world.serving[sub]) if world.serving[sub] else "",
                serving_rx_dbm=world.serving_rx[sub],
                location_updates=c.location_updates,
                profile_transfers=c.profile_transfers,
                paging_requests=c.paging_requests,
                cells_paged=c.cells_paged,
                failed_pages=c.failed_pages,
                dropped_signals=c.dropped_signals,
                attached=sum(p is not None for p in world.hlr.pointer.values()),
            )
        )
    return Trace(tuple(rows), asdict(world.counters))
