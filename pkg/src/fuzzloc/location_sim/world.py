"""HLR/VLR registration state and the per-event protocol.

v1 protocol: on every LAC change the new VLR fetches the profile from the
HLR (no VLR-to-VLR forwarding); a call pages every cell of the LAC the HLR
points at.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Mapping

from .network import Network, select_cell


class SimulationError(ValueError):
    pass


class UnknownSubscriberError(SimulationError):
    pass


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class Move:
    subscriber: str
    x: float
    y: float


@dataclass(frozen=True)
class Call:
    subscriber: str


Event = Move | Call


@dataclass(frozen=True)
class Message:
    kind: str  # LOCATION_UPDATE, PROFILE_TRANSFER, DEREGISTER, DETACH, PAGE, PAGE_FAIL
    subscriber: str
    detail: str = ""


@dataclass
class HlrState:
    profiles: dict[str, dict]
    pointer: dict[str, int | None]
    transitions: dict[str, int]


@dataclass
class VlrState:
    lac: int
    cache: dict[str, dict] = field(default_factory=dict)


@dataclass
class Counters:
    location_updates: int = 0
    profile_transfers: int = 0
    paging_requests: int = 0
    cells_paged: int = 0
    failed_pages: int = 0
    dropped_signals: int = 0


class World:
    def __init__(
        self,
        network: Network,
        positions: Mapping[str, tuple[float, float]],
        profiles: Mapping[str, dict] | None = None,
    ):
        self.network = network
        profiles = profiles or {}
        self.hlr = HlrState(
            profiles={s: dict(profiles.get(s, {"imsi": s})) for s in positions},
            pointer={s: None for s in positions},
            transitions={s: 0 for s in positions},
        )
        self.vlrs = {lac: VlrState(lac) for lac in network.lacs}
        self.positions = {s: (float(p[0]), float(p[1])) for s, p in positions.items()}
        self.serving = {s: None for s in positions}
        self.serving_rx: dict[str, float | None] = {s: None for s in positions}
        self.counters = Counters()
        self.tick = 0
        # initial attach is part of setup and is not counted as an update
        for s, pos in self.positions.items():
            sel = select_cell(pos, network)
            if not sel.dropped:
                self._register(s, sel.cell.id.lac)
                self.serving[s] = sel.cell.id
                self.serving_rx[s] = sel.rx_dbm

    @property
    def subscribers(self) -> list[str]:
        return list(self.positions)

    def copy(self) -> World:
        return copy.deepcopy(self)

    def _register(self, sub: str, lac: int) -> None:
        self.vlrs[lac].cache[sub] = dict(self.hlr.profiles[sub])
        self.hlr.pointer[sub] = lac

    def step(self, event: Event) -> list[Message]:
        """Apply one event. Validation happens before any state changes."""
        sub = event.subscriber
        if sub not in self.positions:
            raise UnknownSubscriberError(f"unknown subscriber {sub!r}")
        if isinstance(event, Move):
            msgs = self._move(sub, (float(event.x), float(event.y)))
        elif isinstance(event, Call):
            msgs = self._call(sub)
        else:
            raise SimulationError(f"unknown event {event!r}")
        self.tick += 1
        return msgs

    def _move(self, sub: str, pos: tuple[float, float]) -> list[Message]:
        sel = select_cell(pos, self.network)
        old_lac = self.hlr.pointer[sub]
        msgs = []
        self.positions[sub] = pos
        if sel.dropped:
            self.counters.dropped_signals += 1
            if old_lac is not None:
                del self.vlrs[old_lac].cache[sub]
                self.hlr.pointer[sub] = None
                msgs.append(Message("DETACH", sub, f"lac {old_lac}, rx {sel.rx_dbm:.1f} dBm"))
            self.serving[sub] = None
            self.serving_rx[sub] = None
            return msgs
        new_lac = sel.cell.id.lac
        if new_lac != old_lac:
            if old_lac is not None:
                del self.vlrs[old_lac].cache[sub]
                msgs.append(Message("DEREGISTER", sub, f"lac {old_lac}"))
            self._register(sub, new_lac)
            self.hlr.transitions[sub] += 1
            self.counters.location_updates += 1
            self.counters.profile_transfers += 1
            msgs.append(Message("LOCATION_UPDATE", sub, f"lac {old_lac} -> {new_lac}"))
            msgs.append(Message("PROFILE_TRANSFER", sub, f"HLR -> VLR {new_lac}"))
        self.serving[sub] = sel.cell.id
        self.serving_rx[sub] = sel.rx_dbm
        return msgs

    def _call(self, sub: str) -> list[Message]:
        self.counters.paging_requests += 1
        lac = self.hlr.pointer[sub]
        if lac is None:
            self.counters.failed_pages += 1
            return [Message("PAGE_FAIL", sub, "detached")]
        n = len(self.network.cells_in(lac))
        self.counters.cells_paged += n
        return [Message("PAGE", sub, f"lac {lac}, {n} cells")]

    def check_invariants(self) -> None:
        for sub in self.positions:
            lac = self.hlr.pointer[sub]
            holders = [v.lac for v in self.vlrs.values() if sub in v.cache]
            if lac is None:
                if holders:
                    raise InvariantViolation(f"detached {sub} still cached in VLR {holders}")
                if self.serving[sub] is not None:
                    raise InvariantViolation(f"detached {sub} has a serving cell")
                continue
            if holders != [lac]:
                raise InvariantViolation(f"{sub}: HLR points at {lac}, cached in {holders}")
            if self.vlrs[lac].cache[sub] != self.hlr.profiles[sub]:
                raise InvariantViolation(f"{sub}: VLR profile differs from HLR")
            if self.serving[sub] is None or self.serving[sub].lac != lac:
                raise InvariantViolation(f"{sub}: serving cell outside pointed lac")
        c = self.counters
        if c.profile_transfers != c.location_updates:
            raise InvariantViolation("profile transfers != location updates")
        if sum(self.hlr.transitions.values()) != c.location_updates:
            raise InvariantViolation("per-subscriber transitions do not sum to updates")
