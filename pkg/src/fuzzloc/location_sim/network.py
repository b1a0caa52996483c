"""Cells, the log-distance radio model and serving-cell selection."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_DROP_THRESHOLD_DBM = -110.0
DEFAULT_TX_POWER_BOUNDS = (-10.0, 60.0)


class NetworkConfigError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CellId:
    mnc: int
    lac: int
    cid: int

    def __str__(self):
        return f"{self.mnc}-{self.lac}-{self.cid}"


@dataclass(frozen=True)
class PathLoss:
    pl0: float = 40.0  # dB lost at the reference distance
    n: float = 3.0  # path-loss exponent
    d0: float = 0.01  # reference distance, km

    def __post_init__(self):
        if self.d0 <= 0:
            raise NetworkConfigError("pathloss d0 must be positive")


@dataclass(frozen=True)
class Cell:
    id: CellId
    x: float
    y: float
    tx_power: float

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


def signal_strength(cell: Cell, pos: tuple[float, float], pathloss: PathLoss = PathLoss()) -> float:
    """Received power in dBm at ``pos`` (km)."""
    d = math.hypot(pos[0] - cell.x, pos[1] - cell.y)
    return cell.tx_power - pathloss.pl0 - 10.0 * pathloss.n * math.log10(max(d, pathloss.d0) / pathloss.d0)


@dataclass(frozen=True)
class Selection:
    cell: Cell
    rx_dbm: float
    dropped: bool


@dataclass(frozen=True)
class Network:
    cells: tuple[Cell, ...]
    pathloss: PathLoss = PathLoss()
    drop_threshold_dbm: float = DEFAULT_DROP_THRESHOLD_DBM
    _by_lac: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # deterministic (lac, cid) order makes the tie-break a stable scan
        cells = tuple(sorted(self.cells, key=lambda c: (c.id.lac, c.id.cid, c.id.mnc)))
        object.__setattr__(self, "cells", cells)
        by_lac: dict[int, list[Cell]] = {}
        for c in cells:
            by_lac.setdefault(c.id.lac, []).append(c)
        object.__setattr__(self, "_by_lac", {k: tuple(v) for k, v in by_lac.items()})

    @property
    def lacs(self) -> tuple[int, ...]:
        return tuple(sorted(self._by_lac))

    def cells_in(self, lac: int) -> tuple[Cell, ...]:
        return self._by_lac.get(lac, ())

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [c.x for c in self.cells]
        ys = [c.y for c in self.cells]
        return (min(xs), min(ys), max(xs), max(ys))

    def rx(self, cell: Cell, pos: tuple[float, float]) -> float:
        return signal_strength(cell, pos, self.pathloss)


def select_cell(pos: tuple[float, float], network: Network) -> Selection:
    """Strongest cell at ``pos``; ties go to the lowest (lac, cid)."""
    best = None
    best_rx = -math.inf
    for c in network.cells:
        rx = network.rx(c, pos)
        if rx > best_rx:
            best, best_rx = c, rx
    return Selection(best, best_rx, best_rx < network.drop_threshold_dbm)


def build_network(config: dict) -> Network:
    """Validate a network config dict.

    ``{"cells": [{"mnc", "lac", "cid", "x", "y", "tx_power"}, ...],
    "drop_threshold_dbm": -110, "pathloss": {"pl0", "n", "d0"},
    "tx_power_bounds": [lo, hi]}``
    """
    raw_cells = config.get("cells") or []
    if not raw_cells:
        raise NetworkConfigError("network has no cells")
    lo, hi = config.get("tx_power_bounds", DEFAULT_TX_POWER_BOUNDS)
    cells = []
    seen = set()
    for i, c in enumerate(raw_cells):
        try:
            cid = CellId(int(c["mnc"]), int(c["lac"]), int(c["cid"]))
            cell = Cell(cid, float(c["x"]), float(c["y"]), float(c["tx_power"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise NetworkConfigError(f"cells[{i}]: {exc}") from None
        if (cid.lac, cid.cid) in seen:
            raise NetworkConfigError(f"cells[{i}]: duplicate cell id {cid}")
        seen.add((cid.lac, cid.cid))
        if not (math.isfinite(cell.x) and math.isfinite(cell.y)):
            raise NetworkConfigError(f"cells[{i}]: position must be finite")
        if not lo <= cell.tx_power <= hi:
            raise NetworkConfigError(f"cells[{i}]: tx_power {cell.tx_power} outside [{lo}, {hi}]")
        cells.append(cell)
    pl = config.get("pathloss", {})
    pathloss = PathLoss(
        float(pl.get("pl0", PathLoss.pl0)), float(pl.get("n", PathLoss.n)), float(pl.get("d0", PathLoss.d0))
    )
    return Network(
        tuple(cells),
        pathloss,
        float(config.get("drop_threshold_dbm", DEFAULT_DROP_THRESHOLD_DBM)),
    )


def load_network(path: str | Path) -> Network:
    return build_network(json.loads(Path(path).read_text(encoding="utf-8")))


def grid_config(
    rows: int = 4,
    cols: int = 4,
    spacing_km: float = 2.0,
    tx_power: float = 43.0,
    mnc: int = 1,
    block: int = 2,
) -> dict:
    """Square grid of cells; each ``block x block`` tile of cells is one LAC."""
    cells = []
    counters: dict[int, int] = {}
    blocks_per_row = (cols + block - 1) // block
    for r in range(rows):
        for c in range(cols):
            lac = 100 + (r // block) * blocks_per_row + (c // block)
            counters[lac] = counters.get(lac, 0) + 1
            cells.append(
                {"mnc": mnc, "lac": lac, "cid": counters[lac], "x": c * spacing_km,
                 "y": r * spacing_km, "tx_power": tx_power}
            )
    return {
        "cells": cells,
        "drop_threshold_dbm": DEFAULT_DROP_THRESHOLD_DBM,
        "pathloss": {"pl0": 40.0, "n": 3.0, "d0": 0.01},
    }
