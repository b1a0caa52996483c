"""Turn a metrics window into inputs for the network-risk knowledge base."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..knowledge_base import KnowledgeBase, RiskAssessment, infer
from .simulation import TickMetrics, Trace

NETWORK_INPUTS = ("update_rate", "mean_rx_dbm", "drop_rate")


@dataclass(frozen=True)
class NetworkWindow:
    ticks: int
    location_updates: int
    dropped_signals: int
    mean_rx_dbm: float

    def rates(self) -> dict[str, float]:
        per_tick = (lambda n: n / self.ticks) if self.ticks else (lambda n: 0.0)
        return {
            "update_rate": per_tick(self.location_updates),
            "mean_rx_dbm": self.mean_rx_dbm,
            "drop_rate": per_tick(self.dropped_signals),
        }


def window_from_rows(
    rows: Sequence[TickMetrics],
    before: TickMetrics | None = None,
    no_signal_dbm: float = -120.0,
) -> NetworkWindow:
    """Aggregate consecutive trace rows. ``before`` is the row preceding the
    window (its cumulative counters are subtracted); ticks where the event's
    subscriber had no serving cell count as ``no_signal_dbm``."""
    if not rows:
        return NetworkWindow(0, 0, 0, 0.0)
    base_updates = before.location_updates if before else 0
    base_drops = before.dropped_signals if before else 0
    rx = [r.serving_rx_dbm if r.serving_rx_dbm is not None else no_signal_dbm for r in rows]
    return NetworkWindow(
        ticks=len(rows),
        location_updates=rows[-1].location_updates - base_updates,
        dropped_signals=rows[-1].dropped_signals - base_drops,
        mean_rx_dbm=sum(rx) / len(rx),
    )


def final_window(trace: Trace, size: int | None = None, no_signal_dbm: float = -120.0) -> NetworkWindow:
    """The last ``size`` ticks of a trace (the whole trace when ``size`` is None)."""
    rows = trace.rows if size is None else trace.rows[-size:]
    start = len(trace.rows) - len(rows)
    before = trace.rows[start - 1] if start > 0 else None
    return window_from_rows(rows, before, no_signal_dbm)


def assess_network_risk(window: NetworkWindow, kb: KnowledgeBase) -> RiskAssessment:
    missing = [n for n in NETWORK_INPUTS if n not in kb.input_names]
    if missing:
        raise ValueError(f"knowledge base lacks network inputs: {', '.join(missing)}")
    return infer(kb, window.rates())
