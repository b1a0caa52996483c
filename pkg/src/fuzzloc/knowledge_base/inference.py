"""Mamdani inference: fuzzify, min/max antecedents, clip, max-aggregate, centroid."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..fuzzy_core import DiscreteFuzzySet, and_degree, clip, defuzzify_centroid, fuzzify, or_degree
from .kb import KnowledgeBase, KnowledgeBaseError, meta_graph, topological_order, validate_kb
from .rules import Rule

LEVELS = ("LR", "SR", "HR")


class MissingInputError(KeyError):
    def __init__(self, missing: Sequence[str], required: Sequence[str] = ()):
        self.missing = list(missing)
        self.required = list(required)
        msg = f"missing input variable(s): {', '.join(self.missing)}"
        if self.required:
            msg += f" (required: {', '.join(self.required)})"
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class RiskAssessment:
    score: float
    level: str
    activations: dict[str, dict[str, float]]
    rule_activations: dict[str, float]
    outputs: dict[str, float | None]
    fired: tuple[str, ...]
    no_fire: bool = False
    clamped: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "level": self.level,
            "no_fire": self.no_fire,
            "fired": list(self.fired),
            "activations": self.activations,
            "rule_activations": self.rule_activations,
            "outputs": self.outputs,
            "clamped_inputs": list(self.clamped),
        }


def classify(score: float, thresholds: tuple[float, float]) -> str:
    t1, t2 = thresholds
    if score < t1:
        return "LR"
    if score < t2:
        return "SR"
    return "HR"


def evaluate_antecedent(rule: Rule, fuzzified: Mapping[str, Mapping[str, float]]) -> float:
    """Left-to-right fold of the antecedent with min (AND) / max (OR)."""

    def degree(atom):
        try:
            terms = fuzzified[atom.variable]
        except KeyError:
            raise MissingInputError([atom.variable]) from None
        try:
            return terms[atom.term]
        except KeyError:
            raise KeyError(f"no degree for {atom.variable} IS {atom.term}") from None

    acc = degree(rule.atoms[0])
    for conn, atom in zip(rule.connectives, rule.atoms[1:]):
        d = degree(atom)
        acc = and_degree(acc, d) if conn == "AND" else or_degree(acc, d)
    return acc


def _check_order(kb: KnowledgeBase, order: Sequence[str]) -> None:
    graph = meta_graph(kb)
    if sorted(order) != sorted(graph):
        raise ValueError("order must list every output variable exactly once")
    pos = {n: i for i, n in enumerate(order)}
    for src, succs in graph.items():
        for dst in succs:
            if pos[src] >= pos[dst]:
                raise ValueError(f"order places {dst!r} before its dependency {src!r}")


def infer(
    kb: KnowledgeBase,
    inputs: Mapping[str, float],
    order: Sequence[str] | None = None,
) -> RiskAssessment:
    """Run the Mamdani pipeline and classify the risk variable's centroid.

    ``order`` optionally fixes the evaluation order of output variables; it
    must be a topological order of the meta-rule graph.
    """
    diags = validate_kb(kb)
    if diags:
        raise KnowledgeBaseError(diags)
    missing = [n for n in kb.input_names if n not in inputs]
    if missing:
        raise MissingInputError(missing, kb.input_names)

    degrees: dict[str, dict[str, float]] = {}
    clamped = []
    for var in kb.inputs:
        f = fuzzify(var, float(inputs[var.name]))
        degrees[var.name] = f.as_dict()
        if f.clamped:
            clamped.append(var.name)

    if order is None:
        order = topological_order(meta_graph(kb))
    else:
        _check_order(kb, order)

    by_output: dict[str, list[Rule]] = {name: [] for name in kb.output_names}
    for r in kb.rules:
        by_output[r.consequent.variable].append(r)

    rule_act: dict[str, float] = {}
    activations: dict[str, dict[str, float]] = {}
    outputs: dict[str, float | None] = {}
    aggregates: dict[str, DiscreteFuzzySet] = {}
    for name in order:
        var = kb.variable(name)
        term_act = {label: 0.0 for label in var.labels}
        xs = var.grid(kb.grid)
        agg = DiscreteFuzzySet(xs, np.zeros_like(xs))
        for r in by_output[name]:
            act = evaluate_antecedent(r, degrees)
            rule_act[r.id] = act
            label = r.consequent.term
            term_act[label] = max(term_act[label], act)
            if act > 0.0:
                agg = agg.union(clip(var.term(label), act, var.universe, kb.grid))
        # meta-rules see an output term's activation as its degree
        degrees[name] = term_act
        activations[name] = term_act
        aggregates[name] = agg
        outputs[name] = defuzzify_centroid(agg) if agg.height() > 0 else None

    score = outputs[kb.risk_variable]
    no_fire = score is None
    if no_fire:
        # midpoint of the SR band keeps level == classify(score)
        score = (kb.thresholds[0] + kb.thresholds[1]) / 2
    return RiskAssessment(
        score=score,
        level=classify(score, kb.thresholds),
        activations=activations,
        rule_activations={r.id: rule_act[r.id] for r in kb.rules},
        outputs=outputs,
        fired=tuple(r.id for r in kb.rules if rule_act[r.id] > 0.0),
        no_fire=no_fire,
        clamped=tuple(clamped),
    )
