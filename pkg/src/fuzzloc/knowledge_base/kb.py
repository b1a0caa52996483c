from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..fuzzy_core import DEFAULT_GRID, LinguisticVariable, load_variables
from .rules import Rule, load_rules

DEFAULT_THRESHOLDS = (33.0, 66.0)


class KnowledgeBaseError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Diagnostic:
    rule_id: str
    reason: str

    def __str__(self):
        return f"{self.rule_id or '<kb>'}: {self.reason}"


@dataclass(frozen=True)
class KnowledgeBase:
    """Input/output variables plus rules.

    A rule whose antecedent mentions an output variable is a meta-rule; the
    ``kind`` of every rule is recomputed here so callers never set it.
    """

    inputs: tuple[LinguisticVariable, ...]
    outputs: tuple[LinguisticVariable, ...]
    rules: tuple[Rule, ...]
    risk_variable: str = ""
    thresholds: tuple[float, float] = DEFAULT_THRESHOLDS
    grid: int = DEFAULT_GRID
    _by_name: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        out_names = {v.name for v in self.outputs}
        rules = []
        for i, r in enumerate(self.rules):
            kind = "meta" if any(a.variable in out_names for a in r.atoms) else "ground"
            rules.append(replace(r, id=r.id or f"R{i + 1}", kind=kind))
        object.__setattr__(self, "rules", tuple(rules))
        object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))
        if not self.risk_variable and self.outputs:
            object.__setattr__(self, "risk_variable", self.outputs[0].name)
        by_name = {}
        for v in self.inputs + self.outputs:
            by_name.setdefault(v.name, v)
        object.__setattr__(self, "_by_name", by_name)

    def variable(self, name: str) -> LinguisticVariable:
        return self._by_name[name]

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.inputs)

    @property
    def output_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.outputs)

    def with_rules(self, rules) -> KnowledgeBase:
        return replace(self, rules=tuple(rules))


def meta_graph(kb: KnowledgeBase) -> dict[str, set[str]]:
    """Edges ``atom output variable -> consequent variable`` from meta-rules."""
    outs = set(kb.output_names)
    graph: dict[str, set[str]] = {name: set() for name in kb.output_names}
    for r in kb.rules:
        for a in r.atoms:
            if a.variable in outs and r.consequent.variable in outs:
                graph[a.variable].add(r.consequent.variable)
    return graph


def topological_order(graph: dict[str, set[str]]) -> list[str] | None:
    """Kahn's algorithm, smallest name first; None if the graph has a cycle."""
    indeg = {n: 0 for n in graph}
    for succs in graph.values():
        for s in succs:
            indeg[s] += 1
    ready = sorted(n for n, d in indeg.items() if d == 0)
    order = []
    while ready:
        n = ready.pop(0)
        order.append(n)
        for s in sorted(graph[n]):
            indeg[s] -= 1
            if indeg[s] == 0:
                ready.append(s)
                ready.sort()
    return order if len(order) == len(graph) else None


def validate_kb(kb: KnowledgeBase) -> list[Diagnostic]:
    """Empty list means the knowledge base is usable for inference."""
    diags = []
    in_names = set(kb.input_names)
    out_names = set(kb.output_names)
    if not kb.outputs:
        diags.append(Diagnostic("", "no output variable declared"))
    for name in sorted(in_names & out_names):
        diags.append(Diagnostic("", f"variable {name!r} declared as both input and output"))
    names = [v.name for v in kb.inputs + kb.outputs]
    for name in sorted({n for n in names if names.count(n) > 1} - (in_names & out_names)):
        diags.append(Diagnostic("", f"variable {name!r} declared twice"))
    if kb.outputs and kb.risk_variable not in out_names:
        diags.append(Diagnostic("", f"risk variable {kb.risk_variable!r} is not an output variable"))
    t1, t2 = kb.thresholds
    if not t1 < t2:
        diags.append(Diagnostic("", f"thresholds need t1 < t2, got {kb.thresholds}"))
    if kb.grid < 2:
        diags.append(Diagnostic("", "grid needs at least 2 points"))

    seen_ids = set()
    for r in kb.rules:
        if r.id in seen_ids:
            diags.append(Diagnostic(r.id, "duplicate rule id"))
        seen_ids.add(r.id)
        for a in r.atoms:
            diags.extend(_check_atom(kb, r, a))
        c = r.consequent
        if c.variable not in in_names | out_names:
            diags.append(Diagnostic(r.id, f"unknown variable {c.variable!r}"))
        elif c.variable not in out_names:
            diags.append(Diagnostic(r.id, f"consequent {c.variable!r} is not an output variable"))
        else:
            diags.extend(_check_atom(kb, r, c, check_var=False))

    graph = meta_graph(kb)
    if topological_order(graph) is None:
        cyclic = sorted(_cycle_members(graph))
        diags.append(Diagnostic("", f"cycle among meta-rules over {cyclic}"))
    return diags


def _check_atom(kb, rule, atom, check_var=True):
    try:
        var = kb.variable(atom.variable)
    except KeyError:
        if check_var:
            return [Diagnostic(rule.id, f"unknown variable {atom.variable!r}")]
        return []
    if atom.term not in var.labels:
        return [
            Diagnostic(
                rule.id,
                f"unknown term {atom.term!r} for variable {atom.variable!r} "
                f"(available: {', '.join(var.labels)})",
            )
        ]
    return []


def _cycle_members(graph):
    # nodes that survive repeated removal of sources and sinks
    g = {n: set(s) for n, s in graph.items()}
    changed = True
    while changed:
        changed = False
        preds = {n: set() for n in g}
        for n, succs in g.items():
            for s in succs:
                preds[s].add(n)
        for n in list(g):
            if not g[n] or not preds[n]:
                del g[n]
                for succs in g.values():
                    succs.discard(n)
                changed = True
    return set(g)


def load_kb(manifest_path: str | Path) -> KnowledgeBase:
    """Load a KB manifest.

    Manifest JSON::

        {"inputs": ["vars/in.json"], "outputs": ["vars/out.json"],
         "rules": ["rules.txt"], "risk_variable": "Schedule_Risk",
         "thresholds": [33, 66], "grid": 101}

    Paths are relative to the manifest.
    """
    manifest_path = Path(manifest_path)
    doc = json.loads(manifest_path.read_text(encoding="utf-8"))
    base = manifest_path.parent

    def variables(key):
        out = []
        for p in doc.get(key, []):
            out.extend(load_variables(base / p))
        return out

    rules = []
    for i, p in enumerate(doc.get("rules", [])):
        prefix = "R" if i == 0 else f"F{i + 1}R"
        rules.extend(load_rules(base / p, prefix))
    return KnowledgeBase(
        inputs=tuple(variables("inputs")),
        outputs=tuple(variables("outputs")),
        rules=tuple(rules),
        risk_variable=doc.get("risk_variable", ""),
        thresholds=tuple(doc.get("thresholds", DEFAULT_THRESHOLDS)),
        grid=int(doc.get("grid", DEFAULT_GRID)),
    )
