"""``fuzzloc`` command line.

Exit codes: 0 success, 2 parse error, 3 semantic/validation error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .. import __version__
from ..dedup import (
    DEFAULT_BRUTE_FORCE_BELOW,
    find_duplicate_groups,
    merge_all,
    records_from_rows,
)
from ..fuzzy_core import load_variables
from ..fuzzy_query import (
    FuzzificationCatalog,
    PROFILE_COLUMNS,
    NonNumericColumnError,
    QuerySyntaxError,
    StoreError,
    UnknownColumnError,
    SubscriberStore,
    execute,
    explain,
    fuzzify_column,
    parse_query,
)
from ..knowledge_base import (
    RuleSyntaxError,
    format_rule,
    infer,
    load_kb,
)
from ..location_sim import (
    assess_network_risk,
    final_window,
    load_network,
    load_scenario,
    run,
)
from .config import WorkspaceConfig, shipped
from .io import atomic_write

EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC, EXIT_IO = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _config(args) -> WorkspaceConfig:
    cfg = WorkspaceConfig.from_file(args.workspace) if args.workspace else WorkspaceConfig.from_env()
    return cfg.with_defaults()


def _require(path: Path, what: str) -> Path:
    if not Path(path).is_file():
        raise CliError(f"{what} not found: {path}", EXIT_IO)
    return Path(path)


def _emit(data, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(data, indent=2, sort_keys=False))
    else:
        print(text)


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(headers)]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    return "\n".join([line(headers), line(["-" * w for w in widths])] + [line(r) for r in rows])


def _load_store(path) -> SubscriberStore:
    return SubscriberStore.from_csv(_require(path, "store"))


# -- commands -------------------------------------------------------------


def cmd_load(args, cfg):
    store = _load_store(args.store or cfg.store)
    numeric = store.numeric_columns()
    report = {
        "rows": len(store),
        "columns": list(store.columns),
        "numeric_columns": numeric,
        "extra_columns": [c for c in store.columns if c.lower() not in PROFILE_COLUMNS],
    }
    lines = [f"{len(store)} rows, {len(store.columns)} columns"]
    for c in store.columns:
        lines.append(f"  {c}: {'numeric' if c in numeric else 'text'}")
    _emit(report, args.json, "\n".join(lines))


def cmd_fuzzify(args, cfg):
    store = _load_store(args.store or cfg.store)
    catalog_path = Path(args.catalog or cfg.catalog)
    catalog = FuzzificationCatalog.load(catalog_path)
    variables = load_variables(_require(args.variable, "variable file"))
    if args.name:
        variables = [v for v in variables if v.name == args.name]
    if len(variables) != 1:
        raise CliError("variable file must hold exactly one variable (or pick one with --name)", EXIT_SEMANTIC)
    entry = fuzzify_column(store, catalog, args.column, variables[0], materialize=args.materialize)
    atomic_write(catalog_path, catalog.to_json() + "\n")
    _emit(
        entry.to_dict(),
        args.json,
        f"fuzzified {entry.table}.{entry.column} with {entry.variable.name} "
        f"({', '.join(entry.variable.labels)}) -> {catalog_path}",
    )


def cmd_query(args, cfg):
    alpha = cfg.alpha if args.alpha is None else args.alpha
    if not 0.0 <= alpha <= 1.0:
        raise CliError(f"alpha {alpha} outside [0, 1]", EXIT_SEMANTIC)
    q = parse_query(args.sql)
    store = _load_store(args.store or cfg.store)
    catalog = FuzzificationCatalog.load(_require(args.catalog or cfg.catalog, "catalog"))
    if args.explain:
        print(explain(q, catalog))
        return
    rows = execute(q, store, catalog, alpha)
    cols = list(rows[0].values) if rows else []
    text = _table(
        ["row", "degree"] + cols,
        [[str(r.row_id), f"{r.degree:.4f}"] + [r.values[c] for c in cols] for r in rows],
    )
    text += f"\n{len(rows)} row(s), alpha={alpha}"
    _emit({"alpha": alpha, "rows": [r.to_dict() for r in rows]}, args.json, text)


def _parse_inputs(pairs: list[str]) -> dict[str, float]:
    out = {}
    for p in pairs:
        name, sep, value = p.partition("=")
        if not sep or not name:
            raise CliError(f"input must look like name=value, got {p!r}", EXIT_PARSE)
        try:
            out[name] = float(value)
        except ValueError:
            raise CliError(f"input {name!r}: {value!r} is not a number", EXIT_PARSE) from None
    return out


def _kb(path, cfg):
    kb = load_kb(_require(path, "kb manifest"))
    if cfg.risk_thresholds is not None:
        kb = replace(kb, thresholds=cfg.risk_thresholds)
    return kb


def cmd_infer(args, cfg):
    kb = _kb(args.kb or cfg.kb, cfg)
    ra = infer(kb, _parse_inputs(args.input))
    lines = []
    rules = {r.id: r for r in kb.rules}
    lines.append("fired rules:" if ra.fired else "fired rules: none")
    for rid in ra.fired:
        lines.append(f"  {rid} [{ra.rule_activations[rid]:.4f}] {format_rule(rules[rid])}")
    for var, terms in ra.activations.items():
        lines.append(f"{var}: " + ", ".join(f"{t}={d:.4f}" for t, d in terms.items()))
    lines.append(f"score: {ra.score:.4f}")
    lines.append(f"level: {ra.level}" + (" (no rule fired)" if ra.no_fire else ""))
    if ra.clamped:
        lines.append(f"clamped inputs: {', '.join(ra.clamped)}")
    _emit(ra.to_dict(), args.json, "\n".join(lines))


def cmd_dedup(args, cfg):
    threshold = cfg.dedup_threshold if args.threshold is None else args.threshold
    if not 0.0 < threshold <= 1.0:
        raise CliError(f"threshold {threshold} outside (0, 1]", EXIT_SEMANTIC)
    store = _load_store(args.store or cfg.store)
    records = records_from_rows(store.rows)
    groups = find_duplicate_groups(
        records,
        threshold,
        blocking=not args.no_blocking,
        brute_force_below=args.brute_force_below,
    )
    doc = {"threshold": threshold, "records": len(records), "groups": [g.to_dict() for g in groups]}
    atomic_write(args.out, json.dumps(doc, indent=2) + "\n")
    summary = [f"{len(groups)} duplicate group(s) among {len(records)} records -> {args.out}"]
    if args.merge:
        merged, results = merge_all(records, groups)
        out_store = SubscriberStore(list(store.columns), [r.fields for r in merged], store.table)
        atomic_write(args.merge, out_store.to_csv_text())
        report = {"merged": [m.to_dict() for m in results], "records_out": len(merged)}
        report_path = args.report or str(Path(args.merge).with_suffix(".history.json"))
        atomic_write(report_path, json.dumps(report, indent=2) + "\n")
        summary.append(f"merged store ({len(merged)} records) -> {args.merge}; history -> {report_path}")
    _emit(doc, args.json, "\n".join(summary))


def cmd_simulate(args, cfg):
    network = load_network(_require(args.network or cfg.network, "network config"))
    scenario = load_scenario(_require(args.scenario or cfg.scenario, "scenario"))
    kb_path = args.kb or shipped("kb/network_risk/manifest.json")
    kb = _kb(kb_path, cfg)
    trace = run(scenario, network, seed=args.seed)
    if args.out:
        atomic_write(args.out, trace.to_csv())
    window = final_window(trace, args.window)
    ra = assess_network_risk(window, kb)
    doc = {
        "ticks": len(trace.rows),
        "totals": trace.final,
        "window": window.rates(),
        "assessment": ra.to_dict(),
    }
    text = [f"{len(trace.rows)} ticks"]
    text += [f"  {k}: {v}" for k, v in trace.final.items()]
    text.append("window: " + ", ".join(f"{k}={v:.4f}" for k, v in window.rates().items()))
    text.append(f"risk score {ra.score:.4f}, level {ra.level}" + (" (no rule fired)" if ra.no_fire else ""))
    if args.out:
        text.append(f"metrics -> {args.out}")
    _emit(doc, args.json, "\n".join(text))


# -- entry point ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuzzloc", description="Fuzzy subscriber-data and location-management workbench.")
    ap.add_argument("--version", action="version", version=f"fuzzloc {__version__}")
    ap.add_argument("--workspace", help="workspace config JSON (default: $FUZZLOC_WORKSPACE)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("load", cmd_load, "inspect a subscriber CSV")
    p.add_argument("--store")

    p = add("fuzzify", cmd_fuzzify, "bind a linguistic variable to a numeric column")
    p.add_argument("--store")
    p.add_argument("--catalog")
    p.add_argument("--column", required=True)
    p.add_argument("--variable", required=True, help="variable JSON file")
    p.add_argument("--name", help="variable name when the file holds several")
    p.add_argument("--materialize", action="store_true", help="store per-row degrees in the catalog")

    p = add("query", cmd_query, "run a fuzzy-SQL query")
    p.add_argument("sql")
    p.add_argument("--store")
    p.add_argument("--catalog")
    p.add_argument("--alpha", type=float, default=None, help="degree cut (default 0.5)")
    p.add_argument("--explain", action="store_true", help="print the evaluation plan only")

    p = add("infer", cmd_infer, "run the knowledge base on crisp inputs")
    p.add_argument("--kb", help="KB manifest (default: shipped schedule_risk)")
    p.add_argument("--input", "-i", action="append", default=[], metavar="NAME=VALUE")

    p = add("dedup", cmd_dedup, "find (and optionally merge) duplicate subscribers")
    p.add_argument("--store")
    p.add_argument("--threshold", type=float, default=None, help="default 0.85")
    p.add_argument("--out", default="groups.json")
    p.add_argument("--merge", metavar="CSV", help="write the merged store here")
    p.add_argument("--report", metavar="JSON", help="merge history (default: <merge>.history.json)")
    p.add_argument("--no-blocking", action="store_true", help="score every pair")
    p.add_argument("--brute-force-below", type=int, default=DEFAULT_BRUTE_FORCE_BELOW)

    p = add("simulate", cmd_simulate, "run the HLR/VLR simulator and assess network risk")
    p.add_argument("--network")
    p.add_argument("--scenario")
    p.add_argument("--seed", type=int, default=None, help="random-walk seed (overrides the scenario's)")
    p.add_argument("--kb", help="network-risk KB manifest (default: shipped network_risk)")
    p.add_argument("--out", help="metrics CSV")
    p.add_argument("--window", type=int, default=None, help="assess the last N ticks (default: all)")
    return ap


_PARSE_ERRORS = (QuerySyntaxError, RuleSyntaxError, json.JSONDecodeError)


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, CliError):
        return exc.code
    if isinstance(exc, (UnknownColumnError, NonNumericColumnError)):
        return EXIT_SEMANTIC
    if isinstance(exc, _PARSE_ERRORS + (StoreError,)):
        return EXIT_PARSE
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_SEMANTIC


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.fn(args, _config(args))
    except (CliError, OSError, ValueError, KeyError) as exc:
        code = exit_code(exc)
        kind = {EXIT_PARSE: "parse error: ", EXIT_IO: "I/O error: "}.get(code, "")
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"fuzzloc: {kind}{msg}", file=sys.stderr)
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
