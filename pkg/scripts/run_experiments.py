"""Parameter sweeps over the shipped demo data, printed as text tables.

Each sweep is one function below; ``--json`` keeps the raw numbers.

    python scripts/run_experiments.py [--json results.json]
"""
import argparse
import json
import time

from fuzzloc.dedup import find_duplicate_groups, records_from_rows
from fuzzloc.fuzzy_query import FuzzificationCatalog, SubscriberStore, execute, parse_query
from fuzzloc.knowledge_base import load_kb
from fuzzloc.location_sim import assess_network_risk, final_window, load_network, load_scenario, run
from fuzzloc.workbench.config import shipped

HIGH_OR_SQL = (
    "SELECT subscriber_name, bill_payment FROM SUBSCRIBER_PROFILE "
    "WHERE bill_payment is HIGH or more than 3000"
)


def dedup_sweep(thresholds=(0.70, 0.75, 0.80, 0.85, 0.90, 0.95)):
    store = SubscriberStore.from_csv(shipped("dedup/dedup_corpus.csv"))
    truth = json.loads(shipped("dedup/dedup_truth.json").read_text())
    injected = {tuple(sorted(d["pair"])) for d in truth["duplicates"]}
    records = records_from_rows(store.rows)
    out = []
    for t in thresholds:
        t0 = time.perf_counter()
        groups = find_duplicate_groups(records, t)
        elapsed = time.perf_counter() - t0
        pairs = {
            (a, b) for g in groups for i, a in enumerate(g.members) for b in g.members[i + 1:]
        }
        hits = len(pairs & injected)
        out.append(
            {
                "threshold": t,
                "groups": len(groups),
                "precision": hits / len(pairs) if pairs else 1.0,
                "recall": hits / len(injected),
                "seconds": round(elapsed, 3),
            }
        )
    return out


def alpha_sweep(alphas=(0.0, 0.25, 0.5, 0.75, 1.0)):
    store = SubscriberStore.from_csv(shipped("store/subscribers.csv"))
    catalog = FuzzificationCatalog.load(shipped("store/catalog.json"))
    q = parse_query(HIGH_OR_SQL)
    return [{"alpha": a, "rows": len(execute(q, store, catalog, a))} for a in alphas]


def scenario_risk():
    network = load_network(shipped("network/demo_grid.json"))
    kb = load_kb(shipped("kb/network_risk/manifest.json"))
    out = []
    for path in sorted(shipped("scenarios").glob("*.json")):
        trace = run(load_scenario(path), network)
        window = final_window(trace)
        ra = assess_network_risk(window, kb)
        out.append({"scenario": path.stem, "ticks": len(trace.rows), **window.rates(), "score": ra.score, "level": ra.level})
    return out


def show(title, rows):
    print(f"\n{title}")
    cols = list(rows[0])
    fmt = lambda v: f"{v:.4f}" if isinstance(v, float) else str(v)
    widths = [max(len(c), *(len(fmt(r[c])) for r in rows)) for c in cols]
    print("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
    for r in rows:
        print("  ".join(fmt(r[c]).ljust(w) for c, w in zip(cols, widths)).rstrip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", help="also write all results to this file")
    args = ap.parse_args()
    results = {"dedup": dedup_sweep(), "query": alpha_sweep(), "simulate": scenario_risk()}
    show("dedup threshold sweep", results["dedup"])
    show("query alpha sweep", results["query"])
    show("scenario risk", results["simulate"])
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()
