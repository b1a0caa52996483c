"""Regenerate the shipped demo network, scenarios, subscriber store and catalog.

    python scripts/make_demo_data.py [--out src/fuzzloc/data]
"""
import argparse
import json
from pathlib import Path

from fuzzloc.fuzzy_core import FuzzySet, LinguisticVariable, Trapezoidal
from fuzzloc.fuzzy_query import FuzzificationCatalog, SubscriberStore, fuzzify_column
from fuzzloc.location_sim import grid_config

# Hand-planned walk over the 4x4 grid (cells every 2 km, LAC boundaries at
# x = 3 and y = 3). Comment = nearest cell and whether the LAC changes.
SCRIPTED_WALK = [
    (1.0, 0.0),  # (0,0) lac 100, same
    (2.2, 0.5),  # (2,0) lac 100, same
    (4.1, 0.2),  # (4,0) lac 101, cross 1
    (5.5, 0.6),  # (6,0) lac 101, same
    (5.8, 3.9),  # (6,4) lac 103, cross 2
    (4.2, 5.1),  # (4,6) lac 103, same
    (2.1, 5.8),  # (2,6) lac 102, cross 3
    (0.4, 4.2),  # (0,4) lac 102, same
    (0.6, 2.3),  # (0,2) lac 100, cross 4
    (3.8, 2.4),  # (4,2) lac 101, cross 5
]
SCRIPTED_WALK_CROSSINGS = 5

SUBSCRIBERS = [
    ("Ravi Kumar", "356938035643809", "8991101200003204510", "100", "9848012345", "1250"),
    ("Anita Rao", "490154203237518", "8991101200003204511", "100", "9848023456", "3200"),
    ("Suresh Babu", "356938035643810", "8991101200003204512", "101", "9848034567", "4800"),
    ("Lakshmi Devi", "352099001761481", "8991101200003204513", "101", "9848045678", "2999"),
    ("Mohan Reddy", "356938035643811", "8991101200003204514", "102", "9848056789", "3000"),
    ("Priya Sharma", "490154203237519", "8991101200003204515", "102", "9848067890", "7600"),
    ("Kiran Naidu", "352099001761482", "8991101200003204516", "103", "9848078901", "540"),
    ("Farah Khan", "356938035643812", "8991101200003204517", "103", "9848089012", "3500"),
    ("Venkat Rao", "490154203237520", "8991101200003204518", "100", "9848090123", "9100"),
    ("Divya Menon", "352099001761483", "8991101200003204519", "101", "9848001234", "2100"),
]


def bill_payment_variable() -> LinguisticVariable:
    # HIGH crosses 0.5 at 3000, the "more than 3000" pivot of the reference query
    return LinguisticVariable(
        "bill_payment",
        (0, 10000),
        (
            FuzzySet("LOW", Trapezoidal(0, 0, 2000, 4000)),
            FuzzySet("HIGH", Trapezoidal(2000, 4000, 10000, 10000)),
        ),
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/fuzzloc/data"))
    args = ap.parse_args()
    out = Path(args.out)

    (out / "network").mkdir(parents=True, exist_ok=True)
    (out / "network/demo_grid.json").write_text(json.dumps(grid_config(), indent=2) + "\n")

    scenarios = {
        "scripted_walk.json": {
            "subscribers": [{"id": "sub-1", "x": 0.0, "y": 0.0}],
            "events": [{"type": "move", "subscriber": "sub-1", "x": x, "y": y} for x, y in SCRIPTED_WALK],
            "expected_lac_crossings": SCRIPTED_WALK_CROSSINGS,
        },
        "stationary.json": {
            "subscribers": [{"id": "sub-1", "x": 2.0, "y": 2.0}],
            "events": [{"type": "move", "subscriber": "sub-1", "x": 2.0, "y": 2.0}] * 100,
        },
        "saturated_drop.json": {
            "subscribers": [{"id": "sub-1", "x": 0.0, "y": 0.0}],
            "events": [
                {"type": "move", "subscriber": "sub-1", "x": 200.0 + 5.0 * i, "y": 200.0}
                for i in range(20)
            ],
        },
        "random_walk.json": {
            "subscribers": [f"sub-{i}" for i in range(1, 9)],
            "random_walk": {"seed": 2024, "ticks": 10000, "step": 0.5, "p_call": 0.2, "margin": 1.0},
        },
    }
    (out / "scenarios").mkdir(exist_ok=True)
    for name, doc in scenarios.items():
        (out / "scenarios" / name).write_text(json.dumps(doc, indent=2) + "\n")

    (out / "store").mkdir(exist_ok=True)
    header = "subscriber_name,imei,sim,la,mobile,bill_payment\n"
    csv_text = header + "".join(",".join(r) + "\n" for r in SUBSCRIBERS)
    (out / "store/subscribers.csv").write_text(csv_text)
    store = SubscriberStore.from_csv_text(csv_text)
    catalog = FuzzificationCatalog()
    fuzzify_column(store, catalog, "bill_payment", bill_payment_variable())
    (out / "store/catalog.json").write_text(catalog.to_json() + "\n")
    (out / "store/bill_payment.json").write_text(
        json.dumps(bill_payment_variable().to_dict(), indent=2) + "\n"
    )


if __name__ == "__main__":
    main()
