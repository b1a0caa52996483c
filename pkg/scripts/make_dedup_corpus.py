"""Build the synthetic dedup corpus: 80 clean subscribers + 20 injected duplicates.

Each duplicate copies one clean record and applies exactly one corruption:
a single-character edit, a nickname for the first name, or a reformatted
phone number. Writes ``dedup_corpus.csv`` and ``dedup_truth.json``.

    python scripts/make_dedup_corpus.py [--seed 7] [--out src/fuzzloc/data/dedup]
"""
import argparse
import csv
import io
import json
import random
from pathlib import Path

from fuzzloc.dedup import SubscriberRecord, default_tables, normalize, similarity

FIRST = [
    "William", "Robert", "Elizabeth", "Richard", "James", "Margaret", "Katherine",
    "Michael", "Thomas", "Joseph", "Charles", "Daniel", "Edward", "Anthony",
    "Patricia", "Jennifer", "Susan", "Rebecca", "Benjamin", "Matthew", "Andrew",
    "Timothy", "Gregory", "Victoria", "Deborah", "Frederick", "Lawrence",
    "Raymond", "Ronald", "Kenneth", "Suresh", "Venkatesh", "Lakshmi", "Anita",
    "Priya", "Kiran", "Farah", "Divya", "Mohan", "Ravi", "Meera", "Arjun",
    "Naveen", "Sunita", "Gopal", "Harini", "Ishaan", "Pooja", "Rahul", "Sneha",
]
LAST = [
    "Kumar", "Reddy", "Sharma", "Naidu", "Menon", "Pillai", "Iyer", "Banerjee",
    "Chatterjee", "Mukherjee", "Gupta", "Agarwal", "Desai", "Patel", "Joshi",
    "Kulkarni", "Fernandes", "Dsouza", "Mathews", "Varghese", "Thompson",
    "Williams", "Anderson", "Harrison", "Mitchell", "Peterson", "Robinson",
    "Gonzalez", "Kowalski", "Nakamura", "Okonkwo", "Schneider", "Lindqvist",
    "Moreau", "Rossi", "Novak", "Horvath", "Byrne", "Fitzgerald", "Sullivan",
    "Gallagher", "Whitaker", "Blackwood", "Hargreaves", "Pemberton", "Ashworth",
    "Cunningham", "Montgomery", "Rutherford", "Wainwright",
]
COMPANY = [
    "Acme Inc", "Globex Corporation", "Initech Ltd", "Umbrella Company",
    "Stark Industries", "Wayne Enterprises", "Tata Consultancy Services",
    "Sunrise Telecom Pvt Ltd", "Deccan Traders", "Coastal Logistics LLC",
    "Blue Ridge Software", "Northwind Traders", "Contoso Ltd", "Fabrikam Inc",
    "Tailspin Toys",
]
STREET = [
    "Main", "Oak", "Park", "Lake", "Hill", "Temple", "Station", "Market",
    "Gandhi", "Nehru", "Church", "Mill", "River", "Cedar", "Maple", "Elm",
]
STREET_KIND = ["Street", "Road", "Avenue", "Lane", "Drive", "Nagar"]
COLUMNS = [
    "subscriber_name", "imei", "sim", "la", "mobile", "bill_payment",
    "email", "company", "street",
]
N_CLEAN = 80
N_DUP = 20
CLEAN_MARGIN = 0.7  # clean records must stay this far below the 0.85 threshold


def clean_record(rng, i):
    first, last = rng.choice(FIRST), rng.choice(LAST)
    mobile = "98" + "".join(str(rng.randrange(10)) for _ in range(8))
    return {
        "subscriber_name": f"{first} {last}",
        "imei": str(352099000000000 + rng.randrange(10**9)),
        "sim": str(8991101200000000000 + i),
        "la": str(rng.choice([100, 101, 102, 103])),
        "mobile": mobile,
        "bill_payment": str(rng.randrange(200, 10000)),
        "email": f"{first.lower()}.{last.lower()}@example.com",
        "company": rng.choice(COMPANY),
        "street": f"{rng.randrange(1, 400)} {rng.choice(STREET)} {rng.choice(STREET_KIND)}",
    }


def single_edit(rng, word):
    i = rng.randrange(1, len(word))
    letters = "abcdefghijklmnopqrstuvwxyz"
    op = rng.choice(["sub", "ins", "del"])
    if op == "sub":
        c = rng.choice([ch for ch in letters if ch != word[i].lower()])
        if word[i].isupper():
            c = c.upper()
        return word[:i] + c + word[i + 1:]
    if op == "ins":
        return word[:i] + rng.choice(letters) + word[i:]
    return word[:i] + word[i + 1:]


def phone_format(rng, mobile):
    a, b, c = mobile[:3], mobile[3:6], mobile[6:]
    return rng.choice([f"({a}) {b}-{c}", f"{a}-{b}-{c}", f"+1 {a} {b} {c}", f"{a}.{b}.{c}"])


def score(a, b):
    return similarity(normalize(SubscriberRecord(0, a)), normalize(SubscriberRecord(1, b))).combined


def build(seed):
    rng = random.Random(seed)
    tables = default_tables()
    clean = []
    while len(clean) < N_CLEAN:
        cand = clean_record(rng, len(clean))
        if any(score(cand, r) >= CLEAN_MARGIN for r in clean):
            continue
        clean.append(cand)

    nick_ok = [
        i for i, r in enumerate(clean)
        if tables.nickname_groups(r["subscriber_name"].split()[0].lower())
    ]
    # nickname duplicates need a first name that has nicknames
    nick_sources = rng.sample(nick_ok, 7)
    other = rng.sample([i for i in range(N_CLEAN) if i not in nick_sources], N_DUP - 7)
    plan = [(i, "nickname") for i in nick_sources]
    plan += list(zip(other, ["edit"] * 7 + ["phone"] * 6))

    dups = []
    for src, kind in plan:
        rec = dict(clean[src])
        first, last = rec["subscriber_name"].split()
        if kind == "edit":
            field = rng.choice(["first", "last", "email", "street"])
            if field == "first":
                rec["subscriber_name"] = f"{single_edit(rng, first)} {last}"
            elif field == "last":
                rec["subscriber_name"] = f"{first} {single_edit(rng, last)}"
            elif field == "email":
                local, dom = rec["email"].split("@")
                rec["email"] = f"{single_edit(rng, local)}@{dom}"
            else:
                rec["street"] = single_edit(rng, rec["street"])
        elif kind == "nickname":
            group = sorted(next(g for g in tables.nicknames if first.lower() in g) - {first.lower()})
            rec["subscriber_name"] = f"{rng.choice(group).capitalize()} {last}"
        else:
            rec["mobile"] = phone_format(rng, rec["mobile"])
        dups.append((src, kind, rec))

    # interleave: duplicates land at random positions
    rows = [(("clean", i), r) for i, r in enumerate(clean)]
    for src, kind, rec in dups:
        rows.insert(rng.randrange(len(rows) + 1), (("dup", src, kind), rec))
    pos = {}
    for row_id, (tag, _) in enumerate(rows):
        if tag[0] == "clean":
            pos[tag[1]] = row_id
    truth = []
    for row_id, (tag, _) in enumerate(rows):
        if tag[0] == "dup":
            truth.append({"pair": sorted([pos[tag[1]], row_id]), "kind": tag[2]})
    truth.sort(key=lambda t: t["pair"])
    return [r for _, r in rows], truth


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/fuzzloc/data/dedup"))
    args = ap.parse_args()
    rows, truth = build(args.seed)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    out = Path(args.out)
    (out / "dedup_corpus.csv").write_text(buf.getvalue())
    (out / "dedup_truth.json").write_text(
        json.dumps({"seed": args.seed, "threshold": 0.85, "duplicates": truth}, indent=2) + "\n"
    )
    print(f"{len(rows)} records, {len(truth)} injected duplicate pairs")


if __name__ == "__main__":
    main()
