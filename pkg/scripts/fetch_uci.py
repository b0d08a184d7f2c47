#!/usr/bin/env python3
"""Fetch the UCI benchmark tables used by the experiment suite.

Downloads four categorical datasets from the UCI Machine Learning Repository
and rewrites them as header-first CSV files under ``data/uci/``, decision
column last, which is the layout ``hypotree.load_table`` expects:

* ``cars.csv``          — Car Evaluation, 1728 rows, 6 attributes
* ``nursery.csv``       — Nursery, 12960 rows, 8 attributes
* ``hayes-roth.csv``    — Hayes-Roth (training file), 132 rows; the leading
                          per-instance ``name`` column is dropped, leaving 4
                          attributes (duplicate rows are merged at load time)
* ``soybean-small.csv`` — Soybean (small), 47 rows, 35 attributes

Licensing keeps these files out of the repository; run this script once in
an environment with access to ``archive.ics.uci.edu``.  Tests and experiment
commands that need the files skip or fail with a clear data error when they
are missing.
"""

from __future__ import annotations

import csv
import io
import sys
import urllib.request
from pathlib import Path

BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases"

DATASETS = {
    "cars.csv": (
        f"{BASE}/car/car.data",
        ("buying", "maint", "doors", "persons", "lug_boot", "safety", "decision"),
        None,
        1728,
    ),
    "nursery.csv": (
        f"{BASE}/nursery/nursery.data",
        ("parents", "has_nurs", "form", "children", "housing",
         "finance", "social", "health", "decision"),
        None,
        12960,
    ),
    "hayes-roth.csv": (
        f"{BASE}/hayes-roth/hayes-roth.data",
        ("hobby", "age", "educational_level", "marital_status", "decision"),
        0,  # drop the per-instance name column
        132,
    ),
    "soybean-small.csv": (
        f"{BASE}/soybean/soybean-small.data",
        tuple(f"a{i}" for i in range(1, 36)) + ("decision",),
        None,
        47,
    ),
}


def fetch(filename: str, out_dir: Path) -> None:
    url, header, drop, expected_rows = DATASETS[filename]
    print(f"fetching {url} ...")
    with urllib.request.urlopen(url) as response:
        text = response.read().decode("utf-8")
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if drop is not None:
        rows = [row[:drop] + row[drop + 1:] for row in rows]
    if len(rows) != expected_rows:
        raise SystemExit(
            f"{filename}: expected {expected_rows} data rows, got {len(rows)}"
        )
    widths = {len(row) for row in rows}
    if widths != {len(header)}:
        raise SystemExit(f"{filename}: ragged rows, widths {sorted(widths)}")
    target = out_dir / filename
    with target.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {target} ({len(rows)} rows)")


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "data" / "uci"
    out_dir.mkdir(parents=True, exist_ok=True)
    names = sys.argv[1:] or sorted(DATASETS)
    for name in names:
        if name not in DATASETS:
            raise SystemExit(f"unknown dataset {name!r}; options: {sorted(DATASETS)}")
        fetch(name, out_dir)


if __name__ == "__main__":
    main()
