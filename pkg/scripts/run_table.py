"""Benchmark table over the generated families.

    python scripts/run_table.py --families illu const chain --sizes 2 3 4 --csv out.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field, fields

from multinterp.generators import generate
from multinterp.solver import ResourceLimit
from multinterp.synthesis import SynthesisConfig, Unrealizable, synthesize

COLUMNS = ["name", "controls", "proof_size", "leaves_to_clean", "leaves_to_split",
           "reorder_seconds", "pruned_size", "mux_count", "witness_size", "seconds", "verified"]


@dataclass
class TableConfig:
    families: list[str] = field(default_factory=lambda: ["const", "illu", "chain"])
    sizes: list[int] = field(default_factory=lambda: [2, 3, 4, 5, 6])
    step_budget: int = 2_000_000
    simplify: bool = True
    csv: str | None = None


def run(cfg: TableConfig) -> list[dict]:
    rows = []
    synth_cfg = SynthesisConfig(step_budget=cfg.step_budget, simplify=cfg.simplify)
    for fam in cfg.families:
        for n in cfg.sizes:
            name = f"{fam}{n:02d}"
            try:
                rep = dict(synthesize(generate(fam, n), synth_cfg).report)
            except Unrealizable:
                rep = {"verified": "unrealizable"}
            except ResourceLimit:
                rep = {"verified": "budget"}
            rep["name"] = name
            rep.setdefault("controls", n)
            rows.append(rep)
            print("  ".join(f"{rep.get(c, '-')!s:>10}" for c in COLUMNS), flush=True)
    return rows


def parse_args(argv=None) -> TableConfig:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--families", nargs="+")
    p.add_argument("--sizes", nargs="+", type=int)
    p.add_argument("--step-budget", type=int)
    p.add_argument("--no-simplify", action="store_true")
    p.add_argument("--csv")
    a = p.parse_args(argv)
    cfg = TableConfig()
    for f in fields(cfg):
        v = getattr(a, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    cfg.simplify = not a.no_simplify
    return cfg


def main(argv=None) -> int:
    cfg = parse_args(argv)
    print("  ".join(f"{c[:10]:>10}" for c in COLUMNS))
    rows = run(cfg)
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, COLUMNS, extrasaction="ignore")
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
