"""Random EUF sweep: realizability rate, pass activity and proof shrinkage.

    python scripts/random_sweep.py --count 300 --controls 2 3
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
from dataclasses import dataclass, field

from multinterp.generators import random_euf
from multinterp.synthesis import Unrealizable, synthesize


@dataclass
class SweepConfig:
    count: int = 200
    seed: int = 0
    controls: list[int] = field(default_factory=lambda: [2, 3])
    max_atoms: int = 12


@dataclass
class SweepStats:
    realizable: int = 0
    unrealizable: int = 0
    unverified: int = 0
    cleaned: int = 0
    split: int = 0
    shrink: list[float] = field(default_factory=list)

    def summary(self) -> str:
        ratio = statistics.median(self.shrink) if self.shrink else float("nan")
        return (f"realizable={self.realizable} unrealizable={self.unrealizable} "
                f"unverified={self.unverified} cleaned={self.cleaned} split={self.split} "
                f"median_pruned_over_proof={ratio:.3f}")


def sweep(cfg: SweepConfig) -> SweepStats:
    st = SweepStats()
    for k in range(cfg.count):
        rng = random.Random(cfg.seed + k)
        p = random_euf(rng, rng.choice(cfg.controls), cfg.max_atoms)
        try:
            res = synthesize(p)
        except Unrealizable:
            st.unrealizable += 1
            continue
        st.realizable += 1
        st.unverified += not res.verified
        st.cleaned += res.report["leaves_to_clean"] > 0
        st.split += res.report["leaves_to_split"] > 0
        st.shrink.append(res.report["pruned_size"] / res.report["proof_size"])
    return st


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=SweepConfig.count)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    p.add_argument("--controls", nargs="+", type=int, default=[2, 3])
    p.add_argument("--max-atoms", type=int, default=SweepConfig.max_atoms)
    a = p.parse_args(argv)
    st = sweep(SweepConfig(a.count, a.seed, a.controls, a.max_atoms))
    print(st.summary())
    return 1 if st.unverified else 0


if __name__ == "__main__":
    sys.exit(main())
