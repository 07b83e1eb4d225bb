"""Observed Banach iteration counts against the a priori bound, per contraction factor."""

import argparse
from collections import Counter
from fractions import Fraction

from guarded.axioms import case_rng
from guarded.cms import CmsModel, banach_iterate
from guarded.core import Later, Prod


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--cases", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rates", default="1/2,1/3,2/3,9/10")
    args = p.parse_args()

    print(f"{'r':>6} {'cases':>6} {'max steps':>9} {'max bound':>9} {'slack min':>9}  steps histogram")
    for text in args.rates.split(","):
        r = Fraction(text)
        m = CmsModel(r)
        steps, slack, bounds = Counter(), [], []
        for i in range(args.cases):
            rng = case_rng(args.seed, f"banach-table-{r}", i)
            x, y = m.sample_object(rng), m.sample_object(rng)
            f = m.sample_hom(Prod(Later(x), y), x, rng)
            start = tuple(rng.randrange(m.size(x)) for _ in range(m.size(y)))
            run = banach_iterate(m, f, start)
            steps[run.steps] += 1
            bounds.append(run.bound)
            slack.append(run.bound - run.steps)
        hist = " ".join(f"{k}:{v}" for k, v in sorted(steps.items()))
        print(f"{str(r):>6} {args.cases:>6} {max(steps):>9} {max(bounds):>9} {min(slack):>9}  {hist}")


if __name__ == "__main__":
    main()
