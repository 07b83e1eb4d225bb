"""Solve the shipped two-variable example and show its prefixes and minimal graphs."""

import argparse
import json

from guarded.fixtures import STAR_EXAMPLE, read_fixture
from guarded.parser import parse_equation_file
from guarded.trees import prefix, render, solve_system, spine_leaves, unfold_system


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--depth", type=int, default=7)
    args = p.parse_args()

    _, system = parse_equation_file(read_fixture(STAR_EXAMPLE))
    sol = solve_system(system)
    for x in system.variables:
        print(f"{x}: {len(sol[x].labels)} nodes in the minimal graph")
        print("  " + json.dumps(sol[x].to_json()))
        for k in range(args.depth + 1):
            # the graph prefix must agree with plain syntactic unfolding
            same = prefix(sol[x], k) == prefix(unfold_system(system, x, k + 1), k)
            print(f"  depth {k}: {render(prefix(sol[x], k))}{'' if same else '   <- differs from unfolding'}")
        print(f"  right leaves along the spine: {' '.join(spine_leaves(sol[x], args.depth))}")


if __name__ == "__main__":
    main()
