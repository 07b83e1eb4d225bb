"""Count maps |>X x Y -> X on the chains 0 and 0 < 1 with stages of size <= 2.

Plain itertools, no package code: an independent check on the exhaustive
enumeration behind the uniqueness sweep.
"""

import argparse
import itertools


def one_stage(max_size: int) -> int:
    # |>X is terminal, so a map is any function Y(0) -> X(0)
    return sum(x ** y for x in range(max_size + 1) for y in range(max_size + 1))


def two_stage(max_size: int) -> tuple[int, int]:
    objs = [
        (a, b, r)
        for a in range(max_size + 1)
        for b in range(max_size + 1)
        for r in itertools.product(range(a), repeat=b)
    ]
    total = 0
    for a, b, r in objs:
        # |>X has stages 1 and X(0); its restriction is the unique map to the point
        for ya, yb, yr in objs:
            stage0 = [(0, j) for j in range(ya)]
            stage1 = [(i, j) for i in range(a) for j in range(yb)]
            for f0 in itertools.product(range(a), repeat=len(stage0)):
                low = dict(zip(stage0, f0))
                for f1 in itertools.product(range(b), repeat=len(stage1)):
                    if all(r[v] == low[(0, yr[j])] for (_, j), v in zip(stage1, f1)):
                        total += 1
    return total, len(objs)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-size", type=int, default=2)
    args = p.parse_args()
    n0 = one_stage(args.max_size)
    n1, objs = two_stage(args.max_size)
    print(f"N=0: {n0} maps")
    print(f"N=1: {n1} maps over {objs} presheaves")
    print(f"total: {n0 + n1}")


if __name__ == "__main__":
    main()
