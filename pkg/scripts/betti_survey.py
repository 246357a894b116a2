"""Betti numbers of the built-in algebras, exact over the rationals."""
import argparse

from carnot.builtins import builtin, builtin_names
from carnot.cohomology import betti_numbers
from carnot.errors import BudgetError


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", help="built-in names such as jet:2,2 (default: all)")
    args = parser.parse_args()
    for name in args.names or builtin_names():
        alg = builtin(name)
        try:
            b = betti_numbers(alg)
        except BudgetError as exc:
            print(f"{name:14s} skipped: {exc}")
            continue
        euler = sum((-1) ** i * x for i, x in enumerate(b))
        print(f"{name:14s} dim {alg.dim:2d}  betti {b}  euler {euler}")


if __name__ == "__main__":
    main()
