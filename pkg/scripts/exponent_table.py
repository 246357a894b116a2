"""Print the certified filling exponents of J^m(R^k) over a grid of (m, k)."""
import argparse

from carnot.filling_exponents import certify_jet_group


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-m", type=int, default=3)
    parser.add_argument("--max-k", type=int, default=3)
    args = parser.parse_args()
    print("| m | k | n | lower | upper | sharp |")
    print("|---|---|---|---|---|---|")
    for m in range(1, args.max_m + 1):
        for k in range(1, args.max_k + 1):
            for c in certify_jet_group(m, k):
                lower = c.lower.exponent if c.lower else "-"
                upper = c.upper.exponent if c.upper else "-"
                print(f"| {m} | {k} | {c.n} | {lower} | {upper} | {'yes' if c.sharp else 'no'} |")


if __name__ == "__main__":
    main()
