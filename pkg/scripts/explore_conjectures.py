"""Run every exploratory experiment once and print a one-line summary of each."""
import argparse
import json

from linedelta import explore as X


def summarize(ev) -> str:
    extra = ""
    if "classification" in ev.details:
        extra = f", classification {ev.details['classification']}"
    if "monotone_in_h" in ev.details:
        extra = f", widths monotone in h for {ev.details['monotone_in_h']} samples"
    return f"{ev.experiment}: {ev.consistent} consistent, {ev.violating} violating{extra}"


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="dump full evidence instead of summaries")
    args = ap.parse_args()
    runs = [X.stability(args.trials, seed=args.seed),
            X.generic_simplicity(args.trials, seed=args.seed),
            X.strip_decrease(args.trials, seed=args.seed)]
    runs += [X.geometric_sum_si(n, theta) for n in (4, 6, 9) for theta in (0.0, 0.7)]
    for ev in runs:
        print(json.dumps(ev.to_json(), sort_keys=True) if args.json else summarize(ev))
