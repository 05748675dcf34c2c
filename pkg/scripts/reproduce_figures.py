"""Write the root-coordinate CSVs for both figure presets into one directory."""
import argparse
import sys

from linedelta.cli import main


def run(out: str, full: bool) -> int:
    presets = ["fig12_small"] + (["fig12_full"] if full else [])
    for preset in presets:
        code = main(["figures", preset, "--out", f"{out}/{preset}"])
        if code:
            return code
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--skip-full", action="store_true", help="skip the degree-44 extended-precision preset")
    args = ap.parse_args()
    sys.exit(run(args.out, not args.skip_full))
