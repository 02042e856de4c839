"""cfequiv - LATE estimators and their numerical equivalences.

Usage:
    python main.py run [flags]       - Run estimators on a CSV or DGP draw (see report.py --help)
    python main.py simulate SPEC OUT - Draw a sample from a DGP spec and write it as CSV
    python main.py explore [REPORT]  - Print a saved JSON report as tables
"""

import sys


def simulate_main(argv: list[str]) -> int:
    import argparse

    from dgps import DgpSpec, generate
    from errors import CfEquivError
    from report import write_csv

    parser = argparse.ArgumentParser(prog="main.py simulate", description="Write a DGP draw as CSV")
    parser.add_argument("spec", help="DGP spec file (KEY=value)")
    parser.add_argument("out", help="Output CSV path")
    parser.add_argument("--seed", type=int, default=0, help="Unsigned 64-bit seed (default: 0)")
    parser.add_argument("--n", type=int, help="Sample size (default: N from the DGP spec file)")
    args = parser.parse_args(argv)

    try:
        sample = generate(DgpSpec.load(args.spec), n=args.n, seed=args.seed)
        path = write_csv(sample, args.out)
    except (CfEquivError, OSError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1
    print(f"Wrote {sample.n} observations to {path}")
    return 0


def main():
    if len(sys.argv) < 2:
        print(__doc__)
        return

    command = sys.argv[1].lower()

    if command == "run":
        from report import main as run_main
        sys.exit(run_main(sys.argv[2:]))

    elif command == "simulate":
        sys.exit(simulate_main(sys.argv[2:]))

    elif command == "explore":
        from explore import main as explore_main
        explore_main(sys.argv[2:])

    else:
        print(f"Unknown command: {command}")
        print(__doc__)


if __name__ == "__main__":
    main()
