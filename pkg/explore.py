"""Print a saved JSON report as tables.

Usage:
    python explore.py                          # Overview + estimates
    python explore.py results/report.json --fit
    python explore.py --params cf              # Parameters and diagnostics of one estimator
    python explore.py --mte                    # MTE curve (every 10th grid point)
"""

import argparse
import json
import sys
from pathlib import Path

DEFAULT_REPORT = Path("results") / "report.json"


def load_report(path: str | Path) -> dict:
    path = Path(path)
    payload = json.loads(path.read_text(encoding="utf-8"))
    if payload.get("schema_version") != 1:
        raise ValueError(f"{path}: unsupported schema_version {payload.get('schema_version')!r}")
    return payload


def print_header(title: str):
    print(f"\n{'=' * 70}")
    print(title)
    print("=" * 70)


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def show_overview(report: dict):
    print_header("REPORT OVERVIEW")
    source = report["source"]
    print(f"\n  Source:      {source.get('input') or source.get('dgp')}")
    print(f"  SHA-256:     {source['sha256']}")
    if "variant" in source:
        print(f"  DGP variant: {source['variant']} (seed {source['seed']})")
    print(f"  n:           {report['n']}")
    print(f"  K:           {report['k_max']}  (levels {report['z_levels']})")
    print(f"  Link:        {report['config']['link']}")


def show_estimates(report: dict):
    print_header("ESTIMATES")
    print(f"\n{'Estimator':<20} {'Estimate':<16} {'Notes'}")
    print("-" * 70)
    for name, entry in report["estimators"].items():
        if "error" in entry:
            err = entry["error"]
            print(f"{name:<20} {'-':<16} {err['type']}: {err['message']}")
            continue
        estimate = entry["estimate"]
        notes = "; ".join(entry["diagnostics"].get("warnings", []))
        if isinstance(estimate, dict):
            for key, value in estimate.items():
                print(f"{name + '[' + key + ']':<20} {_fmt(value):<16} {notes}")
        else:
            print(f"{name:<20} {_fmt(estimate):<16} {notes}")


def show_params(report: dict, name: str):
    entry = report["estimators"].get(name)
    if entry is None:
        print(f"Unknown estimator: {name}. Available: {list(report['estimators'].keys())}")
        return
    print_header(f"{name.upper()}")
    if "error" in entry:
        print(f"\n  {entry['error']['type']}: {entry['error']['message']}")
        return
    for section in ("parameters", "diagnostics"):
        print(f"\n{section.capitalize()}:")
        for key, value in entry[section].items():
            if isinstance(value, list) and len(value) > 8:
                value = f"[{len(value)} values]"
            elif isinstance(value, list):
                value = ", ".join(_fmt(v) for v in value)
            print(f"  {key:<16} {_fmt(value)}")


def show_fit(report: dict):
    print_header("FIT ASSESSMENT (IV vs model)")
    entry = report["estimators"].get("fit")
    if entry is None or "error" in entry:
        print("\n  No fit assessment in this report (run with --estimators fit)")
        return
    diag = entry["diagnostics"]
    print(f"\nModel: {diag['model']}")
    print(f"\n{'Subgroup':<12} {'IV':<14} {'Model':<14} {'Difference'}")
    print("-" * 60)
    for row in entry["parameters"]["rows"]:
        print(f"{row['subgroup']:<12} {_fmt(row['iv']):<14} {_fmt(row['model']):<14} {_fmt(row['difference'])}")
    if diag.get("wald") is not None:
        print(f"\nWald = {_fmt(diag['wald'])} on {diag['df']} df, p = {_fmt(diag['p_value'])}")


def show_mte(report: dict, step: int = 10):
    print_header("MTE CURVE")
    entry = report["estimators"].get("mte")
    if entry is None or "error" in entry:
        print("\n  No MTE curve in this report (run with --estimators mte)")
        return
    p = entry["parameters"]
    print(f"\n{'u':<8} {'m0(u)':<14} {'m1(u)':<14} {'MTE(u)'}")
    print("-" * 50)
    for i in range(0, len(p["u"]), step):
        print(f"{p['u'][i]:<8.3f} {_fmt(p['m0'][i]):<14} {_fmt(p['m1'][i]):<14} {_fmt(p['mte'][i])}")


def main(argv: list[str] | None = None):
    parser = argparse.ArgumentParser(description="Explore a saved estimator report")
    parser.add_argument("report", nargs="?", default=str(DEFAULT_REPORT), help="Path to report.json")
    parser.add_argument("--fit", action="store_true", help="Show the fit assessment table")
    parser.add_argument("--mte", action="store_true", help="Show the MTE curve")
    parser.add_argument("--params", metavar="NAME", help="Show parameters and diagnostics of one estimator")
    args = parser.parse_args(argv)

    try:
        report = load_report(args.report)
    except (OSError, ValueError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        sys.exit(1)

    if not any([args.fit, args.mte, args.params]):
        show_overview(report)
        show_estimates(report)
        print("\nRun with --help for specific views (--fit, --mte, --params NAME)")
    else:
        if args.params:
            show_params(report, args.params)
        if args.fit:
            show_fit(report)
        if args.mte:
            show_mte(report)


if __name__ == "__main__":
    main()
