"""Batch runner: CSV or DGP input, a configured estimator suite, JSON/CSV reports.

Usage:
    python report.py --input data.csv --estimators iv,cf:probit,telser --out results
    python report.py --dgp spec.env --seed 7 --estimators fiml,limited_info --format both

Exit codes: 0 on success, 2 when any estimator hit a validity-condition failure,
1 on I/O or configuration errors.
"""

import argparse
import hashlib
import json
import logging
import re
import sys
import warnings
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import stats as sps

from config import FORMATS, RunConfig, build_config, log_level
from dgps import DgpSpec, generate
from errors import CfEquivError, ConditionError, ConfigError, DataError, MissingInstrumentLevelError
from estimators import (
    bootstrap,
    cf_extrapolate,
    cf_fit,
    cf_fit_covariates,
    cf_late,
    combination_late2,
    defier_fit,
    defier_late,
    fiml_fit,
    iv_late,
    iv_po_means,
    iv_weights,
    lalonde_fit,
    late_x_restricted,
    limited_info_fit,
    mte_curve,
    pairwise_cf_late,
    pairwise_iv_late,
    poly_cf_fit,
    poly_cf_late,
    prop3_decompose,
    reweighted_late,
    sign_restriction_check,
    telser_late,
    weighted_iv_late,
)
from estimators.bootstrap import DEFAULT_REPLICATES
from estimators.covariates import cell_iv_late, cell_label, covariate_cells
from links import LINK_FAMILIES, get_link
from sample import Sample, cell_stats

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
REQUIRED_COLUMNS = ("y", "d", "z")
X_COLUMN = re.compile(r"x(\d+)")


# --- Ingestion ---------------------------------------------------------------

@dataclass(frozen=True)
class LoadedInput:
    sample: Sample
    source: dict
    # original instrument value for each dense code 0..K
    z_levels: tuple[float, ...] = ()


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _data_line_numbers(path: Path) -> list[int]:
    """File line number of each data row; blank lines are skipped as pandas skips them."""
    with path.open(encoding="utf-8", newline="") as handle:
        numbered = [i for i, line in enumerate(handle, start=1) if line.strip()]
    # first nonblank line is the header
    return numbered[1:]


def load_csv(path: str | Path) -> LoadedInput:
    """Read y, d, z and optional x1..xm; recode z to dense 0..K in sorted order.

    Raises DataError with the file line number of the first malformed row.
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as exc:
        raise DataError(f"{path}: empty file") from exc
    except pd.errors.ParserError as exc:
        raise DataError(f"{path}: {exc}") from exc

    frame.columns = [str(c).strip() for c in frame.columns]
    for name in REQUIRED_COLUMNS:
        if name not in frame.columns:
            raise DataError(f"missing required column: {name}")
    x_columns = sorted((c for c in frame.columns if X_COLUMN.fullmatch(c)), key=lambda c: int(c[1:]))
    if frame.empty:
        raise DataError(f"{path}: no observations")

    columns = [*REQUIRED_COLUMNS, *x_columns]
    raw = frame[columns]
    values = raw.apply(lambda col: pd.to_numeric(col.str.strip(), errors="coerce")).to_numpy(dtype=float)

    bad = ~np.isfinite(values)
    d = values[:, 1]
    bad[:, 1] |= ~np.isin(d, (0.0, 1.0))
    if bad.any():
        row, col = map(int, np.argwhere(bad)[0])
        raise DataError(f"bad value {raw.iat[row, col]!r} in column {columns[col]}",
                        line=_data_line_numbers(path)[row])

    z_raw = values[:, 2]
    levels, z = np.unique(z_raw, return_inverse=True)
    if not np.array_equal(levels, np.arange(levels.size)):
        logger.info("recoded instrument levels %s to 0..%d", levels.tolist(), levels.size - 1)

    sample = Sample.from_arrays(
        y=values[:, 0], d=d.astype(int), z=z,
        x=values[:, 3:] if x_columns else None,
    )
    source = {"input": path.as_posix(), "sha256": _sha256(path), "covariates": x_columns}
    return LoadedInput(sample=sample, source=source, z_levels=tuple(float(v) for v in levels))


def load_dgp(path: str | Path, seed: int | None) -> LoadedInput:
    path = Path(path)
    spec = DgpSpec.load(path)
    seed = 0 if seed is None else seed
    sample = generate(spec, seed=seed)
    source = {"dgp": path.as_posix(), "sha256": _sha256(path), "variant": spec.variant, "seed": seed}
    return LoadedInput(sample=sample, source=source, z_levels=tuple(float(z) for z in range(spec.k_max + 1)))


def write_csv(sample: Sample, path: str | Path) -> Path:
    """Write a sample in the ingestion schema."""
    columns = {"y": sample.y, "d": sample.d.astype(int), "z": sample.z}
    for j in range(sample.n_covariates):
        columns[f"x{j + 1}"] = sample.x[:, j]
    path = Path(path)
    pd.DataFrame(columns).to_csv(path, index=False)
    return path


# --- Estimator registry ------------------------------------------------------

@dataclass
class Outcome:
    """One estimator's contribution to the report."""
    estimate: object
    parameters: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    table: pd.DataFrame | None = None


def _by_pair(values: dict[int, float]) -> dict[str, float]:
    return {f"z={z}": v for z, v in values.items()}


def _run_iv(sample: Sample, config: RunConfig) -> Outcome:
    stats = cell_stats(sample)
    return Outcome(iv_late(stats, 0, stats.k_max), diagnostics={"pair": [0, stats.k_max]})


def _run_cf(sample: Sample, config: RunConfig, link_name: str | None = None) -> Outcome:
    link = get_link(link_name or config.link)
    fit = cf_fit(sample, link)
    return Outcome(
        cf_late(fit),
        parameters={"alpha": list(fit.alpha), "gamma": list(fit.gamma), "p0": fit.p0, "p1": fit.p1},
        diagnostics={"link": link.kind, "cond": fit.cond, "clamped": fit.clamped},
    )


def _run_telser(sample: Sample, config: RunConfig) -> Outcome:
    return Outcome(telser_late(sample))


def _run_po_means(sample: Sample, config: RunConfig) -> Outcome:
    means = iv_po_means(cell_stats(sample))
    keys = ("mu_1at", "mu_0nt", "mu_1c", "mu_0c")
    return Outcome(means.late, parameters=dict(zip(keys, means.as_tuple())))


def _run_extrapolate(sample: Sample, config: RunConfig) -> Outcome:
    fit = cf_fit(sample, get_link(config.link))
    ex = cf_extrapolate(fit)
    sign = sign_restriction_check(iv_po_means(cell_stats(sample)), ex.mu_0at, ex.mu_1nt)
    return Outcome(
        ex.ate,
        parameters={"mu_0at": ex.mu_0at, "mu_1nt": ex.mu_1nt, "ate": ex.ate},
        diagnostics={"link": config.link, "sign_treated": sign.treated, "sign_untreated": sign.untreated},
    )


def _run_mte(sample: Sample, config: RunConfig) -> Outcome:
    fit = cf_fit(sample, get_link(config.link))
    curve = mte_curve(fit, np.linspace(0.01, 0.99, config.mte_grid))
    table = pd.DataFrame({"u": curve.u, "m0": curve.m0, "m1": curve.m1, "mte": curve.mte})
    return Outcome(
        curve.extrapolated.ate,
        parameters={
            "u": curve.u, "m0": curve.m0, "m1": curve.m1, "mte": curve.mte,
            "mu_1at": curve.means.mu_1at, "mu_0nt": curve.means.mu_0nt,
            "mu_1c": curve.means.mu_1c, "mu_0c": curve.means.mu_0c,
            "mu_0at": curve.extrapolated.mu_0at, "mu_1nt": curve.extrapolated.mu_1nt,
        },
        diagnostics={"link": config.link},
        table=table,
    )


def _run_lalonde(sample: Sample, config: RunConfig) -> Outcome:
    fit = lalonde_fit(sample, get_link(config.link))
    return Outcome(
        fit.beta,
        parameters={"gamma_common": fit.gamma_common},
        diagnostics={"link": config.link, "symmetric": fit.symmetric},
    )


def _run_pairwise_iv(sample: Sample, config: RunConfig) -> Outcome:
    stats = cell_stats(sample)
    return Outcome(_by_pair({z: pairwise_iv_late(stats, z) for z in range(1, stats.k_max + 1)}))


def _run_pairwise_cf(sample: Sample, config: RunConfig) -> Outcome:
    link = get_link(config.link)
    return Outcome(
        _by_pair({z: pairwise_cf_late(sample, link, z) for z in range(1, sample.k_max + 1)}),
        diagnostics={"link": config.link},
    )


def _run_poly_cf(sample: Sample, config: RunConfig) -> Outcome:
    order = config.poly_order or sample.k_max
    fit = poly_cf_fit(sample, get_link(config.link), order)
    return Outcome(
        _by_pair({z: poly_cf_late(fit, z) for z in range(1, fit.k_max + 1)}),
        parameters={"delta0": fit.delta[0], "delta1": fit.delta[1], "p_hat": fit.p_hat},
        diagnostics={"link": config.link, "order": order, "cond": fit.cond},
    )


def _run_weighted_iv(sample: Sample, config: RunConfig) -> Outcome:
    # g(z) = z, the linear-in-Z two-stage least squares estimator
    return Outcome(
        weighted_iv_late(sample, float),
        parameters={"weights": iv_weights(sample, float)},
    )


def _run_combination(sample: Sample, config: RunConfig) -> Outcome:
    result = combination_late2(
        sample, get_link(config.link),
        bootstrap_b=config.bootstrap or DEFAULT_REPLICATES, seed=config.seed, jobs=config.jobs,
    )
    return Outcome(
        result.estimate,
        parameters={"xi": result.xi_used, "w1": result.w1, "w3": result.w3,
                    "v1": result.v1, "v2": result.v2, "v12": result.v12},
        diagnostics={"xi_clamped": result.xi_clamped, "discarded": result.discarded},
    )


def _run_covariates(sample: Sample, config: RunConfig) -> Outcome:
    fit = cf_fit_covariates(sample, get_link(config.link))
    return Outcome(
        {cell_label(key): late_x_restricted(fit, key) for key in covariate_cells(sample)},
        parameters={"alpha": list(fit.alpha), "gamma": list(fit.gamma), "tau": fit.tau},
        diagnostics={"link": config.link, "cond": fit.cond},
    )


def _run_prop3(sample: Sample, config: RunConfig) -> Outcome:
    dec = prop3_decompose(sample, get_link(config.link))
    return Outcome(
        dec.restricted_late1,
        parameters={"w": dec.w, "b1": dec.b1, "b0": dec.b0, "late1": dec.late1, "late0": dec.late0,
                    "delta_u": dec.delta_u, "delta_r": dec.delta_r},
        diagnostics={"link": config.link},
    )


def _run_reweighted(sample: Sample, config: RunConfig) -> Outcome:
    # ê(x): sample share of Z = 1 within each covariate cell
    e_hat = {}
    for key in covariate_cells(sample):
        mask = np.all(sample.x == np.array(key), axis=1) if key else np.ones(sample.n, dtype=bool)
        e_hat[key] = float(np.mean(sample.z[mask]))
    result = reweighted_late(sample, get_link(config.link), e_hat)
    return Outcome(
        result.iv,
        parameters={"iv": result.iv, "cf": result.cf,
                    "e_hat": {cell_label(key): value for key, value in e_hat.items()}},
        diagnostics={"link": config.link},
    )


def _fiml_outcome(result) -> Outcome:
    p = result.params
    return Outcome(
        result.late,
        parameters={"pi_at": p.pi_at, "pi_c": p.pi_c, "pi_nt": p.pi_nt, "mu_1at": p.mu_1at,
                    "mu_0nt": p.mu_0nt, "mu_1c": p.mu_1c, "mu_0c": p.mu_0c},
        diagnostics={"loglik": result.loglik, "interior": result.interior, "converged": result.converged,
                     "tie": result.tie, "starts": result.starts},
    )


def _run_fiml(sample: Sample, config: RunConfig) -> Outcome:
    return _fiml_outcome(fiml_fit(sample, jobs=config.jobs))


def _run_limited_info(sample: Sample, config: RunConfig) -> Outcome:
    return _fiml_outcome(limited_info_fit(sample, jobs=config.jobs))


def _run_defier(sample: Sample, config: RunConfig) -> Outcome:
    if config.eta is None:
        raise ConfigError("defier estimator needs ETA")
    fit = defier_fit(sample, get_link(config.link), config.eta)
    return Outcome(
        defier_late(fit),
        parameters={"kappa": fit.kappa, "upsilon": fit.upsilon, "eta": fit.eta,
                    "alpha": list(fit.alpha), "gamma": list(fit.gamma)},
        diagnostics={"link": config.link, "weighting": fit.weighting},
    )


def _run_fit(sample: Sample, config: RunConfig) -> Outcome:
    result = fit_assessment(
        sample, get_link(config.link), poly_order=config.poly_order,
        bootstrap_b=config.bootstrap, seed=config.seed, jobs=config.jobs,
    )
    table = pd.DataFrame({
        "subgroup": [r.subgroup for r in result.rows],
        "iv": [r.iv for r in result.rows],
        "model": [r.model for r in result.rows],
        "difference": [r.iv - r.model for r in result.rows],
    })
    return Outcome(
        None,
        parameters={"rows": table.to_dict(orient="records")},
        diagnostics={"model": result.model, "wald": result.wald, "df": result.df,
                     "p_value": result.p_value, "discarded": result.discarded},
        table=table,
    )


ESTIMATORS: dict[str, Callable[[Sample, RunConfig], Outcome]] = {
    "iv": _run_iv,
    "cf": _run_cf,
    "telser": _run_telser,
    "po_means": _run_po_means,
    "extrapolate": _run_extrapolate,
    "mte": _run_mte,
    "lalonde": _run_lalonde,
    "pairwise_iv": _run_pairwise_iv,
    "pairwise_cf": _run_pairwise_cf,
    "poly_cf": _run_poly_cf,
    "weighted_iv": _run_weighted_iv,
    "combination": _run_combination,
    "covariates": _run_covariates,
    "prop3": _run_prop3,
    "reweighted": _run_reweighted,
    "fiml": _run_fiml,
    "limited_info": _run_limited_info,
    "defier": _run_defier,
    "fit": _run_fit,
}


def available_estimators() -> list[str]:
    return [*ESTIMATORS.keys(), *(f"cf:{name}" for name in LINK_FAMILIES)]


def get_estimator(name: str) -> Callable[[Sample, RunConfig], Outcome]:
    """Look up an estimator by name; 'cf:<link>' pins the link family."""
    if name.startswith("cf:") and name[3:] in LINK_FAMILIES:
        return partial(_run_cf, link_name=name[3:])
    if name not in ESTIMATORS:
        raise ConfigError(f"Unknown estimator: {name}. Available: {available_estimators()}")
    return ESTIMATORS[name]


# --- Fit assessment ----------------------------------------------------------

@dataclass(frozen=True)
class FitRow:
    subgroup: str
    iv: float
    model: float


@dataclass(frozen=True)
class FitAssessment:
    """IV vs model-implied LATE per subgroup, plus a joint Wald test of equality."""
    model: str
    rows: list[FitRow]
    wald: float = float("nan")
    df: int = 0
    p_value: float = float("nan")
    discarded: int = 0

    @property
    def differences(self) -> np.ndarray:
        return np.array([r.iv - r.model for r in self.rows])


def _fit_rows(sample: Sample, link, poly_order: int | None) -> tuple[str, list[FitRow]]:
    if sample.n_covariates:
        fit = cf_fit_covariates(sample, link)
        rows = [
            FitRow(cell_label(key), cell_iv_late(sample, key), late_x_restricted(fit, key))
            for key in covariate_cells(sample)
        ]
        return "restricted covariate cf", rows
    if sample.k_max > 1:
        order = poly_order or 1
        fit = poly_cf_fit(sample, link, order)
        stats = cell_stats(sample)
        rows = [
            FitRow(f"z={z}", pairwise_iv_late(stats, z), poly_cf_late(fit, z))
            for z in range(1, sample.k_max + 1)
        ]
        return f"polynomial cf L={order}", rows
    raise DataError("fit assessment needs covariates or an instrument with more than two levels")


def _fit_differences(sample: Sample, link, poly_order: int | None) -> np.ndarray:
    _, rows = _fit_rows(sample, link, poly_order)
    return np.array([r.iv - r.model for r in rows])


def fit_assessment(sample: Sample, link, poly_order: int | None = None, bootstrap_b: int = 0,
                   seed: int | None = None, jobs: int = 1) -> FitAssessment:
    """Per subgroup (covariate cell, else instrument pair) IV and model-implied LATEs.

    With bootstrap_b > 0 the differences get a Wald statistic d′Σ⁺d against
    χ² with rank(Σ) degrees of freedom, Σ the bootstrap covariance.
    """
    model, rows = _fit_rows(sample, link, poly_order)
    result = FitAssessment(model=model, rows=rows)
    if not bootstrap_b:
        return result

    draws = bootstrap(sample, partial(_fit_differences, link=link, poly_order=poly_order),
                      bootstrap_b, seed, jobs)
    cov = draws.cov
    diff = result.differences
    df = int(np.linalg.matrix_rank(cov))
    if df == 0:
        logger.warning("fit assessment: bootstrap covariance of the differences is zero")
        return FitAssessment(model=model, rows=rows, discarded=draws.discarded)
    wald = float(diff @ np.linalg.pinv(cov) @ diff)
    return FitAssessment(
        model=model, rows=rows, wald=wald, df=df,
        p_value=float(sps.chi2.sf(wald, df)), discarded=draws.discarded,
    )


# --- Running and writing -----------------------------------------------------

@dataclass
class Report:
    payload: dict
    tables: dict[str, pd.DataFrame]
    exit_code: int = 0


def _plain(value):
    """JSON-ready copy: numpy to Python, non-finite floats to None."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, Path):
        return value.as_posix()
    return value


def _error_entry(exc: CfEquivError) -> dict:
    condition = getattr(exc, "condition", None)
    if isinstance(exc, MissingInstrumentLevelError):
        # an empty instrument level leaves its (z, d) cells empty
        condition = 2
    return {"error": {
        "type": type(exc).__name__,
        "message": str(exc),
        "condition": condition,
    }}


def run_estimator(name: str, sample: Sample, config: RunConfig) -> tuple[dict, pd.DataFrame | None]:
    """Run one estimator; CfEquivErrors become an error entry instead of propagating."""
    estimator = get_estimator(name)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            outcome = estimator(sample, config)
        except CfEquivError as exc:
            logger.warning("%s: %s", name, exc)
            return _error_entry(exc), None
    diagnostics = dict(outcome.diagnostics)
    if caught:
        diagnostics["warnings"] = [f"{w.category.__name__}: {w.message}" for w in caught]
    entry = {"estimate": outcome.estimate, "diagnostics": diagnostics, "parameters": outcome.parameters}
    return entry, outcome.table


def run(config: RunConfig) -> Report:
    """Load the input, run every configured estimator in order, assemble the report."""
    names = list(dict.fromkeys(config.estimators))
    for name in names:
        get_estimator(name)

    loaded = load_csv(config.input) if config.input is not None else load_dgp(config.dgp, config.seed)
    sample = loaded.sample
    logger.info("loaded %d observations, K=%d, %d covariates", sample.n, sample.k_max, sample.n_covariates)

    entries, tables = {}, {}
    for name in names:
        entry, table = run_estimator(name, sample, config)
        entries[name] = entry
        if table is not None:
            tables[name] = table

    payload = {
        "schema_version": SCHEMA_VERSION,
        "source": loaded.source,
        "n": sample.n,
        "k_max": sample.k_max,
        "z_levels": list(loaded.z_levels),
        "config": config.to_dict(),
        "estimators": entries,
    }
    failed = any(e.get("error", {}).get("condition") is not None for e in entries.values())
    return Report(payload=_plain(payload), tables=tables, exit_code=2 if failed else 0)


def to_json(report: Report) -> str:
    # float repr is the shortest string that round-trips
    return json.dumps(report.payload, indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def estimates_table(report: Report) -> pd.DataFrame:
    """One row per scalar estimate, with error type and message for failures."""
    rows = []
    for name, entry in report.payload["estimators"].items():
        if "error" in entry:
            rows.append((name, None, entry["error"]["type"], entry["error"]["message"]))
        elif isinstance(entry["estimate"], dict):
            rows.extend((f"{name}[{key}]", value, "", "") for key, value in entry["estimate"].items())
        else:
            rows.append((name, entry["estimate"], "", ""))
    return pd.DataFrame(rows, columns=["estimator", "estimate", "error_type", "error_message"])


def write_report(report: Report, out: str | Path, fmt: str = "json") -> list[Path]:
    if fmt not in FORMATS:
        raise ConfigError(f"FORMAT must be one of {FORMATS}, got {fmt!r}")
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt in ("json", "both"):
        path = out / "report.json"
        path.write_text(to_json(report), encoding="utf-8")
        written.append(path)
    if fmt in ("csv", "both"):
        path = out / "estimates.csv"
        estimates_table(report).to_csv(path, index=False)
        written.append(path)
        for name, table in report.tables.items():
            path = out / f"{name}.csv"
            table.to_csv(path, index=False)
            written.append(path)
    return written


# --- CLI ---------------------------------------------------------------------

FLAGS = ("input", "dgp", "estimators", "link", "poly_order", "eta", "bootstrap", "seed", "out", "format",
         "jobs", "mte_grid")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Run LATE estimators on a CSV sample or a simulated DGP draw")
    parser.add_argument("--config", "-c", help="KEY=value config file (flags override it)")
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--input", "-i", help="CSV with columns y, d, z and optional x1..xm")
    source.add_argument("--dgp", help="DGP spec file to simulate from")
    parser.add_argument("--estimators", "-e", help=f"Comma-separated list from {available_estimators()}")
    parser.add_argument("--link", choices=list(LINK_FAMILIES.keys()), help="Link family (default: probit)")
    parser.add_argument("--poly-order", dest="poly_order", help="Polynomial CF order L")
    parser.add_argument("--eta", help="Defier threshold shift")
    parser.add_argument("--bootstrap", help="Bootstrap replicates for combination and fit assessment")
    parser.add_argument("--seed", help="Unsigned 64-bit seed")
    parser.add_argument("--out", "-o", help="Output directory (default: results)")
    parser.add_argument("--format", choices=list(FORMATS), help="Report format (default: json)")
    parser.add_argument("--jobs", "-j", help="Parallel workers for bootstrap and multi-start (default: 1)")
    parser.add_argument("--mte-grid", dest="mte_grid", help="Number of MTE grid points (default: 99)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=log_level(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    overrides = {name: getattr(args, name) for name in FLAGS if getattr(args, name) is not None}
    try:
        config = build_config(args.config, overrides)
        report = run(config)
        written = write_report(report, config.out, config.format)
    except ConditionError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 2
    except (CfEquivError, OSError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1

    for name, entry in report.payload["estimators"].items():
        if "error" in entry:
            print(f"  {name:<16} {entry['error']['type']}: {entry['error']['message']}")
        else:
            print(f"  {name:<16} {entry['estimate']}")
    for path in written:
        print(f"Wrote {path}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
