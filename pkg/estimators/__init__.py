"""LATE estimators: IV, control functions, covariates, likelihood and defier models."""

from .binary import (
    CfFit,
    Extrapolation,
    LalondeFit,
    MteCurve,
    PoMeans,
    cf_extrapolate,
    cf_fit,
    cf_late,
    cf_po_means,
    iv_late,
    iv_po_means,
    lalonde_fit,
    mte,
    mte_curve,
    sign_restriction_check,
    telser_late,
)
from .bootstrap import BootstrapDraws, bootstrap
from .covariates import (
    CovCfFit,
    Prop3Decomposition,
    cf_fit_by_cell,
    cf_fit_covariates,
    late_x_restricted,
    prop3_decompose,
    reweighted_late,
)
from .defier import DefierFit, defier_fit, defier_late
from .fiml import FimlParams, FimlResult, fiml_fit, fiml_late, limited_info_fit, log_likelihood
from .multi_instrument import (
    CombinationResult,
    PolyCfFit,
    combination_late2,
    iv_weights,
    pairwise_cf_late,
    pairwise_iv_late,
    poly_cf_fit,
    poly_cf_late,
    weighted_iv_late,
)

__all__ = [
    "BootstrapDraws",
    "CfFit",
    "CombinationResult",
    "CovCfFit",
    "DefierFit",
    "Extrapolation",
    "FimlParams",
    "FimlResult",
    "LalondeFit",
    "MteCurve",
    "PoMeans",
    "PolyCfFit",
    "Prop3Decomposition",
    "bootstrap",
    "cf_extrapolate",
    "cf_fit",
    "cf_fit_by_cell",
    "cf_fit_covariates",
    "cf_late",
    "cf_po_means",
    "combination_late2",
    "defier_fit",
    "defier_late",
    "fiml_fit",
    "fiml_late",
    "iv_late",
    "iv_po_means",
    "iv_weights",
    "lalonde_fit",
    "late_x_restricted",
    "limited_info_fit",
    "log_likelihood",
    "mte",
    "mte_curve",
    "pairwise_cf_late",
    "pairwise_iv_late",
    "poly_cf_fit",
    "poly_cf_late",
    "prop3_decompose",
    "reweighted_late",
    "sign_restriction_check",
    "telser_late",
    "weighted_iv_late",
]
