"""DGP specifications, seeding and the config-file round trip.

A spec is a flat record; each variant reads the fields it needs and ignores
the rest. Specs serialize to the same KEY=value format as run configs.
"""

import logging
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np
from dotenv import dotenv_values

from errors import ConfigError
from normal import ndtri
from sample import Sample

logger = logging.getLogger(__name__)

VARIANTS = ("late_nonparametric", "parametric_heckit", "binary_outcome", "defier")

_TUPLE_FIELDS = {
    "p", "z_probs", "group_means", "noise", "alpha", "gamma", "sigma", "mu", "x_share", "p_x1", "tau",
}
_INT_FIELDS = {"n"}
_STR_FIELDS = {"variant", "link"}


@dataclass(frozen=True)
class DgpSpec:
    """Parameters of one synthetic data-generating process.

    p:            P(z) for z = 0..K (late_nonparametric, parametric_heckit,
                  binary_outcome); ignored by the defier variant.
    z_probs:      instrument assignment probabilities (default uniform).
    group_means:  (μ₁at, μ₀at, μ₁c, μ₀c, μ₁nt, μ₀nt) for late_nonparametric.
    noise:        outcome noise scale per arm (σ₀, σ₁) for late_nonparametric.
    alpha, gamma, sigma, link: Y(d) = α_d + γ_d (J(U) - μ_J) + σ_d ε.
    mu:           (μ₁at, μ₀nt, μ₁c, μ₀c) for binary_outcome.
    kappa, eta, upsilon: defier thresholds κ ± η, υ = Pr(δ = +η).
    x_share, tau: optional binary covariate, x_share = (Pr(X=1),) and per-x
                  propensities p_x1 for X=1 (p is then the X=0 row); tau
                  shifts outcomes by τX.
    """
    variant: str
    p: tuple[float, ...] = (0.3, 0.7)
    z_probs: tuple[float, ...] = ()
    group_means: tuple[float, ...] = (0.0,) * 6
    noise: tuple[float, ...] = (1.0, 1.0)
    alpha: tuple[float, ...] = (0.0, 0.0)
    gamma: tuple[float, ...] = (0.0, 0.0)
    sigma: tuple[float, ...] = (1.0, 1.0)
    link: str = "probit"
    mu: tuple[float, ...] = (0.5, 0.5, 0.5, 0.5)
    kappa: float = 0.4
    eta: float = 0.2
    upsilon: float = 1.0
    x_share: tuple[float, ...] = ()
    p_x1: tuple[float, ...] = ()
    tau: tuple[float, ...] = (0.0,)
    n: int = 1000

    def __post_init__(self):
        for name in _TUPLE_FIELDS:
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if not self.z_probs:
            levels = len(self.p) if self.variant != "defier" else 2
            object.__setattr__(self, "z_probs", (1.0 / levels,) * levels)
        self.validate()

    @property
    def k_max(self) -> int:
        return len(self.z_probs) - 1

    @property
    def has_covariate(self) -> bool:
        return bool(self.x_share)

    def validate(self) -> None:
        """Raise ConfigError naming the first invalid parameter."""
        if self.variant not in VARIANTS:
            raise ConfigError(f"Unknown DGP variant: {self.variant}. Available: {list(VARIANTS)}")
        if self.n < 1:
            raise ConfigError(f"n must be positive, got {self.n}")
        zp = np.array(self.z_probs)
        if np.any(zp <= 0) or abs(zp.sum() - 1.0) > 1e-9:
            raise ConfigError(f"z_probs must be positive and sum to 1, got {self.z_probs}")

        if self.variant == "defier":
            if len(self.z_probs) != 2:
                raise ConfigError("defier DGP needs a binary instrument")
            if not (self.eta > 0 and 0 <= self.upsilon <= 1):
                raise ConfigError(f"need eta > 0 and upsilon in [0, 1], got {self.eta}, {self.upsilon}")
            if not (0 < self.kappa - self.eta and self.kappa + self.eta < 1):
                raise ConfigError(f"thresholds kappa±eta must lie in (0, 1), got {self.kappa}±{self.eta}")
        else:
            self._check_propensities("p", self.p)
            if len(self.p) != len(self.z_probs):
                raise ConfigError("p and z_probs must have one entry per instrument level")

        if self.has_covariate:
            if len(self.x_share) != 1 or not 0 < self.x_share[0] < 1:
                raise ConfigError(f"x_share must be a single probability, got {self.x_share}")
            self._check_propensities("p_x1", self.p_x1)
            if len(self.p_x1) != len(self.p):
                raise ConfigError("p_x1 must have one entry per instrument level")

        for name in ("noise", "sigma"):
            if any(v < 0 for v in getattr(self, name)):
                raise ConfigError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.variant == "late_nonparametric" and len(self.group_means) != 6:
            raise ConfigError("group_means needs six entries (mu_1at, mu_0at, mu_1c, mu_0c, mu_1nt, mu_0nt)")
        if self.variant == "binary_outcome":
            if len(self.mu) != 4 or any(not 0 <= v <= 1 for v in self.mu):
                raise ConfigError(f"mu needs four probabilities, got {self.mu}")
            if len(self.p) != 2:
                raise ConfigError("binary_outcome DGP needs a binary instrument")

    @staticmethod
    def _check_propensities(name: str, p: tuple[float, ...]) -> None:
        arr = np.array(p)
        if arr.size < 2 or np.any((arr <= 0) | (arr >= 1)):
            raise ConfigError(f"{name} must hold at least two probabilities in (0, 1), got {p}")
        if np.any(np.diff(arr) <= 0):
            raise ConfigError(f"{name} must be strictly increasing, got {p}")

    def to_config(self) -> dict[str, str]:
        """KEY=value pairs, tuples comma-separated."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                text = ",".join(repr(v) for v in value)
            else:
                text = repr(value) if isinstance(value, float) else str(value)
            out[f.name.upper()] = text
        return out

    @classmethod
    def from_config(cls, values: dict[str, str | None]) -> "DgpSpec":
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            name = key.strip().lower()
            if name not in known:
                raise ConfigError(f"unknown DGP key: {key}")
            text = (raw or "").strip()
            try:
                if name in _TUPLE_FIELDS:
                    kwargs[name] = tuple(float(v) for v in text.split(",") if v.strip())
                elif name in _INT_FIELDS:
                    kwargs[name] = int(text)
                elif name in _STR_FIELDS:
                    kwargs[name] = text
                else:
                    kwargs[name] = float(text)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {raw!r}") from exc
        if "variant" not in kwargs:
            raise ConfigError("DGP spec needs a VARIANT")
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "DgpSpec":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"DGP spec not found: {path}")
        return cls.from_config(dotenv_values(path))

    def dump(self, path: str | Path) -> None:
        lines = [f"{key}={value}" for key, value in self.to_config().items()]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def make_rng(seed) -> np.random.Generator:
    """Philox generator from an integer seed or a SeedSequence."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(seed))


def open_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform draws strictly inside (0, 1), on the 2^-53 grid."""
    return (rng.integers(0, 2 ** 53, size=n).astype(float) + 0.5) / 2.0 ** 53


def standard_normal(rng: np.random.Generator, n: int) -> np.ndarray:
    """N(0, 1) draws by inverse CDF."""
    return ndtri(open_uniform(rng, n))


def draw_instrument(spec: DgpSpec, rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.choice(len(spec.z_probs), size=n, p=np.array(spec.z_probs))


def draw_covariate(spec: DgpSpec, rng: np.random.Generator, n: int) -> np.ndarray | None:
    if not spec.has_covariate:
        return None
    return (open_uniform(rng, n) < spec.x_share[0]).astype(float)


def propensity(spec: DgpSpec, z: np.ndarray, x: np.ndarray | None) -> np.ndarray:
    """P(X, Z) per observation."""
    p = np.array(spec.p)[z]
    if x is not None:
        p = np.where(x == 1.0, np.array(spec.p_x1)[z], p)
    return p


def covariate_shift(spec: DgpSpec, x: np.ndarray | None) -> np.ndarray | float:
    return 0.0 if x is None else spec.tau[0] * x


def report_conditions(sample: Sample, label: str) -> bool:
    """Log a warning when a draw violates Condition 1 or 2 for an adjacent pair."""
    counts = np.zeros((sample.k_max + 1, 2), dtype=np.int64)
    np.add.at(counts, (sample.z, sample.d), 1)
    ok = bool(np.all(counts > 0))
    if ok:
        rates = counts[:, 1] / counts.sum(axis=1)
        ok = bool(np.all(np.diff(rates) > 0))
    if not ok:
        logger.warning("%s: generated sample violates Conditions 1-2 (cell counts %s)", label, counts.tolist())
    return ok
