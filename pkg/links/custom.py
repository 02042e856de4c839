"""User-supplied link. Only J is given; μ_J is integrated once and cached."""

import functools
import logging
from collections.abc import Callable

import numpy as np
from scipy import integrate

from errors import LinkError

from .base import LinkFamily

logger = logging.getLogger(__name__)


class CustomLink(LinkFamily):
    """Wraps any strictly increasing callable J: (0, 1) -> R.

    J may be scalar-only; it is vectorized with numpy when an array call fails.
    """

    kind = "custom"

    def __init__(self, j: Callable, name: str = "custom"):
        self._j = j
        self.name = name
        grid = np.linspace(1e-6, 1 - 1e-6, 2001)
        try:
            values = np.asarray(j(grid), dtype=float)
            if values.shape != grid.shape:
                raise ValueError
        except (TypeError, ValueError):
            self._j = np.vectorize(j, otypes=[float])
        if not self.is_strictly_increasing(grid):
            raise LinkError(f"{name}: J is not strictly increasing on (0, 1)")
        if not np.isfinite(self.mu_j):
            raise LinkError(f"{name}: E[J(U)] is not finite")

    def __repr__(self) -> str:
        return f"CustomLink(name={self.name!r})"

    def j(self, u):
        return self._j(u)

    @functools.cached_property
    def mu_j(self) -> float:
        def f(u):
            return float(self._j(u))

        # split at 1/2 so each endpoint singularity gets its own interval
        lo, err_lo = integrate.quad(f, 0.0, 0.5, epsabs=1e-13, limit=400)
        hi, err_hi = integrate.quad(f, 0.5, 1.0, epsabs=1e-13, limit=400)
        logger.debug("%s: mu_j=%.15g (err %.2e)", self.name, lo + hi, err_lo + err_hi)
        return float(lo + hi)
