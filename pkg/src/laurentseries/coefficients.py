"""Laurent coefficients by trapezoidal quadrature of the Cauchy integral.

On the torus |zeta_j| = rho_j the coefficient integral is a Fourier
coefficient, so the m-point trapezoid rule on every axis is an n-dimensional
DFT.  The result is exact up to aliasing,

    computed c_alpha = c_alpha + sum_{t != 0} c_{alpha + t m} rho^{t m},

plus floating-point roundoff.  Aliasing is estimated empirically by
comparing grids m and 2m.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigurationError, DataInconsistencyError, DomainError
from .geometry import ProductGrid
from .multiindex import MultiIndex, box_points, falling_factorial
from .testfns import AnalyticTestFunction, Derivative

EPS = np.finfo(float).eps


def default_grid(N: int) -> int:
    """Smallest power of two >= max(2N + 1, 32)."""
    m = 32
    while m < 2 * N + 1:
        m *= 2
    return m


@dataclass
class CoefficientTable:
    """Coefficients c_alpha for alpha in the box Q_N.

    ``values`` is a dense array indexed by alpha + N.  ``aliasing_bound`` is
    the m-vs-2m discrepancy; ``roundoff`` holds a per-index estimate of the
    floating-point error of the quadrature (see ``error_bound``).
    """

    N: int
    radii: tuple[float, ...]
    m: int
    values: np.ndarray
    aliasing_bound: float = 0.0
    fmax: float = 0.0
    disc_axes: tuple[bool, ...] = ()
    function: str = ""
    roundoff: np.ndarray = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.radii)

    def _pos(self, alpha: Sequence[int]) -> tuple[int, ...]:
        if len(alpha) != self.dim or any(abs(a) > self.N for a in alpha):
            raise DomainError(f"index {tuple(alpha)} outside table box Q_{self.N}")
        return tuple(int(a) + self.N for a in alpha)

    def __contains__(self, alpha) -> bool:
        return len(alpha) == self.dim and all(abs(a) <= self.N for a in alpha)

    def __getitem__(self, alpha: Sequence[int]) -> complex:
        return complex(self.values[self._pos(alpha)])

    def error_bound(self, alpha: Sequence[int]) -> float:
        """aliasing_bound plus the roundoff estimate at alpha."""
        return self.aliasing_bound + float(self.roundoff[self._pos(alpha)])

    def is_structural_zero(self, alpha: Sequence[int]) -> bool:
        """alpha has a negative entry on a disc axis of the source validity."""
        return any(d and a < 0 for d, a in zip(self.disc_axes, alpha))

    def coefficient(self, alpha: Sequence[int]) -> complex:
        """Value with structural zeros replaced by exact 0."""
        return 0j if self.is_structural_zero(alpha) else self[alpha]

    def indices(self) -> list[MultiIndex]:
        return box_points(self.N, self.dim)

    def items(self, clean: bool = True) -> Iterator[tuple[MultiIndex, complex]]:
        """(alpha, c_alpha) in sigma order."""
        for alpha in self.indices():
            yield alpha, (self.coefficient(alpha) if clean else self[alpha])

    def sigma_values(self, clean: bool = True) -> np.ndarray:
        return np.array([c for _, c in self.items(clean)], dtype=complex)

    def check_structural_zeros(self) -> float:
        """Largest |c_alpha| over structural zeros relative to its error bound;
        raise if some value exceeds the bound."""
        worst = 0.0
        for alpha in self.indices():
            if self.is_structural_zero(alpha):
                bound = self.error_bound(alpha)
                v = abs(self[alpha])
                if v > bound:
                    raise DataInconsistencyError(
                        f"{self.function}: |c_{alpha}| = {v:.3e} must vanish on a disc axis "
                        f"but exceeds its error bound {bound:.3e}")
                worst = max(worst, v / bound if bound > 0 else 0.0)
        return worst

    # -- serialisation ------------------------------------------------------
    def to_csv(self, path: str | Path) -> None:
        path = Path(path)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"alpha_{j + 1}" for j in range(self.dim)] + ["re", "im"])
            for alpha, c in self.items(clean=False):
                w.writerow(list(alpha) + [repr(c.real), repr(c.imag)])
        meta = {
            "function": self.function,
            "N": self.N,
            "radii": list(self.radii),
            "m": self.m,
            "aliasing_bound": self.aliasing_bound,
            "fmax": self.fmax,
            "disc_axes": list(self.disc_axes),
        }
        path.with_suffix(".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")

    @classmethod
    def from_csv(cls, path: str | Path) -> CoefficientTable:
        path = Path(path)
        meta = json.loads(path.with_suffix(".json").read_text())
        N, n = meta["N"], len(meta["radii"])
        values = np.zeros((2 * N + 1,) * n, dtype=complex)
        with open(path, newline="") as fh:
            rows = csv.reader(fh)
            next(rows)
            for row in rows:
                alpha = tuple(int(a) for a in row[:n])
                values[tuple(a + N for a in alpha)] = complex(float(row[n]), float(row[n + 1]))
        radii = tuple(meta["radii"])
        return cls(N, radii, meta["m"], values, meta["aliasing_bound"], meta["fmax"],
                   tuple(meta["disc_axes"]), meta["function"], _roundoff(N, radii, meta["m"], meta["fmax"]))


def _roundoff(N: int, radii: Sequence[float], m: int, fmax: float) -> np.ndarray:
    # FFT error is O(eps log2(size)) relative to max|f| before the 1/rho^alpha
    # rescaling; 4x safety factor.
    n = len(radii)
    scale = 4 * EPS * (math.log2(m**n) + 1) * max(fmax, np.finfo(float).tiny)
    out = np.full((2 * N + 1,) * n, scale)
    ks = np.arange(-N, N + 1)
    for j, rho in enumerate(radii):
        shape = [1] * n
        shape[j] = -1
        out = out * (float(rho) ** (-ks.astype(float))).reshape(shape)
    return out


def _raw_dft(f: AnalyticTestFunction, radii: np.ndarray, m: int, N: int):
    n = f.dim
    theta = 2 * np.pi * np.arange(m) / m
    axes = tuple(rho * np.exp(1j * theta) for rho in radii)
    samples = f.deriv_grid((0,) * n, ProductGrid(axes))
    A = np.fft.fftn(samples) / m**n
    idx = np.arange(-N, N + 1) % m
    A = A[np.ix_(*([idx] * n))]
    ks = np.arange(-N, N + 1).astype(float)
    for j, rho in enumerate(radii):
        shape = [1] * n
        shape[j] = -1
        A = A / (rho**ks).reshape(shape)
    return A, float(np.abs(samples).max())


def _validate(f: AnalyticTestFunction, radii, m: int, N: int) -> np.ndarray:
    if N < 0:
        raise ConfigurationError("box size N must be nonnegative")
    radii = np.asarray(radii if radii is not None else f.validity.default_radii(), dtype=float)
    if radii.shape != (f.dim,) or np.any(radii <= 0):
        raise ConfigurationError(f"need {f.dim} positive torus radii, got {radii}")
    if not np.all(f.validity.closure_contains_moduli(radii)):
        raise DomainError(f"torus with radii {tuple(radii)} is outside {f.validity}")
    if m < 2 * N + 1:
        raise ConfigurationError(f"grid m={m} cannot resolve Q_{N}; need m >= {2 * N + 1}")
    return radii


def coefficients_dft(f: AnalyticTestFunction, radii: Sequence[float] | None = None, m: int | None = None,
                     N: int = 8, estimate_aliasing: bool = True) -> CoefficientTable:
    """Coefficient table of f on Q_N from an m^n-point torus quadrature.

    Radii default to the validity's per-axis default (geometric mean of the
    annulus radii, or R/2 on disc axes).
    """
    m = default_grid(N) if m is None else int(m)
    rho = _validate(f, radii, m, N)
    values, fmax = _raw_dft(f, rho, m, N)
    bound = 0.0
    if estimate_aliasing:
        finer, _ = _raw_dft(f, rho, 2 * m, N)
        bound = float(np.abs(values - finer).max())
    return CoefficientTable(N, tuple(float(r) for r in rho), m, values, bound, fmax,
                            f.validity.disc_axes, f.name, _roundoff(N, rho, m, fmax))


def aliasing_estimate(f: AnalyticTestFunction, radii: Sequence[float] | None = None, m: int | None = None,
                      N: int = 8) -> float:
    """max_{alpha in Q_N} |table_m[alpha] - table_2m[alpha]|."""
    m = default_grid(N) if m is None else int(m)
    rho = _validate(f, radii, m, N)
    coarse, _ = _raw_dft(f, rho, m, N)
    fine, _ = _raw_dft(f, rho, 2 * m, N)
    return float(np.abs(coarse - fine).max())


def derivative_shift_check(f: AnalyticTestFunction, gamma: Sequence[int], alpha: Sequence[int], z,
                           radii: Sequence[float] | None = None, m: int | None = None) -> float:
    """|D^gamma(c_alpha(f) z^alpha) - c_{alpha-gamma}(D^gamma f) z^(alpha-gamma)|.

    The left side uses the oracle coefficient and the monomial derivative;
    the right side is a fresh quadrature of the derivative function.
    """
    gamma = tuple(int(g) for g in gamma)
    alpha = tuple(int(a) for a in alpha)
    z = np.asarray(z, dtype=complex)
    if not f.validity.contains(z):
        raise DomainError(f"{z} is not in {f.validity}")
    shifted = tuple(a - g for a, g in zip(alpha, gamma))
    power = complex(np.prod(z ** np.array(shifted, dtype=float)))
    ff = math.prod(falling_factorial(a, g) for a, g in zip(alpha, gamma))
    lhs = f.oracle_coeff(alpha) * ff * power
    N = max(abs(a) for a in shifted)
    table = coefficients_dft(Derivative(f, gamma), radii, m, N, estimate_aliasing=False)
    rhs = table.coefficient(shifted) * power
    return abs(lhs - rhs)
