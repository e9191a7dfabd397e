"""C^k seminorms and box seminorms.

    ||f||_k  = sup { |D^gamma f(z)| : z in P, [gamma] <= k }
    ||f||'_k = sup { |D^gamma f(z)| : z in P, max_j gamma_j <= k }

For a general function the sup is a maximum over a deterministic closed
sample grid, hence a lower bound of the true value.  Laurent monomials get
an exact closed form instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .geometry import Polyannulus, ProductGrid, sample_grid
from .multiindex import MultiIndex, nonnegative_indices, total_degree_indices
from .testfns import AnalyticTestFunction

DEFAULT_RES = 32
DEFAULT_ANGLES = 16


@dataclass(frozen=True)
class SeminormReport:
    kind: str  # "ck" or "box"
    k: int
    value: float
    gamma: MultiIndex
    point: tuple[complex, ...]
    region: str
    res: int
    angles: int

    @property
    def shadow(self) -> tuple[float, ...]:
        return tuple(abs(z) for z in self.point)

    def csv_row(self) -> list:
        return [self.kind, self.k, repr(self.value), " ".join(map(str, self.gamma)),
                " ".join(repr(s) for s in self.shadow)]


CSV_HEADER = ["kind", "k", "value", "gamma", "shadow"]


def ck_indices(n: int, k: int) -> list[MultiIndex]:
    return total_degree_indices(n, k)


def box_indices(n: int, k: int) -> list[MultiIndex]:
    return nonnegative_indices(n, k)


class DerivativeSups:
    """Sampled max of |D^gamma f| over a fixed grid, computed once per gamma.

    Every report drawn from one instance uses the identical sample set, so
    inequalities that follow from index-set inclusion hold exactly.
    """

    def __init__(self, f: AnalyticTestFunction, P: Polyannulus, res: int = DEFAULT_RES,
                 angles: int = DEFAULT_ANGLES, grid: ProductGrid | None = None):
        if P.dim != f.dim:
            raise DomainError("region and function dimensions differ")
        if not P.within(f.validity):
            raise DomainError(f"region {P} is not inside the validity {f.validity} of {f.name}")
        self.f, self.P, self.res, self.angles = f, P, res, angles
        self.grid = grid if grid is not None else sample_grid(P, res, angles)
        self._cache: dict[MultiIndex, tuple[float, int]] = {}

    def sup(self, gamma: Sequence[int]) -> tuple[float, int]:
        gamma = tuple(int(g) for g in gamma)
        hit = self._cache.get(gamma)
        if hit is None:
            vals = np.abs(self.f.deriv_grid(gamma, self.grid)).reshape(-1)
            i = int(np.argmax(vals))
            hit = self._cache[gamma] = (float(vals[i]), i)
        return hit

    def report(self, kind: str, k: int, gammas: Iterable[MultiIndex] | None = None) -> SeminormReport:
        n = self.f.dim
        if gammas is None:
            gammas = ck_indices(n, k) if kind == "ck" else box_indices(n, k)
        best, best_gamma, best_i = -1.0, None, 0
        for g in gammas:
            v, i = self.sup(g)
            if v > best:
                best, best_gamma, best_i = v, g, i
        return SeminormReport(kind, k, best, best_gamma, self.grid.point(best_i), str(self.P), self.res, self.angles)

    def ck(self, k: int) -> SeminormReport:
        return self.report("ck", k)

    def box(self, k: int) -> SeminormReport:
        return self.report("box", k)


def ck_seminorm(f: AnalyticTestFunction, P: Polyannulus, k: int, res: int = DEFAULT_RES,
                angles: int = DEFAULT_ANGLES) -> SeminormReport:
    """Sampled C^k seminorm of f over the closure of P."""
    return DerivativeSups(f, P, res, angles).ck(k)


def box_seminorm(f: AnalyticTestFunction, P: Polyannulus, k: int, res: int = DEFAULT_RES,
                 angles: int = DEFAULT_ANGLES) -> SeminormReport:
    """Sampled box seminorm of f over the closure of P."""
    return DerivativeSups(f, P, res, angles).box(k)


def _axis_factor(a: int, g: int, r: float, R: float, disc: bool) -> float:
    # |ff(a, g)| * sup |z|^(a-g) over the closed shadow of one axis
    ff = 1
    for t in range(g):
        ff *= a - t
    if ff == 0:
        return 0.0
    e = a - g
    if e >= 0:
        return abs(ff) * R**e
    if disc:
        raise DomainError("negative exponent on a disc axis has infinite sup")
    return abs(ff) * r**e


def monomial_box_seminorm_exact(c: complex, alpha: Sequence[int], P: Polyannulus, k: int) -> float:
    """||c e_alpha||'_k on P in closed form.

    The index set {gamma : gamma_j <= k} is a product, and |D^gamma e_alpha|
    factorises over axes, so the max is the product of per-axis maxima of
    |ff(alpha_j, g)| B_j(alpha_j - g) with B_j(e) = R_j^e (e >= 0) or r_j^e.
    """
    if c == 0:
        return 0.0
    out = abs(c)
    for a, ax in zip(alpha, P.axes):
        if ax.is_disc and a < 0:
            raise DomainError(f"exponent {tuple(alpha)} is negative on a disc axis")
        r, R = float(ax.r), float(ax.R)
        out *= max(_axis_factor(int(a), g, r, R, ax.is_disc) for g in range(k + 1))
    return out


def monomial_box_seminorms(coeffs: np.ndarray, alphas: np.ndarray, P: Polyannulus, k: int) -> np.ndarray:
    """Vectorised ``monomial_box_seminorm_exact`` over rows of ``alphas``.

    Rows with c == 0 give 0 even on forbidden disc exponents.
    """
    alphas = np.asarray(alphas, dtype=np.int64)
    out = np.abs(np.asarray(coeffs, dtype=complex)).astype(float)
    live = out > 0
    for j, ax in enumerate(P.axes):
        a = alphas[:, j]
        if ax.is_disc and np.any(live & (a < 0)):
            raise DomainError("nonzero coefficient with negative exponent on a disc axis")
        r, R = float(ax.r), float(ax.R)
        best = np.zeros(len(a))
        ff = np.ones(len(a))
        for g in range(k + 1):
            if g:
                ff = ff * (a - (g - 1))
            e = (a - g).astype(float)
            with np.errstate(divide="ignore", invalid="ignore"):
                base = np.where(e >= 0, R, r if r > 0 else 1.0) ** e
            best = np.maximum(best, np.where(ff == 0, 0.0, np.abs(ff) * base))
        out = np.where(live, out * best, 0.0)
    return out


@dataclass(frozen=True)
class Lemma5Result:
    box_le_ck_nk: bool
    ck_le_box: bool
    ck_k: SeminormReport
    box_k: SeminormReport
    ck_nk: SeminormReport

    @property
    def ok(self) -> tuple[bool, bool]:
        return self.box_le_ck_nk, self.ck_le_box


def lemma5_check(f: AnalyticTestFunction, P: Polyannulus, k: int, res: int = DEFAULT_RES,
                 angles: int = DEFAULT_ANGLES) -> Lemma5Result:
    """||f||'_k <= ||f||_{nk} and ||f||_k <= ||f||'_k on one sample set.

    Both follow from inclusion of the derivative index sets, so they are
    compared with zero tolerance.
    """
    sups = DerivativeSups(f, P, res, angles)
    n = f.dim
    ck_k, box_k, ck_nk = sups.ck(k), sups.box(k), sups.ck(n * k)
    return Lemma5Result(box_k.value <= ck_nk.value, ck_k.value <= box_k.value, ck_k, box_k, ck_nk)
