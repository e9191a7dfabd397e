"""Coefficient bounds from two integrations by parts per axis.

For a polyannulus P with outer radii R_j,

    ||c_alpha e_alpha||'_{k,P} <= M * prod_j (1 + R_j^2) * ||f||'_{k+2,P}

with mu_l = 1/(l(l-1)) (mu_0 = mu_1 = 1).  Two constants are certified:

* ``factor_M``: prod_j mu(alpha_j - k), the constant as usually stated.
  Replacing mu(alpha_j - gamma_j) by mu(alpha_j - k) assumes mu decreases
  along gamma_j <= k, which is false once alpha_j < k.
* ``factor_M_corrected``: prod_j max_{0<=g<=k} mu(alpha_j - g), uniform over
  every gamma with max_j gamma_j <= k, hence a valid constant.  It keeps
  the 1/l^2 decay, so summability over Z^n is unaffected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .coefficients import CoefficientTable
from .errors import DataInconsistencyError
from .geometry import Polyannulus, boundary_grid
from .multiindex import MultiIndex
from .seminorms import DerivativeSups, monomial_box_seminorm_exact
from .testfns import AnalyticTestFunction


def mu(l: int) -> float:
    l = int(l)
    return 1.0 if l in (0, 1) else 1.0 / (l * (l - 1))


def mu_exact(l: int) -> Fraction:
    l = int(l)
    return Fraction(1) if l in (0, 1) else Fraction(1, l * (l - 1))


def factor_M(alpha: Sequence[int], k: int) -> float:
    return math.prod(mu(a - k) for a in alpha)


def factor_M_corrected(alpha: Sequence[int], k: int) -> float:
    return math.prod(max(mu(a - g) for g in range(k + 1)) for a in alpha)


def kernel_U(a: int, theta):
    """Integration-by-parts kernel U(a, theta); |U| = mu(a) for real theta."""
    theta = np.asarray(theta, dtype=float)
    if a in (0, 1):
        return np.exp(-1j * a * theta)
    return np.exp(-1j * (a - 2) * theta) / (a * (a - 1))


def kernel_magnitude_residual(a: int, theta) -> float:
    return float(np.max(np.abs(np.abs(kernel_U(a, theta)) - mu(a))))


def ibp_coefficient(f: AnalyticTestFunction, alpha: Sequence[int], z: Sequence[complex], m: int = 64) -> complex:
    """c_alpha z^alpha from the integrated-by-parts representation

        z^beta (2 pi)^-n int prod_j U(alpha_j, theta_j) D^beta f(z e^{i theta}) d theta,

    beta_j = 0 if alpha_j in {0, 1} else 2, by the trapezoid rule.  Used to
    cross-check the representation, never to compute tables.
    """
    alpha = tuple(int(a) for a in alpha)
    z = np.asarray(z, dtype=complex)
    n = len(alpha)
    beta = tuple(0 if a in (0, 1) else 2 for a in alpha)
    theta = 2 * np.pi * np.arange(m) / m
    mesh = np.meshgrid(*([theta] * n), indexing="ij")
    pts = np.stack([z[j] * np.exp(1j * mesh[j]) for j in range(n)], axis=-1).reshape(-1, n)
    weight = np.ones(pts.shape[0], dtype=complex)
    for j in range(n):
        weight *= kernel_U(alpha[j], mesh[j].reshape(-1))
    avg = np.mean(weight * f.deriv(beta, pts))
    return complex(np.prod(z ** np.array(beta)) * avg)


@dataclass
class BoundCertificate:
    alpha: MultiIndex
    k: int
    lhs: float
    rhs_literal: float
    rhs_corrected: float
    literal_ok: bool = True
    corrected_ok: bool = True

    @property
    def margin_literal(self) -> float:
        return self.rhs_literal - self.lhs

    @property
    def margin_corrected(self) -> float:
        return self.rhs_corrected - self.lhs

    def csv_row(self) -> list:
        return [" ".join(map(str, self.alpha)), self.k, repr(self.lhs), repr(self.rhs_literal),
                repr(self.rhs_corrected), repr(self.margin_literal), repr(self.margin_corrected),
                int(self.literal_ok), int(self.corrected_ok)]


CERT_CSV_HEADER = ["alpha", "k", "lhs", "rhs_literal", "rhs_corrected", "margin_literal", "margin_corrected",
                   "literal_ok", "corrected_ok"]


@dataclass
class _Norm:
    """||f||'_{order,P}, sampled, with the refinement fallback."""

    sups: DerivativeSups
    refine_angles: int
    _refined: DerivativeSups | None = field(default=None)

    def value(self, order: int) -> float:
        return self.sups.box(order).value

    def refined(self, order: int) -> float:
        # sup of a holomorphic function over a closed polyannulus is reached on
        # the boundary tori, so the refinement densifies the angles there
        if self._refined is None:
            s = self.sups
            grid = boundary_grid(s.P, self.refine_angles)
            self._refined = DerivativeSups(s.f, s.P, s.res, self.refine_angles, grid=grid)
        return max(self.value(order), self._refined.box(order).value)


def prop6_bound_check(f: AnalyticTestFunction, table: CoefficientTable, P: Polyannulus, k: int,
                      res: int = 32, angles: int = 16, delta: float = 1e-8,
                      sups: DerivativeSups | None = None) -> list[BoundCertificate]:
    """Certificates for every alpha in the table box.

    lhs is exact for the table coefficient; rhs uses the sampled
    ||f||'_{k+2,P}.  A variant fails only when lhs > rhs (1 + delta) both on
    the default grid and after 4x angular refinement.
    """
    if sups is None:
        sups = DerivativeSups(f, P, res, angles)
    norm = _Norm(sups, 4 * angles)
    weight = P.outer_weight()
    fnorm = norm.value(k + 2)
    out = []
    for alpha, raw in table.items(clean=False):
        if table.is_structural_zero(alpha):
            if abs(raw) > table.error_bound(alpha):
                raise DataInconsistencyError(f"c_{alpha} = {raw:.3e} should vanish on a disc axis")
            c = 0j
        else:
            c = raw
        lhs = monomial_box_seminorm_exact(c, alpha, P, k)
        Mp, Mc = factor_M(alpha, k), factor_M_corrected(alpha, k)
        cert = BoundCertificate(alpha, k, lhs, Mp * weight * fnorm, Mc * weight * fnorm)
        if lhs > cert.rhs_literal * (1 + delta):
            cert.literal_ok = lhs <= Mp * weight * norm.refined(k + 2) * (1 + delta)
        if lhs > cert.rhs_corrected * (1 + delta):
            cert.corrected_ok = lhs <= Mc * weight * norm.refined(k + 2) * (1 + delta)
        out.append(cert)
    return out


def cover_constant(cells: Sequence[Polyannulus]) -> float:
    """B = max over cells of prod_j (1 + R_j^2)."""
    return max(P.outer_weight() for P in cells)


def global_constant_sum(k: int, B: float, N: int, n: int) -> np.ndarray:
    """S(L) = B prod_j sum_{a=-L}^{L} mu(a - k) for L = 0..N.

    The one-axis sums are accumulated exactly in rationals before the final
    conversion, so increments are free of cancellation.
    """
    one_axis = []
    acc = Fraction(0)
    for L in range(N + 1):
        acc += mu_exact(L - k) if L == 0 else mu_exact(L - k) + mu_exact(-L - k)
        one_axis.append(acc)
    return np.array([float(B * s**n) for s in one_axis])


def global_constant_increments(k: int, B: float, N: int, n: int) -> np.ndarray:
    """S(L) - S(L-1) for L = 1..N, computed exactly."""
    out = []
    acc_prev = acc = Fraction(0)
    for L in range(N + 1):
        acc_prev = acc
        acc += mu_exact(L - k) if L == 0 else mu_exact(L - k) + mu_exact(-L - k)
        if L:
            out.append(float(B * (acc**n - acc_prev**n)))
    return np.array(out)
