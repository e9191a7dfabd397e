"""Partial sums, term-seminorm tails and rearrangement checks.

Every certificate here compares exactly computed monomial term seminorms
||c_alpha e_alpha||'_{k,P}; sampled sups only enter through
``box_partial_sum_error`` and the optional measured distances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .coefficients import CoefficientTable
from .errors import DomainError
from .geometry import Polyannulus, sample_grid
from .multiindex import (MultiIndex, box_index_bound, box_points, box_size, linf_norm, nonnegative_indices,
                         sigma_order)
from .seminorms import DerivativeSups, SeminormReport, monomial_box_seminorms
from .testfns import AnalyticTestFunction, LaurentPolynomial, _power_matrix

FiniteIndexSet = frozenset


def index_set(indices: Iterable[Sequence[int]]) -> FiniteIndexSet:
    return frozenset(tuple(int(a) for a in alpha) for alpha in indices)


def _check_in_box(table: CoefficientTable, S: Iterable[MultiIndex]) -> None:
    for alpha in S:
        if alpha not in table:
            raise DomainError(f"index {alpha} outside the table box Q_{table.N}")


def partial_sum(table: CoefficientTable, S: Iterable[Sequence[int]], z) -> complex:
    """sum_{alpha in S} c_alpha z^alpha, summed in sigma order."""
    S = sigma_order(S)
    _check_in_box(table, S)
    z = np.asarray(z, dtype=complex)
    total = 0j
    for alpha in S:
        c = table.coefficient(alpha)
        if c != 0:
            total += c * complex(np.prod(z ** np.array(alpha, dtype=float)))
    return total


def partial_sum_function(table: CoefficientTable, S: Iterable[Sequence[int]], P: Polyannulus) -> LaurentPolynomial:
    """The partial sum over S as a Laurent polynomial on P."""
    S = list(S)
    _check_in_box(table, S)
    terms = {alpha: table.coefficient(alpha) for alpha in S}
    return LaurentPolynomial({a: c for a, c in terms.items() if c != 0}, P, name=f"S[{len(S)}]")


def term_seminorms(table: CoefficientTable, P: Polyannulus, k: int) -> np.ndarray:
    """Exact ||c_sigma(j) e_sigma(j)||'_{k,P} for j = 0 .. |Q_N| - 1."""
    alphas = np.array(table.indices(), dtype=np.int64).reshape(-1, table.dim)
    return monomial_box_seminorms(table.sigma_values(clean=True), alphas, P, k)


@dataclass
class TailProfile:
    k: int
    region: str
    terms: np.ndarray
    tails: np.ndarray  # tails[j] = sum_{i > j} terms[i] within the box
    dim: int
    sandwich_ok: bool = True
    sandwich_nonstrict: int = 0
    sandwich_checked: int = 0

    def tail(self, M: int) -> float:
        if M >= len(self.tails):
            return 0.0
        return float(self.tails[M])

    def box_sum(self, L: int) -> float:
        return float(np.sum(self.terms[: box_size(L, self.dim)]))

    def rows(self) -> list[list]:
        return [[j, repr(float(t)), repr(float(s))] for j, (t, s) in enumerate(zip(self.terms, self.tails))]


TAIL_CSV_HEADER = ["j", "term", "tail"]


def _suffix_tails(terms: np.ndarray) -> np.ndarray:
    # tails[j] = sum_{i>j} terms[i], accumulated from the far end so the
    # result is exactly nonincreasing
    rev = np.cumsum(terms[::-1])[::-1]
    return np.append(rev[1:], 0.0)


def tail_seminorm_sum(table: CoefficientTable, P: Polyannulus, k: int) -> TailProfile:
    """Term seminorms in sigma order, their tails and the box sandwich

        box_sum(M1) <= sum_{j<=m} term_j <= box_sum(M1 + 1),
        M1 = largest integer with (2 M1 + 1)^n <= m,

    for every 1 <= m < |Q_N|, the outer box clipped to Q_N.  Equalities are
    counted (a zero coefficient makes the strict version fail) but do not
    fail the check.
    """
    terms = term_seminorms(table, P, k)
    tails = _suffix_tails(terms)
    prof = TailProfile(k, str(P), terms, tails, table.dim)
    prefix = np.cumsum(terms)
    n, N = table.dim, table.N
    ok, nonstrict = True, 0
    for m in range(1, len(terms)):
        M1 = box_index_bound(m, n)
        lower = prefix[box_size(M1, n) - 1]
        upper = prefix[box_size(min(M1 + 1, N), n) - 1]
        if not (lower <= prefix[m] <= upper):
            ok = False
        elif lower == prefix[m] or prefix[m] == upper:
            nonstrict += 1
    prof.sandwich_ok, prof.sandwich_nonstrict, prof.sandwich_checked = ok, nonstrict, len(terms) - 1
    return prof


def box_partial_sum_error(f: AnalyticTestFunction, table: CoefficientTable, N: int, P: Polyannulus, k: int,
                          res: int = 32, angles: int = 16) -> SeminormReport:
    """Sampled ||f - sum_{|alpha|_inf <= N} c_alpha e_alpha||'_{k,P}."""
    if N > table.N:
        raise DomainError(f"box {N} exceeds table box {table.N}")
    S = partial_sum_function(table, box_points(N, table.dim), P)
    diff = f.with_validity(P) - S if f.validity != P else f - S
    return DerivativeSups(diff, P, res, angles).box(k)


@dataclass
class NetCauchyResult:
    n0: int
    n0_shell: int
    eps: float
    tail_n0: float
    reachable: bool
    violations: int
    sets_checked: int
    max_bound: float
    seed: int
    measured_violations: int = 0
    max_measured: float = 0.0

    @property
    def passed(self) -> bool:
        return self.reachable and self.violations == 0 and self.measured_violations == 0

    def verdict(self) -> dict:
        return {"N0": self.n0, "N0_shell": self.n0_shell, "eps": self.eps, "tail_N0": self.tail_n0,
                "reachable": self.reachable, "violations": self.violations, "sets": self.sets_checked,
                "max_bound": self.max_bound, "measured_violations": self.measured_violations,
                "max_measured": self.max_measured, "seed": self.seed, "passed": self.passed}


def threshold_index(terms: np.ndarray, eps: float) -> int:
    """Smallest N0 with sum_{j > N0} terms_j < eps / 2."""
    tails = _suffix_tails(terms)
    below = np.nonzero(tails < eps / 2)[0]
    return int(below[0])


def net_cauchy_check(table: CoefficientTable, P: Polyannulus, k: int, eps: float, n_sets: int = 100,
                     seed: int = 0, measure: bool = False, res: int = 8, angles: int = 8) -> NetCauchyResult:
    """Threshold N0 for the net of partial sums, certified on random sets.

    With I = {sigma(0..N0)}, draws pairs J, K of finite sets containing I
    (uniformly sized, at most 2 N0 indices in total, extras uniform in the
    box) and checks
    sum_{J \\ I} term + sum_{K \\ I} term < eps.  With ``measure`` the sampled
    seminorm of sum_J - sum_K is also compared against that bound.
    """
    terms = term_seminorms(table, P, k)
    n0 = threshold_index(terms, eps)
    alphas = table.indices()
    shell = linf_norm(alphas[n0])
    reachable = shell < table.N
    rng = np.random.default_rng(seed)
    outside = np.arange(n0 + 1, len(terms))
    violations = measured_bad = 0
    max_bound = max_measured = 0.0
    for _ in range(n_sets):
        extras = []
        for _side in range(2):
            size = int(rng.integers(0, min(max(n0 - 1, 0), len(outside)) + 1))
            extras.append(rng.choice(outside, size=size, replace=False) if size else np.array([], dtype=int))
        bound = float(terms[extras[0]].sum() + terms[extras[1]].sum())
        max_bound = max(max_bound, bound)
        if not bound < eps:
            violations += 1
        if measure:
            base = list(range(n0 + 1))
            J = [alphas[i] for i in base + sorted(extras[0].tolist())]
            K = [alphas[i] for i in base + sorted(extras[1].tolist())]
            diff = partial_sum_function(table, J, P) - partial_sum_function(table, K, P)
            got = DerivativeSups(diff, P, res, angles).box(k).value
            max_measured = max(max_measured, got)
            # sampled value is a lower bound of a quantity <= bound
            if got > bound * (1 + 1e-9) + 1e-15:
                measured_bad += 1
    return NetCauchyResult(n0, shell, eps, float(_suffix_tails(terms)[n0]), reachable, violations, n_sets,
                           max_bound, seed, measured_bad, max_measured)


@dataclass
class PermutationResult:
    trials: int
    seed: int
    n0: int
    tail_n0: float
    full_discrepancy: float
    limit_violations: int
    pair_violations: int
    max_limit_bound: float = 0.0
    max_pair_bound: float = 0.0
    cover_prefix: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.limit_violations == 0 and self.pair_violations == 0

    def verdict(self) -> dict:
        return {"trials": self.trials, "seed": self.seed, "N0": self.n0, "tail_N0": self.tail_n0,
                "full_discrepancy": self.full_discrepancy, "limit_violations": self.limit_violations,
                "pair_violations": self.pair_violations, "max_limit_bound": self.max_limit_bound,
                "max_pair_bound": self.max_pair_bound, "passed": self.passed}


def permuted_convergence_check(table: CoefficientTable, P: Polyannulus, k: int, trials: int = 20, seed: int = 0,
                               eps: float | None = None, n0: int | None = None, include_identity: bool = False,
                               res: int = 8, angles: int = 8) -> PermutationResult:
    """Random rearrangements tau of the box terms versus the sigma order.

    Measures the sampled seminorm gap between the full sums in the two
    orders (pure reassociation error), then checks the rearrangement
    argument with exact term seminorms: once the tau-prefix of length u
    covers sigma(0..N0), every longer tau-prefix is within tail(N0) of the
    full sum and within 2 tail(N0) of the sigma-prefix of equal length.
    """
    terms = term_seminorms(table, P, k)
    if n0 is None:
        n0 = threshold_index(terms, eps) if eps is not None else len(terms) - 1
    tails = _suffix_tails(terms)
    tail0 = float(tails[n0])
    total = float(terms.sum())
    slack = 1e-12 * total  # cumulative-sum roundoff
    count = len(terms)
    coeffs = table.sigma_values(clean=True)
    alphas = table.indices()

    sups_grid = None
    full_disc = 0.0
    limit_bad = pair_bad = 0
    max_limit = max_pair = 0.0
    covers = []
    seeds = np.random.SeedSequence(seed).spawn(trials)
    for t in range(trials):
        rng = np.random.default_rng(seeds[t])
        tau = np.arange(count) if (include_identity and t == 0) else rng.permutation(count)

        # full-prefix discrepancy from summing the same terms in two orders
        if sups_grid is None:
            sups_grid = sample_grid(P, res, angles)
            values = _term_values(coeffs, alphas, sups_grid, k)
        sig = _ordered_sums(values, np.arange(count))
        per = _ordered_sums(values, tau)
        gap = float(max(np.abs(s - q).max() for s, q in zip(sig, per)))
        full_disc = max(full_disc, gap if np.isfinite(gap) else np.inf)

        # exact accounting
        pos = np.empty(count, dtype=np.int64)
        pos[tau] = np.arange(count)
        u = int(pos[: n0 + 1].max())
        covers.append(u)
        included = np.cumsum(terms[tau])
        missing = total - included  # sum of terms not in tau(0..p)
        sig_prefix = np.cumsum(terms)
        enter = np.maximum(pos, np.arange(count))  # prefix length where term x is in both
        inter = np.cumsum(np.bincount(enter, weights=terms, minlength=count))
        symdiff = sig_prefix + included - 2 * inter
        lim = missing[u:]
        pair = symdiff[u:]
        max_limit = max(max_limit, float(lim.max()))
        max_pair = max(max_pair, float(pair.max()))
        limit_bad += int(np.sum(lim > tail0 + slack))
        pair_bad += int(np.sum(pair > 2 * tail0 + slack))
    return PermutationResult(trials, seed, n0, tail0, full_disc, limit_bad, pair_bad, max_limit, max_pair, covers)


def _term_values(coeffs, alphas, grid, k):
    """D^gamma (c_alpha z^alpha) on the grid for every term and gamma <= k."""
    n = len(alphas[0])
    coeffs = np.asarray(coeffs, dtype=complex)
    A = np.array(alphas).reshape(-1, n)
    # zero terms (structural zeros included) contribute nothing; dropping them
    # avoids 0 * 0^-e on disc axes
    live = coeffs != 0
    out = {}
    for gamma in nonnegative_indices(n, k):
        vals = np.zeros((len(A), grid.size), dtype=complex)
        vals[live] = coeffs[live, None]
        mats = []
        for j in range(n):
            exps = np.unique(A[live, j]) if live.any() else np.zeros(0, dtype=np.int64)
            W = _power_matrix(grid.axes[j], exps, gamma[j])
            lookup = {int(e): i for i, e in enumerate(exps)}
            mats.append((W, lookup))
        for j, (W, lookup) in enumerate(mats):
            rows = np.zeros((len(A), W.shape[1]), dtype=complex)
            rows[live] = W[[lookup[int(e)] for e in A[live, j]]]  # (terms, axis samples)
            shape = [1] * n
            shape[j] = -1
            expanded = np.broadcast_to(rows.reshape((len(A),) + tuple(shape)), (len(A),) + grid.shape)
            vals = vals * expanded.reshape(len(A), -1)
        out[gamma] = vals
    return out


def _ordered_sums(values, order):
    return [v[order].sum(axis=0) for v in values.values()]
