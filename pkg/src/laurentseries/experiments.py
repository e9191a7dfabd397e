"""The experiments behind the CLI subcommands.

Each experiment takes an ``ExperimentConfig`` and returns an ``Outcome``:
named CSV tables plus a JSON-ready verdict whose ``passed`` field decides
the exit status.  Nothing here touches the filesystem, and outcomes never
contain timings, so equal configs give equal bytes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bounds import (CERT_CSV_HEADER, cover_constant, global_constant_increments, global_constant_sum,
                     kernel_magnitude_residual, mu, mu_exact, prop6_bound_check)
from .coefficients import coefficients_dft, derivative_shift_check
from .config import ExperimentConfig
from .errors import ConfigurationError, DataInconsistencyError
from .geometry import DomainSpec, Polyannulus, random_points, rational_cover
from .multiindex import _default as _enumeration
from .multiindex import box_index_bound, box_points, box_size, linf_norm, sigma_inverse
from .seminorms import CSV_HEADER as SEMINORM_HEADER
from .seminorms import DerivativeSups, lemma5_check
from .series import (TAIL_CSV_HEADER, box_partial_sum_error, net_cauchy_check, permuted_convergence_check,
                     tail_seminorm_sum)
from .testfns import AnalyticTestFunction, LaurentPolynomial, builtin_suite, hartogs_function, make_function

Table = tuple[list, list]


@dataclass
class Outcome:
    name: str
    verdict: dict
    tables: dict[str, Table] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.verdict.get("passed", False))


def parallel_map(fn: Callable, items: Sequence, workers: int = 1) -> list:
    """``[fn(x) for x in items]``, in order, using up to ``workers`` processes."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


# -- targets ------------------------------------------------------------------

@dataclass
class Target:
    label: str
    f: AnalyticTestFunction
    P: Polyannulus


def _fmt_alpha(alpha) -> str:
    return " ".join(str(int(a)) for a in alpha)


def _fmt_c(z: complex) -> str:
    return repr(complex(z))


def targets(cfg: ExperimentConfig, function: dict | None = None, domain: dict | None = None) -> list[Target]:
    """Functions paired with the regions they are examined on.

    ``{"name": "builtin-suite"}`` expands to every built-in on its own
    validity cell; with a Hartogs-triangle domain it also adds the Hartogs
    test function on each cell of the rational cover.  Any other function
    is examined on its validity, or on each cover cell of the domain after
    re-declaring it there.
    """
    function = cfg.function if function is None else function
    domain = cfg.domain if domain is None else domain
    spec = DomainSpec.from_dict(domain) if domain is not None else None
    if function.get("name") == "builtin-suite":
        out = [Target(f.name, f, f.validity) for f in builtin_suite()]
        if spec is not None:
            if spec.kind != "hartogs-triangle":
                raise ConfigurationError("the built-in suite only takes a hartogs-triangle domain")
            h = hartogs_function()
            for cell in rational_cover(spec, cfg.depth).cells:
                out.append(Target(f"hartogs on {cell}", h.with_validity(cell), cell))
        return out
    f = make_function(function)
    if spec is None:
        return [Target(f.name, f, f.validity)]
    out = []
    for cell in rational_cover(spec, cfg.depth).cells:
        g = f if cell.within(f.validity) else f.with_validity(cell)
        out.append(Target(f"{f.name} on {cell}", g, cell))
    return out


# -- 1: enumeration ------------------------------------------------------------

def run_enumeration(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """Bijectivity of sigma onto Q_N and the prefix/box sandwich.

    options: ``dims`` (default [1, 2, 3]), ``max_M`` (default 10000).
    """
    dims = cfg.option("dims", [1, 2, 3])
    max_M = int(cfg.option("max_M", 10_000))
    rows = parallel_map(_enumeration_row, [(n, cfg.N, max_M) for n in dims], workers)
    ok = all(r[3] and r[4] and r[6] == 0 for r in rows)
    verdict = {"experiment": "enumeration", "N": cfg.N, "max_M": max_M, "dims": dims, "passed": ok,
               "sandwich_failures": sum(r[6] for r in rows)}
    header = ["n", "N", "points", "bijective", "inverse_ok", "max_M", "sandwich_failures"]
    return Outcome("enumeration", verdict, {"enumeration": (header, rows)})


def _bijective(pts: np.ndarray, N: int, n: int) -> bool:
    return (len(pts) == box_size(N, n) and int(np.abs(pts).max(initial=0)) <= N
            and len({tuple(p) for p in pts.tolist()}) == len(pts))


def _enumeration_row(args) -> list:
    n, N, max_M = args
    enum = _enumeration(n)
    pts = enum.prefix(box_size(N, n))
    bij = _bijective(pts, N, n)
    inv = all(sigma_inverse(p) == j for j, p in enumerate(pts.tolist()))
    # sandwich Q_{M1} in {sigma(0..M)} in Q_{M1+1}, on a box that holds every prefix
    top = box_index_bound(max_M, n) + 1
    big = enum.prefix(box_size(top, n))
    bij = bij and _bijective(big, top, n)
    level = np.abs(big).max(axis=1)
    last_at = np.full(top + 1, -1)
    np.maximum.at(last_at, level, np.arange(len(level)))
    last_at = np.maximum.accumulate(last_at)  # last position with level <= l
    running = np.maximum.accumulate(level)
    failures = 0
    for M in range(1, max_M + 1):
        M1 = box_index_bound(M, n)
        if not (last_at[M1] <= M and running[M] <= M1 + 1):
            failures += 1
    return [n, N, len(pts), bij, inv, max_M, failures]


# -- 2: coefficients -------------------------------------------------------------

def run_coeffs(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """Coefficient tables with oracle errors and radius independence.

    options: ``radii`` (list of radius vectors, default: the validity
    default), ``tol`` (oracle tolerance, default 1e-10), ``radius_bound``:
    tables from different radii must agree within the sum of their
    ``"aliasing"`` bounds or of their full ``"quadrature"`` bounds
    (aliasing plus roundoff, the default).
    """
    tol = float(cfg.option("tol", 1e-10))
    mode = cfg.option("radius_bound", "quadrature")
    if mode not in ("aliasing", "quadrature"):
        raise ConfigurationError("radius_bound must be 'aliasing' or 'quadrature'")
    jobs = [(t, cfg.option("radii", None), cfg.m, cfg.N, mode) for t in targets(cfg)]
    parts = parallel_map(_coeffs_target, jobs, workers)
    coeff_rows, alias_rows, worst_err, worst_ratio, ok = [], [], 0.0, 0.0, True
    for rows, arows, err, ratio, consistent in parts:
        coeff_rows += rows
        alias_rows += arows
        if err is not None:
            worst_err = max(worst_err, err)
        worst_ratio = max(worst_ratio, ratio)
        ok = ok and consistent
    passed = ok and worst_err < tol and worst_ratio <= 1.0
    verdict = {"experiment": "coeffs", "N": cfg.N, "tol": tol, "max_oracle_error": worst_err,
               "radius_bound": mode, "radius_ratio": worst_ratio, "structural_zeros_ok": ok, "passed": passed}
    return Outcome("coeffs", verdict, {
        "coefficients": (["target", "radii", "alpha", "re", "im", "oracle_error", "error_bound"], coeff_rows),
        "aliasing": (["target", "radii", "m", "N", "aliasing_bound", "max_oracle_error"], alias_rows),
    })


def _coeffs_target(args):
    t, radii_list, m, N, mode = args
    radii_list = radii_list or [None]
    tables, rows, arows, err, consistent = [], [], [], None, True
    for radii in radii_list:
        tab = coefficients_dft(t.f, radii, m, N)
        try:
            tab.check_structural_zeros()
        except DataInconsistencyError:
            consistent = False
        tables.append(tab)
        label = " ".join(repr(r) for r in tab.radii)
        local = None
        for alpha, c in tab.items(clean=True):
            try:
                e = abs(c - t.f.oracle_coeff(alpha))
            except NotImplementedError:
                e = None
            if e is not None:
                local = e if local is None else max(local, e)
            rows.append([t.label, label, _fmt_alpha(alpha), repr(c.real), repr(c.imag),
                         "" if e is None else repr(e), repr(tab.error_bound(alpha))])
        if local is not None:
            err = local if err is None else max(err, local)
        arows.append([t.label, label, tab.m, tab.N, repr(tab.aliasing_bound), "" if local is None else repr(local)])
    # radius independence: differences against the combined bounds
    ratio = 0.0
    for i in range(len(tables)):
        for j in range(i + 1, len(tables)):
            a, b = tables[i], tables[j]
            for alpha in a.indices():
                diff = abs(a.coefficient(alpha) - b.coefficient(alpha))
                if diff:
                    if mode == "aliasing":
                        bound = a.aliasing_bound + b.aliasing_bound
                    else:
                        bound = a.error_bound(alpha) + b.error_bound(alpha)
                    ratio = max(ratio, diff / bound if bound > 0 else math.inf)
    return rows, arows, err, ratio, consistent


# -- 3: Laurent polynomials reproduce exactly ---------------------------------------

def run_monomials(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """Random Laurent polynomials with exponents in Q_N, m = 2N+1 and up.

    options: ``dims`` (default [1, 2]), ``boxes`` (default [0..cfg.N]),
    ``tol`` (default 1e-14).  Coefficients are uniform in the unit disc and
    the torus is the unit torus.
    """
    tol = float(cfg.option("tol", 1e-14))
    dims = cfg.option("dims", [1, 2])
    boxes = cfg.option("boxes", list(range(cfg.N + 1)))
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(dims) * len(boxes))
    rows, worst, s = [], 0.0, 0
    for n in dims:
        ring = Polyannulus.annuli([0.5] * n, [2.0] * n)
        for N in boxes:
            rng = np.random.default_rng(seeds[s])
            s += 1
            alphas = box_points(N, n)
            mod = np.sqrt(rng.uniform(size=len(alphas)))
            coeffs = mod * np.exp(2j * np.pi * rng.uniform(size=len(alphas)))
            poly = LaurentPolynomial(dict(zip(alphas, coeffs)), ring)
            for m in sorted({2 * N + 1, 2 * N + 2, max(2 * N + 1, 32)}):
                tab = coefficients_dft(poly, [1.0] * n, m, N, estimate_aliasing=False)
                err = max(abs(tab[a] - c) for a, c in zip(alphas, coeffs))
                worst = max(worst, err)
                rows.append([n, N, m, repr(err)])
    verdict = {"experiment": "monomials", "tol": tol, "max_error": float(worst), "passed": bool(worst < tol)}
    return Outcome("monomials", verdict, {"monomials": (["n", "N", "m", "max_error"], rows)})


# -- 4: mu and kernel identities ------------------------------------------------------

def run_kernels(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """mu(l) = mu(1-l) exactly, |U(a, theta)| = mu(a) at random angles.

    options: ``L`` (default 1000), ``alpha_max`` (default 20),
    ``samples`` (default 100), ``tol`` (default 1e-15).
    """
    L = int(cfg.option("L", 1000))
    amax = int(cfg.option("alpha_max", 20))
    samples = int(cfg.option("samples", 100))
    tol = float(cfg.option("tol", 1e-15))
    sym_bad = sum(1 for l in range(-L, L + 1) if mu_exact(l) != mu_exact(1 - l) or mu(l) != mu(1 - l))
    rng = np.random.default_rng(cfg.seed)
    theta = rng.uniform(0, 2 * np.pi, size=samples)
    rows = [[a, repr(mu(a)), repr(kernel_magnitude_residual(a, theta))] for a in range(-amax, amax + 1)]
    worst = max(float(r[2]) for r in rows)
    verdict = {"experiment": "kernels", "symmetry_failures": sym_bad, "max_residual": worst, "tol": tol,
               "passed": sym_bad == 0 and worst <= tol}
    return Outcome("kernels", verdict, {"kernels": (["alpha", "mu", "residual"], rows)})


# -- 5: coefficient bounds ----------------------------------------------------------------

def run_bound_check(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """Bound certificates for every alpha in Q_N and every k.

    The corrected constant must never fail.  Failures of the literal
    constant are reported and must stay inside {min_j alpha_j < 0, k >= 1}.
    options: ``delta`` (default 1e-8).
    """
    delta = float(cfg.option("delta", 1e-8))
    jobs = [(t, cfg.N, cfg.m, tuple(cfg.k), cfg.res, cfg.angles, delta) for t in targets(cfg)]
    parts = parallel_map(_bound_target, jobs, workers)
    rows, corrected_bad, literal_bad, outside, examples = [], 0, 0, 0, []
    for label, certs in parts:
        for c in certs:
            rows.append([label] + c.csv_row())
            corrected_bad += not c.corrected_ok
            if not c.literal_ok:
                literal_bad += 1
                if not (min(c.alpha) < 0 and c.k >= 1):
                    outside += 1
                    if len(examples) < 10:
                        examples.append({"target": label, "alpha": list(c.alpha), "k": c.k})
    verdict = {"experiment": "bound-check", "N": cfg.N, "k": cfg.k, "delta": delta, "res": cfg.res,
               "certificates": len(rows), "corrected_violations": corrected_bad,
               "literal_violations": literal_bad, "literal_violations_outside_clause": outside,
               "literal_outside_examples": examples, "corrected_passed": corrected_bad == 0,
               "literal_clause_passed": outside == 0, "passed": corrected_bad == 0 and outside == 0}
    return Outcome("bound-check", verdict, {"certificates": (["target"] + CERT_CSV_HEADER, rows)})


def _bound_target(args):
    t, N, m, ks, res, angles, delta = args
    tab = coefficients_dft(t.f, None, m, N)
    sups = DerivativeSups(t.f, t.P, res, angles)
    certs = []
    for k in ks:
        certs += prop6_bound_check(t.f, tab, t.P, k, res, angles, delta, sups=sups)
    return t.label, certs


# -- 6: derivative shift ---------------------------------------------------------------

def run_shift(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """D^gamma(c_alpha z^alpha) against the coefficient of D^gamma f.

    ``trials`` random (gamma <= (2,..,2), alpha in Q_N, interior z) per
    target.  The quadrature torus passes through |z|, which keeps the
    comparison free of rho^-alpha amplification; ``m`` (default 256) must
    then be fine enough for the torus nearest a singularity.
    options: ``tol`` (default 1e-9), ``gamma_max`` (default 2).
    """
    tol = float(cfg.option("tol", 1e-9))
    gmax = int(cfg.option("gamma_max", 2))
    ts = targets(cfg)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(ts))
    m = cfg.m or 256
    jobs = [(t, s, cfg.trials, cfg.N, gmax, m) for t, s in zip(ts, seeds)]
    parts = parallel_map(_shift_target, jobs, workers)
    rows = [r for p in parts for r in p]
    worst = max((float(r[5]) for r in rows), default=0.0)
    verdict = {"experiment": "shift", "trials": cfg.trials, "N": cfg.N, "m": m, "tol": tol, "seed": cfg.seed,
               "max_residual": worst, "passed": worst < tol}
    return Outcome("shift", verdict, {"shift": (["target", "trial", "gamma", "alpha", "z", "residual"], rows)})


def _shift_target(args):
    t, seed, trials, N, gmax, m = args
    rng = np.random.default_rng(seed)
    n = t.f.dim
    Q = box_points(N, n)
    rows = []
    for trial in range(trials):
        gamma = tuple(int(g) for g in rng.integers(0, gmax + 1, size=n))
        alpha = Q[int(rng.integers(len(Q)))]
        z = random_points(t.f.validity, 1, rng, margin=0.1)[0]
        r = derivative_shift_check(t.f, gamma, alpha, z, radii=np.abs(z), m=m)
        rows.append([t.label, trial, _fmt_alpha(gamma), _fmt_alpha(alpha), " ".join(_fmt_c(c) for c in z), repr(r)])
    return rows


# -- 7: seminorm sandwich ------------------------------------------------------------------

def run_seminorms(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """C^k and box seminorm reports with the index-inclusion sandwich."""
    jobs = [(t, tuple(cfg.k), cfg.res, cfg.angles) for t in targets(cfg)]
    parts = parallel_map(_seminorm_target, jobs, workers)
    rows, checks, failed = [], [], 0
    for label, results in parts:
        for k, res in results:
            for rep in (res.ck_k, res.box_k, res.ck_nk):
                rows.append([label] + rep.csv_row())
            checks.append([label, k, int(res.box_le_ck_nk), int(res.ck_le_box)])
            failed += not all(res.ok)
    verdict = {"experiment": "seminorms", "k": cfg.k, "res": cfg.res, "angles": cfg.angles,
               "checks": len(checks), "failures": failed, "passed": failed == 0}
    return Outcome("seminorms", verdict, {
        "seminorms": (["target"] + SEMINORM_HEADER, rows),
        "lemma5": (["target", "k", "box_le_ck_nk", "ck_le_box"], checks),
    })


def _seminorm_target(args):
    t, ks, res, angles = args
    return t.label, [(k, lemma5_check(t.f, t.P, k, res, angles)) for k in ks]


# -- 8, 9: tails, net of partial sums, rearrangements ----------------------------------------

def _single_target(cfg: ExperimentConfig) -> Target:
    ts = targets(cfg)
    if len(ts) != 1:
        raise ConfigurationError("this experiment needs a single region; use a polydisc or annulus-product domain")
    return ts[0]


def run_tails(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """Term-seminorm tails in sigma order and the prefix/box sandwich.

    options: ``tail_at`` (sigma index M for tail(M), default N),
    ``tol`` (bound on tail(M), default 1e-6).
    """
    t = _single_target(cfg)
    M = int(cfg.option("tail_at", cfg.N))
    tol = float(cfg.option("tol", 1e-6))
    tab = coefficients_dft(t.f, None, cfg.m, cfg.N)
    tables, verdicts, ok = {}, [], True
    for k in cfg.k:
        prof = tail_seminorm_sum(tab, t.P, k)
        monotone = bool(np.all(np.diff(prof.tails) <= 0))
        tail = prof.tail(M)
        good = prof.sandwich_ok and monotone and tail < tol
        ok = ok and good
        verdicts.append({"k": k, "tail_at": M, "tail": tail, "nonincreasing": monotone,
                         "sandwich_ok": prof.sandwich_ok, "sandwich_checked": prof.sandwich_checked,
                         "sandwich_nonstrict": prof.sandwich_nonstrict, "passed": good})
        tables[f"tails_k{k}"] = (TAIL_CSV_HEADER, prof.rows())
    verdict = {"experiment": "tails", "target": t.label, "N": cfg.N, "tol": tol, "orders": verdicts, "passed": ok}
    return Outcome("tails", verdict, tables)


def run_net_cauchy(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """Threshold N0, random finite supersets and random rearrangements.

    N0 is a sigma index; its shell |sigma(N0)|_inf is what ``n0_max``
    bounds.  options: ``n_sets`` (default 100), ``n0_max`` (default none),
    ``measure`` (sampled distances too, default true).  ``trials``
    rearrangements run alongside (0 disables them).
    """
    t = _single_target(cfg)
    n_sets = int(cfg.option("n_sets", 100))
    n0_max = cfg.option("n0_max", None)
    measure = bool(cfg.option("measure", True))
    tab = coefficients_dft(t.f, None, cfg.m, cfg.N)
    ok, orders, tables = True, [], {}
    for k in cfg.k:
        for eps in cfg.eps:
            net = net_cauchy_check(tab, t.P, k, eps, n_sets, cfg.seed, measure)
            entry = {"k": k, **net.verdict()}
            good = net.passed and (n0_max is None or net.n0_shell <= n0_max)
            if cfg.trials:
                perm = permuted_convergence_check(tab, t.P, k, cfg.trials, cfg.seed, n0=net.n0)
                entry["rearrangements"] = perm.verdict()
                good = good and perm.passed
                tables[f"rearrangements_k{k}_eps{eps:g}"] = (
                    ["trial", "cover_prefix"], [[i, u] for i, u in enumerate(perm.cover_prefix)])
            entry["passed"] = good
            ok = ok and good
            orders.append(entry)
        tables[f"tails_k{k}"] = (TAIL_CSV_HEADER, tail_seminorm_sum(tab, t.P, k).rows())
    verdict = {"experiment": "net-cauchy", "target": t.label, "N": cfg.N, "n0_max": n0_max, "seed": cfg.seed,
               "checks": orders, "passed": ok}
    return Outcome("net-cauchy", verdict, tables)


def run_permute(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """Rearrangement checks alone; N0 from the first eps."""
    t = _single_target(cfg)
    tab = coefficients_dft(t.f, None, cfg.m, cfg.N)
    ok, results, tables = True, [], {}
    for k in cfg.k:
        perm = permuted_convergence_check(tab, t.P, k, cfg.trials, cfg.seed, eps=cfg.eps[0])
        results.append({"k": k, **perm.verdict()})
        ok = ok and perm.passed
        tables[f"rearrangements_k{k}"] = (["trial", "cover_prefix"], [[i, u] for i, u in enumerate(perm.cover_prefix)])
    verdict = {"experiment": "permute", "target": t.label, "eps": cfg.eps[0], "checks": results, "passed": ok}
    return Outcome("permute", verdict, tables)


# -- 10: box partial sums ---------------------------------------------------------------------

def run_convergence(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """Sampled errors of box partial sums.

    options: ``fit`` = {N_min, N_max, ratio, rtol} for a log-linear fit on
    the main target at each k; ``threshold`` = {function, domain, N, k,
    tol} for a second target that must fall below ``tol`` by box N.
    """
    fit = {"N_min": 5, "N_max": 25, "ratio": 1 / 3, "rtol": 0.1, **cfg.option("fit", {})}
    t = _single_target(cfg)
    Ns = list(range(int(fit["N_min"]), int(fit["N_max"]) + 1))
    tab = coefficients_dft(t.f, None, cfg.m, max(Ns))
    jobs = [(t, tab, N, k, cfg.res, cfg.angles) for k in cfg.k for N in Ns]
    errs = parallel_map(_box_error, jobs, workers)
    rows, fits, ok = [], [], True
    for i, k in enumerate(cfg.k):
        e = np.array(errs[i * len(Ns):(i + 1) * len(Ns)])
        rows += [[t.label, k, N, repr(float(v))] for N, v in zip(Ns, e)]
        slope = float(np.polyfit(Ns, np.log(e), 1)[0])
        ratio = math.exp(slope)
        rel = abs(ratio - fit["ratio"]) / fit["ratio"]
        good = rel <= fit["rtol"]
        ok = ok and good
        fits.append({"k": k, "fitted_ratio": ratio, "relative_deviation": rel, "passed": good})
    verdict = {"experiment": "convergence", "target": t.label, "fit": fit, "fits": fits}
    thr = cfg.option("threshold", None)
    if thr is not None:
        sub = cfg.replace(function=thr["function"], domain=thr.get("domain"))
        t2 = _single_target(sub)
        N2, k2, tol2 = int(thr["N"]), int(thr.get("k", 1)), float(thr.get("tol", 1e-6))
        tab2 = coefficients_dft(t2.f, None, cfg.m, N2)
        err2 = _box_error((t2, tab2, N2, k2, cfg.res, cfg.angles))
        rows.append([t2.label, k2, N2, repr(err2)])
        good = err2 < tol2
        ok = ok and good
        verdict["threshold"] = {"target": t2.label, "N": N2, "k": k2, "tol": tol2, "error": err2, "passed": good}
    verdict["passed"] = ok
    return Outcome("convergence", verdict, {"box_errors": (["target", "k", "N", "error"], rows)})


def _box_error(args) -> float:
    t, tab, N, k, res, angles = args
    return box_partial_sum_error(t.f, tab, N, t.P, k, res, angles).value


# -- 11: global summability ----------------------------------------------------------------

def run_summability(cfg: ExperimentConfig, workers: int = 1) -> Outcome:
    """Partial sums of the coefficient-bound constants over Q_L, L <= N.

    B comes from the cover of ``domain`` (1 without a domain).
    options: ``dims`` (default [1, 2]), ``tol`` (increment at L = N
    relative to B, default 1e-3).
    """
    dims = cfg.option("dims", [1, 2])
    tol = float(cfg.option("tol", 1e-3))
    B = cover_constant(rational_cover(cfg.domain, cfg.depth).cells) if cfg.domain else 1.0
    rows, checks, ok = [], [], True
    for n in dims:
        for k in cfg.k:
            S = global_constant_sum(k, B, cfg.N, n)
            inc = global_constant_increments(k, B, cfg.N, n)
            rows += [[n, k, L, repr(float(S[L])), repr(float(inc[L - 1])) if L else ""] for L in range(cfg.N + 1)]
            last = float(inc[-1]) / B if len(inc) else 0.0
            good = bool(np.all(inc >= 0)) and last < tol
            ok = ok and good
            checks.append({"n": n, "k": k, "final_increment_over_B": last, "passed": good})
    verdict = {"experiment": "summability", "N": cfg.N, "B": B, "tol": tol, "checks": checks, "passed": ok}
    return Outcome("summability", verdict, {"summability": (["n", "k", "L", "partial_sum", "increment"], rows)})


# -- registry ----------------------------------------------------------------------------------

_POLE = {"name": "geometric", "a": 3}
_UNIT_DISC = {"kind": "polydisc", "R": [1]}

DEFAULTS: dict[str, dict] = {
    "enumeration": {"N": 20},
    "coeffs": {
        "function": {"name": "sum", "terms": [{"name": "geometric", "a": 3}, {"name": "reciprocal", "b": 0.1}],
                     "validity": {"r": [0.5], "R": [2]}},
        "N": 16, "m": 64,
        "options": {"radii": [[1.0], [0.8], [1.25]], "tol": 1e-10, "radius_bound": "aliasing"},
    },
    "monomials": {"N": 8},
    "kernels": {},
    "bound-check": {"function": {"name": "builtin-suite"}, "domain": {"kind": "hartogs-triangle"},
                    "N": 10, "k": [0, 1, 2, 3]},
    "shift": {"function": {"name": "builtin-suite"}, "N": 8, "trials": 50},
    "seminorms": {"function": {"name": "builtin-suite"}, "k": [0, 1, 2]},
    "tails": {"function": _POLE, "domain": _UNIT_DISC, "N": 40, "k": [0], "options": {"tail_at": 40}},
    "net-cauchy": {"function": _POLE, "domain": _UNIT_DISC, "N": 40, "k": [0], "eps": [1e-6], "trials": 20,
                   "options": {"n_sets": 100, "n0_max": 13}},
    "permute": {"function": _POLE, "domain": _UNIT_DISC, "N": 40, "k": [0], "eps": [1e-6], "trials": 20},
    "convergence": {"function": _POLE, "domain": _UNIT_DISC, "k": [0, 1, 2],
                    "options": {"fit": {"N_min": 5, "N_max": 25, "ratio": 1 / 3, "rtol": 0.1},
                                "threshold": {"function": {"name": "rational2d", "c": 4},
                                              "domain": {"kind": "polydisc", "R": [1, 1]},
                                              "N": 30, "k": 1, "tol": 1e-6}}},
    "summability": {"N": 100, "k": [0, 1, 2], "options": {"dims": [1, 2], "tol": 1e-3}},
}

EXPERIMENTS: dict[str, Callable[[ExperimentConfig, int], Outcome]] = {
    "enumeration": run_enumeration,
    "coeffs": run_coeffs,
    "monomials": run_monomials,
    "kernels": run_kernels,
    "bound-check": run_bound_check,
    "shift": run_shift,
    "seminorms": run_seminorms,
    "tails": run_tails,
    "net-cauchy": run_net_cauchy,
    "permute": run_permute,
    "convergence": run_convergence,
    "summability": run_summability,
}


def default_config(name: str, seed: int = 0) -> ExperimentConfig:
    if name not in DEFAULTS:
        raise ConfigurationError(f"unknown experiment {name!r}")
    return ExperimentConfig.from_dict({**DEFAULTS[name], "seed": seed})


def run_experiment(name: str, cfg: ExperimentConfig | None = None, workers: int = 1) -> Outcome:
    cfg = default_config(name) if cfg is None else cfg
    return EXPERIMENTS[name](cfg, workers)
