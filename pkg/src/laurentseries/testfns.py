"""Holomorphic test functions with exact derivatives and Laurent coefficients.

Every function carries a validity polyannulus on whose closure it is
defined and smooth.  Derivatives are analytic closed forms (combinators use
the product rule); nothing here differentiates numerically.

Points are arrays whose last axis has length n.  A single point (shape
``(n,)``) gives a complex scalar back.
"""

from __future__ import annotations

import math
from functools import cached_property, lru_cache
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError
from .geometry import AxisRange, Polyannulus, ProductGrid
from .multiindex import MultiIndex, falling_factorial, nonnegative_indices


def _as_index(gamma: Sequence[int], n: int) -> MultiIndex:
    gamma = tuple(int(g) for g in gamma)
    if len(gamma) != n:
        raise ValueError(f"multi-index {gamma} does not have dimension {n}")
    return gamma


class AnalyticTestFunction:
    """Base class.  Subclasses implement ``_deriv`` on validated points."""

    name: str = "function"

    def __init__(self, validity: Polyannulus):
        self._check_validity(validity)
        self.validity = validity

    # -- public surface -------------------------------------------------
    @property
    def dim(self) -> int:
        return self.validity.dim

    def eval(self, z):
        return self.deriv((0,) * self.dim, z)

    __call__ = eval

    def deriv(self, gamma: Sequence[int], z):
        gamma = _as_index(gamma, self.dim)
        if any(g < 0 for g in gamma):
            raise ValueError("derivative orders must be nonnegative")
        pts, scalar = self._points(z)
        out = self._deriv(gamma, pts)
        return complex(out[0]) if scalar else out.reshape(np.shape(z)[:-1])

    def deriv_grid(self, gamma: Sequence[int], grid: ProductGrid) -> np.ndarray:
        """D^gamma on every point of a product grid; shape ``grid.shape``."""
        gamma = _as_index(gamma, self.dim)
        self._check_grid(grid)
        return self._deriv_grid(gamma, grid)

    def oracle_coeff(self, alpha: Sequence[int]) -> complex:
        raise NotImplementedError

    def support(self) -> dict[MultiIndex, complex] | None:
        """Finite Laurent support as {alpha: c_alpha}, or None if infinite."""
        return None

    def with_validity(self, P: Polyannulus) -> AnalyticTestFunction:
        """Same function, declared on another polyannulus (checked)."""
        raise NotImplementedError

    def __add__(self, other):
        return Sum([self, other])

    def __sub__(self, other):
        return Sum([self, other], [1.0, -1.0])

    def __mul__(self, other):
        if isinstance(other, AnalyticTestFunction):
            return Product(self, other)
        return Sum([self], [other])

    __rmul__ = __mul__

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} on {self.validity}>"

    # -- internals ------------------------------------------------------
    def _check_validity(self, P: Polyannulus) -> None:
        """Raise DomainError when the function is not smooth on closure(P)."""

    def _deriv(self, gamma: MultiIndex, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _deriv_grid(self, gamma: MultiIndex, grid: ProductGrid) -> np.ndarray:
        return self._deriv(gamma, grid.points()).reshape(grid.shape)

    def _points(self, z):
        pts = np.asarray(z, dtype=complex)
        scalar = pts.ndim == 1
        if pts.ndim == 0 or pts.shape[-1] != self.dim:
            raise DomainError(f"expected points of dimension {self.dim}, got shape {pts.shape}")
        pts = pts.reshape(-1, self.dim)
        ok = self.validity.closure_contains_moduli(np.abs(pts))
        if not np.all(ok):
            bad = pts[~ok][0]
            raise DomainError(f"{self.name}: point {tuple(bad)} outside closure of {self.validity}")
        return pts, scalar

    def _check_grid(self, grid: ProductGrid) -> None:
        if len(grid.axes) != self.dim:
            raise DomainError("grid dimension mismatch")
        for ax, vals in zip(self.validity.axes, grid.axes):
            mod = np.abs(vals)
            if mod.size and not (mod.min() >= float(ax.r) * (1 - 1e-12) and mod.max() <= float(ax.R) * (1 + 1e-12)):
                raise DomainError(f"{self.name}: sample grid leaves closure of {self.validity}")


# -- Laurent polynomials ----------------------------------------------------


def _power_matrix(x: np.ndarray, exps: np.ndarray, g: int) -> np.ndarray:
    """W[e, s] = ff(e, g) * x_s^(e - g), zero where ff vanishes."""
    W = np.zeros((len(exps), len(x)), dtype=complex)
    for i, e in enumerate(exps):
        ff = falling_factorial(int(e), g)
        if ff:
            W[i] = ff * x ** (int(e) - g)
    return W


class LaurentPolynomial(AnalyticTestFunction):
    """Finite sum of c_alpha z^alpha."""

    def __init__(self, terms: Mapping[Sequence[int], complex], validity: Polyannulus, name: str | None = None):
        self.terms = {tuple(int(a) for a in alpha): complex(c) for alpha, c in terms.items()}
        if any(len(alpha) != validity.dim for alpha in self.terms):
            raise ConfigurationError("exponent dimension does not match validity")
        super().__init__(validity)
        self.name = name or self._default_name()

    def _default_name(self) -> str:
        if len(self.terms) == 1:
            (alpha, c), = self.terms.items()
            return f"e_{alpha}" if c == 1 else f"{c}*e_{alpha}"
        return f"laurent_poly[{len(self.terms)} terms]"

    def _check_validity(self, P):
        for alpha, c in self.terms.items():
            if c == 0:
                continue
            for j, (a, ax) in enumerate(zip(alpha, P.axes)):
                if a < 0 and ax.is_disc:
                    raise DomainError(f"negative exponent {alpha} on disc axis {j}")

    def oracle_coeff(self, alpha):
        return self.terms.get(tuple(int(a) for a in alpha), 0j)

    def support(self):
        return dict(self.terms)

    def with_validity(self, P):
        return LaurentPolynomial(self.terms, P, self.name)

    @cached_property
    def _dense(self):
        # dense coefficient tensor over the per-axis exponent sets
        n = self.dim
        keys = [a for a, c in self.terms.items() if c != 0]
        exps = [np.array(sorted({k[j] for k in keys}), dtype=np.int64) for j in range(n)]
        C = np.zeros(tuple(len(e) for e in exps), dtype=complex)
        lookup = [{int(e): i for i, e in enumerate(ex)} for ex in exps]
        for k in keys:
            C[tuple(lookup[j][k[j]] for j in range(n))] += self.terms[k]
        return exps, C

    def _deriv(self, gamma, pts):
        out = np.zeros(len(pts), dtype=complex)
        for alpha, c in self.terms.items():
            coef = c
            for a, g in zip(alpha, gamma):
                coef *= falling_factorial(a, g)
            if coef == 0:
                continue
            term = np.full(len(pts), coef, dtype=complex)
            for j, (a, g) in enumerate(zip(alpha, gamma)):
                if a - g:
                    term *= pts[:, j] ** (a - g)
            out += term
        return out

    def _deriv_grid(self, gamma, grid):
        if not any(self.terms.values()):
            return np.zeros(grid.shape, dtype=complex)
        exps, C = self._dense
        out = C
        for j in range(self.dim):
            W = _power_matrix(grid.axes[j], exps[j], gamma[j])
            # contract the leading exponent axis; the sample axis goes last
            out = np.tensordot(out, W, axes=([0], [0]))
        return out


def monomial(alpha: Sequence[int], validity: Polyannulus | None = None, coeff: complex = 1.0) -> LaurentPolynomial:
    alpha = tuple(int(a) for a in alpha)
    if validity is None:
        validity = Polyannulus(tuple(AxisRange(0.5, 2.0) if a < 0 else AxisRange.disc(1.0) for a in alpha))
    return LaurentPolynomial({alpha: coeff}, validity)


def constant(value: complex, validity: Polyannulus) -> LaurentPolynomial:
    return LaurentPolynomial({(0,) * validity.dim: value}, validity, name=f"const({value})")


# -- one-variable rational functions ---------------------------------------


class SimplePole(AnalyticTestFunction):
    """residue / (z - p) in one variable, with the pole off the closed shadow.

    ``geometric(a)`` is 1/(a - z) and ``reciprocal(b)`` is 1/(z - b).
    """

    def __init__(self, pole: complex, residue: complex, validity: Polyannulus, name: str | None = None):
        self.pole = complex(pole)
        self.residue = complex(residue)
        super().__init__(validity)
        self.name = name or f"{self.residue}/(z-{self.pole})"

    def _check_validity(self, P):
        if P.dim != 1:
            raise DomainError("SimplePole is a function of one variable")
        ax = P.axes[0]
        p = abs(self.pole)
        if p > float(ax.R) * (1 + 1e-9):
            self._outer = True
        elif not ax.is_disc and p < float(ax.r) * (1 - 1e-9):
            self._outer = False
        else:
            raise DomainError(f"pole at modulus {p} meets the closure of {P}")

    def oracle_coeff(self, alpha):
        (k,) = alpha
        if self._outer:
            return -self.residue * self.pole ** (-(k + 1)) if k >= 0 else 0j
        return self.residue * self.pole ** (-k - 1) if k <= -1 else 0j

    def with_validity(self, P):
        return SimplePole(self.pole, self.residue, P, self.name)

    def _deriv(self, gamma, pts):
        (g,) = gamma
        z = pts[:, 0]
        return self.residue * (-1) ** g * math.factorial(g) / (z - self.pole) ** (g + 1)


def geometric(a: complex, validity: Polyannulus | None = None) -> SimplePole:
    """1/(a - z); defaults to the disc |z| < 2|a|/3."""
    if validity is None:
        validity = Polyannulus.polydisc(2 * abs(a) / 3)
    return SimplePole(a, -1.0, validity, name=f"1/({_fmt(a)}-z)")


def reciprocal(b: complex, validity: Polyannulus | None = None) -> SimplePole:
    """1/(z - b); defaults to the annulus 5|b| < |z| < 20|b|."""
    if validity is None:
        validity = Polyannulus.annuli([5 * abs(b)], [20 * abs(b)])
    return SimplePole(b, 1.0, validity, name=f"1/(z-{_fmt(b)})")


def _fmt(x) -> str:
    x = complex(x)
    return f"{x.real:g}" if x.imag == 0 else f"{x:g}"


class Lacunary(AnalyticTestFunction):
    """sum_k 2^(-k^2) z^(2^k) on the closed unit disc.

    Smooth up to |z| = 1 but the unit circle is its natural boundary.
    Derivatives of order g are summed up to K(g), the first index with
    sum_{k>K} 2^(-k^2) (2^k)^(g+1) < TAIL.
    """

    TAIL = 1e-14
    name = "lacunary"

    def __init__(self, validity: Polyannulus | None = None):
        super().__init__(validity or Polyannulus.polydisc(1.0))

    def _check_validity(self, P):
        if P.dim != 1 or float(P.axes[0].R) > 1.0:
            raise DomainError("lacunary series needs a one-variable cell inside the closed unit disc")

    @staticmethod
    @lru_cache(maxsize=None)
    def truncation(g: int) -> int:
        def tail(K):
            return math.fsum(2.0 ** (-k * k + k * (g + 1)) for k in range(K + 1, K + 200))

        K = 0
        while tail(K) >= Lacunary.TAIL:
            K += 1
        return K

    def oracle_coeff(self, alpha):
        (a,) = alpha
        if a >= 1 and a & (a - 1) == 0:
            k = a.bit_length() - 1
            return complex(2.0 ** (-k * k))
        return 0j

    def with_validity(self, P):
        return Lacunary(P)

    def _deriv(self, gamma, pts):
        (g,) = gamma
        z = pts[:, 0]
        out = np.zeros(len(z), dtype=complex)
        for k in range(self.truncation(g) + 1):
            e = 2**k
            ff = falling_factorial(e, g)
            if ff:
                out += (2.0 ** (-k * k) * ff) * z ** (e - g)
        return out


# -- two variables ---------------------------------------------------------


class Rational2D(AnalyticTestFunction):
    """1/(c - z1 z2), valid while R1 R2 < |c|.

    Mixed derivative: d^a/dz1^a gives a! z2^a (c - z1 z2)^-(a+1), and
    Leibniz in z2 finishes the job.
    """

    def __init__(self, c: complex, validity: Polyannulus | None = None):
        self.c = complex(c)
        if validity is None:
            rho = 0.95 * math.sqrt(abs(self.c))
            validity = Polyannulus.polydisc(rho, rho)
        super().__init__(validity)
        self.name = f"1/({_fmt(c)}-z1*z2)"

    def _check_validity(self, P):
        if P.dim != 2:
            raise DomainError("Rational2D is a function of two variables")
        R1, R2 = P.outer
        r1, r2 = P.inner
        if R1 * R2 >= abs(self.c) * (1 - 1e-9):
            raise DomainError(f"|z1 z2| reaches |c| = {abs(self.c)} on {P}")

    def oracle_coeff(self, alpha):
        a1, a2 = alpha
        if a1 == a2 and a1 >= 0:
            return self.c ** (-(a1 + 1))
        return 0j

    def with_validity(self, P):
        return Rational2D(self.c, P)

    def _deriv(self, gamma, pts):
        a, b = gamma
        z1, z2 = pts[:, 0], pts[:, 1]
        w = self.c - z1 * z2
        out = np.zeros(len(pts), dtype=complex)
        for i in range(min(a, b) + 1):
            # d^i z2^a times d^(b-i) (c - z1 z2)^-(a+1)
            rising = math.prod(range(a + 1, a + 1 + b - i))
            coef = math.comb(b, i) * falling_factorial(a, i) * rising * math.factorial(a)
            out += coef * z2 ** (a - i) * z1 ** (b - i) / w ** (a + 1 + b - i)
        return out


# -- combinators -----------------------------------------------------------


class Tensor(AnalyticTestFunction):
    """f(z') g(z'') in disjoint groups of variables."""

    def __init__(self, factors: Sequence[AnalyticTestFunction]):
        self.factors = tuple(factors)
        super().__init__(Polyannulus.product(*(f.validity for f in self.factors)))
        self.name = " (x) ".join(f.name for f in self.factors)

    def _splits(self):
        out, start = [], 0
        for f in self.factors:
            out.append(slice(start, start + f.dim))
            start += f.dim
        return out

    def oracle_coeff(self, alpha):
        alpha = tuple(alpha)
        c = 1 + 0j
        for f, s in zip(self.factors, self._splits()):
            c *= f.oracle_coeff(alpha[s])
            if c == 0:
                break
        return c

    def support(self):
        supports = [f.support() for f in self.factors]
        if any(s is None for s in supports):
            return None
        out = {(): 1 + 0j}
        for s in supports:
            out = {a + b: ca * cb for a, ca in out.items() for b, cb in s.items()}
        return out

    def with_validity(self, P):
        parts = [f.with_validity(Polyannulus(P.axes[s])) for f, s in zip(self.factors, self._splits())]
        return Tensor(parts)

    def _deriv(self, gamma, pts):
        out = np.ones(len(pts), dtype=complex)
        for f, s in zip(self.factors, self._splits()):
            out *= f._deriv(gamma[s], pts[:, s])
        return out

    def _deriv_grid(self, gamma, grid):
        out = np.ones((), dtype=complex)
        for f, s in zip(self.factors, self._splits()):
            part = f._deriv_grid(gamma[s], ProductGrid(grid.axes[s]))
            out = np.multiply.outer(out, part)
        return out


class Sum(AnalyticTestFunction):
    """Linear combination sum_i w_i f_i on the intersection of validities."""

    def __init__(self, terms: Sequence[AnalyticTestFunction], weights: Sequence[complex] | None = None,
                 validity: Polyannulus | None = None):
        terms = list(terms)
        if not terms:
            raise ConfigurationError("empty sum")
        self.weights = tuple(complex(w) for w in (weights if weights is not None else [1.0] * len(terms)))
        if len(self.weights) != len(terms):
            raise ConfigurationError("weights and terms differ in length")
        if validity is None:
            validity = terms[0].validity
            for t in terms[1:]:
                validity = validity.intersect(t.validity)
        self.terms = tuple(t if t.validity == validity else t.with_validity(validity) for t in terms)
        super().__init__(validity)
        self.name = " + ".join(t.name if w == 1 else f"{_fmt(w)}*({t.name})" for t, w in zip(self.terms, self.weights))

    def oracle_coeff(self, alpha):
        return sum(w * t.oracle_coeff(alpha) for t, w in zip(self.terms, self.weights))

    def support(self):
        out: dict = {}
        for t, w in zip(self.terms, self.weights):
            s = t.support()
            if s is None:
                return None
            for a, c in s.items():
                out[a] = out.get(a, 0) + w * c
        return out

    def with_validity(self, P):
        return Sum([t.with_validity(P) for t in self.terms], self.weights, P)

    def _deriv(self, gamma, pts):
        return sum(w * t._deriv(gamma, pts) for t, w in zip(self.terms, self.weights))

    def _deriv_grid(self, gamma, grid):
        return sum(w * t._deriv_grid(gamma, grid) for t, w in zip(self.terms, self.weights))


class Product(AnalyticTestFunction):
    """f g in the same variables (Leibniz rule for derivatives).

    Laurent coefficients are the convolution c(f) * c(g); the oracle is only
    available when one factor has finite support.
    """

    def __init__(self, f: AnalyticTestFunction, g: AnalyticTestFunction, validity: Polyannulus | None = None):
        validity = validity or f.validity.intersect(g.validity)
        self.f = f if f.validity == validity else f.with_validity(validity)
        self.g = g if g.validity == validity else g.with_validity(validity)
        super().__init__(validity)
        self.name = f"({f.name})*({g.name})"

    def oracle_coeff(self, alpha):
        alpha = tuple(alpha)
        for finite, other in ((self.f, self.g), (self.g, self.f)):
            s = finite.support()
            if s is not None:
                return sum(c * other.oracle_coeff(tuple(a - b for a, b in zip(alpha, beta))) for beta, c in s.items())
        raise NotImplementedError("product of two infinite Laurent series has no closed-form oracle")

    def support(self):
        sf, sg = self.f.support(), self.g.support()
        if sf is None or sg is None:
            return None
        out: dict = {}
        for a, ca in sf.items():
            for b, cb in sg.items():
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, 0) + ca * cb
        return out

    def with_validity(self, P):
        return Product(self.f.with_validity(P), self.g.with_validity(P), P)

    def _leibniz(self, gamma, left, right):
        out = 0
        for delta in nonnegative_indices(self.dim, max(gamma)):
            if any(d > g for d, g in zip(delta, gamma)):
                continue
            rest = tuple(g - d for g, d in zip(gamma, delta))
            binom = math.prod(math.comb(g, d) for g, d in zip(gamma, delta))
            out = out + binom * left(delta) * right(rest)
        return out

    def _deriv(self, gamma, pts):
        return self._leibniz(gamma, lambda d: self.f._deriv(d, pts), lambda d: self.g._deriv(d, pts))

    def _deriv_grid(self, gamma, grid):
        # factor derivatives are reused across gamma on the same grid
        held, cache = getattr(self, "_grid_cache", (None, None))
        if held is not grid:
            cache = {}
            self._grid_cache = (grid, cache)

        def part(h, tag, d):
            key = (tag, d)
            if key not in cache:
                cache[key] = h._deriv_grid(d, grid)
            return cache[key]

        return self._leibniz(gamma, lambda d: part(self.f, 0, d), lambda d: part(self.g, 1, d))


class Derivative(AnalyticTestFunction):
    """D^gamma f as a function in its own right."""

    def __init__(self, f: AnalyticTestFunction, gamma: Sequence[int]):
        self.f = f
        self.gamma = _as_index(gamma, f.dim)
        super().__init__(f.validity)
        self.name = f"D^{self.gamma} {f.name}"

    def _shift(self, delta):
        return tuple(a + b for a, b in zip(self.gamma, delta))

    def oracle_coeff(self, alpha):
        # D^gamma z^(alpha+gamma) = ff(alpha+gamma, gamma) z^alpha
        up = self._shift(alpha)
        ff = math.prod(falling_factorial(a, g) for a, g in zip(up, self.gamma))
        return ff * self.f.oracle_coeff(up) if ff else 0j

    def with_validity(self, P):
        return Derivative(self.f.with_validity(P), self.gamma)

    def _deriv(self, gamma, pts):
        return self.f._deriv(self._shift(gamma), pts)

    def _deriv_grid(self, gamma, grid):
        return self.f._deriv_grid(self._shift(gamma), grid)


# -- registry --------------------------------------------------------------


def _complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        return complex(x[0], x[1])
    return complex(x)


def make_function(spec: Mapping[str, Any]) -> AnalyticTestFunction:
    """Build a test function from a JSON-style description.

    ``{"name": "geometric", "a": 3, "validity": {"R": [2]}}`` and friends;
    see README for the full list.
    """
    spec = dict(spec)
    try:
        kind = spec.pop("name")
    except KeyError:
        raise ConfigurationError("function spec needs a 'name'") from None
    validity = Polyannulus.from_dict(spec.pop("validity")) if "validity" in spec else None
    try:
        if kind == "monomial":
            f = monomial(spec["alpha"], validity, _complex(spec.get("coeff", 1)))
        elif kind == "constant":
            validity = validity or Polyannulus.polydisc(*([1.0] * int(spec.get("dim", 1))))
            f = constant(_complex(spec.get("value", 1)), validity)
        elif kind == "laurent-polynomial":
            terms = {tuple(t[0]): _complex(t[1]) for t in spec["terms"]}
            if validity is None:
                n = len(next(iter(terms)))
                neg = [any(a[j] < 0 for a in terms) for j in range(n)]
                validity = Polyannulus(tuple(AxisRange(0.5, 2.0) if q else AxisRange.disc(1.0) for q in neg))
            f = LaurentPolynomial(terms, validity)
        elif kind == "geometric":
            f = geometric(_complex(spec["a"]), validity)
        elif kind == "reciprocal":
            f = reciprocal(_complex(spec["b"]), validity)
        elif kind == "rational2d":
            f = Rational2D(_complex(spec["c"]), validity)
        elif kind == "lacunary":
            f = Lacunary(validity)
        elif kind == "sum":
            parts = [make_function(t) for t in spec["terms"]]
            weights = [_complex(w) for w in spec["weights"]] if "weights" in spec else None
            f = Sum(parts, weights, validity)
        elif kind == "tensor":
            f = Tensor([make_function(t) for t in spec["factors"]])
        elif kind == "product":
            a, b = (make_function(t) for t in spec["factors"])
            f = Product(a, b, validity)
        else:
            raise ConfigurationError(f"unknown test function {kind!r}")
    except KeyError as exc:
        raise ConfigurationError(f"function {kind!r} is missing parameter {exc}") from None
    if validity is not None and f.validity != validity:
        f = f.with_validity(validity)
    return f


def hartogs_function() -> AnalyticTestFunction:
    """z1/z2 + 1/((3 - z1)(z2 - 1/10)): holomorphic on the Hartogs triangle
    away from z2 = 1/10, declared on one cover cell at a time."""
    cell = Polyannulus((AxisRange.disc(0.5), AxisRange(0.5, 0.75)))
    return Sum([monomial((1, -1), cell), Tensor([geometric(3.0), reciprocal(0.1)])], validity=cell)


def builtin_suite() -> list[AnalyticTestFunction]:
    """Every built-in family on its default validity cell."""
    unit = Polyannulus.polydisc(1.0)
    ring = Polyannulus.annuli([0.5], [2.0])
    return [
        constant(1.0, unit),
        monomial((5,), unit),
        monomial((-2,), ring),
        LaurentPolynomial({(3,): 1.0, (-1,): 2.0, (0,): -1.0}, ring),
        geometric(3.0),
        reciprocal(0.1),
        Sum([geometric(3.0, ring), reciprocal(0.1, ring)]),
        Lacunary(),
        monomial((1, 1), Polyannulus.polydisc(1.0, 1.0)),
        monomial((2, -1), Polyannulus((AxisRange.disc(1.0), AxisRange(0.5, 2.0)))),
        Rational2D(4.0),
        Tensor([geometric(3.0), reciprocal(0.1)]),
        Product(monomial((1, 0), Polyannulus.polydisc(1.0, 1.0)), Rational2D(4.0, Polyannulus.polydisc(1.0, 1.0))),
    ]
