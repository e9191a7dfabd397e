"""Reinhardt geometry: polyannuli, shadows, sampling grids and covers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError

# relative slack when testing membership in a closure
CLOSURE_RTOL = 1e-12


@dataclass(frozen=True)
class AxisRange:
    """One factor of a polyannulus: r < |z| < R, or |z| < R when r == 0."""

    r: Any
    R: Any

    def __post_init__(self):
        if not (0 < self.R < math.inf):
            raise ConfigurationError(f"outer radius must be positive and finite, got {self.R}")
        if not (0 <= self.r < self.R):
            raise ConfigurationError(f"need 0 <= r < R, got r={self.r}, R={self.R}")

    @classmethod
    def disc(cls, R) -> AxisRange:
        return cls(0, R)

    @property
    def kind(self) -> str:
        return "disc" if self.r == 0 else "annular"

    @property
    def is_disc(self) -> bool:
        return self.r == 0

    def contains(self, modulus: float) -> bool:
        return (self.is_disc or float(self.r) < modulus) and modulus < float(self.R)

    def closure_contains(self, modulus: float) -> bool:
        lo = float(self.r) * (1 - CLOSURE_RTOL)
        hi = float(self.R) * (1 + CLOSURE_RTOL)
        return lo <= modulus <= hi

    def default_radius(self) -> float:
        if self.is_disc:
            return float(self.R) / 2
        return math.sqrt(float(self.r) * float(self.R))

    def within(self, other: AxisRange) -> bool:
        """Closure of self is inside closure of other."""
        if other.is_disc:
            return self.R <= other.R
        return not self.is_disc and other.r <= self.r and self.R <= other.R

    def intersect(self, other: AxisRange) -> AxisRange:
        return AxisRange(max(self.r, other.r), min(self.R, other.R))

    def to_dict(self) -> dict:
        return {"r": _num(self.r), "R": _num(self.R)}


def _num(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    return x


@dataclass(frozen=True)
class Polyannulus:
    axes: tuple[AxisRange, ...]

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not self.axes:
            raise ConfigurationError("a polyannulus needs at least one axis")

    @classmethod
    def polydisc(cls, *R) -> Polyannulus:
        return cls(tuple(AxisRange.disc(x) for x in R))

    @classmethod
    def annuli(cls, r: Sequence, R: Sequence) -> Polyannulus:
        if len(r) != len(R):
            raise ConfigurationError("r and R must have equal length")
        return cls(tuple(AxisRange(a, b) for a, b in zip(r, R)))

    @classmethod
    def product(cls, *parts: Polyannulus) -> Polyannulus:
        return cls(tuple(ax for p in parts for ax in p.axes))

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def inner(self) -> np.ndarray:
        return np.array([float(a.r) for a in self.axes])

    @property
    def outer(self) -> np.ndarray:
        return np.array([float(a.R) for a in self.axes])

    @property
    def disc_axes(self) -> tuple[bool, ...]:
        return tuple(a.is_disc for a in self.axes)

    def default_radii(self) -> tuple[float, ...]:
        return tuple(a.default_radius() for a in self.axes)

    def contains(self, z) -> bool:
        z = np.asarray(z, dtype=complex).reshape(-1)
        if z.size != self.dim:
            raise DomainError(f"point has dimension {z.size}, polyannulus has {self.dim}")
        return all(ax.contains(abs(zj)) for ax, zj in zip(self.axes, z))

    def closure_contains_moduli(self, moduli) -> np.ndarray:
        """Vectorised closure test on an array of shadows (..., n)."""
        moduli = np.asarray(moduli, dtype=float)
        lo = self.inner * (1 - CLOSURE_RTOL)
        hi = self.outer * (1 + CLOSURE_RTOL)
        return np.all((moduli >= lo) & (moduli <= hi), axis=-1)

    def within(self, other: Polyannulus) -> bool:
        return self.dim == other.dim and all(a.within(b) for a, b in zip(self.axes, other.axes))

    def intersect(self, other: Polyannulus) -> Polyannulus:
        if self.dim != other.dim:
            raise ConfigurationError("dimension mismatch")
        return Polyannulus(tuple(a.intersect(b) for a, b in zip(self.axes, other.axes)))

    def outer_weight(self) -> float:
        """prod_j (1 + R_j^2)."""
        return float(np.prod(1.0 + self.outer**2))

    def to_dict(self) -> dict:
        return {"r": [_num(a.r) for a in self.axes], "R": [_num(a.R) for a in self.axes]}

    @classmethod
    def from_dict(cls, d: dict) -> Polyannulus:
        R = d["R"]
        r = d.get("r", [0] * len(R))
        return cls.annuli([_parse_num(x) for x in r], [_parse_num(x) for x in R])

    def __str__(self) -> str:
        parts = []
        for a in self.axes:
            parts.append(f"|z|<{a.R}" if a.is_disc else f"{a.r}<|z|<{a.R}")
        return " x ".join(parts)


def _parse_num(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


def shadow(z) -> tuple[float, ...]:
    """Componentwise modulus (|z_1|, ..., |z_n|)."""
    return tuple(float(abs(zj)) for zj in np.asarray(z, dtype=complex).reshape(-1))


def sample_shadow(P: Polyannulus, res: int) -> np.ndarray:
    """Closed uniform radial grid, res points per axis; shape (res**n, n).

    Grids with res and 2*res - 1 points are nested, so that is the
    refinement that can only increase sampled maxima.
    """
    if res < 2:
        raise ConfigurationError("res must be >= 2")
    axes = radial_axes(P, res)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, P.dim)


def radial_axes(P: Polyannulus, res: int) -> list[np.ndarray]:
    return [np.linspace(float(a.r), float(a.R), res) for a in P.axes]


@dataclass(frozen=True)
class ProductGrid:
    """A product of per-axis complex sample sets.

    Points are indexed in C order over the axes; many evaluations exploit
    the product structure instead of materialising every point.
    """

    axes: tuple[np.ndarray, ...]

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack(mesh, axis=-1).reshape(-1, len(self.axes))

    def point(self, flat_index: int) -> tuple[complex, ...]:
        idx = np.unravel_index(flat_index, self.shape)
        return tuple(complex(a[i]) for a, i in zip(self.axes, idx))


def sample_grid(P: Polyannulus, res: int = 32, angles: int = 16) -> ProductGrid:
    """Closed radial grid times equispaced angles on every axis."""
    if angles < 1:
        raise ConfigurationError("angles must be >= 1")
    theta = 2 * np.pi * np.arange(angles) / angles
    rot = np.exp(1j * theta)
    axes = tuple((rad[:, None] * rot[None, :]).reshape(-1) for rad in radial_axes(P, res))
    return ProductGrid(axes)


def boundary_grid(P: Polyannulus, angles: int) -> ProductGrid:
    """Angles on the boundary circles only: r_j (if annular) and R_j."""
    theta = 2 * np.pi * np.arange(angles) / angles
    rot = np.exp(1j * theta)
    axes = []
    for a in P.axes:
        radii = [float(a.R)] if a.is_disc else [float(a.r), float(a.R)]
        axes.append(np.concatenate([rho * rot for rho in radii]))
    return ProductGrid(tuple(axes))


def random_points(P: Polyannulus, count: int, rng: np.random.Generator, margin: float = 0.0) -> np.ndarray:
    """Points with moduli uniform in the (optionally shrunk) open shadow."""
    out = np.empty((count, P.dim), dtype=complex)
    for j, a in enumerate(P.axes):
        lo, hi = float(a.r), float(a.R)
        span = hi - lo
        lo, hi = lo + margin * span, hi - margin * span
        rho = rng.uniform(lo, hi, size=count)
        # uniform draws may land on lo exactly; nudge inside
        rho = np.where(rho <= float(a.r), np.nextafter(float(a.r), np.inf), rho)
        phase = rng.uniform(0, 2 * np.pi, size=count)
        out[:, j] = rho * np.exp(1j * phase)
    return out


# -- built-in Reinhardt domains ---------------------------------------------

DOMAIN_KINDS = ("polydisc", "annulus-product", "hartogs-triangle")


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            raise ConfigurationError(f"unknown domain kind {self.kind!r}; expected one of {DOMAIN_KINDS}")

    @classmethod
    def from_dict(cls, d: dict) -> DomainSpec:
        d = dict(d)
        try:
            kind = d.pop("kind")
        except KeyError:
            raise ConfigurationError("domain spec needs a 'kind'") from None
        return cls(kind, d)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    @property
    def dim(self) -> int:
        if self.kind == "hartogs-triangle":
            return 2
        return len(self.params["R"])

    def contains(self, z) -> bool:
        z = np.asarray(z, dtype=complex).reshape(-1)
        if self.kind == "hartogs-triangle":
            return abs(z[0]) < abs(z[1]) < 1
        return self.polyannulus().contains(z)

    def polyannulus(self) -> Polyannulus:
        if self.kind == "polydisc":
            return Polyannulus.polydisc(*[_parse_num(x) for x in self.params["R"]])
        if self.kind == "annulus-product":
            return Polyannulus.from_dict(self.params)
        raise ConfigurationError(f"{self.kind} is not a polyannulus")


@dataclass(frozen=True)
class ReinhardtCover:
    cells: tuple[Polyannulus, ...]
    label: str


def rational_cover(spec: DomainSpec | dict, depth: int) -> ReinhardtCover:
    """Finite cover of a built-in domain by rational-radius polyannuli.

    Polydiscs and annulus products are their own single cell.  The Hartogs
    triangle {|z1| < |z2| < 1} at depth d uses the dyadic level L = d + 1:
    cells {|z1| < b, b < |z2| < 1 - 2^-L} for dyadic b = i / 2^L.  Each
    depth-d cell sits inside the depth-(d+1) cell with the same b, and the
    union exhausts the triangle as d grows.
    """
    if isinstance(spec, dict):
        spec = DomainSpec.from_dict(spec)
    if depth < 1:
        raise ConfigurationError("depth must be a positive integer")
    if spec.kind in ("polydisc", "annulus-product"):
        P = spec.polyannulus()
        P = Polyannulus(tuple(AxisRange(_rational(a.r), _rational(a.R)) for a in P.axes))
        return ReinhardtCover((P,), spec.kind)
    level = depth + 1
    denom = 2**level
    top = Fraction(denom - 1, denom)
    cells = []
    for i in range(1, denom - 1):
        b = Fraction(i, denom)
        cells.append(Polyannulus((AxisRange.disc(b), AxisRange(b, top))))
    return ReinhardtCover(tuple(cells), spec.kind)


def _rational(x) -> Fraction:
    return Fraction(x).limit_denominator(10**9) if not isinstance(x, Fraction) else x
