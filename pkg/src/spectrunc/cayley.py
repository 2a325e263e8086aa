"""Group engine: element arithmetic, word metrics, balls, and growth.

Elements are integer coordinate tuples in a fixed normal form, so they hash
and compare cheaply.  Built-in groups are the free abelian groups Z^d and the
discrete Heisenberg group; any object exposing ``identity`` / ``multiply`` /
``inverse`` / ``generators`` over hashable tuples with a unique normal form
can be dropped in alongside them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

Element = tuple

DEFAULT_BALL_CAP = 200_000

_INT_TYPES = (int, np.integer)


class ResourceCapError(RuntimeError):
    """A ball enumeration grew past the configured element cap."""


@dataclass(frozen=True)
class FreeAbelian:
    """Z^d with the 2d standard generators, plus and minus each unit vector."""

    dim: int

    def __post_init__(self) -> None:
        if not isinstance(self.dim, _INT_TYPES) or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")

    @property
    def name(self) -> str:
        return f"z:{self.dim}"

    @property
    def generators(self) -> tuple[Element, ...]:
        gens = []
        for i in range(self.dim):
            unit = tuple(1 if j == i else 0 for j in range(self.dim))
            gens.append(unit)
            gens.append(tuple(-c for c in unit))
        return tuple(gens)

    def identity(self) -> Element:
        return (0,) * self.dim

    def multiply(self, g: Element, h: Element) -> Element:
        self.validate(g)
        self.validate(h)
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g: Element) -> Element:
        self.validate(g)
        return tuple(-a for a in g)

    def validate(self, g) -> None:
        if (
            not isinstance(g, tuple)
            or len(g) != self.dim
            or not all(isinstance(a, _INT_TYPES) for a in g)
        ):
            raise ValueError(f"{g!r} is not a valid element of {self.name}")


@dataclass(frozen=True)
class Heisenberg:
    """Discrete Heisenberg group in normal-form coordinates (x, y, z).

    The product is (x1,y1,z1)(x2,y2,z2) = (x1+x2, y1+y2, z1+z2+x1*y2), which
    matches upper unitriangular integer matrices with x above the diagonal in
    the first row, y in the second, and z in the corner.  Generators are
    a = (1,0,0), b = (0,1,0) and their inverses.
    """

    @property
    def name(self) -> str:
        return "heisenberg"

    @property
    def generators(self) -> tuple[Element, ...]:
        return ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0))

    def identity(self) -> Element:
        return (0, 0, 0)

    def multiply(self, g: Element, h: Element) -> Element:
        self.validate(g)
        self.validate(h)
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    def inverse(self, g: Element) -> Element:
        self.validate(g)
        return (-g[0], -g[1], g[0] * g[1] - g[2])

    def validate(self, g) -> None:
        if not isinstance(g, tuple) or len(g) != 3 or not all(isinstance(a, _INT_TYPES) for a in g):
            raise ValueError(f"{g!r} is not a valid element of heisenberg")


def group_from_key(key: str):
    """Parse a group selection string, either ``z:<d>`` or ``heisenberg``."""
    k = key.strip().lower()
    if k == "heisenberg":
        return Heisenberg()
    if k.startswith("z:"):
        try:
            dim = int(k[2:])
        except ValueError:
            raise ValueError(f"bad dimension in group key {key!r}") from None
        return FreeAbelian(dim)
    raise ValueError(f"unknown group key {key!r} (expected 'z:<d>' or 'heisenberg')")


class Ball:
    """Enumerated closed ball with a fixed element order and exact word lengths.

    Elements appear in BFS layer order with each layer sorted
    lexicographically, so indexing is deterministic across runs.
    """

    __slots__ = ("group", "radius", "elements", "index", "lengths")

    def __init__(self, group, radius: int, elements: tuple, index: dict, lengths: tuple):
        self.group = group
        self.radius = radius
        self.elements = elements
        self.index = index
        self.lengths = lengths

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.index

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def length_of(self, g) -> int:
        """Exact word length of a ball member."""
        return self.lengths[self.index[g]]

    def __repr__(self) -> str:
        return f"Ball({self.group.name}, radius={self.radius}, size={len(self)})"


_BALL_CACHE: dict = {}


def ball(group, radius: int, cap: Optional[int] = None) -> Ball:
    """Closed word-metric ball of the given radius around the identity.

    Raises ResourceCapError if the enumeration would exceed ``cap`` elements
    (default 200,000).  Results are cached per (group, radius).
    """
    if not isinstance(radius, _INT_TYPES) or radius < 0:
        raise ValueError(f"radius must be a nonnegative integer, got {radius!r}")
    cap = DEFAULT_BALL_CAP if cap is None else cap
    cached = _BALL_CACHE.get((group, radius))
    if cached is not None:
        if len(cached) > cap:
            raise ResourceCapError(
                f"ball of radius {radius} in {group.name} has {len(cached)} elements, "
                f"over the cap of {cap}"
            )
        return cached

    e = group.identity()
    elements = [e]
    lengths = [0]
    index = {e: 0}
    frontier = [e]
    for depth in range(1, radius + 1):
        grown = set()
        for g in frontier:
            for s in group.generators:
                h = group.multiply(g, s)
                if h not in index and h not in grown:
                    grown.add(h)
        if not grown:
            break
        if len(index) + len(grown) > cap:
            raise ResourceCapError(
                f"ball of radius {radius} in {group.name} exceeds the cap of {cap} elements"
            )
        frontier = sorted(grown)
        for h in frontier:
            index[h] = len(elements)
            elements.append(h)
            lengths.append(depth)
    b = Ball(group, radius, tuple(elements), index, tuple(lengths))
    _BALL_CACHE[(group, radius)] = b
    return b


def _length_lower_bound(group, g) -> int:
    if isinstance(group, Heisenberg):
        return abs(g[0]) + abs(g[1])
    return 0


def word_length(group, g, cap: Optional[int] = None) -> int:
    """Length of a shortest generator word for g (0 for the identity)."""
    group.validate(g)
    if isinstance(group, FreeAbelian):
        return int(sum(abs(a) for a in g))
    radius = _length_lower_bound(group, g)
    while True:
        b = ball(group, radius, cap=cap)
        if g in b:
            return b.length_of(g)
        radius += 1


def ball_overlap(group, x, radius: int, cap: Optional[int] = None) -> int:
    """Size of the intersection of the ball with its left translate by x."""
    b = ball(group, radius, cap=cap)
    xi = group.inverse(x)
    hits = 0
    index = b.index
    mul = group.multiply
    for y in b.elements:
        if mul(xi, y) in index:
            hits += 1
    return hits


def folner_deficit(group, x, radius: int, cap: Optional[int] = None) -> int:
    """Number of ball elements lost under left translation by x."""
    b = ball(group, radius, cap=cap)
    return len(b) - ball_overlap(group, x, radius, cap=cap)


@dataclass(frozen=True)
class GrowthReport:
    """Ball-size statistics with log-log fits of growth and boundary decay.

    ``ball_sizes[r]`` is the size of the radius-r ball for r = 0..lam_max.
    ``boundary_ratios[r-1]`` is the exact sphere-to-ball ratio
    (size[r+1]-size[r])/size[r] for r = 1..lam_max-1.  ``fitted_beta`` is the
    decay exponent of the boundary ratios and ``fitted_degree`` the growth
    degree of the ball sizes, both least-squares slopes over ``fit_window``.
    """

    group_name: str
    ball_sizes: tuple
    boundary_ratios: tuple
    fitted_beta: float
    fitted_degree: float
    fit_window: tuple

    def ratio_at(self, radius: int) -> Fraction:
        if radius < 1 or radius - 1 >= len(self.boundary_ratios):
            raise ValueError(f"no boundary ratio recorded at radius {radius}")
        return self.boundary_ratios[radius - 1]


def growth_report(group, lam_max: int, fit_min: int = 2, cap: Optional[int] = None) -> GrowthReport:
    """Enumerate balls up to lam_max and fit growth/boundary exponents."""
    if lam_max < 2:
        raise ValueError(f"lam_max must be at least 2, got {lam_max}")
    sizes = [len(ball(group, r, cap=cap)) for r in range(lam_max + 1)]
    ratios = [Fraction(sizes[r + 1] - sizes[r], sizes[r]) for r in range(1, lam_max)]
    hi = lam_max - 1
    lo = min(max(1, fit_min), hi)
    radii = np.arange(lo, hi + 1)
    logs = np.log(radii.astype(float))
    ratio_logs = np.log([float(ratios[r - 1]) for r in radii])
    size_logs = np.log([float(sizes[r]) for r in radii])
    if len(radii) < 2:
        beta = float("nan")
        degree = float("nan")
    else:
        beta = -float(np.polyfit(logs, ratio_logs, 1)[0])
        degree = float(np.polyfit(logs, size_logs, 1)[0])
    return GrowthReport(
        group_name=group.name,
        ball_sizes=tuple(sizes),
        boundary_ratios=tuple(ratios),
        fitted_beta=beta,
        fitted_degree=degree,
        fit_window=(int(lo), int(hi)),
    )
