"""Seeded generators for test corpora. Every generated set passes ``validate``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidInput
from .geometry import PointSet, interior_points, validate

GENERATORS = ("random-grid", "cup", "cap", "wheel", "convex")


@dataclass(frozen=True)
class CorpusSpec:
    count: int
    min_size: int
    max_size: int
    generator: str = "random-grid"
    seed: int = 0

    def __post_init__(self):
        if self.count < 0:
            raise InvalidInput("count must be non-negative")
        if not 1 <= self.min_size <= self.max_size:
            raise InvalidInput("sizes must satisfy 1 <= min_size <= max_size")
        if self.generator not in GENERATORS:
            raise InvalidInput(f"unknown generator {self.generator!r}; choose from {', '.join(GENERATORS)}")


def random_grid(n: int, rng, span: int = 0) -> PointSet:
    """Integer points, rejected until in general position with distinct x."""
    span = span or max(16, 4 * n)
    while True:
        xs = rng.choice(span, size=n, replace=False)
        ys = rng.integers(0, span, size=n)
        try:
            return validate([(int(x), int(y)) for x, y in zip(xs, ys)])
        except InvalidInput:
            continue


def parabola(n: int, rng, sign: int = 1) -> PointSet:
    """Cup (``sign=1``) or cap (``sign=-1``) on ``y = sign * x^2``."""
    xs = sorted(int(x) for x in rng.choice(max(16, 4 * n), size=n, replace=False))
    return validate([(x, sign * x * x) for x in xs])


def _circle_point(t: Fraction):
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def convex(n: int, rng) -> PointSet:
    """Rational points on the unit circle; distinct ``|t|`` give distinct x."""
    q = 4 * n
    ms = rng.choice(np.arange(1, 3 * q + 1), size=n, replace=False)
    signs = rng.choice([-1, 1], size=n)
    return validate([_circle_point(Fraction(int(s) * int(m), q)) for s, m in zip(signs, ms)])


def wheel(n: int, rng, interior: bool = True) -> PointSet:
    """Convex ``n-1`` points plus one point inside a triangle of them."""
    if n < 4 or not interior:
        return convex(n, rng)
    while True:
        hull = convex(n - 1, rng)
        a, b, c = (hull[int(i)] for i in rng.choice(n - 1, size=3, replace=False))
        cx, cy = (a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3
        for attempt in range(8):
            jitter = Fraction(int(rng.integers(-50, 51)), 1000 * (attempt + 1))
            try:
                W = validate(list(hull.points) + [(cx + jitter, cy + jitter / 3)])
            except InvalidInput:
                continue
            if len(interior_points(W)) == 1:
                return W


def generate(spec: CorpusSpec) -> list:
    rng = np.random.default_rng(spec.seed)
    out = []
    for _ in range(spec.count):
        n = int(rng.integers(spec.min_size, spec.max_size + 1))
        if spec.generator == "random-grid":
            out.append(random_grid(n, rng))
        elif spec.generator == "cup":
            out.append(parabola(n, rng, 1))
        elif spec.generator == "cap":
            out.append(parabola(n, rng, -1))
        elif spec.generator == "convex":
            out.append(convex(n, rng))
        else:
            out.append(wheel(n, rng))
    return out
