"""Text formats. Indices in files are 1-based; colors and pair-function values
are written as in code (``0..k-1``).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from .errors import InvalidInput
from .geometry import PointSet, validate
from .lll import PairFunction
from .predicates import PredicateTable
from .ramsey import PairColoring, PointColoring

PathLike = Union[str, Path]


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_number(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"not a number: {tok!r}") from exc


def format_number(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _int(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError as exc:
        raise InvalidInput(f"{what} must be an integer, got {tok!r}") from exc


# ----------------------------------------------------------------- points


def parse_points(text: str) -> PointSet:
    pts = []
    for lineno, toks in _lines(text):
        if len(toks) != 2:
            raise InvalidInput(f"line {lineno}: expected '<x> <y>'")
        pts.append((parse_number(toks[0]), parse_number(toks[1])))
    return validate(pts)


def format_points(P: PointSet, comments: Iterable[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out += [f"{format_number(p.x)} {format_number(p.y)}" for p in P.points]
    return "\n".join(out) + "\n"


# ------------------------------------------------------- predicate tables


def _label(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def parse_table(text: str) -> PredicateTable:
    rows = list(_lines(text))
    if not rows:
        raise InvalidInput("empty predicate table")
    _, head = rows[0]
    if len(head) < 2:
        raise InvalidInput("header must be 'n k <labels>'")
    n, k = _int(head[0], "n"), _int(head[1], "k")
    labels = [_label(t) for t in head[2:]]
    if len(labels) != k:
        raise InvalidInput(f"header lists {len(labels)} labels, expected k={k}")
    values = {}
    for lineno, toks in rows[1:]:
        if len(toks) != 3:
            raise InvalidInput(f"line {lineno}: expected 'i j <label>'")
        i, j = _int(toks[0], "i") - 1, _int(toks[1], "j") - 1
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise InvalidInput(f"line {lineno}: bad pair ({i + 1}, {j + 1})")
        values[(i, j)] = _label(toks[2])
    if len(values) != n * (n - 1):
        raise InvalidInput(f"table has {len(values)} entries, expected {n * (n - 1)}")
    return PredicateTable.from_values(n, labels, values)


def format_table(T: PredicateTable) -> str:
    out = [" ".join([str(T.n), str(T.k)] + [str(z) for z in T.codomain])]
    # permutations() already yields the pairs in lexicographic order
    out += [f"{i + 1} {j + 1} {T[i, j]}" for i, j in itertools.permutations(range(T.n), 2)]
    return "\n".join(out) + "\n"


# -------------------------------------------------------------- colorings


def _header(rows):
    if not rows:
        raise InvalidInput("empty file")
    _, head = rows[0]
    if len(head) != 2:
        raise InvalidInput("header must be 'n k'")
    return _int(head[0], "n"), _int(head[1], "k")


def parse_pair_coloring(text: str) -> PairColoring:
    rows = list(_lines(text))
    n, k = _header(rows)
    colors = {}
    for lineno, toks in rows[1:]:
        if len(toks) != 3:
            raise InvalidInput(f"line {lineno}: expected 'i j c'")
        i, j = sorted((_int(toks[0], "i") - 1, _int(toks[1], "j") - 1))
        if not 0 <= i < j < n:
            raise InvalidInput(f"line {lineno}: bad pair")
        colors[(i, j)] = _int(toks[2], "color")
    return PairColoring.from_dict(n, k, colors)


def format_pair_coloring(c: PairColoring) -> str:
    out = [f"{c.n} {c.k}"]
    out += [f"{i + 1} {j + 1} {col}" for (i, j), col in c.as_dict().items()]
    return "\n".join(out) + "\n"


def parse_point_coloring(text: str) -> PointColoring:
    rows = list(_lines(text))
    n, k = _header(rows)
    colors: dict = {}
    for lineno, toks in rows[1:]:
        if len(toks) != 2:
            raise InvalidInput(f"line {lineno}: expected 'i c'")
        colors[_int(toks[0], "i") - 1] = _int(toks[1], "color")
    if sorted(colors) != list(range(n)):
        raise InvalidInput("point coloring must color every point exactly once")
    return PointColoring(n, k, tuple(colors[i] for i in range(n)))


def format_point_coloring(c: PointColoring) -> str:
    return "\n".join([f"{c.n} {c.k}"] + [f"{i + 1} {col}" for i, col in enumerate(c.colors)]) + "\n"


# --------------------------------------------------------- pair functions


def parse_pair_function(text: str) -> PairFunction:
    rows = list(_lines(text))
    n, k = _header(rows)
    v = np.full((n, n), -1, dtype=np.int64)
    seen = 0
    for lineno, toks in rows[1:]:
        if len(toks) != 3:
            raise InvalidInput(f"line {lineno}: expected 'i j v'")
        i, j = _int(toks[0], "i") - 1, _int(toks[1], "j") - 1
        if not (0 <= i < n and 0 <= j < n) or i == j or v[i, j] >= 0:
            raise InvalidInput(f"line {lineno}: bad or repeated pair")
        v[i, j] = _int(toks[2], "value")
        seen += 1
    if seen != n * (n - 1):
        raise InvalidInput(f"pair function has {seen} entries, expected {n * (n - 1)}")
    return PairFunction(n, k, v)


def format_pair_function(f: PairFunction) -> str:
    out = [f"{f.n} {f.k}"]
    out += [f"{i + 1} {j + 1} {f(i, j)}" for i, j in itertools.permutations(range(f.n), 2)]
    return "\n".join(out) + "\n"


# ------------------------------------------------------------------ files


def read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc


def read_points(path: PathLike) -> PointSet:
    return parse_points(read_text(path))


def write_text(text: str, path: Optional[PathLike]) -> None:
    if path is None:
        return
    Path(path).write_text(text, encoding="utf-8")
