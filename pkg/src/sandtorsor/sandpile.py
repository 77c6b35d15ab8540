"""Divisors, the graph Laplacian and the sandpile group Pic^0.

Sign convention: the Laplacian has ``-deg(v)`` on the diagonal and edge
multiplicities off it, and firing ``v`` adds column ``v`` to a divisor.
All linear algebra is exact integer arithmetic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import (
    DegreeMismatch,
    FormatError,
    NonzeroDegree,
    PropertyOneFails,
    PropertyTwoFails,
    UnknownVertex,
)
from .graph import Multigraph

__all__ = [
    "Divisor",
    "PicElement",
    "divisor",
    "laplacian",
    "fire",
    "is_principal",
    "equivalent",
    "canonical_form",
    "is_reduced",
    "group_order",
    "enumerate_group",
    "invariant_factors",
    "smith_diagonal",
    "class_key",
    "induced_iso_vgen",
]


class Divisor(Mapping):
    """Immutable integer chip vector over a fixed, sorted vertex tuple."""

    __slots__ = ("_vertices", "_values", "_index")

    def __init__(self, chips: Mapping[str, int], vertices: Iterable[str] | None = None):
        if vertices is None:
            vertices = sorted(chips)
        else:
            vertices = tuple(sorted(vertices))
            unknown = set(chips) - set(vertices)
            if unknown:
                raise UnknownVertex(f"divisor mentions unknown vertex {min(unknown)!r}")
        self._vertices = tuple(vertices)
        self._values = tuple(int(chips.get(v, 0)) for v in self._vertices)
        self._index = None

    @classmethod
    def _from_values(cls, vertices, values):
        d = cls.__new__(cls)
        d._vertices = vertices
        d._values = tuple(values)
        d._index = None
        return d

    @classmethod
    def zero(cls, vertices):
        vertices = tuple(sorted(vertices))
        return cls._from_values(vertices, (0,) * len(vertices))

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def values(self) -> tuple:
        return self._values

    @property
    def degree(self) -> int:
        return sum(self._values)

    def __getitem__(self, v):
        if self._index is None:
            self._index = {x: i for i, x in enumerate(self._vertices)}
        try:
            return self._values[self._index[v]]
        except KeyError:
            raise UnknownVertex(v) from None

    def __iter__(self):
        return iter(self._vertices)

    def __len__(self):
        return len(self._vertices)

    def __hash__(self):
        return hash((self._vertices, self._values))

    def __eq__(self, other):
        if isinstance(other, Divisor):
            return self._vertices == other._vertices and self._values == other._values
        return NotImplemented

    def _check(self, other):
        if not isinstance(other, Divisor) or other._vertices != self._vertices:
            raise ValueError("divisors live on different vertex sets")

    def __add__(self, other):
        self._check(other)
        return Divisor._from_values(
            self._vertices, (a + b for a, b in zip(self._values, other._values))
        )

    def __sub__(self, other):
        self._check(other)
        return Divisor._from_values(
            self._vertices, (a - b for a, b in zip(self._values, other._values))
        )

    def __neg__(self):
        return Divisor._from_values(self._vertices, (-a for a in self._values))

    def __mul__(self, k: int):
        return Divisor._from_values(self._vertices, (k * a for a in self._values))

    __rmul__ = __mul__

    def literal(self) -> str:
        """``v1=1,w1=-1`` with every vertex listed in id order."""
        return ",".join(f"{v}={c}" for v, c in zip(self._vertices, self._values))

    def __str__(self):
        return self.literal()

    def __repr__(self):
        return f"Divisor({self.literal()})"

    @classmethod
    def parse(cls, text: str, vertices: Iterable[str]) -> "Divisor":
        """Parse a divisor literal; omitted vertices get zero chips."""
        chips = {}
        text = text.strip()
        if text and text != "0":
            for item in text.split(","):
                name, sep, count = item.partition("=")
                if not sep:
                    raise FormatError(f"bad divisor term {item!r}")
                name = name.strip()
                if name in chips:
                    raise FormatError(f"vertex {name!r} given twice")
                try:
                    chips[name] = int(count)
                except ValueError:
                    raise FormatError(f"bad chip count {count!r}") from None
        return cls(chips, vertices)


def divisor(graph: Multigraph, chips: Mapping[str, int] | None = None) -> Divisor:
    return Divisor(chips or {}, graph.vertices)


@dataclass(frozen=True)
class PicElement:
    """A sandpile group element, held as its basepoint-reduced representative."""

    basepoint: str
    rep: Divisor

    def __str__(self):
        return self.rep.literal()


# ---------------------------------------------------------------------------
# exact integer linear algebra


def _det(matrix) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _inverse(matrix):
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _smith(matrix):
    """Smith normal form of a square integer matrix.

    Returns ``(diagonal, U)`` with ``U`` unimodular and ``U @ A @ V`` diagonal
    for some unimodular ``V`` (not tracked).
    """
    a = [list(row) for row in matrix]
    n = len(a)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            a[t], a[i] = a[i], a[t]
            u[t], u[i] = u[i], u[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            p = a[t][t]
            clean = True
            for i in range(t + 1, n):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if a[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return [a[i][i] for i in range(n)], u


class _Reduced:
    """Reduced Laplacian data for one (graph, excluded vertex) pair.

    ``m`` is the positive-diagonal reduced Laplacian on the non-``q``
    vertices; unfiring a non-``q`` vertex ``u`` adds column ``u`` of ``m``
    to the off-``q`` chip vector.
    """

    def __init__(self, graph: Multigraph, q: str):
        if q not in graph.incident:
            raise UnknownVertex(q)
        self.q = q
        self.vertices = graph.vertices
        self.others = tuple(v for v in graph.vertices if v != q)
        self.pos = [graph.vertices.index(v) for v in self.others]
        self.qpos = graph.vertices.index(q)
        mult = graph.multiplicity
        self.mult = [[mult.get((a, b), 0) for b in self.others] for a in self.others]
        self.to_q = [mult.get((a, q), 0) for a in self.others]
        self.deg = [graph.degree(a) for a in self.others]
        n = len(self.others)
        self.m = [
            [self.deg[i] if i == j else -self.mult[i][j] for j in range(n)]
            for i in range(n)
        ]
        self.det = _det(self.m)
        inv = _inverse(self.m)
        self.adj = [[int(x * self.det) for x in row] for row in inv]
        diag, self.u = _smith(self.m)
        self.diag = diag

    def off(self, d: Divisor) -> list:
        vals = d.values
        return [vals[p] for p in self.pos]

    def to_divisor(self, x, degree):
        vals = [0] * len(self.vertices)
        for p, c in zip(self.pos, x):
            vals[p] = c
        vals[self.qpos] = degree - sum(x)
        return Divisor._from_values(self.vertices, vals)

    def effective(self, x):
        """An equivalent off-q vector with every entry nonnegative."""
        n = len(x)
        rhs = [self.deg[i] - x[i] for i in range(n)]
        z = [
            -((-sum(self.adj[i][j] * rhs[j] for j in range(n))) // self.det)
            for i in range(n)
        ]
        return [x[i] + sum(self.m[i][j] * z[j] for j in range(n)) for i in range(n)]

    def dhar(self, x):
        """Reduce a nonnegative off-q vector with repeated burning passes."""
        x = list(x)
        n = len(x)
        while True:
            burnt = [False] * n
            exposure = list(self.to_q)
            changed = True
            while changed:
                changed = False
                for i in range(n):
                    if not burnt[i] and x[i] < exposure[i]:
                        burnt[i] = True
                        changed = True
                        for j in range(n):
                            exposure[j] += self.mult[j][i]
            unburnt = [i for i in range(n) if not burnt[i]]
            if not unburnt:
                return x
            for i in unburnt:
                x[i] -= exposure[i]
                for j in range(n):
                    if burnt[j]:
                        x[j] += self.mult[j][i]

    def coords(self, x):
        return tuple(
            sum(self.u[i][j] * x[j] for j in range(len(x))) % d
            for i, d in enumerate(self.diag)
            if d > 1
        )


@lru_cache(maxsize=4096)
def _reduced(graph: Multigraph, q: str) -> _Reduced:
    return _Reduced(graph, q)


def _as_divisor(graph: Multigraph, d) -> Divisor:
    if isinstance(d, PicElement):
        d = d.rep
    if isinstance(d, Divisor) and d.vertices == graph.vertices:
        return d
    return Divisor(dict(d), graph.vertices)


# ---------------------------------------------------------------------------
# public operations


def laplacian(graph: Multigraph) -> tuple:
    """Laplacian as a tuple of rows, indexed by ``graph.vertices``."""
    mult = graph.multiplicity
    return tuple(
        tuple(-graph.degree(v) if v == w else mult.get((v, w), 0) for w in graph.vertices)
        for v in graph.vertices
    )


def fire(graph: Multigraph, d, v: str) -> Divisor:
    """Fire ``v``: it loses deg(v) chips and sends one along each incident edge."""
    d = _as_divisor(graph, d)
    if v not in graph.incident:
        raise UnknownVertex(v)
    mult = graph.multiplicity
    return Divisor._from_values(
        graph.vertices,
        (
            c - graph.degree(v) if w == v else c + mult.get((v, w), 0)
            for w, c in zip(graph.vertices, d.values)
        ),
    )


def is_principal(graph: Multigraph, d) -> bool:
    d = _as_divisor(graph, d)
    if d.degree != 0:
        raise NonzeroDegree(f"divisor has degree {d.degree}")
    red = _reduced(graph, graph.vertices[0])
    x = red.off(d)
    n = len(x)
    return all(sum(red.adj[i][j] * x[j] for j in range(n)) % red.det == 0 for i in range(n))


def equivalent(graph: Multigraph, d1, d2) -> bool:
    d1, d2 = _as_divisor(graph, d1), _as_divisor(graph, d2)
    if d1.degree != d2.degree:
        raise DegreeMismatch(f"degrees {d1.degree} and {d2.degree} differ")
    return is_principal(graph, d1 - d2)


def canonical_form(graph: Multigraph, d, q: str) -> Divisor:
    """The unique q-reduced divisor equivalent to ``d`` (any degree)."""
    d = _as_divisor(graph, d)
    red = _reduced(graph, q)
    x = red.dhar(red.effective(red.off(d)))
    return red.to_divisor(x, d.degree)


def is_reduced(graph: Multigraph, d, q: str) -> bool:
    d = _as_divisor(graph, d)
    return canonical_form(graph, d, q) == d


def class_key(graph: Multigraph, d) -> tuple:
    """A hashable invariant of the linear-equivalence class of ``d``.

    Two divisors have equal keys exactly when they are equivalent; the key
    does not depend on any basepoint.
    """
    d = _as_divisor(graph, d)
    red = _reduced(graph, graph.vertices[0])
    return (d.degree,) + red.coords(red.off(d))


def add_keys(graph: Multigraph, k1: tuple, k2: tuple) -> tuple:
    red = _reduced(graph, graph.vertices[0])
    mods = [d for d in red.diag if d > 1]
    return (k1[0] + k2[0],) + tuple((a + b) % m for a, b, m in zip(k1[1:], k2[1:], mods))


def group_order(graph: Multigraph) -> int:
    return abs(_reduced(graph, graph.vertices[0]).det)


def smith_diagonal(graph: Multigraph) -> list:
    return list(_reduced(graph, graph.vertices[0]).diag)


def invariant_factors(graph: Multigraph) -> list:
    """Invariant factors d1 | d2 | ... of Pic^0, ones dropped."""
    return sorted(d for d in smith_diagonal(graph) if d > 1)


@lru_cache(maxsize=1024)
def _group(graph: Multigraph, q: str) -> tuple:
    red = _reduced(graph, q)
    zero = tuple(0 for _ in red.others)
    gens = []
    for i in range(len(red.others)):
        g = [0] * len(red.others)
        g[i] = 1
        gens.append(g)
    seen = {zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(red.dhar([a + b for a, b in zip(x, g)]))
            if y not in seen:
                seen.add(y)
                queue.append(y)
    if len(seen) != abs(red.det):
        raise AssertionError("group enumeration disagrees with the determinant")
    elems = [PicElement(q, red.to_divisor(x, 0)) for x in seen]
    elems.sort(key=lambda s: s.rep.literal())
    return tuple(elems)


def enumerate_group(graph: Multigraph, q: str) -> list:
    """All elements of Pic^0 as q-reduced representatives, sorted by literal."""
    return list(_group(graph, q))


def induced_iso_vgen(
    graph: Multigraph,
    other: Multigraph,
    vgen: Iterable[str],
    vertex_map: Mapping[str, str] | None = None,
    basepoint: str | None = None,
) -> dict:
    """Identity-induced isomorphism Pic^0(graph) -> Pic^0(other) through ``vgen``.

    ``vertex_map`` identifies vertices of ``graph`` with those of ``other``
    (identity by default).  Raises :class:`PropertyOneFails` if some class
    has no representative supported on ``vgen`` and :class:`PropertyTwoFails`
    if two ``vgen``-supported configurations are equivalent in exactly one of
    the graphs.  Returns ``{PicElement of graph: PicElement of other}``.
    """
    vgen = sorted(set(vgen))
    vmap = {v: v for v in graph.vertices}
    if vertex_map:
        vmap.update(vertex_map)
    if sorted(vmap[v] for v in graph.vertices) != list(other.vertices):
        raise ValueError("vertex identification is not a bijection")
    for v in vgen:
        if v not in graph.incident:
            raise UnknownVertex(v)
    q = basepoint or vgen[0]
    q2 = vmap[q]

    def lift(coeffs):
        chips = dict(zip(vgen, coeffs))
        d1 = Divisor(chips, graph.vertices)
        d2 = Divisor({vmap[v]: c for v, c in chips.items()}, other.vertices)
        return d1, d2

    gens = []
    for i in range(1, len(vgen)):
        c = [0] * len(vgen)
        c[0], c[i] = -1, 1
        gens.append(tuple(c))
    start = tuple(0 for _ in vgen)
    d1, d2 = lift(start)
    states = {(class_key(graph, d1), class_key(other, d2)): start}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for g in gens:
            nc = tuple(a + b for a, b in zip(c, g))
            d1, d2 = lift(nc)
            key = (class_key(graph, d1), class_key(other, d2))
            if key not in states:
                states[key] = nc
                queue.append(nc)

    forward, backward = {}, {}
    for (k1, k2), c in sorted(states.items(), key=lambda kv: kv[1]):
        if k1 in forward and forward[k1][0] != k2:
            a, _ = lift(forward[k1][1])
            b, _ = lift(c)
            raise PropertyTwoFails(
                "configurations equivalent on the first graph but not the second",
                witness=a - b,
            )
        if k2 in backward and backward[k2][0] != k1:
            _, a = lift(backward[k2][1])
            _, b = lift(c)
            raise PropertyTwoFails(
                "configurations equivalent on the second graph but not the first",
                witness=a - b,
            )
        forward[k1] = (k2, c)
        backward[k2] = (k1, c)

    for g, keys, pivot in ((graph, forward, q), (other, backward, q2)):
        for s in enumerate_group(g, pivot):
            if class_key(g, s.rep) not in keys:
                raise PropertyOneFails(
                    "class has no representative supported on the generating set",
                    witness=s.rep,
                )

    result = {}
    for s in enumerate_group(graph, q):
        _, c = forward[class_key(graph, s.rep)]
        _, d2 = lift(c)
        result[s] = PicElement(q2, canonical_form(other, d2, q2))
    return result
