"""Reduced root systems, the weight lattice, the Weyl group and the extended
affine Weyl group.

Weights are integer tuples in the basis of fundamental weights; rational
weights (tuples of ``Fraction``) are accepted wherever only the bilinear form
is needed.  Weyl group elements act on these coordinate vectors by integer
matrices.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import lcm, sqrt, floor
from typing import Sequence

from .errors import RootSystemError

Weight = tuple  # tuple[int, ...] (lattice) or tuple[Fraction, ...]

MAX_RANK = 4


def _simple_root_vectors(kind: str, n: int) -> list[list[Fraction]]:
    """Euclidean realisation of the simple roots (Bourbaki numbering)."""
    F = Fraction
    if kind == "A":
        return [[F(1) if k == i else F(-1) if k == i + 1 else F(0) for k in range(n + 1)]
                for i in range(n)]
    e = lambda i: [F(1) if k == i else F(0) for k in range(n)]  # noqa: E731
    sub = lambda a, b: [x - y for x, y in zip(a, b)]  # noqa: E731
    if kind == "B":
        return [sub(e(i), e(i + 1)) for i in range(n - 1)] + [e(n - 1)]
    if kind == "C":
        return [sub(e(i), e(i + 1)) for i in range(n - 1)] + [[2 * x for x in e(n - 1)]]
    if kind == "D":
        last = [x + y for x, y in zip(e(n - 2), e(n - 1))]
        return [sub(e(i), e(i + 1)) for i in range(n - 1)] + [last]
    if kind == "G":
        return [[F(1), F(-1), F(0)], [F(-2), F(1), F(1)]]
    if kind == "F":
        h = F(1, 2)
        return [[0, 1, -1, 0], [0, 0, 1, -1], [0, 0, 0, 1], [h, -h, -h, -h]]
    raise RootSystemError(f"unknown root system type {kind!r}")


def parse_label(label: str) -> tuple[str, int]:
    m = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", label)
    if not m:
        raise RootSystemError(f"cannot parse root system label {label!r}")
    kind, n = m.group(1).upper(), int(m.group(2))
    valid = {
        "A": n >= 1, "B": n >= 2, "C": n >= 2, "D": n >= 4,
        "E": n in (6, 7, 8), "F": n == 4, "G": n == 2,
    }[kind]
    if not valid:
        raise RootSystemError(f"no root system of type {kind}{n}")
    if n > MAX_RANK:
        raise RootSystemError(f"{kind}{n}: only ranks <= {MAX_RANK} are supported")
    return kind, n


def _mat_vec(m, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def _mat_mul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def _inverse(m):
    """Exact inverse of a small rational matrix (Gauss-Jordan)."""
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


@dataclass(frozen=True)
class WeylElement:
    """Element of the finite Weyl group.

    ``word`` is a reduced word ``(i_1, ..., i_l)`` for ``s_{i_1} ... s_{i_l}``
    and ``matrix`` its action on fundamental-weight coordinates.
    """

    word: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...] = field(repr=False)

    def __call__(self, b: Weight) -> Weight:
        return _mat_vec(self.matrix, b)

    @property
    def length(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return "id" if not self.word else "s" + "s".join(str(i) for i in self.word)


@dataclass(frozen=True)
class ExtAffineElement:
    """Element ``(w, c)`` of the extended affine Weyl group ``W ⋉ P``.

    It acts on monomials by ``X_b -> q^{(c,b)} X_{w(b)}`` and on affine roots by
    ``[z, ζ] -> [w(z), ζ + (c, z)]``.
    """

    w: WeylElement
    c: tuple[int, ...]


class RootSystemData:
    """All finite and affine combinatorial data of a reduced root system."""

    def __init__(self, label: str):
        kind, n = parse_label(label)
        if kind == "E":
            raise RootSystemError(f"{label}: rank exceeds {MAX_RANK}")
        self.type_label = f"{kind}{n}"
        self.rank = n
        vecs = _simple_root_vectors(kind, n)
        dots = [[sum(Fraction(x) * y for x, y in zip(a, b)) for b in vecs] for a in vecs]
        shortest = min(dots[i][i] for i in range(n))
        sym = [[2 * d / shortest for d in row] for row in dots]
        self.nu_simple = tuple(int(sym[i][i] / 2) for i in range(n))
        self.cartan = tuple(tuple(int(2 * sym[i][j] / sym[j][j]) for j in range(n))
                            for i in range(n))
        inv_t = _inverse(tuple(zip(*self.cartan)))
        self.gram = tuple(tuple(self.nu_simple[i] * inv_t[i][j] for j in range(n))
                          for i in range(n))
        self._cartan_inv = _inverse(self.cartan)
        self.m = lcm(*(x.denominator for row in self.gram for x in row))
        self.simple_roots = tuple(tuple(row) for row in self.cartan)
        self.omega = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        self.zero = (0,) * n
        self.rho = (1,) * n
        self.positive_roots = self._positive_roots()
        self._positive_set = frozenset(self.positive_roots)
        self.nu = {a: int(self.pair(a, a) / 2) for a in self.positive_roots}
        for a in self.positive_roots:
            self.nu[tuple(-x for x in a)] = self.nu[a]
        self.root_lengths = tuple(sorted(set(self.nu_simple)))
        self.rho_nu = {v: tuple(int(self.nu_simple[i] == v) for i in range(n))
                       for v in self.root_lengths}
        short = [a for a in self.positive_roots if self.nu[a] == 1]
        self.theta = max(short, key=self.height)
        self._build_weyl_group()
        self.w0 = max(self.weyl_group, key=lambda w: w.length)
        self.s_theta = self.reflection(self.theta)

    def __repr__(self) -> str:
        return f"RootSystemData({self.type_label!r})"

    # ------------------------------------------------------------ form
    def pair(self, a: Sequence, b: Sequence) -> Fraction:
        if len(a) != self.rank or len(b) != self.rank:
            raise RootSystemError("weights of mismatched rank")
        g = self.gram
        return sum((a[i] * g[i][j] * b[j] for i in range(self.rank)
                    for j in range(self.rank) if a[i] and b[j]), Fraction(0))

    def coroot_pair(self, b: Sequence, alpha: Weight) -> Fraction:
        """``(b, α^∨)`` for a root ``α``."""
        return self.pair(b, alpha) / self.nu[alpha]

    def root_coords(self, b: Sequence) -> tuple:
        """Coordinates of ``b`` in the basis of simple roots."""
        ci = self._cartan_inv
        return tuple(sum(b[i] * ci[i][j] for i in range(self.rank)) for j in range(self.rank))

    def height(self, b: Sequence) -> Fraction:
        return sum(self.root_coords(b), Fraction(0))

    def in_root_lattice(self, b: Sequence) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.root_coords(b))

    def is_positive_root(self, a: Weight) -> bool:
        return a in self._positive_set

    def is_dominant(self, b: Sequence) -> bool:
        return all(x >= 0 for x in b)

    def is_antidominant(self, b: Sequence) -> bool:
        return all(x <= 0 for x in b)

    def _positive_roots(self) -> tuple:
        roots = list(self.simple_roots)
        seen = set(roots)
        k = 0
        while k < len(roots):
            beta = roots[k]
            for j in range(self.rank):
                if beta[j] < 0:
                    image = tuple(x - beta[j] * a for x, a in zip(beta, self.simple_roots[j]))
                    if image not in seen:
                        seen.add(image)
                        roots.append(image)
            k += 1
        return tuple(sorted(roots, key=lambda r: (self.height(r), tuple(-x for x in r))))

    # ------------------------------------------------------------ Weyl group
    def simple_reflection(self, i: int, b: Sequence) -> tuple:
        a = self.simple_roots[i]
        return tuple(x - b[i] * y for x, y in zip(b, a))

    def _build_weyl_group(self) -> None:
        n = self.rank
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        gens = []
        for i in range(n):
            cols = [self.simple_reflection(i, e) for e in self.omega]
            gens.append(tuple(tuple(cols[j][k] for j in range(n)) for k in range(n)))
        self._gen_matrices = gens
        start = WeylElement((), ident)
        self._by_image = {self.rho: start}
        elements, frontier = [start], [start]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(n):
                    m = _mat_mul(w.matrix, gens[i])
                    key = _mat_vec(m, self.rho)
                    if key not in self._by_image:
                        el = WeylElement(w.word + (i + 1,), m)
                        self._by_image[key] = el
                        elements.append(el)
                        nxt.append(el)
            frontier = nxt
        self.weyl_group = tuple(elements)
        self.identity = start

    def element_from_matrix(self, m) -> WeylElement:
        return self._by_image[_mat_vec(m, self.rho)]

    def element_from_word(self, word: Sequence[int]) -> WeylElement:
        m = self.identity.matrix
        for i in word:
            m = _mat_mul(m, self._gen_matrices[i - 1])
        return self.element_from_matrix(m)

    def mul(self, u: WeylElement, w: WeylElement) -> WeylElement:
        return self.element_from_matrix(_mat_mul(u.matrix, w.matrix))

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.element_from_word(tuple(reversed(w.word)))

    def reflection(self, alpha: Weight) -> WeylElement:
        cols = []
        for e in self.omega:
            k = self.coroot_pair(e, alpha)
            cols.append(tuple(x - k * y for x, y in zip(e, alpha)))
        m = tuple(tuple(int(cols[j][k]) for j in range(self.rank)) for k in range(self.rank))
        return self.element_from_matrix(m)

    def length(self, w: WeylElement) -> int:
        """``|R_+ ∩ w^{-1}(R_-)|``, counted directly."""
        return sum(1 for a in self.positive_roots if not self.is_positive_root(w(a)))

    def orbit(self, b: Sequence[int]) -> list[tuple]:
        b = tuple(b)
        seen, out = {b}, [b]
        k = 0
        while k < len(out):
            c = out[k]
            for i in range(self.rank):
                d = self.simple_reflection(i, c)
                if d not in seen:
                    seen.add(d)
                    out.append(d)
            k += 1
        return out

    def dominant_split(self, b: Sequence[int]) -> tuple[tuple, tuple, WeylElement]:
        """Return ``(b_-, b_+, u_b)`` with ``u_b`` of minimal length, ``u_b(b) = b_-``."""
        c = tuple(b)
        steps = []
        while True:
            i = next((i for i, x in enumerate(c) if x > 0), None)
            if i is None:
                break
            c = self.simple_reflection(i, c)
            steps.append(i + 1)
        u = self.element_from_word(tuple(reversed(steps)))
        return c, self.w0(c), u

    def iota(self, b: Sequence) -> tuple:
        """``ι(b) = -w_0(b)``."""
        return tuple(-x for x in self.w0(b))

    def dominant_weights_below(self, lam: Sequence[int]) -> list[tuple]:
        """Dominant ``μ`` with ``lam - μ ∈ Q_+`` (``lam`` dominant)."""
        top = self.root_coords(lam)
        out = []
        for ns in product(*(range(floor(x) + 1) for x in top)):
            mu = tuple(x - sum(ns[j] * self.simple_roots[j][k] for j in range(self.rank))
                       for k, x in enumerate(lam))
            if self.is_dominant(mu):
                out.append(mu)
        return out

    def saturation_span(self, b: Sequence[int]) -> list[tuple]:
        """``{c ∈ P : c ≡ b mod Q, c_+ ⪯ b_+}``."""
        _, bp, _ = self.dominant_split(b)
        out = []
        for mu in self.dominant_weights_below(bp):
            out.extend(self.orbit(mu))
        return out

    # ------------------------------------------------------------ affine
    def ext(self, w: WeylElement | None = None, c: Sequence[int] | None = None) -> ExtAffineElement:
        return ExtAffineElement(w or self.identity, tuple(c) if c is not None else self.zero)

    def ext_mul(self, e: ExtAffineElement, f: ExtAffineElement) -> ExtAffineElement:
        finv = self.inverse(f.w)
        c = tuple(x + y for x, y in zip(finv(e.c), f.c))
        return ExtAffineElement(self.mul(e.w, f.w), c)

    def ext_inverse(self, e: ExtAffineElement) -> ExtAffineElement:
        return ExtAffineElement(self.inverse(e.w), tuple(-x for x in e.w(e.c)))

    def affine_simple(self, i: int) -> ExtAffineElement:
        if i == 0:
            return ExtAffineElement(self.s_theta, self.theta)
        return ExtAffineElement(self.element_from_word((i,)), self.zero)

    def affine_length(self, e: ExtAffineElement) -> int:
        """Number of positive affine roots sent to negative ones by ``e``.

        Affine roots ``[α, ν_α j]`` are enumerated up to level
        ``max |(c, α^∨)| + 1``, beyond which none can flip.
        """
        pairs = {a: self.coroot_pair(e.c, a) for a in self.nu}
        bound = int(max((abs(x) for x in pairs.values()), default=0)) + 1
        count = 0
        for a, k in pairs.items():
            pos = self.is_positive_root(a)
            image_pos = self.is_positive_root(e.w(a))
            for j in range(0 if pos else 1, bound + 1):
                level = j + k
                if level < 0 or (level == 0 and not image_pos):
                    count += 1
        return count

    def translation_word(self, b: Sequence[int]) -> tuple[ExtAffineElement, list[int]]:
        """Reduced decomposition ``(id, b) = π · s_{i_l} ··· s_{i_1}``, ``l(π) = 0``.

        Returns ``(π, [i_1, ..., i_l])``.
        """
        e = self.ext(c=b)
        word: list[int] = []
        cur = self.affine_length(e)
        while cur > 0:
            for i in range(self.rank + 1):
                f = self.ext_mul(e, self.affine_simple(i))
                lf = self.affine_length(f)
                if lf < cur:
                    e, cur = f, lf
                    word.append(i)
                    break
            else:
                raise AssertionError(f"length descent stalled for translation by {b}")
        return e, word

    def length_zero_elements(self) -> list[ExtAffineElement]:
        out = [self.ext()]
        for i, nu in enumerate(self.nu_simple):
            pi, _ = self.translation_word(self.omega[i])
            if pi not in out:
                out.append(pi)
        return out

    def summary(self) -> dict:
        return {
            "type": self.type_label,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "m": self.m,
            "positive_roots": [list(a) for a in self.positive_roots],
            "nu": [self.nu[a] for a in self.positive_roots],
            "theta": list(self.theta),
            "w0": list(self.w0.word),
            "weyl_order": len(self.weyl_group),
            "gram": [[f"{x.numerator}/{x.denominator}" for x in row] for row in self.gram],
        }


@lru_cache(maxsize=None)
def build_root_system(label: str) -> RootSystemData:
    kind, n = parse_label(label)
    return RootSystemData(f"{kind}{n}")


def box(rank: int, radius: int) -> list[tuple]:
    """Integer weights with all coordinates in ``[-radius, radius]``."""
    return [tuple(c) for c in product(range(-radius, radius + 1), repeat=rank)]


def ellipsoid_bounds(rs: RootSystemData, radius) -> list[int]:
    """Coordinate bounds of ``{b : (b, b)/2 <= radius}``."""
    ginv = _inverse(rs.gram)
    return [floor(sqrt(float(2 * radius * ginv[i][i])) + 1e-9) for i in range(rs.rank)]
