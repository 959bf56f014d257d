"""Exact scalars, Laurent polynomials over the weight lattice and spectral points.

All scalars are ``fractions.Fraction``.  The parameters ``q`` and ``t_ν`` are
specialised at construction: the primitive rational bases are
``v = q^{1/(2m)}`` and ``u_ν = t_ν^{1/(2νm)}``, so every power of ``q`` and
``t_ν`` arising from pairings on ``P`` is an integer power of a base.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DivisionError, ParameterError, SpecializationError
from .rootdata import RootSystemData, WeylElement

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise ParameterError("floats are not accepted; pass rationals as strings")
    return Fraction(x)


def fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _int_exponent(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise SpecializationError(f"non-integral exponent {x} in {what}")
    return int(x)


class ParamSpec:
    """Rational specialisation of ``q`` and ``t_ν`` for one root system."""

    def __init__(self, rs: RootSystemData, v, u):
        self.rs = rs
        self.v = as_fraction(v)
        if isinstance(u, Mapping):
            self.u = {int(k): as_fraction(x) for k, x in u.items()}
        elif isinstance(u, (list, tuple)):
            if len(u) != len(rs.root_lengths):
                raise ParameterError(f"{rs.type_label} needs {len(rs.root_lengths)} u-bases")
            self.u = {nu: as_fraction(x) for nu, x in zip(rs.root_lengths, u)}
        else:
            self.u = {nu: as_fraction(u) for nu in rs.root_lengths}
        if set(self.u) != set(rs.root_lengths):
            raise ParameterError(f"u-bases must be given for root lengths {rs.root_lengths}")
        m = rs.m
        if self.v == 0 or any(x == 0 for x in self.u.values()):
            raise ParameterError("bases must be nonzero")
        self.q = self.v ** (2 * m)
        if self.q in (0, 1):
            raise ParameterError("q must differ from 0 and 1")
        self.t = {nu: self.u[nu] ** (2 * nu * m) for nu in self.u}
        # every pairing on P lies in (1/m)Z; check the denominator table
        for row in rs.gram:
            for x in row:
                _int_exponent(2 * m * x, "lattice denominator table")
        self.convergent = abs(self.q) < 1

    def __repr__(self) -> str:
        us = ",".join(f"{nu}:{fmt(x)}" for nu, x in sorted(self.u.items()))
        return f"ParamSpec({self.rs.type_label}, v={fmt(self.v)}, u={{{us}}})"

    def key(self) -> tuple:
        return (self.rs.type_label, self.v, tuple(sorted(self.u.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, ParamSpec) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def echo(self) -> dict:
        return {
            "type": self.rs.type_label,
            "v": fmt(self.v),
            "u": {str(nu): fmt(x) for nu, x in sorted(self.u.items())},
            "q": fmt(self.q),
            "t": {str(nu): fmt(x) for nu, x in sorted(self.t.items())},
        }

    @cached_property
    def inverted(self) -> "ParamSpec":
        """Parameters of the ``*``-conjugate: ``q, t_ν -> q^{-1}, t_ν^{-1}``."""
        return ParamSpec(self.rs, 1 / self.v, {nu: 1 / x for nu, x in self.u.items()})

    # ---------------------------------------------------------------- powers
    def qpow(self, x) -> Fraction:
        """``q^x`` for ``x ∈ (1/2m)Z``."""
        return self.v ** _int_exponent(2 * self.rs.m * Fraction(x), "power of q")

    def t_of(self, alpha) -> Fraction:
        return self.t[self.rs.nu[alpha]]

    def t_half(self, nu: int) -> Fraction:
        return self.u[nu] ** (nu * self.rs.m)

    def q_of(self, alpha) -> Fraction:
        return self.q ** self.rs.nu[alpha]

    def rho_character(self, a: Sequence, sign: int = 1) -> Fraction:
        """``q^{sign (ρ_k, a)} = Π_ν u_ν^{sign 2m (ρ_ν, a)}``."""
        out = ONE
        for nu, rho in self.rs.rho_nu.items():
            e = _int_exponent(2 * self.rs.m * self.rs.pair(rho, a), "ρ_k-character")
            out *= self.u[nu] ** (sign * e)
        return out

    # ---------------------------------------------------------- spectral points
    def point_numeric(self, values: Sequence) -> "SpectralPoint":
        """The character with ``X_{ω_i} -> values[i]``."""
        n = self.rs.rank
        return SpectralPoint(self, [(as_fraction(x), tuple(int(i == j) for j in range(n)))
                                    for i, x in enumerate(values)])

    def point_q(self, c: Sequence) -> "SpectralPoint":
        """``q^c``: ``X_a -> q^{(a, c)}``."""
        m = self.rs.m
        f = tuple(_int_exponent(2 * m * self.rs.pair(w, c), "q^c") for w in self.rs.omega)
        return SpectralPoint(self, [(self.v, f)])

    def point_rho(self, sign: int = 1, w: WeylElement | None = None) -> "SpectralPoint":
        """``q^{sign · w(ρ_k)}``."""
        rs, m = self.rs, self.rs.m
        winv = rs.inverse(w) if w is not None else rs.identity
        factors = []
        for nu, rho in rs.rho_nu.items():
            f = tuple(sign * _int_exponent(2 * m * rs.pair(rho, winv(om)), "q^ρ")
                      for om in rs.omega)
            factors.append((self.u[nu], f))
        return SpectralPoint(self, factors)

    def point_sharp(self, b: Sequence[int]) -> "SpectralPoint":
        """``q^{b♯}`` with ``b♯ = b - u_b^{-1}(ρ_k)``."""
        _, _, u = self.rs.dominant_split(b)
        return self.point_q(b) * self.point_rho(-1, self.rs.inverse(u))

    def point_shifted_minus(self, b_minus: Sequence[int]) -> "SpectralPoint":
        """``q^{b_- - ρ_k}``."""
        return self.point_q(b_minus) * self.point_rho(-1)

    def lambda_a1(self, n: int) -> "SpectralPoint":
        """A1 only: ``Λ_n = t^{1/2} q^{n/2}`` (``n`` may be negative)."""
        return self.point_rho(1) * self.point_q((n,))


class SpectralPoint:
    """Multiplicative character ``b -> Π base_i^{f_i(b)}`` of ``P``.

    ``factors`` are ``(base, f)`` with ``f`` the integer values of the linear
    functional on the fundamental weights.
    """

    __slots__ = ("params", "factors", "_gens")

    def __init__(self, params: ParamSpec, factors: Iterable):
        merged: dict[Fraction, list[int]] = {}
        n = params.rs.rank
        for base, f in factors:
            base = as_fraction(base)
            f = tuple(int(x) for x in f)
            if len(f) != n:
                raise SpecializationError("functional of wrong rank")
            if base == 0:
                raise SpecializationError("zero base in spectral point")
            acc = merged.setdefault(base, [0] * n)
            for i, x in enumerate(f):
                acc[i] += x
        self.params = params
        self.factors = tuple(sorted((b, tuple(f)) for b, f in merged.items() if any(f)))
        self._gens = None

    def __repr__(self) -> str:
        inner = ", ".join(f"{fmt(b)}^{list(f)}" for b, f in self.factors)
        return f"SpectralPoint({inner})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SpectralPoint) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __mul__(self, other: "SpectralPoint") -> "SpectralPoint":
        return SpectralPoint(self.params, self.factors + other.factors)

    def inverse(self) -> "SpectralPoint":
        return SpectralPoint(self.params, [(b, tuple(-x for x in f)) for b, f in self.factors])

    def pullback(self, w: WeylElement) -> "SpectralPoint":
        """The point ``a -> self(w(a))``; this is ``w^{-1}(Λ)`` for ``Λ = self``."""
        rs = self.params.rs
        images = [w(om) for om in rs.omega]
        out = []
        for b, f in self.factors:
            out.append((b, tuple(sum(x * y for x, y in zip(img, f)) for img in images)))
        return SpectralPoint(self.params, out)

    def iota(self) -> "SpectralPoint":
        """``Λ^ι``: ``a -> Λ_{ι(a)}``."""
        rs = self.params.rs
        images = [rs.iota(om) for om in rs.omega]
        return SpectralPoint(self.params, [
            (b, tuple(sum(x * y for x, y in zip(img, f)) for img in images))
            for b, f in self.factors])

    @property
    def generators(self) -> tuple:
        if self._gens is None:
            n = self.params.rs.rank
            gens = []
            for i in range(n):
                val = ONE
                for b, f in self.factors:
                    if f[i]:
                        val *= b ** f[i]
                gens.append(val)
            self._gens = tuple(gens)
        return self._gens

    def __call__(self, b: Sequence) -> Fraction:
        out = ONE
        for g, e in zip(self.generators, b):
            if e:
                if isinstance(e, Fraction):
                    e = _int_exponent(e, "spectral evaluation")
                out *= g ** e
        return out

    def to_json(self) -> dict:
        return {"factors": [[fmt(b), list(f)] for b, f in self.factors],
                "generators": [fmt(g) for g in self.generators]}


class LaurentPoly:
    """Finite linear combination of monomials ``X_b``, ``b ∈ P``."""

    __slots__ = ("terms", "rank")

    def __init__(self, terms: Mapping | None = None, rank: int | None = None):
        clean = {}
        if terms:
            for b, c in terms.items():
                if c:
                    clean[tuple(b)] = c if isinstance(c, Fraction) else Fraction(c)
        if rank is None:
            if not clean:
                raise ValueError("rank required for the zero polynomial")
            rank = len(next(iter(clean)))
        self.terms = clean
        self.rank = rank

    # ------------------------------------------------------------ constructors
    @classmethod
    def monomial(cls, b: Sequence[int], coef=ONE) -> "LaurentPoly":
        return cls({tuple(b): coef}, len(b))

    @classmethod
    def constant(cls, c, rank: int) -> "LaurentPoly":
        return cls({(0,) * rank: c}, rank)

    # ---------------------------------------------------------------- algebra
    def _check(self, other: "LaurentPoly") -> None:
        if other.rank != self.rank:
            raise ValueError("Laurent polynomials over different lattices")

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.rank)
        self._check(other)
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, ZERO) + c
        return LaurentPoly(out, self.rank)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({b: -c for b, c in self.terms.items()}, self.rank)

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.rank)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = as_fraction(other)
            return LaurentPoly({b: c * x for b, x in self.terms.items()}, self.rank)
        self._check(other)
        out: dict = {}
        for b, x in self.terms.items():
            for d, y in other.terms.items():
                k = tuple(i + j for i, j in zip(b, d))
                out[k] = out.get(k, ZERO) + x * y
        return LaurentPoly(out, self.rank)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return self.terms == LaurentPoly.constant(other, self.rank).terms
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"({c})*X{list(b)}" for b, c in sorted(self.terms.items())]
        return " + ".join(parts)

    def coeff(self, b: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(b), ZERO)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.rank, ZERO)

    def support(self) -> set:
        return set(self.terms)

    def norm1(self) -> Fraction:
        return sum((abs(c) for c in self.terms.values()), ZERO)

    def weyl_act(self, w: WeylElement) -> "LaurentPoly":
        return LaurentPoly({w(b): c for b, c in self.terms.items()}, self.rank)

    def monomial_flip(self) -> "LaurentPoly":
        return LaurentPoly({tuple(-x for x in b): c for b, c in self.terms.items()}, self.rank)

    def shift(self, a: Sequence[int]) -> "LaurentPoly":
        """Multiply by ``X_a``."""
        return LaurentPoly({tuple(x + y for x, y in zip(b, a)): c
                            for b, c in self.terms.items()}, self.rank)

    def specialize(self, pt: SpectralPoint) -> Fraction:
        return sum((c * pt(b) for b, c in self.terms.items()), ZERO)

    __call__ = specialize

    def exact_divide(self, d: "LaurentPoly") -> "LaurentPoly":
        """Quotient ``q`` with ``q * d == self``; raises ``DivisionError`` otherwise."""
        self._check(d)
        if not d:
            raise DivisionError("division by zero polynomial")
        # a generic linear functional gives a monomial order
        weights = [1 + 1000 ** k for k in range(self.rank)]
        deg = lambda b: sum(w * x for w, x in zip(weights, b))  # noqa: E731
        lead_d = max(d.terms, key=deg)
        low_d = min(d.terms, key=deg)
        if not self:
            return LaurentPoly({}, self.rank)
        floor_deg = deg(min(self.terms, key=deg)) - deg(low_d)
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            top = max(rem, key=deg)
            k = tuple(x - y for x, y in zip(top, lead_d))
            if deg(k) < floor_deg:
                raise DivisionError("polynomial is not divisible")
            c = rem[top] / d.terms[lead_d]
            quot[k] = c
            for b, y in d.terms.items():
                key = tuple(x + z for x, z in zip(b, k))
                val = rem.get(key, ZERO) - c * y
                if val:
                    rem[key] = val
                else:
                    rem.pop(key, None)
        return LaurentPoly(quot, self.rank)

    def to_json(self) -> list:
        return [[list(b), fmt(c)] for b, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data, rank: int) -> "LaurentPoly":
        return cls({tuple(b): Fraction(c) for b, c in data}, rank)
