"""Demazure-Lusztig operators and difference Dunkl operators on ``V``.

Conventions: ``(w, c) ∈ W ⋉ P`` acts by ``X_b -> q^{(c,b)} X_{w(b)}``, so on
A1 the element ``(id, ω)`` is ``Γ`` and ``(s, ω)`` is ``sΓ``.  The affine
simple reflection is ``s_0 = (s_ϑ, ϑ)`` with ``X_{a_0} = q X_ϑ^{-1}``.
For dominant ``a`` write ``(id, -a) = π s_{i_l} ··· s_{i_1}``; then
``Y_a = π T_{i_l} ··· T_{i_1}``.  On A1 this gives ``Y = sΓT``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .errors import ConventionError, PoleError
from .polyring import ONE, ZERO, LaurentPoly, ParamSpec, SpectralPoint
from .rootdata import ExtAffineElement

Terms = dict


def _add(out: Terms, b: tuple, c: Fraction) -> None:
    v = out.get(b, ZERO) + c
    if v:
        out[b] = v
    else:
        out.pop(b, None)


class OperatorContext:
    """Operators of the polynomial representation for one ``ParamSpec``."""

    def __init__(self, params: ParamSpec):
        self.params = params
        self.rs = rs = params.rs
        n = rs.rank
        # per affine index: (reflection data, t^{1/2}, t^{1/2} - t^{-1/2})
        self._t_half = []
        self._root = []
        for i in range(n + 1):
            if i == 0:
                nu = rs.nu[rs.theta]
                self._root.append(tuple(-x for x in rs.theta))
            else:
                nu = rs.nu_simple[i - 1]
                self._root.append(rs.simple_roots[i - 1])
            th = params.t_half(nu)
            self._t_half.append((th, th - 1 / th))
        self._ysq = {}
        self.words = {}
        for i in range(n):
            neg = tuple(-x for x in rs.omega[i])
            self.words[i] = rs.translation_word(neg)
        self._y_cache: dict = {}
        self._check_calibration()

    # ------------------------------------------------------------ helpers
    def _pair_int(self, a: Sequence, b: Sequence) -> int:
        x = self.rs.pair(a, b)
        m2 = 2 * self.rs.m * x
        if m2.denominator != 1:
            raise ConventionError("non-integral q-exponent")
        return int(m2)

    def _z_power(self, i: int, j: int) -> tuple[tuple, Fraction]:
        """``Z_i^j`` as (weight, scalar) where ``Z_0 = q X_{-ϑ}``."""
        root = self._root[i]
        w = tuple(j * x for x in root)
        if i == 0:
            return w, self.params.q ** j
        return w, ONE

    def _r(self, i: int, b: tuple) -> int:
        if i == 0:
            return -int(self.rs.coroot_pair(b, self.rs.theta))
        return b[i - 1]

    # ------------------------------------------------------------ operators
    def ext_terms(self, e: ExtAffineElement, terms: Terms) -> Terms:
        v = self.params.v
        out: Terms = {}
        for b, c in terms.items():
            k = self._pair_int(e.c, b)
            _add(out, e.w(b), c * v ** k if k else c)
        return out

    def apply_ext(self, e: ExtAffineElement, p: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(self.ext_terms(e, p.terms), p.rank)

    def s_terms(self, i: int, terms: Terms) -> Terms:
        return self.ext_terms(self.rs.affine_simple(i), terms)

    def T_terms(self, i: int, terms: Terms, inverse: bool = False) -> Terms:
        th, diff = self._t_half[i]
        out: Terms = {}
        for b, c in terms.items():
            r = self._r(i, b)
            # s_i(X_b) = X_b Z^{-r}
            zw, zs = self._z_power(i, -r)
            sb = tuple(x + y for x, y in zip(b, zw))
            _add(out, sb, c * th * zs)
            if r > 0:
                for j in range(1, r + 1):
                    zw, zs = self._z_power(i, -j)
                    _add(out, tuple(x + y for x, y in zip(b, zw)), -c * diff * zs)
            elif r < 0:
                for j in range(0, -r):
                    zw, zs = self._z_power(i, j)
                    _add(out, tuple(x + y for x, y in zip(b, zw)), c * diff * zs)
            if inverse:
                _add(out, b, -c * diff)
        return out

    def apply_T(self, i: int, p: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(self.T_terms(i, p.terms), p.rank)

    def apply_T_inverse(self, i: int, p: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(self.T_terms(i, p.terms, inverse=True), p.rank)

    def apply_T_by_division(self, i: int, p: LaurentPoly) -> LaurentPoly:
        """Reference ``T_i`` through exact polynomial division."""
        th, diff = self._t_half[i]
        sp = LaurentPoly(self.s_terms(i, p.terms), p.rank)
        zw, zs = self._z_power(i, 1)
        z = LaurentPoly({zw: zs}, p.rank) - 1
        return sp * th + (sp - p).exact_divide(z) * diff

    def _y_dominant_terms(self, k: int, terms: Terms, inverse: bool = False) -> Terms:
        pi, word = self.words[k]
        if not inverse:
            for i in word:
                terms = self.T_terms(i, terms)
            return self.ext_terms(pi, terms)
        terms = self.ext_terms(self.rs.ext_inverse(pi), terms)
        for i in reversed(word):
            terms = self.T_terms(i, terms, inverse=True)
        return terms

    def y_omega_monomial(self, k: int, b: tuple) -> Terms:
        key = (k, b)
        hit = self._y_cache.get(key)
        if hit is None:
            hit = self._y_dominant_terms(k, {b: ONE})
            self._y_cache[key] = hit
        return hit

    def y_omega_terms(self, k: int, terms: Terms) -> Terms:
        out: Terms = {}
        for b, c in terms.items():
            for d, x in self.y_omega_monomial(k, b).items():
                _add(out, d, c * x)
        return out

    def apply_Y(self, a: Sequence[int], p: LaurentPoly) -> LaurentPoly:
        """``Y_a`` for any ``a ∈ P``, as ``Π_k Y_{ω_k}^{a_k}``."""
        terms = p.terms
        for k, e in enumerate(a):
            for _ in range(abs(e)):
                if e > 0:
                    terms = self.y_omega_terms(k, terms)
                else:
                    terms = self._y_dominant_terms(k, terms, inverse=True)
        return LaurentPoly(terms, p.rank)

    def y_eigenvalue(self, k: int, b: Sequence[int]) -> Fraction:
        """``q^{-(ω_k, b♯)}`` expected on ``E_b``."""
        return self.params.point_sharp(b).inverse()(self.rs.omega[k])

    def _check_calibration(self) -> None:
        """``Y_a(1) = q^{(a, ρ_k)}`` is the eigenvalue of ``E_0 = 1``."""
        n = self.rs.rank
        one = {self.rs.zero: ONE}
        for k in range(n):
            got = self.y_omega_terms(k, one)
            want = self.y_eigenvalue(k, self.rs.zero)
            if got != {self.rs.zero: want}:
                raise ConventionError(f"Y_{{ω_{k + 1}}}(1) = {got}, expected {want}")


def context(params: ParamSpec) -> OperatorContext:
    ctx = _CONTEXTS.get(params)
    if ctx is None:
        ctx = OperatorContext(params)
        _CONTEXTS[params] = ctx
    return ctx


_CONTEXTS: dict = {}


# ------------------------------------------------------------------ A1 pointwise
def a1_pointwise(op: str, f: Callable, x: SpectralPoint):
    """Apply ``s``, ``Γ``, ``T`` or ``Y = sΓT`` to a function of one A1 point.

    ``f`` maps a ``SpectralPoint`` to a ``TruncatedValue``.
    """
    from .qseries import TruncatedValue

    params = x.params
    if params.rs.type_label != "A1":
        raise ValueError("a1_pointwise requires A1")
    th = params.t_half(1)
    if op == "s":
        return f(x.inverse())
    if op == "Gamma":
        return f(x * params.point_q((1,)))
    if op == "T":
        x2 = x((2,))
        if x2 == 1:
            raise PoleError("X^2 = 1 in T")
        fi = f(x.inverse())
        fx = f(x)
        return fi * th + (fi - fx) * TruncatedValue.exact((th - 1 / th) / (x2 - 1))
    if op == "Y":
        g = lambda p: a1_pointwise("T", f, p)  # noqa: E731
        h = lambda p: a1_pointwise("Gamma", g, p)  # noqa: E731
        return a1_pointwise("s", h, x)
    raise ValueError(f"unknown operator {op}")
