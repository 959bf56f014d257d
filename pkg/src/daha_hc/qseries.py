"""Truncated q-series and infinite products with certified tail bounds.

A ``TruncatedValue`` is a rational value plus a bound on the distance to the
true quantity.  Arithmetic propagates the bounds.  When exact rationals grow
too long they are rounded to ``PREC`` significant bits and the rounding error
is moved into the tail, so long computations stay cheap and remain sound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

from .errors import InsufficientCutoffError, ParameterError, PoleError
from .polyring import ONE, ZERO, LaurentPoly, ParamSpec, SpectralPoint, fmt
from .rootdata import ellipsoid_bounds

PREC = 256
_ROUND_TRIGGER = 3 * PREC

DEFAULT_THETA_SHELLS = 40
DEFAULT_PRODUCT_ORDER = 60
DEFAULT_MU_ORDER = 60


def _round_rel(x: Fraction, bits: int = PREC) -> tuple[Fraction, Fraction]:
    """Round to ``bits`` significant bits; return ``(rounded, |error|)``."""
    if x == 0:
        return x, ZERO
    n, d = x.numerator, x.denominator
    e = n.bit_length() - d.bit_length() - bits
    if e >= 0:
        m = (n + (d << e) // 2) // (d << e) if n > 0 else -((-n + (d << e) // 2) // (d << e))
        r = Fraction(m * (1 << e))
    else:
        m = ((n << -e) + d // 2) // d
        r = Fraction(m, 1 << -e)
    return r, abs(x - r)


def upper(x: Fraction) -> Fraction:
    """Round a nonnegative bound up to a short dyadic."""
    if x <= 0:
        return ZERO
    n, d = x.numerator, x.denominator
    if n.bit_length() + d.bit_length() <= 128:
        return x
    e = n.bit_length() - d.bit_length() - 64
    if e >= 0:
        return Fraction(-((-n) // (d << e)) << e)
    return Fraction(-((-(n << -e)) // d), 1 << -e)


def _big(x: Fraction) -> bool:
    return x.numerator.bit_length() + x.denominator.bit_length() > _ROUND_TRIGGER


@dataclass(frozen=True)
class TruncatedValue:
    value: Fraction
    tail: Fraction = ZERO
    cutoffs: tuple = field(default=(), compare=False)

    @classmethod
    def exact(cls, x) -> "TruncatedValue":
        return cls(Fraction(x))

    @classmethod
    def make(cls, value: Fraction, tail: Fraction = ZERO, cutoffs=()) -> "TruncatedValue":
        """Normalize: round long values, keep tails short."""
        if _big(value):
            value, err = _round_rel(value)
            tail = tail + err
        return cls(value, upper(tail), tuple(cutoffs))

    def _co(self, other) -> "TruncatedValue":
        return other if isinstance(other, TruncatedValue) else TruncatedValue(Fraction(other))

    def _merge(self, other) -> tuple:
        if not other.cutoffs:
            return self.cutoffs
        if not self.cutoffs:
            return other.cutoffs
        d = dict(self.cutoffs)
        d.update(other.cutoffs)
        return tuple(sorted(d.items()))

    def __add__(self, other):
        o = self._co(other)
        return TruncatedValue.make(self.value + o.value, self.tail + o.tail, self._merge(o))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedValue(-self.value, self.tail, self.cutoffs)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        o = self._co(other)
        tail = abs(self.value) * o.tail + abs(o.value) * self.tail + self.tail * o.tail
        return TruncatedValue.make(self.value * o.value, tail, self._merge(o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        d = abs(o.value)
        if d <= o.tail:
            raise PoleError("denominator not separated from zero by its tail bound")
        value = self.value / o.value
        tail = ZERO
        if o.tail or self.tail:
            tail = (self.tail * d + abs(self.value) * o.tail) / (d * (d - o.tail))
        return TruncatedValue.make(value, tail, self._merge(o))

    def __rtruediv__(self, other):
        return self._co(other) / self

    def __pow__(self, k: int):
        out = TruncatedValue.exact(1)
        base = self if k >= 0 else TruncatedValue.exact(1) / self
        for _ in range(abs(k)):
            out = out * base
        return out

    def __abs__(self) -> Fraction:
        return abs(self.value) + self.tail

    def contains(self, x) -> bool:
        return abs(Fraction(x) - self.value) <= self.tail

    def with_cutoffs(self, **kw) -> "TruncatedValue":
        d = dict(self.cutoffs)
        d.update(kw)
        return TruncatedValue(self.value, self.tail, tuple(sorted(d.items())))

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:
        return f"TV({float(self.value):.17g} ± {float(self.tail):.3g})"

    def to_json(self) -> dict:
        return {"value": fmt(self.value), "tail": fmt(self.tail),
                "value_float": float(self.value), "tail_float": float(self.tail),
                "cutoffs": dict(self.cutoffs)}


def tv(x) -> TruncatedValue:
    return x if isinstance(x, TruncatedValue) else TruncatedValue.exact(x)


def tv_sum(items: Iterable) -> TruncatedValue:
    """Sum with a single rounding at the end."""
    value, tail = ZERO, ZERO
    for x in items:
        x = tv(x)
        value += x.value
        tail += x.tail
    return TruncatedValue.make(value, tail)


# ------------------------------------------------------------------ products
def infinite_product(pairs: Sequence[tuple], r: Fraction, j0: int = 0,
                     order: int = DEFAULT_PRODUCT_ORDER, name: str = "product") -> TruncatedValue:
    """``Π_{j ≥ j0} Π_k (1 - a_k r^j) / (1 - b_k r^j)`` for ``pairs = [(a_k, b_k)]``.

    Factors with ``j > order`` are bounded: each differs from 1 by at most
    ``|b-a||r|^j / (1 - |b||r|^j)``; with ``S`` the sum of these bounds the
    omitted product lies within ``S/(1-S)`` of 1 relative to the partial one.
    """
    r = Fraction(r)
    if not abs(r) < 1:
        raise ParameterError("infinite product needs |r| < 1")
    value = ONE
    zero_num = False
    rj = r ** j0
    for j in range(j0, order + 1):
        for a, b in pairs:
            den = 1 - b * rj
            if den == 0:
                raise PoleError(f"{name}: denominator vanishes at j={j}")
            num = 1 - a * rj
            if num == 0:
                zero_num = True
            value *= num / den
        rj *= r
        if _big(value):
            value, _ = _round_rel(value, 2 * _ROUND_TRIGGER)
    if zero_num:
        # remaining denominators must still be checked for exact poles
        rj = r ** (order + 1)
        for a, b in pairs:
            if b != 0:
                jj = _exact_power_index(b, r, order + 1)
                if jj is not None:
                    raise PoleError(f"{name}: denominator vanishes at j={jj}")
        return TruncatedValue(ZERO, ZERO, (("product_order", order),))
    s = ZERO
    ar = abs(r)
    rn = ar ** (order + 1)
    for a, b in pairs:
        gap = abs(b - a)
        if not gap:
            continue
        lead = 1 - abs(b) * rn
        if lead <= 0:
            raise InsufficientCutoffError(f"{name}: product order {order} too small")
        s += gap * rn / ((1 - ar) * lead)
    s = upper(s)
    if s >= 1:
        raise InsufficientCutoffError(f"{name}: product order {order} too small")
    # recompute exactly-rounded value; rounding above was relative 2^-1536
    value, err = _round_rel(value) if _big(value) else (value, ZERO)
    rel = s / (1 - s) + Fraction(1, 1 << (2 * _ROUND_TRIGGER - 8)) * order * len(pairs)
    return TruncatedValue(value, upper(abs(value) * rel + err), (("product_order", order),))


def _exact_power_index(b: Fraction, r: Fraction, start: int) -> int | None:
    """Smallest ``j >= start`` with ``b r^j = 1``, if any."""
    target = 1 / b
    if abs(target) > abs(r) ** start:
        return None
    x = r ** start
    j = start
    while abs(x) >= abs(target):
        if x == target:
            return j
        x *= r
        j += 1
    return None


def finite_product(factors: Iterable[tuple]) -> Fraction:
    """``Π num/den`` over ``(num, den)``; zero denominators raise ``PoleError``."""
    out = ONE
    for num, den in factors:
        if den == 0:
            raise PoleError("vanishing denominator in finite product")
        out *= Fraction(num) / den
    return out


# ------------------------------------------------------------------ theta
def theta_value(pt: SpectralPoint, shells: int = DEFAULT_THETA_SHELLS) -> TruncatedValue:
    """``θ(pt) = Σ_{b ∈ P} q^{(b,b)/2} pt(b)`` over ``(b,b)/2 <= shells``."""
    params = pt.params
    rs = params.rs
    if not params.convergent:
        raise ParameterError("θ requires |q| < 1")
    from itertools import product as iproduct

    bounds = ellipsoid_bounds(rs, shells + 1)
    shell_sum: dict[int, Fraction] = {}
    total = ZERO
    v, m = params.v, rs.m
    gens = pt.generators
    for b in iproduct(*(range(-k, k + 1) for k in bounds)):
        norm = rs.pair(b, b) / 2
        if norm > shells:
            continue
        term = v ** int(m * 2 * norm)
        for g, e in zip(gens, b):
            if e:
                term *= g ** e
        total += term
        s = ceil(norm)
        shell_sum[s] = shell_sum.get(s, ZERO) + abs(term)
    tail = _shell_tail(shell_sum, "θ")
    value, err = _round_rel(total) if _big(total) else (total, ZERO)
    return TruncatedValue(value, upper(tail + err), (("theta_shells", shells),))


def _shell_tail(shell_sum: dict, name: str, widths: Sequence[int] = (3, 4, 5, 6)) -> Fraction:
    """Geometric tail from block sums of the last shells: ``B_last r / (1 - r)``.

    Shell sums of a lattice Gaussian fluctuate with the lattice-point count, so
    the ratio is taken between the last two blocks of ``w`` consecutive shells.
    Several widths are tried and the largest estimate is kept; every width
    with two nonempty blocks must show decay.
    """
    keys = sorted(k for k, x in shell_sum.items() if x)
    if not keys:
        return ZERO
    top = keys[-1]
    if top < 2 * max(widths):
        raise InsufficientCutoffError(f"{name}: too few shells for a tail estimate")
    best = None
    scale = 1
    # sparse shell sets (rank one at large cutoffs) need wider blocks
    while best is None and 2 * max(widths) * scale <= top + 1:
        for w in (x * scale for x in widths):
            last = sum((shell_sum[k] for k in keys if top - w < k), ZERO)
            prev = sum((shell_sum[k] for k in keys if top - 2 * w < k <= top - w), ZERO)
            if not prev:
                continue
            r = last / prev
            if r >= 1:
                raise InsufficientCutoffError(f"{name}: shell ratio {float(r):.3g} >= 1")
            est = last * r / (1 - r)
            best = est if best is None else max(best, est)
        scale += 1
    if best is None:
        raise InsufficientCutoffError(f"{name}: empty shell blocks before the cutoff")
    return upper(best)


def sigma_value(pt: SpectralPoint, order: int = DEFAULT_PRODUCT_ORDER) -> TruncatedValue:
    """``σ(Λ) = Π_{α>0} Π_{j≥0} (1 - t_α q_α^j Λ_α)/(1 - q_α^j Λ_α)``."""
    params = pt.params
    out = TruncatedValue.exact(1)
    for a in params.rs.positive_roots:
        la = pt(a)
        out = out * infinite_product([(params.t_of(a) * la, la)], params.q_of(a), 0, order,
                                     f"σ at root {list(a)}")
    return out


def sigma_star_value(pt: SpectralPoint, order: int = DEFAULT_PRODUCT_ORDER) -> TruncatedValue:
    """``σ_*(Λ) = Π_{α>0} Π_{j≥1} (1 - t_α q_α^j Λ_α^{-1})/(1 - q_α^j Λ_α^{-1})``."""
    params = pt.params
    out = TruncatedValue.exact(1)
    for a in params.rs.positive_roots:
        li = 1 / pt(a)
        out = out * infinite_product([(params.t_of(a) * li, li)], params.q_of(a), 1, order,
                                     f"σ_* at root {list(a)}")
    return out


def sigma_series_a1(lam: Fraction, params: ParamSpec, terms: int = DEFAULT_PRODUCT_ORDER) -> TruncatedValue:
    """A1: ``1 + Σ_j Λ^{2j} Π_{s=1}^j (1 - t q^{s-1})/(1 - q^s)`` for ``|Λ| < 1``."""
    q, t = params.q, params.t[1]
    l2 = Fraction(lam) ** 2
    total, term = ONE, ONE
    for j in range(1, terms + 1):
        term *= l2 * (1 - t * q ** (j - 1)) / (1 - q ** j)
        total += term
    r = abs(l2) * (1 + abs(t) * abs(q) ** terms) / (1 - abs(q) ** (terms + 1))
    if r >= 1:
        raise InsufficientCutoffError("σ series diverges for |Λ| >= 1")
    value, err = _round_rel(total) if _big(total) else (total, ZERO)
    return TruncatedValue(value, upper(abs(term) * r / (1 - r) + err), (("terms", terms),))


# ------------------------------------------------------------------ mu
def mu_ct_product(params: ParamSpec, order: int = DEFAULT_PRODUCT_ORDER) -> TruncatedValue:
    """``⟨μ⟩ = Π_{α>0} Π_{i≥1} (1 - x)^2 / ((1 - t_α x)(1 - t_α^{-1} x))``, ``x = q^{(ρ_k,α)+iν_α}``."""
    out = TruncatedValue.exact(1)
    for a in params.rs.positive_roots:
        c = params.rho_character(a)
        t = params.t_of(a)
        out = out * infinite_product([(c, t * c), (c, c / t)], params.q_of(a), 1, order,
                                     f"⟨μ⟩ at root {list(a)}")
    return out


class MuExpansion:
    """Expansion of ``μ`` on the unit torus in fixed point arithmetic.

    ``μ = Π f(q_α^j X_α) Π f(q_α^j X_α^{-1})`` with ``f(z) = (1 - z)/(1 - t z)``;
    every factor is ``1 - (1-t) Σ_k t^{k-1} z^k``.  Coefficients are integers
    scaled by ``2^bits``.  The error of the whole expansion is bounded in the
    Wiener norm (sum of absolute coefficient errors), so it bounds every
    single coefficient as well.
    """

    def __init__(self, params: ParamSpec, order: int = DEFAULT_MU_ORDER, bits: int = 160,
                 prune_bits: int | None = None):
        self.params = params
        rs = params.rs
        if not params.convergent:
            raise ParameterError("μ expansion requires |q| < 1")
        for nu, t in params.t.items():
            if not abs(t) < 1:
                raise ParameterError("μ expansion requires |t_ν| < 1")
        self.order = order
        self.bits = bits
        prune_bits = bits - 40 if prune_bits is None else prune_bits
        scale = 1 << bits
        prune = 1 << (bits - prune_bits)
        coef: dict = {rs.zero: scale}
        norm = Fraction(1)          # ℓ1 norm bound of the exact truncated product
        err = ZERO                  # ℓ1 error of ``coef`` w.r.t. the truncated product
        omitted = ZERO              # Σ ℓ1 norms of (factor - 1) for j > order
        for a in rs.positive_roots:
            t = params.t_of(a)
            qa = params.q_of(a)
            for sign, j0 in ((1, 0), (-1, 1)):
                root = tuple(sign * x for x in a)
                for j in range(j0, order + 1):
                    z = qa ** j
                    # factor 1 + Σ_k h_k X^{k root}; ``h_err`` bounds |h - h_int|
                    h = []
                    h_err = ZERO
                    hnorm = ZERO
                    term = (1 - t) * z       # (1-t) t^{k-1} z^k at k = 1
                    k = 1
                    while abs(term) * scale >= 1:
                        scaled = -term * scale
                        iv = round(scaled)
                        h.append((k, iv))
                        h_err += abs(iv - scaled) / scale
                        hnorm += abs(term)
                        term *= t * z
                        k += 1
                    rest = abs(term) / (1 - abs(t * z))
                    h_err += rest
                    hnorm += rest
                    base = norm + err
                    if h:
                        coef, e_mul = self._multiply(coef, h, root, scale, prune)
                    else:
                        e_mul = ZERO
                    err = upper(err * (1 + hnorm) + base * h_err + e_mul)
                    norm = upper(norm * (1 + hnorm))
                # factors beyond ``order``
                zz = abs(qa) ** (order + 1)
                omitted += abs(1 - t) * zz / ((1 - abs(qa)) * (1 - abs(t) * zz))
        omitted = upper(omitted)
        if omitted >= 1:
            raise InsufficientCutoffError("μ order too small")
        # ||Π(1 + h) - 1|| <= exp(S) - 1 <= S/(1 - S)
        err += norm * omitted / (1 - omitted)
        self.coef = coef
        self.error = upper(err)
        self.max_coef = Fraction(max(abs(c) for c in coef.values()), scale) + self.error
        self.ct = TruncatedValue(Fraction(coef.get(rs.zero, 0), scale), self.error,
                                 (("mu_order", order),))

    @staticmethod
    def _multiply(coef: dict, h: list, root: tuple, scale: int, prune: int):
        out = dict(coef)
        for b, c in coef.items():
            for k, iv in h:
                key = tuple(x + k * y for x, y in zip(b, root))
                out[key] = out.get(key, 0) + (c * iv) // scale
        # one ulp per product from the floor
        err = Fraction(len(coef) * len(h), scale)
        pruned = 0
        for key in [k for k, c in out.items() if abs(c) < prune]:
            pruned += abs(out.pop(key))
        err += Fraction(pruned, scale)
        return out, err

    def mu_coefficient(self, f: Sequence[int]) -> TruncatedValue:
        return TruncatedValue(Fraction(self.coef.get(tuple(f), 0), 1 << self.bits), self.error)

    def mu_circ_coefficient(self, f: Sequence[int]) -> TruncatedValue:
        return self.mu_coefficient(f) / self.ct

    def mu_circ_uniform_tail(self) -> Fraction:
        """One bound valid for every ``μ∘`` coefficient error."""
        e = self.error
        d = abs(self.ct.value)
        if d <= e:
            raise InsufficientCutoffError("μ constant term not certified")
        return upper(e / d + self.max_coef * e / (d * (d - e)))


def mu_coefficients(params: ParamSpec, order: int = DEFAULT_MU_ORDER) -> MuExpansion:
    key = (params, order)
    hit = _MU_CACHE.get(key)
    if hit is None:
        hit = MuExpansion(params, order)
        _MU_CACHE[key] = hit
    return hit


_MU_CACHE: dict = {}


def constant_term_pairing(p: LaurentPoly, r: LaurentPoly, mu: MuExpansion) -> TruncatedValue:
    """``⟨p r μ∘⟩`` with ``p, r`` exact polynomials."""
    scale = 1 << mu.bits
    total = ZERO
    for d, x in p.terms.items():
        for e, y in r.terms.items():
            f = tuple(-u - w for u, w in zip(d, e))
            c = mu.coef.get(f)
            if c:
                total += x * y * c
    value = total / scale / mu.ct.value
    bound = p.norm1() * r.norm1() * mu.mu_circ_uniform_tail()
    return TruncatedValue.make(value, bound, (("mu_order", mu.order),))
