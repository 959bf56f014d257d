"""Global spherical functions and their Harish-Chandra type decompositions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Callable, Sequence

from .errors import ConventionError, InsufficientCutoffError, PoleError
from .macdonald import (
    e_poly, poincare_value, star_e_polynomial,
    symmetric_P, symmetric_norm, pairing,
)
from .polyring import ONE, ZERO, ParamSpec, SpectralPoint, fmt
from .qseries import (
    DEFAULT_MU_ORDER, DEFAULT_PRODUCT_ORDER, DEFAULT_THETA_SHELLS, TruncatedValue,
    _shell_tail, infinite_product, mu_ct_product, sigma_star_value, sigma_value,
    theta_value, tv, tv_sum, upper,
)
from .rootdata import ellipsoid_bounds

DEFAULT_PSI_SHELLS = 36
DEFAULT_XI_DEPTH = 20
DEFAULT_TOLERANCE = Fraction(1, 10 ** 30)
DEFAULT_MAX_TAIL = Fraction(1, 10 ** 10)


@dataclass
class Cutoffs:
    theta_shells: int = DEFAULT_THETA_SHELLS
    product_order: int = DEFAULT_PRODUCT_ORDER
    mu_order: int = DEFAULT_MU_ORDER
    psi_shells: int = DEFAULT_PSI_SHELLS
    xi_depth: int = DEFAULT_XI_DEPTH
    psi_target: Fraction = Fraction(1, 10 ** 30)


DEFAULT_CUTOFFS = Cutoffs()


@dataclass
class IdentityReport:
    identity: str
    params: dict
    lhs: TruncatedValue
    rhs: TruncatedValue
    tolerance: Fraction = DEFAULT_TOLERANCE
    max_tail: Fraction = DEFAULT_MAX_TAIL
    details: dict = field(default_factory=dict)
    exact_checks: dict = field(default_factory=dict)

    @property
    def residual(self) -> TruncatedValue:
        return self.lhs - self.rhs

    @property
    def tail_budget(self) -> Fraction:
        return self.residual.tail

    @property
    def passed(self) -> bool:
        r = self.residual
        ok = abs(r.value) <= r.tail + self.tolerance and r.tail <= self.max_tail
        return ok and all(self.exact_checks.values())

    def to_json(self) -> dict:
        r = self.residual
        return {
            "identity": self.identity,
            "params": self.params,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "residual": fmt(r.value),
            "residual_float": float(r.value),
            "tail_budget": fmt(r.tail),
            "tail_budget_float": float(r.tail),
            "tolerance": fmt(self.tolerance),
            "max_tail": fmt(self.max_tail),
            "exact_checks": {k: bool(v) for k, v in self.exact_checks.items()},
            "details": self.details,
            "pass": self.passed,
        }


def _echo(params: ParamSpec, **points) -> dict:
    out = params.echo()
    for k, v in points.items():
        out[k] = v.to_json()["generators"] if isinstance(v, SpectralPoint) else v
    return out


# ------------------------------------------------------------------ Ψ, G, θ(q^ρ)
_NORMS: dict = {}


def norm_value(params: ParamSpec, b: tuple, order: int) -> TruncatedValue:
    key = (params, b, order)
    hit = _NORMS.get(key)
    if hit is None:
        hit = pairing(params, b, b, order)
        _NORMS[key] = hit
    return hit


def _weights_by_shell(params: ParamSpec, max_shell: int) -> dict:
    from itertools import product

    rs = params.rs
    shells: dict = {}
    for b in product(*(range(-k, k + 1) for k in ellipsoid_bounds(rs, max_shell))):
        s = rs.pair(b, b) / 2
        if s <= max_shell:
            shells.setdefault(ceil(s), []).append(b)
    return shells


def _psi_prefactor(params: ParamSpec, b: tuple) -> Fraction:
    rs = params.rs
    bm, _, _ = rs.dominant_split(b)
    return params.v ** int(rs.m * rs.pair(b, b)) * params.rho_character(bm, -1)


def psi_value(x: SpectralPoint, lam: SpectralPoint, cut: Cutoffs = DEFAULT_CUTOFFS) -> TruncatedValue:
    """``Ψ(X, Λ) = Σ_b q^{(b,b)/2 - (b_-,ρ_k)} E_b^*(X) E_b(Λ) / ⟨E_b E_b^* μ∘⟩``.

    Shells ``ceil((b,b)/2)`` are added until the geometric shell estimate of
    the remainder drops below ``cut.psi_target`` (and never past
    ``cut.psi_shells``).
    """
    params = x.params
    shells = _weights_by_shell(params, cut.psi_shells)
    total = []
    shell_abs: dict = {}
    tail = None
    used = 0
    for s in range(0, cut.psi_shells + 1):
        for b in shells.get(s, ()):
            term = _psi_prefactor(params, b) * star_e_polynomial(params, b)(x) * e_poly(params, b)(lam)
            val = tv(term) / norm_value(params, b, cut.mu_order)
            total.append(val)
            shell_abs[s] = shell_abs.get(s, ZERO) + abs(val.value)
        used = s
        if s >= 12:
            try:
                tail = _shell_tail(shell_abs, "Ψ")
            except InsufficientCutoffError:
                tail = None
            if tail is not None and tail <= cut.psi_target:
                break
    if tail is None:
        raise InsufficientCutoffError("Ψ shell sums do not decay within the shell cap")
    out = tv_sum(total)
    return TruncatedValue.make(out.value, out.tail + tail,
                               (("psi_shells", used), ("mu_order", cut.mu_order)))


def theta_rho(params: ParamSpec, cut: Cutoffs = DEFAULT_CUTOFFS) -> TruncatedValue:
    return theta_value(params.point_rho(1), cut.theta_shells)


def g_value(x: SpectralPoint, lam: SpectralPoint, cut: Cutoffs = DEFAULT_CUTOFFS) -> TruncatedValue:
    """``G = θ(q^{ρ_k}) Ψ / (θ(X) θ(Λ))``."""
    th_x = theta_value(x, cut.theta_shells)
    th_l = theta_value(lam, cut.theta_shells)
    return theta_rho(x.params, cut) * psi_value(x, lam, cut) / (th_x * th_l)


def shintani_constant(params: ParamSpec, order: int = DEFAULT_PRODUCT_ORDER) -> TruncatedValue:
    """``Π_{α>0} Π_{j≥1} (1 - q^{(ρ_k,α)+ν_α j})/(1 - t_α^{-1} q^{(ρ_k,α)+ν_α j})``."""
    out = tv(1)
    for a in params.rs.positive_roots:
        c = params.rho_character(a)
        out = out * infinite_product([(c, c / params.t_of(a))], params.q_of(a), 1, order,
                                     f"Shintani constant at {list(a)}")
    return out


def shintani_residual(b: Sequence[int], x: SpectralPoint, cut: Cutoffs = DEFAULT_CUTOFFS,
                      **kw) -> IdentityReport:
    params = x.params
    b = tuple(b)
    lam = params.point_sharp(b)
    lhs = g_value(x, lam, cut)
    e = e_poly(params, b)
    rhs = tv(e(x) / e(params.point_rho(-1))) * shintani_constant(params, cut.product_order)
    return IdentityReport("shintani", _echo(params, b=list(b), x=x), lhs, rhs, **kw)


def psi_symmetry_residual(x: SpectralPoint, lam: SpectralPoint, cut: Cutoffs = DEFAULT_CUTOFFS,
                          **kw) -> IdentityReport:
    return IdentityReport("psi-symmetry", _echo(x.params, x=x, lam=lam),
                          psi_value(x, lam, cut), psi_value(lam, x, cut), **kw)


# ------------------------------------------------------------------ A1 series
def _a1(params: ParamSpec) -> tuple[Fraction, Fraction]:
    if params.rs.type_label != "A1":
        raise ValueError("A1 only")
    return params.q, params.t[1]


def _xi_series(params: ParamSpec, x2inv: Fraction, l2: Fraction, pref: Callable,
               J: int, lead: Fraction, ratio_pref: Callable, shift: int = 0) -> TruncatedValue:
    """``Σ_{j≥0} pref(j) z^j Π_{s=1}^j (1-tq^{s-1})(1-tq^{s-1}l2)/((1-q^s)(1-q^{s-shift} l2))``.

    ``z`` is ``x2inv`` times the per-step constant folded into it by the caller.
    ``ratio_pref(J)`` bounds ``|pref(j+1)/pref(j)|`` for ``j >= J``.
    """
    q, t = _a1(params)
    total = ZERO
    prod = ONE
    term = ZERO
    for j in range(J + 1):
        if j:
            den = (1 - q ** j) * (1 - q ** (j - shift) * l2)
            if den == 0:
                raise PoleError(f"Ξ series pole at j={j}")
            prod *= x2inv * (1 - t * q ** (j - 1)) * (1 - t * q ** (j - 1) * l2) / den
        term = pref(j) * prod
        total += term
    aq, at, al = abs(q), abs(t), abs(l2)
    qj = aq ** (J + 1 - shift)
    if qj * al >= 1:
        raise InsufficientCutoffError("Ξ depth too small for this Λ")
    r = (abs(x2inv) * (1 + at * aq ** J) * (1 + at * aq ** J * al)
         / ((1 - aq ** (J + 1)) * (1 - qj * al))) * ratio_pref(J)
    if r >= 1:
        raise InsufficientCutoffError("Ξ series outside its convergence region")
    tail = abs(term) * r / (1 - r) if term else ZERO
    if lead == 0 and term == 0:
        tail = ZERO
    return TruncatedValue.make(total, upper(tail), (("xi_depth", J),))


def xi_a1(kind: str, X: Fraction, L: Fraction, params: ParamSpec, J: int = DEFAULT_XI_DEPTH) -> TruncatedValue:
    """The A1 asymptotic series ``Ξ_-``, ``Ξ_+``, ``Ξ̃_-``, ``Ξ̃_+`` and ``Ξ̂_+``.

    ``X`` and ``L`` are the values of ``X`` and ``Λ`` on the fundamental weight.
    """
    q, t = _a1(params)
    X, L = Fraction(X), Fraction(L)
    l2 = L * L
    if kind in ("minus", "minus_tilde"):
        d = 1 - t / l2
        if d == 0:
            raise PoleError("1 - tΛ^{-2} = 0")
        x2 = q / t / (X * X)
        pref = lambda j: (1 - t * q ** j) / d  # noqa: E731
        ratio = lambda J: (1 + abs(t) * abs(q) ** (J + 1)) / (1 - abs(t) * abs(q) ** J)  # noqa: E731
        out = _xi_series(params, x2, l2, pref, J, ONE, ratio)
        if kind == "minus_tilde":
            if l2 == 1:
                raise PoleError("1 - Λ^{-2} = 0")
            out = out * tv(d / (1 - 1 / l2))
        return out
    if kind in ("plus", "plus_tilde"):
        d = 1 - t * l2
        if d == 0:
            raise PoleError("1 - tΛ^2 = 0")
        x2 = q / t / (X * X)
        pref = lambda j: (1 - t * q ** j * l2) / d  # noqa: E731
        ratio = lambda J: ((1 + abs(t) * abs(q) ** (J + 1) * abs(l2))  # noqa: E731
                           / (1 - abs(t) * abs(q) ** J * abs(l2)))
        return _xi_series(params, x2, l2, pref, J, ONE, ratio)
    if kind == "plus_hat":
        x2 = X * X / t
        return _xi_series(params, x2, l2, lambda j: ONE, J, ONE, lambda J: ONE, shift=1)
    raise ValueError(f"unknown Ξ kind {kind}")


def xi_a1_coefficients(kind: str, L2: Fraction, params: ParamSpec, J: int) -> dict:
    """Exact coefficients of ``X^{-2j}`` (``j <= J``) in ``Ξ̃_±`` at ``Λ^2 = L2``."""
    q, t = _a1(params)
    out = {}
    prod = ONE
    for j in range(J + 1):
        if j:
            prod *= (q / t) * (1 - t * q ** (j - 1)) * (1 - t * q ** (j - 1) * L2) / (
                (1 - q ** j) * (1 - q ** j * L2))
        if kind == "minus_tilde":
            out[j] = (1 - t * q ** j) / (1 - 1 / L2) * prod if j else (1 - t) / (1 - 1 / L2)
        elif kind == "plus_tilde":
            out[j] = (1 - t * q ** j * L2) / (1 - t * L2) * prod
        else:
            raise ValueError(kind)
    return out


def _a1_num(params: ParamSpec, value: Fraction) -> SpectralPoint:
    return params.point_numeric([value])


def hc_a1_residual(X: Fraction, L: Fraction | SpectralPoint, params: ParamSpec,
                   cut: Cutoffs = DEFAULT_CUTOFFS, **kw) -> IdentityReport:
    """Ψ against the two-term σ-decomposition for A1."""
    q, t = _a1(params)
    X = Fraction(X)
    if X * X <= abs(q) / abs(t):
        raise ValueError("|X| outside the convergence region of the decomposition")
    lam = L if isinstance(L, SpectralPoint) else _a1_num(params, L)
    Lv = lam.generators[0]
    x = _a1_num(params, X)
    th = params.point_rho(1)
    lhs = psi_value(x, lam, cut)
    mu = mu_ct_product(params, cut.product_order)
    w_minus = sigma_value(lam.inverse(), cut.product_order)
    w_plus = sigma_value(lam, cut.product_order)
    terms = []
    details = {"sigma_inv": w_minus.to_json(), "sigma": w_plus.to_json()}
    if w_minus.value != 0 or w_minus.tail:
        terms.append(w_minus * theta_value(x * lam * th, cut.theta_shells)
                     * xi_a1("minus", X, Lv, params, cut.xi_depth))
    if w_plus.value != 0 or w_plus.tail:
        terms.append(w_plus * theta_value(x * lam.inverse() * th, cut.theta_shells)
                     * xi_a1("plus", X, 1 / Lv, params, cut.xi_depth))
    rhs = mu * tv_sum(terms)
    return IdentityReport("hc-a1", _echo(params, X=fmt(X), lam=lam), lhs, rhs,
                          details=details, **kw)


def _sym_series(params: ParamSpec, X: Fraction, l2: Fraction, J: int) -> TruncatedValue:
    q, t = _a1(params)
    ratio = lambda J: ONE  # noqa: E731
    return _xi_series(params, q / t / (X * X), l2, lambda j: ONE, J, ONE, ratio)


def symmetric_hc_a1_residual(X: Fraction, L: Fraction, params: ParamSpec,
                             cut: Cutoffs = DEFAULT_CUTOFFS, **kw) -> IdentityReport:
    """Φ from the ``P``-sum against its two-term σ-decomposition."""
    q, t = _a1(params)
    X, L = Fraction(X), Fraction(L)
    x, lam = _a1_num(params, X), _a1_num(params, L)
    th = params.point_rho(1)
    lhs = phi_value(x, lam, cut)
    mu = mu_ct_product(params, cut.product_order)
    a = sigma_value(lam.inverse(), cut.product_order) * theta_value(x * lam * th, cut.theta_shells) \
        * _sym_series(params, X, L * L, cut.xi_depth)
    b = sigma_value(lam, cut.product_order) * theta_value(x * lam.inverse() * th, cut.theta_shells) \
        * _sym_series(params, X, 1 / (L * L), cut.xi_depth)
    rhs = mu * (a + b) / (1 + t)
    return IdentityReport("hc-sym-a1", _echo(params, X=fmt(X), L=fmt(L)), lhs, rhs, **kw)


def phi_consistency_a1(X: Fraction, L: Fraction, params: ParamSpec,
                       cut: Cutoffs = DEFAULT_CUTOFFS, **kw) -> IdentityReport:
    """Φ from the ``P``-sum against ``θ(X)θ(Λ)/θ(t^{1/2}) F`` with F built from G."""
    q, t = _a1(params)
    x, lam = _a1_num(params, Fraction(X)), _a1_num(params, Fraction(L))
    l2 = Fraction(L) ** 2
    f = (tv((t - 1 / l2) / (1 - 1 / l2)) * g_value(x, lam.inverse(), cut)
         + tv((t - l2) / (1 - l2)) * g_value(x, lam, cut)) / (1 + t)
    rhs = theta_value(x, cut.theta_shells) * theta_value(lam, cut.theta_shells) * f / theta_rho(params, cut)
    return IdentityReport("phi-consistency-a1", _echo(params, X=fmt(Fraction(X)), L=fmt(Fraction(L))),
                          phi_value(x, lam, cut), rhs, **kw)


# ------------------------------------------------------------------ Φ and F
_SYM_NORMS: dict = {}


def _sym_norm(params: ParamSpec, b: tuple, order: int) -> TruncatedValue:
    key = (params, b, order)
    hit = _SYM_NORMS.get(key)
    if hit is None:
        hit = symmetric_norm(params, b, order)
        _SYM_NORMS[key] = hit
    return hit


def phi_value(x: SpectralPoint, lam: SpectralPoint, cut: Cutoffs = DEFAULT_CUTOFFS) -> TruncatedValue:
    """``Φ = Σ_{b ∈ P_-} q^{(b,b)/2 - (b,ρ_k)} P_b(X) P_{ι(b)}(Λ) / ⟨P_b P_{ι(b)} μ∘⟩``."""
    params = x.params
    rs = params.rs
    shells = _weights_by_shell(params, cut.psi_shells)
    total = []
    shell_abs: dict = {}
    tail = None
    used = 0
    for s in range(0, cut.psi_shells + 1):
        for b in shells.get(s, ()):
            if not rs.is_antidominant(b):
                continue
            pref = params.v ** int(rs.m * rs.pair(b, b)) * params.rho_character(b, -1)
            term = pref * symmetric_P(params, b)(x) * symmetric_P(params, rs.iota(b))(lam)
            val = tv(term) / _sym_norm(params, b, cut.mu_order)
            total.append(val)
            shell_abs[s] = shell_abs.get(s, ZERO) + abs(val.value)
        used = s
        if s >= 12:
            try:
                tail = _shell_tail(shell_abs, "Φ")
            except InsufficientCutoffError:
                tail = None
            if tail is not None and tail <= cut.psi_target:
                break
    if tail is None:
        raise InsufficientCutoffError("Φ shell sums do not decay within the shell cap")
    out = tv_sum(total)
    return TruncatedValue.make(out.value, out.tail + tail, (("phi_shells", used),))


def f_value(x: SpectralPoint, lam: SpectralPoint, cut: Cutoffs = DEFAULT_CUTOFFS) -> TruncatedValue:
    th_x = theta_value(x, cut.theta_shells)
    th_l = theta_value(lam, cut.theta_shells)
    return theta_rho(x.params, cut) * phi_value(x, lam, cut) / (th_x * th_l)


def f_connection_residual(x: SpectralPoint, lam: SpectralPoint, cut: Cutoffs = DEFAULT_CUTOFFS,
                          **kw) -> IdentityReport:
    """``𝒫_R(t) F(X,Λ)`` against ``Σ_w Π_{α>0} (t_α - Λ_{wα})/(1 - Λ_{wα}) G(X, w^{-1}Λ)``."""
    params = x.params
    rs = params.rs
    lhs = tv(poincare_value(params)) * f_value(x, lam, cut)
    terms = []
    for w in rs.weyl_group:
        c = ONE
        for a in rs.positive_roots:
            la = lam(w(a))
            if la == 1:
                raise PoleError("Λ_{w(α)} = 1 in the connection formula")
            c *= (params.t_of(a) - la) / (1 - la)
        terms.append(tv(c) * g_value(x, lam.pullback(w), cut))
    return IdentityReport("f-connection", _echo(params, x=x, lam=lam), lhs, tv_sum(terms), **kw)


def f_shintani_residual(b_minus: Sequence[int], x: SpectralPoint, cut: Cutoffs = DEFAULT_CUTOFFS,
                        **kw) -> IdentityReport:
    """``F(X, q^{b - ρ_k}) = P_b(X)/P_b(q^{ρ_k}) · Π(...)`` for antidominant ``b``."""
    params = x.params
    b = tuple(b_minus)
    lam = params.point_shifted_minus(b)
    lhs = f_value(x, lam, cut)
    p = symmetric_P(params, b)
    rhs = tv(p(x) / p(params.point_rho(1))) * shintani_constant(params, cut.product_order)
    return IdentityReport("f-shintani", _echo(params, b=list(b), x=x), lhs, rhs, **kw)


# ------------------------------------------------------------------ stabilization
@dataclass
class XiTable:
    w: object
    b_minus: tuple
    lam: SpectralPoint
    entries: dict

    def to_json(self) -> dict:
        return {"w": list(self.w.word), "b_minus": list(self.b_minus),
                "lam": self.lam.to_json(),
                "entries": [[list(a), fmt(c)] for a, c in sorted(self.entries.items())]}


def xi_stabilized(params: ParamSpec, w, b_minus: Sequence[int], a_cutoff: int | None = None) -> XiTable:
    """Coefficients of ``X_{-b_+} E_{w(b_-)}`` as a series in ``X_a^{-1}``, ``a ∈ Q_+``."""
    rs = params.rs
    b_minus = tuple(b_minus)
    if not rs.is_antidominant(b_minus):
        raise ValueError("b_minus must be antidominant")
    b = w(b_minus)
    _, bp, u = rs.dominant_split(b)
    if rs.inverse(u) != w:
        raise ConventionError(f"u_b^{{-1}} = {rs.inverse(u)} differs from w = {w}; "
                              "use a strictly antidominant b_minus")
    e = e_poly(params, b)
    entries = {}
    for d, c in e.terms.items():
        diff = tuple(x - y for x, y in zip(bp, d))
        coords = rs.root_coords(diff)
        if any(x.denominator != 1 or x < 0 for x in coords):
            raise ConventionError(f"support of X_{{-b_+}}E_b leaves -Q_+ at X_{list(d)}")
        a = tuple(int(x) for x in coords)
        if a_cutoff is None or sum(a) <= a_cutoff:
            entries[a] = c
    return XiTable(w, b_minus, params.point_shifted_minus(b_minus), entries)


def a2_xi_constant(params: ParamSpec, lam: SpectralPoint) -> Fraction:
    """The constant term of ``Ξ^{(id)}`` for A2 as a rational function of ``Λ``."""
    t = params.t[1]
    l1, l2, l12 = (1 / lam(a) for a in _a2_roots(params))
    num = (1 - t) * (1 - t + t * t - t * (l1 + l2 - l12))
    return num / ((1 - l1) * (1 - l2) * (1 - l12))


def a2_xi_alpha(params: ParamSpec, lam: SpectralPoint, which: int) -> Fraction:
    """The coefficient of ``X_{α_i}^{-1}`` in ``Ξ^{(id)}`` for A2 (``which`` = 1 or 2)."""
    q, t = params.q, params.t[1]
    r1, r2, r12 = _a2_roots(params)
    if which == 2:
        r1, r2 = r2, r1
    L1, L2, L12 = lam(r1), lam(r2), lam(r12)
    pre = q * (1 - t) ** 2 * (1 - t * L2) / (t * (1 - q) * (1 - q * L2))
    num = 1 - t + q * t * t - t * (q / L1 + 1 / L2 - 1 / L12)
    return pre * num / ((1 - 1 / L1) * (1 - 1 / L2) * (1 - 1 / L12))


def _a2_roots(params: ParamSpec) -> tuple:
    rs = params.rs
    if rs.type_label != "A2":
        raise ValueError("A2 only")
    a1, a2 = rs.simple_roots
    return a1, a2, tuple(x + y for x, y in zip(a1, a2))


# ------------------------------------------------------------------ decomposition weights
def weight_factor(w, lam: SpectralPoint, order: int = DEFAULT_PRODUCT_ORDER) -> TruncatedValue:
    """``w_Λ(σ_*(Λ)) Π_{α>0>w(α)} (1 - t_α Λ_{w(α)}^{-1})/(1 - Λ_{w(α)}^{-1})``."""
    params = lam.params
    rs = params.rs
    fin = ONE
    for a in rs.positive_roots:
        wa = w(a)
        if rs.is_positive_root(wa):
            continue
        li = 1 / lam(wa)
        if li == 1:
            raise PoleError(f"weight factor pole at α={list(a)}")
        fin *= (1 - params.t_of(a) * li) / (1 - li)
    if fin == 0:
        # still reject poles of the σ_* part
        _sigma_star_poles(lam.pullback(w))
        return tv(0)
    return tv(fin) * sigma_star_value(lam.pullback(w), order)


def _sigma_star_poles(pt: SpectralPoint) -> None:
    params = pt.params
    for a in params.rs.positive_roots:
        li = 1 / pt(a)
        qa = params.q_of(a)
        x = qa * li
        for _ in range(400):
            if x == 1:
                raise PoleError("σ_* pole")
            if abs(x) < 1 and abs(qa) < 1 and abs(x) < abs(qa) ** 0:
                if abs(x) < 1:
                    break
            x *= qa


def hc_general_residual(b: Sequence[int], x: SpectralPoint, cut: Cutoffs = DEFAULT_CUTOFFS,
                        **kw) -> IdentityReport:
    """Ψ(x, q^{b♯}) against the σ-decomposition, where only ``w = u_b^{-1}`` survives."""
    params = x.params
    rs = params.rs
    b = tuple(b)
    lam = params.point_sharp(b)
    _, bp, u = rs.dominant_split(b)
    w_surv = rs.inverse(u)
    zero_ok = True
    zeros = []
    for v in rs.weyl_group:
        if v == w_surv:
            continue
        f = weight_factor(v, lam, cut.product_order)
        ok = f.value == 0 and f.tail == 0
        zero_ok &= ok
        zeros.append([list(v.word), ok])
    lhs = psi_value(x, lam, cut)
    wf = weight_factor(w_surv, lam, cut.product_order)
    lp = lam.pullback(w_surv)
    pt = SpectralPoint(params, [])
    # a -> Λ(w ι a) x(a) q^{(ρ_k, a)}
    pt = lp.iota() * x * params.point_rho(1)
    stab = e_poly(params, b).shift(tuple(-c for c in bp))
    rhs = mu_ct_product(params, cut.product_order) * wf * theta_value(pt, cut.theta_shells) * tv(stab(x))
    return IdentityReport("hc-general", _echo(params, b=list(b), x=x), lhs, rhs,
                          details={"surviving_w": list(w_surv.word), "zero_weights": zeros},
                          exact_checks={"non_surviving_weights_vanish": zero_ok}, **kw)


def orbit_sum_residual(params: ParamSpec, b_minus: Sequence[int], c: Sequence[int],
                       cut: Cutoffs = DEFAULT_CUTOFFS, **kw) -> IdentityReport:
    """``σ_*(q^{b_- - ρ_k}) E_{b_-}(Λ)`` against the W-sum at ``Λ = q^{c♯}``."""
    rs = params.rs
    b_minus, c = tuple(b_minus), tuple(c)
    if not rs.is_antidominant(b_minus):
        raise ValueError("b_minus must be antidominant")
    lam = params.point_sharp(c)
    xb = params.point_shifted_minus(b_minus)
    lhs = sigma_star_value(xb, cut.product_order) * tv(e_poly(params, b_minus)(lam))
    cm, cp, u = rs.dominant_split(c)
    w_surv = rs.inverse(u)
    zero_ok = True
    for v in rs.weyl_group:
        if v != w_surv:
            f = weight_factor(v, lam, cut.product_order)
            zero_ok &= f.value == 0 and f.tail == 0
    lp = lam.pullback(w_surv)          # = q^{c_- - ρ_k}
    ec = e_poly(params, c)
    xi = ec.shift(tuple(-y for y in cp))(xb)
    # the θ shift produces Λ^ι at b_-, i.e. Λ_{ι(b_-)}^{-1}
    rhs = weight_factor(w_surv, lam, cut.product_order) * tv(xi / lp(rs.iota(b_minus)))
    return IdentityReport("orbit-sum", _echo(params, b_minus=list(b_minus), c=list(c)), lhs, rhs,
                          details={"surviving_w": list(w_surv.word)},
                          exact_checks={"non_surviving_weights_vanish": zero_ok}, **kw)


# ------------------------------------------------------------------ A1 pointwise and limits
def a1_operator_residuals(X: Fraction, L: Fraction, params: ParamSpec,
                          cut: Cutoffs = DEFAULT_CUTOFFS, **kw) -> list[IdentityReport]:
    """``Y(G) = Λ^{-1} G`` and ``T(G) = T_Λ(G)`` at one pair of points."""
    from .hecke import a1_pointwise

    _a1(params)
    x, lam = _a1_num(params, Fraction(X)), _a1_num(params, Fraction(L))
    gx = lambda p: g_value(p, lam, cut)  # noqa: E731
    gl = lambda p: g_value(x, p, cut)  # noqa: E731
    y_lhs = a1_pointwise("Y", gx, x)
    y_rhs = g_value(x, lam, cut) / Fraction(L)
    t_lhs = a1_pointwise("T", gx, x)
    t_rhs = a1_pointwise("T", gl, lam)
    echo = _echo(params, X=fmt(Fraction(X)), L=fmt(Fraction(L)))
    return [IdentityReport("a1-Y(G)", echo, y_lhs, y_rhs, **kw),
            IdentityReport("a1-T(G)", echo, t_lhs, t_rhs, **kw)]


def _psi_via_shintani(lam_value: SpectralPoint, n: int, params: ParamSpec, cut: Cutoffs) -> TruncatedValue:
    """``Ψ(Λ, X_{-n})`` from ``G(Λ, q^{(-n)♯}) = E_{-n}(Λ)/E_{-n}(t^{-1/2}) Π(...)``."""
    shells = max(cut.theta_shells, (n + 12) ** 2 // 4 + 8)
    xn = params.point_sharp((-n,))
    e = e_poly(params, (-n,))
    g = tv(e(lam_value) / e(params.point_rho(-1))) * shintani_constant(params, cut.product_order)
    return g * theta_value(lam_value, shells) * theta_value(xn, shells) / theta_rho(params, cut)


def a1_limit_gaps(L: Fraction, params: ParamSpec, ns: Sequence[int], which: str,
                  cut: Cutoffs = DEFAULT_CUTOFFS) -> list[tuple[int, TruncatedValue]]:
    """Gaps of ``Ψ_-`` (``which='minus'``) or ``Ψ_-^+`` (``'plus'``) to their limits."""
    q, t = _a1(params)
    L = Fraction(L)
    lam = _a1_num(params, L)
    th = params.point_rho(1)
    mu = mu_ct_product(params, cut.product_order)
    if which == "minus":
        target = tv((1 - t) / (1 - t / (L * L))) * sigma_value(lam.inverse(), cut.product_order)
    else:
        target = sigma_value(lam, cut.product_order)
    out = []
    for n in ns:
        shells = max(cut.theta_shells, (n + 12) ** 2 // 4 + 8)
        xn = params.point_sharp((-n,))
        psi = _psi_via_shintani(lam, n, params, cut)
        if which == "minus":
            norm_pt = lam * xn * th
        else:
            norm_pt = xn * th * lam.inverse()
        val = psi / (mu * theta_value(norm_pt, shells))
        out.append((n, val - target))
    return out


def a1_limit_report(L: Fraction, params: ParamSpec, which: str, n_max: int = 12,
                    tolerance: Fraction = Fraction(1, 10 ** 8), cut: Cutoffs = DEFAULT_CUTOFFS) -> IdentityReport:
    gaps = a1_limit_gaps(L, params, [n_max // 2, n_max], which, cut)
    (n1, g1), (n2, g2) = gaps
    ok_dec = abs(g2) < abs(g1)
    ok_small = abs(g2) < tolerance
    rep = IdentityReport(f"limit-a1-{which}", _echo(params, L=fmt(Fraction(L)), n_max=n_max),
                         g2, tv(0), tolerance=tolerance, max_tail=tolerance,
                         details={"gap_half": g1.to_json(), "gap_full": g2.to_json()},
                         exact_checks={"gap_decreases": ok_dec, "gap_below_tolerance": ok_small})
    return rep
