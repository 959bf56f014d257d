"""Nonsymmetric Macdonald polynomials and their companion identities."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ConventionError, NonGenericError, PoleError
from .hecke import OperatorContext, context
from .polyring import ONE, ZERO, LaurentPoly, ParamSpec, SpectralPoint
from .qseries import TruncatedValue, constant_term_pairing, mu_coefficients


@dataclass(frozen=True)
class EPolynomial:
    b: tuple
    poly: LaurentPoly
    sharp: SpectralPoint

    def to_json(self) -> dict:
        return {"b": list(self.b), "coefficients": self.poly.to_json(),
                "sharp": self.sharp.to_json()}


# ------------------------------------------------------------------ eigenproblem
def _order_key(rs, c: tuple) -> tuple:
    """Larger is higher: dominance of ``c_+`` first, then closeness to ``P_-``."""
    _, cp, u = rs.dominant_split(c)
    return (rs.height(cp), -u.length, c)


def _solve_triangular(ctx: OperatorContext, b: tuple, basis: list, lams: list) -> dict:
    rs = ctx.rs
    n = rs.rank
    keyed = sorted(basis, key=lambda c: _order_key(rs, c), reverse=True)
    start = keyed.index(b)
    coef = {b: ONE}
    acc = [dict() for _ in range(n)]

    def absorb(c, x):
        for i in range(n):
            for d, y in ctx.y_omega_monomial(i, c).items():
                acc[i][d] = acc[i].get(d, ZERO) + x * y

    absorb(b, ONE)
    for d in keyed[start + 1:]:
        chosen = None
        for i in range(n):
            diag = ctx.y_omega_monomial(i, d).get(d, ZERO)
            if diag != lams[i]:
                chosen = (i, diag)
                break
        if chosen is None:
            if any(acc[i].get(d, ZERO) for i in range(n)):
                raise NonGenericError(f"eigenvalue collision at X_{list(d)} for E_{list(b)}")
            raise NonGenericError(f"joint eigenspace of E_{list(b)} is not one-dimensional "
                                  f"(resonance at X_{list(d)})")
        i, diag = chosen
        x = -acc[i].get(d, ZERO) / (diag - lams[i])
        if x:
            coef[d] = x
            absorb(d, x)
    # verification of every eigen-relation
    for i in range(n):
        for d in set(acc[i]) | set(coef):
            if acc[i].get(d, ZERO) != lams[i] * coef.get(d, ZERO):
                raise ConventionError("triangular solve failed verification")
    return coef


def _solve_dense(ctx: OperatorContext, b: tuple, basis: list, lams: list) -> dict:
    """Joint kernel of ``Y_{ω_i} - λ_i`` by Gaussian elimination."""
    n = ctx.rs.rank
    index = {c: k for k, c in enumerate(basis)}
    rows = []
    for i in range(n):
        mat = [[ZERO] * len(basis) for _ in basis]
        for k, c in enumerate(basis):
            for d, y in ctx.y_omega_monomial(i, c).items():
                if d not in index:
                    raise ConventionError(f"Y does not preserve the span of E_{list(b)}")
                mat[index[d]][k] += y
            mat[k][k] -= lams[i]
        rows.extend(mat)
    # row reduce
    m = len(basis)
    pivots = []
    r = 0
    for col in range(m):
        piv = next((k for k in range(r, len(rows)) if rows[k][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                f = rows[k][col]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    if len(free) != 1:
        raise NonGenericError(f"joint eigenspace of E_{list(b)} has dimension {len(free)}")
    f = free[0]
    vec = [ZERO] * m
    vec[f] = ONE
    for k, col in enumerate(pivots):
        vec[col] = -rows[k][f]
    lead = vec[index[b]]
    if not lead:
        raise NonGenericError(f"eigenvector of E_{list(b)} has zero leading coefficient")
    return {basis[k]: x / lead for k, x in enumerate(vec) if x}


_E_CACHE: dict = {}


def e_polynomial(params: ParamSpec, b: Sequence[int]) -> EPolynomial:
    """``E_b``: the joint eigenvector of all ``Y_{ω_i}`` with leading ``X_b``."""
    b = tuple(int(x) for x in b)
    key = (params, b)
    hit = _E_CACHE.get(key)
    if hit is not None:
        return hit
    rs = params.rs
    ctx = context(params)
    basis = rs.saturation_span(b)
    lams = [ctx.y_eigenvalue(i, b) for i in range(rs.rank)]
    try:
        coef = _solve_triangular(ctx, b, basis, lams)
    except ConventionError:
        coef = _solve_dense(ctx, b, basis, lams)
    out = EPolynomial(b, LaurentPoly(coef, rs.rank), params.point_sharp(b))
    _E_CACHE.setdefault(key, out)
    return _E_CACHE[key]


def e_poly(params: ParamSpec, b: Sequence[int]) -> LaurentPoly:
    return e_polynomial(params, b).poly


def star_e_polynomial(params: ParamSpec, b: Sequence[int]) -> LaurentPoly:
    """``E_b^*``: recomputed at ``q^{-1}, t^{-1}``, then ``X_c -> X_{-c}``."""
    return e_poly(params.inverted, b).monomial_flip()


# ------------------------------------------------------------------ A1 closed forms
def _qt(params: ParamSpec) -> tuple[Fraction, Fraction]:
    if params.rs.type_label != "A1":
        raise ValueError("A1 closed forms need the A1 system")
    return params.q, params.t[1]


def e_polynomial_a1(params: ParamSpec, n: int) -> LaurentPoly:
    """Terminating series for ``E_n``; the product factor switches the sum off."""
    q, t = _qt(params)
    terms: dict = {}
    if n <= 0:
        k = -n
        for j in range(k + 1):
            c = (1 - t * q ** j) / (1 - t * q ** (k - j))
            for i in range(j):
                c *= (1 - q ** (k - i)) * (1 - t * q ** i) / ((1 - q ** (1 + i)) * (1 - t * q ** (k - i)))
            if c:
                terms[(k - 2 * j,)] = terms.get((k - 2 * j,), ZERO) + c
    else:
        for j in range(n):
            c = q ** j
            for i in range(j):
                c *= (1 - q ** (n - i - 1)) * (1 - t * q ** i) / ((1 - q ** (1 + i)) * (1 - t * q ** (n - i - 1)))
            if c:
                terms[(n - 2 * j,)] = terms.get((n - 2 * j,), ZERO) + c
    return LaurentPoly(terms, 1)


def e_polynomial_a1_finite(params: ParamSpec, n: int) -> LaurentPoly:
    """The finite-sum presentation of ``E_n`` (two partial sums per sign)."""
    q, t = _qt(params)
    terms: dict = {}

    def add(e, c):
        terms[(e,)] = terms.get((e,), ZERO) + c

    if n == 0:
        return LaurentPoly.constant(1, 1)
    if n < 0:
        k = -n

        def prod(j):
            c = ONE
            for i in range(j):
                c *= (1 - q ** (k - i)) * (1 - t * q ** i) / ((1 - q ** (1 + i)) * (1 - t * q ** (k - i)))
            return c

        add(-k, ONE)
        add(k, (1 - t) / (1 - t * q ** k))
        for j in range(1, k // 2 + 1):
            add(2 * j - k, prod(j))
        for j in range(1, (k - 1) // 2 + 1):
            add(k - 2 * j, (1 - t * q ** j) / (1 - t * q ** (k - j)) * prod(j))
    else:
        def prod(j):
            c = ONE
            for i in range(j):
                c *= (1 - q ** (n - i - 1)) * (1 - t * q ** i) / ((1 - q ** (1 + i)) * (1 - t * q ** (n - i - 1)))
            return c

        add(n, ONE)
        for j in range(1, n // 2 + 1):
            add(2 * j - n, q ** (n - j) * (1 - q ** j) / (1 - q ** (n - j)) * prod(j))
        for j in range(1, (n - 1) // 2 + 1):
            add(n - 2 * j, q ** j * prod(j))
    return LaurentPoly(terms, 1)


def evaluation_a1(params: ParamSpec, n: int) -> Fraction:
    """``E_n(t^{-1/2}) = t^{-|n|/2} Π_{0<j<ñ} (1 - q^j t^2)/(1 - q^j t)``."""
    q, t = _qt(params)
    nt = abs(n) + 1 if n <= 0 else n
    out = params.t_half(1) ** (-abs(n))
    for j in range(1, nt):
        out *= (1 - q ** j * t * t) / (1 - q ** j * t)
    return out


# ------------------------------------------------------------------ evaluation and duality
def evaluation_product(params: ParamSpec, b: Sequence[int]) -> Fraction:
    """``E_b(q^{-ρ_k})`` by the product formula with ``j(b, α)``."""
    rs = params.rs
    bm, _, u = rs.dominant_split(b)
    uinv = rs.inverse(u)
    out = params.rho_character(bm)
    for a in rs.positive_roots:
        xi = 0 if rs.is_positive_root(uinv(a)) else 1
        jmax = -int(rs.coroot_pair(bm, a)) - xi
        xa = params.rho_character(a)
        qa, ta = params.q_of(a), params.t_of(a)
        for j in range(1, jmax + 1):
            den = 1 - qa ** j * xa
            if den == 0:
                raise PoleError(f"evaluation product pole at α={list(a)}, j={j}")
            out *= (1 - qa ** j * ta * xa) / den
    return out


def duality_gap(params: ParamSpec, b: Sequence[int], c: Sequence[int]) -> Fraction:
    """``E_b(q^{c♯}) E_c(q^{-ρ_k}) - E_c(q^{b♯}) E_b(q^{-ρ_k})``."""
    eb = e_polynomial(params, b)
    ec = e_polynomial(params, c)
    m_rho = params.point_rho(-1)
    return eb.poly(ec.sharp) * ec.poly(m_rho) - ec.poly(eb.sharp) * eb.poly(m_rho)


# ------------------------------------------------------------------ symmetric polynomials
def _orbit_factor(params: ParamSpec, c: tuple, only_positive_pairing: bool) -> Fraction:
    rs = params.rs
    pt = params.point_sharp(c)
    out = ONE
    for a in rs.positive_roots:
        if only_positive_pairing and not rs.pair(a, c) > 0:
            continue
        x = pt(a)
        if x == 1:
            raise PoleError(f"orbit coefficient pole at α={list(a)}")
        out *= (params.t_of(a) - x) / (1 - x)
    return out


def symmetric_P(params: ParamSpec, b_minus: Sequence[int]) -> LaurentPoly:
    """``P_{b_-} = Σ_{c ∈ W b_+} Π_{(α,c)>0} (t_α - X_α(q^{c♯}))/(1 - X_α(q^{c♯})) E_c``."""
    rs = params.rs
    b_minus = tuple(b_minus)
    if not rs.is_antidominant(b_minus):
        raise ValueError("symmetric_P expects an antidominant weight")
    out = LaurentPoly({}, rs.rank)
    for c in rs.orbit(b_minus):
        out = out + e_poly(params, c) * _orbit_factor(params, c, True)
    return out


def symmetric_P_normalized(params: ParamSpec, b_minus: Sequence[int]) -> LaurentPoly:
    """``P''_{b_-} = Σ_c Π_{α>0} (t_α - X_α(q^{c♯}))/(1 - X_α(q^{c♯})) E'_c``."""
    rs = params.rs
    m_rho = params.point_rho(-1)
    out = LaurentPoly({}, rs.rank)
    for c in rs.orbit(tuple(b_minus)):
        e = e_poly(params, c)
        out = out + e * (_orbit_factor(params, c, False) / e(m_rho))
    return out


def symmetric_P_normalized_alt(params: ParamSpec, b_minus: Sequence[int]) -> LaurentPoly:
    """The same ``P''`` through the split product over ``u_c^{-1}(α) > 0``."""
    rs = params.rs
    b_minus = tuple(b_minus)
    m_rho = params.point_rho(-1)
    pt = params.point_rho(1) * params.point_q(tuple(-x for x in b_minus))
    out = LaurentPoly({}, rs.rank)
    for c in rs.orbit(b_minus):
        _, _, u = rs.dominant_split(c)
        uinv = rs.inverse(u)
        f = _orbit_factor(params, c, True)
        for a in rs.positive_roots:
            if rs.is_positive_root(uinv(a)):
                x = pt(a)
                f *= (1 - params.t_of(a) * x) / (1 - x)
        e = e_poly(params, c)
        out = out + e * (f / e(m_rho))
    return out


def poincare_value(params: ParamSpec) -> Fraction:
    """``𝒫_R(t) = Π_{α>0} (1 - t_α q^{(α,ρ_k)})/(1 - q^{(α,ρ_k)})``."""
    out = ONE
    for a in params.rs.positive_roots:
        x = params.rho_character(a)
        if x == 1:
            raise PoleError("Poincaré product pole")
        out *= (1 - params.t_of(a) * x) / (1 - x)
    return out


def p_evaluation_product(params: ParamSpec, b_minus: Sequence[int]) -> Fraction:
    """``E_{b_+}(q^{-ρ_k}) Π (1 - t_α X_α(q^{ρ_k}))/(1 - X_α(q^{ρ_k}))``.

    The product runs over ``α > 0`` with ``(α, b_-) ≠ 0``; roots orthogonal
    to ``b_-`` contribute nothing (``P_0 = 1``).
    """
    rs = params.rs
    b_minus = tuple(b_minus)
    bp = rs.w0(b_minus)
    out = evaluation_product(params, bp)
    for a in rs.positive_roots:
        if rs.pair(a, b_minus) == 0:
            continue
        x = params.rho_character(a)
        out *= (1 - params.t_of(a) * x) / (1 - x)
    return out


# ------------------------------------------------------------------ pairings
def pairing(params: ParamSpec, b: Sequence[int], c: Sequence[int],
            order: int = 60) -> TruncatedValue:
    """``⟨E_b E_c^* μ∘⟩`` from the truncated expansion of ``μ``."""
    mu = mu_coefficients(params, order)
    return constant_term_pairing(e_poly(params, b), star_e_polynomial(params, c), mu)


def norm(params: ParamSpec, b: Sequence[int], order: int = 60) -> TruncatedValue:
    return pairing(params, b, b, order)


def symmetric_norm(params: ParamSpec, b_minus: Sequence[int], order: int = 60) -> TruncatedValue:
    """``⟨P_b P_{ι(b)} μ∘⟩`` for antidominant ``b``."""
    rs = params.rs
    p = symmetric_P(params, b_minus)
    r = symmetric_P(params, rs.iota(tuple(b_minus)))
    return constant_term_pairing(p, r, mu_coefficients(params, order))


__all__ = [
    "EPolynomial", "e_polynomial", "e_poly", "star_e_polynomial", "e_polynomial_a1",
    "e_polynomial_a1_finite", "evaluation_a1", "evaluation_product", "duality_gap",
    "symmetric_P", "symmetric_P_normalized", "symmetric_P_normalized_alt", "poincare_value",
    "p_evaluation_product", "pairing", "norm", "symmetric_norm",
]
