"""Named verification suites.

Every suite maps ``(params, cutoffs, tolerance)`` to a list of reports with a
``passed`` flag and a ``to_json`` method.  Type-specific suites skip the parts
that do not apply to the configured root system.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

from . import macdonald as M
from . import spherical as S
from .hecke import context
from .polyring import ONE, LaurentPoly, ParamSpec
from .qseries import mu_coefficients, mu_ct_product
from .rootdata import box


@dataclass
class CheckReport:
    """Outcome of an exact (equality) check over a sample set."""

    identity: str
    params: dict
    checked: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures

    def to_json(self) -> dict:
        return {"identity": self.identity, "params": self.params, "checked": self.checked,
                "failures": self.failures[:20], "kind": "exact", "pass": self.passed}


@dataclass
class SuiteContext:
    params: ParamSpec
    cut: S.Cutoffs = field(default_factory=S.Cutoffs)
    tolerance: Fraction = S.DEFAULT_TOLERANCE
    max_tail: Fraction = S.DEFAULT_MAX_TAIL

    @property
    def rs(self):
        return self.params.rs

    @property
    def label(self) -> str:
        return self.params.rs.type_label

    def kw(self) -> dict:
        return {"tolerance": self.tolerance, "max_tail": self.max_tail}


def _check(name: str, ctx: SuiteContext, items, test: Callable) -> CheckReport:
    rep = CheckReport(name, ctx.params.echo(), 0)
    for item in items:
        rep.checked += 1
        if not test(item):
            rep.failures.append(item if not isinstance(item, tuple) else list(item))
    return rep


def weight_box(rs) -> list[tuple]:
    """The sample box of weights used by the exact suites."""
    radius = {"A1": 4, "A2": 4, "B2": 4, "C2": 4, "G2": 2}.get(rs.type_label)
    if radius is not None:
        return box(rs.rank, radius)
    out = [rs.zero]
    for om in rs.omega:
        out += [om, tuple(-x for x in om)]
    return out


# ------------------------------------------------------------------ exact suites
def suite_a1_closed(ctx: SuiteContext) -> list:
    if ctx.label != "A1":
        return []
    p = ctx.params
    ns = range(-10, 11)
    return [
        _check("a1-closed:eigen=recursive", ctx, ns,
               lambda n: M.e_poly(p, (n,)) == M.e_polynomial_a1(p, n)),
        _check("a1-closed:eigen=finite-sum", ctx, ns,
               lambda n: M.e_poly(p, (n,)) == M.e_polynomial_a1_finite(p, n)),
        _check("a1-closed:evaluation", ctx, ns,
               lambda n: M.e_poly(p, (n,))(p.point_rho(-1)) == M.evaluation_a1(p, n)),
    ]


def _affine_braid_order(rs, i: int, j: int) -> int | None:
    roots = [tuple(-x for x in rs.theta)] + list(rs.simple_roots)
    a, b = roots[i], roots[j]
    prod = 4 * rs.pair(a, b) ** 2 / (rs.pair(a, a) * rs.pair(b, b))
    return {0: 2, 1: 3, 2: 4, 3: 6}.get(int(prod))


def suite_hecke(ctx: SuiteContext) -> list:
    p, rs = ctx.params, ctx.rs
    oc = context(p)
    n = rs.rank
    samples = [{b: ONE} for b in box(n, 1 if n > 2 else 2)]
    samples.append({b: Fraction(k + 1, 3) for k, b in enumerate(box(n, 1))})

    def quadratic(item):
        i, terms = item
        th, diff = oc._t_half[i]
        lhs = oc.T_terms(i, oc.T_terms(i, terms))
        rhs = dict(terms)
        for b, c in oc.T_terms(i, terms).items():
            rhs[b] = rhs.get(b, 0) + diff * c
        return LaurentPoly(lhs, n) == LaurentPoly(rhs, n)

    def braid(item):
        i, j, m, terms = item
        a, b = terms, terms
        for k in range(m):
            a = oc.T_terms(i if k % 2 == 0 else j, a)
            b = oc.T_terms(j if k % 2 == 0 else i, b)
        return LaurentPoly(a, n) == LaurentPoly(b, n)

    def inverse(item):
        i, terms = item
        return LaurentPoly(oc.T_terms(i, oc.T_terms(i, terms), inverse=True), n) == LaurentPoly(terms, n)

    def commute(item):
        k, l, terms = item
        a = oc.y_omega_terms(l, oc.y_omega_terms(k, terms))
        b = oc.y_omega_terms(k, oc.y_omega_terms(l, terms))
        return LaurentPoly(a, n) == LaurentPoly(b, n)

    idx = range(n + 1)
    braids = []
    for i in idx:
        for j in idx:
            if i < j:
                m = _affine_braid_order(rs, i, j)
                if m:
                    braids += [(i, j, m, s) for s in samples]
    out = [
        _check("hecke:quadratic", ctx, [(i, s) for i in idx for s in samples], quadratic),
        _check("hecke:inverse", ctx, [(i, s) for i in idx for s in samples], inverse),
        _check("hecke:Y-commute", ctx,
               [(k, l, s) for k in range(n) for l in range(k + 1, n) for s in samples]
               or [(0, 0, samples[0])], commute),
    ]
    if braids:
        out.append(_check("hecke:braid", ctx, braids, braid))
    if ctx.label == "A1":
        s_el = rs.ext(rs.w0, rs.zero)
        gamma = rs.ext(rs.identity, rs.omega[0])

        def calib(k):
            mono = {(k,): ONE}
            direct = oc.ext_terms(s_el, oc.ext_terms(gamma, oc.T_terms(1, mono)))
            return LaurentPoly(direct, 1) == oc.apply_Y((1,), LaurentPoly(mono, 1))

        out.append(_check("hecke:A1 Y = sΓT", ctx, range(-8, 9), calib))
    return out


def suite_eigen(ctx: SuiteContext) -> list:
    p, rs = ctx.params, ctx.rs
    oc = context(p)
    weights = weight_box(rs) if rs.rank == 1 else (box(rs.rank, 2) if rs.rank == 2 else weight_box(rs))

    def eig(b):
        e = M.e_poly(p, b)
        for k in range(rs.rank):
            if LaurentPoly(oc.y_omega_terms(k, e.terms), rs.rank) != e * oc.y_eigenvalue(k, b):
                return False
        return True

    def lead(b):
        return M.e_poly(p, b).coeff(b) == 1

    return [_check("eigen:Y-eigenvalues", ctx, weights, eig),
            _check("eigen:leading coefficient", ctx, weights, lead)]


def suite_eval(ctx: SuiteContext) -> list:
    p, rs = ctx.params, ctx.rs
    pt = p.point_rho(-1)
    weights = weight_box(rs)
    out = [_check("eval:evaluation formula", ctx, weights,
                  lambda b: M.e_poly(p, b)(pt) == M.evaluation_product(p, b))]
    if ctx.label == "A1":
        out.append(_check("eval:A1 closed form", ctx, weights,
                          lambda b: M.evaluation_product(p, b) == M.evaluation_a1(p, b[0])))
    return out


def suite_duality(ctx: SuiteContext) -> list:
    p, rs = ctx.params, ctx.rs
    weights = weight_box(rs)
    pairs = [(b, c) for i, b in enumerate(weights) for c in weights[i:]]
    return [_check("duality:E_b(q^c♯)E_c(q^-ρ) = E_c(q^b♯)E_b(q^-ρ)", ctx, pairs,
                   lambda bc: M.duality_gap(p, *bc) == 0)]


def suite_sympoly(ctx: SuiteContext) -> list:
    p, rs = ctx.params, ctx.rs
    r = 2 if rs.rank <= 2 else 1
    anti = [b for b in box(rs.rank, r) if rs.is_antidominant(b)]

    def invariant(b):
        f = M.symmetric_P(p, b)
        return all(f.weyl_act(w) == f for w in rs.weyl_group)

    def normalized(b):
        return M.symmetric_P_normalized(p, b) == M.symmetric_P_normalized_alt(p, b)

    def proportional(b):
        f = M.symmetric_P(p, b)
        return M.symmetric_P_normalized(p, b) == f * (M.poincare_value(p) / f(p.point_rho(-1)))

    return [_check("sympoly:W-invariance", ctx, anti, invariant),
            _check("sympoly:two normalized forms agree", ctx, anti, normalized),
            _check("sympoly:normalized multiple", ctx, anti, proportional)]


# ------------------------------------------------------------------ truncated suites
def suite_mu_ct(ctx: SuiteContext) -> list:
    p = ctx.params
    mu = mu_coefficients(p, ctx.cut.mu_order)
    prod = mu_ct_product(p, ctx.cut.product_order)
    return [S.IdentityReport("mu-ct:product vs constant term", p.echo(), prod, mu.ct, **ctx.kw())]


def suite_ortho(ctx: SuiteContext) -> list:
    from .qseries import tv

    p, rs = ctx.params, ctx.rs
    weights = weight_box(rs)
    reps = []
    worst = None
    for i, b in enumerate(weights):
        for c in weights:
            if b == c:
                continue
            val = M.pairing(p, b, c, ctx.cut.mu_order)
            r = S.IdentityReport("ortho:<E_b E_c^* μ∘>", S._echo(p, b=list(b), c=list(c)), val, tv(0),
                                 **ctx.kw())
            if not r.passed:
                reps.append(r)
            elif worst is None or r.tail_budget > worst.tail_budget:
                worst = r
    if worst is not None:
        worst.details["note"] = f"largest tail among {len(weights) * (len(weights) - 1)} passing pairs"
        reps.append(worst)
    one = M.pairing(p, rs.zero, rs.zero, ctx.cut.mu_order)
    reps.append(S.IdentityReport("ortho:<μ∘> = 1", p.echo(), one, tv(1), **ctx.kw()))
    return reps


A1_X = (Fraction(5), Fraction(7), Fraction(11))
A1_L = (Fraction(3, 2), Fraction(5, 7), Fraction(7, 3))
A1_SHINTANI_X = (Fraction(5, 4), Fraction(4, 5), Fraction(7, 5))
A2_X = ((Fraction(7), Fraction(11)), (Fraction(9), Fraction(13, 2)))
A2_WEIGHTS = ((0, 0), (1, 0), (0, 1), (-1, 1), (0, -1), (1, -1))
A2_HC_WEIGHTS = ((0, 0), (-1, 0), (1, -1), (1, 0), (0, -1), (1, 1))


def _generic_x(rs, k: int = 0) -> list:
    base = [Fraction(7 + 2 * k + i, 1 + i % 2) for i in range(rs.rank)]
    return base


def suite_shintani(ctx: SuiteContext) -> list:
    p, rs = ctx.params, ctx.rs
    out = []
    if ctx.label == "A1":
        for X in A1_SHINTANI_X:
            x = p.point_numeric([X])
            out += [S.shintani_residual((n,), x, ctx.cut, **ctx.kw()) for n in range(-6, 7)]
    elif ctx.label == "A2":
        for xv in A2_X:
            x = p.point_numeric(xv)
            out += [S.shintani_residual(b, x, ctx.cut, **ctx.kw()) for b in A2_WEIGHTS]
    else:
        x = p.point_numeric(_generic_x(rs))
        out += [S.shintani_residual(b, x, ctx.cut, **ctx.kw()) for b in weight_box(rs)[:3]]
    return out


def _degenerate_lambda(p: ParamSpec, n: int):
    """``Λ_{-n} = (tq^n)^{-1/2}`` and ``Λ_n = (tq^n)^{1/2}``, i.e. ``q^{(∓n)♯}``."""
    return p.point_sharp((n,))


def suite_hc_a1(ctx: SuiteContext) -> list:
    if ctx.label != "A1":
        return []
    p = ctx.params
    out = [S.hc_a1_residual(X, L, p, ctx.cut, **ctx.kw()) for X in A1_X for L in A1_L]
    # Λ_0 = t^{1/2} is a removable 0·∞ point of both terms and is skipped.
    # At Λ_{±n} both sides reach ~1e9, so the Gaussian sums need 64 shells.
    deep = replace(ctx.cut, theta_shells=max(ctx.cut.theta_shells, 64),
                   psi_shells=max(ctx.cut.psi_shells, 64))
    for n, sign in [(n, -1) for n in range(0, 5)] + [(n, 1) for n in range(1, 5)]:
        rep = S.hc_a1_residual(Fraction(7), _degenerate_lambda(p, sign * n), p, deep, **ctx.kw())
        rep.identity = f"hc-a1:degenerate Λ_{'-' if sign < 0 else ''}{n}"
        dead = rep.details["sigma" if sign < 0 else "sigma_inv"]
        rep.exact_checks["vanishing weight is exactly 0"] = dead["value"] == "0/1" and dead["tail"] == "0/1"
        out.append(rep)
    for X, L in ((Fraction(5), Fraction(3, 2)), (Fraction(7), Fraction(5, 7)),
                 (Fraction(-6), Fraction(4, 3)), (Fraction(9, 2), Fraction(-5, 3))):
        out += S.a1_operator_residuals(X, L, p, ctx.cut, **ctx.kw())
    return out


def suite_hc_sym_a1(ctx: SuiteContext) -> list:
    if ctx.label != "A1":
        return []
    p = ctx.params
    out = [S.symmetric_hc_a1_residual(X, L, p, ctx.cut, **ctx.kw()) for X in A1_X for L in A1_L]
    out += [S.phi_consistency_a1(X, L, p, ctx.cut, **ctx.kw()) for X, L in zip(A1_X, A1_L)]
    # k = 1 spot check: t = q
    p1 = ParamSpec(p.rs, p.v, p.v)
    out.append(S.symmetric_hc_a1_residual(A1_X[1], A1_L[0], p1, ctx.cut, **ctx.kw()))
    return out


def suite_hc_general(ctx: SuiteContext) -> list:
    p, rs = ctx.params, ctx.rs
    if ctx.label == "A1":
        x = p.point_numeric([Fraction(7)])
        return [S.hc_general_residual((n,), x, ctx.cut, **ctx.kw()) for n in range(-3, 4)]
    if ctx.label == "A2":
        x = p.point_numeric(A2_X[0])
        return [S.hc_general_residual(b, x, ctx.cut, **ctx.kw()) for b in A2_HC_WEIGHTS]
    x = p.point_numeric(_generic_x(rs))
    return [S.hc_general_residual(b, x, ctx.cut, **ctx.kw()) for b in weight_box(rs)[:3]]


def suite_stabilize(ctx: SuiteContext) -> list:
    p, rs = ctx.params, ctx.rs
    out = []
    if ctx.label == "A1":
        items = []
        for n in range(0, 6):
            items.append(("minus_tilde", rs.identity, (-n,)))
            items.append(("plus_tilde", rs.w0, (-(n + 1),)))

        def match(item):
            kind, w, bm = item
            tab = S.xi_stabilized(p, w, bm)
            l2 = tab.lam((2,))
            depth = max(a[0] for a in tab.entries)
            want = S.xi_a1_coefficients(kind, l2, p, depth + 2)
            return all(tab.entries.get((j,), 0) == c for j, c in want.items())

        out.append(_check("stabilize:A1 tables = Ξ̃ closed forms", ctx,
                          [(k, w, b) for k, w, b in items], lambda it: match(it)))
        for i, it in enumerate(out[-1].failures):
            out[-1].failures[i] = [it[0], list(it[1].word), list(it[2])]
    if ctx.label == "A2":
        bms = [(-1, -1), (-2, -1), (-2, -2)]

        def formulas(bm):
            tab = S.xi_stabilized(p, rs.identity, bm)
            lam = tab.lam
            return (tab.entries.get((0, 0)) == S.a2_xi_constant(p, lam)
                    and tab.entries.get((1, 0)) == S.a2_xi_alpha(p, lam, 1)
                    and tab.entries.get((0, 1)) == S.a2_xi_alpha(p, lam, 2))

        out.append(_check("stabilize:A2 displayed coefficients", ctx, bms, formulas))
    # every strictly antidominant sample: support in b_+ - Q_+ for all w
    strict = [b for b in box(rs.rank, 2 if rs.rank <= 2 else 1)
              if all(x < 0 for x in b)][:3]

    def support(bm):
        for w in rs.weyl_group:
            S.xi_stabilized(p, w, bm)
        return True

    out.append(_check("stabilize:support in -Q_+ for every w", ctx, strict, support))
    return out


def suite_orbit_sum(ctx: SuiteContext) -> list:
    p, rs = ctx.params, ctx.rs
    if ctx.label == "A1":
        pairs = [((bm,), (c,)) for bm in range(-4, 1) for c in range(-4, 5)]
    elif ctx.label == "A2":
        pairs = [(bm, c) for bm in [(0, 0), (-1, 0), (-1, -1)]
                 for c in [(0, 0), (1, 0), (-1, 1), (1, -2)]]
    else:
        anti = [b for b in box(rs.rank, 1) if rs.is_antidominant(b)][:3]
        pairs = [(bm, c) for bm in anti for c in weight_box(rs)[:4]]
    return [S.orbit_sum_residual(p, bm, c, ctx.cut, **ctx.kw()) for bm, c in pairs]


def suite_f_connection(ctx: SuiteContext) -> list:
    p, rs = ctx.params, ctx.rs
    out = []
    if ctx.label == "A1":
        for X in A1_X:
            for L in A1_L:
                out.append(S.f_connection_residual(p.point_numeric([X]), p.point_numeric([L]),
                                                   ctx.cut, **ctx.kw()))
        x = p.point_numeric([A1_X[0]])
        out += [S.f_shintani_residual((-n,), x, ctx.cut, **ctx.kw()) for n in range(0, 4)]
    elif ctx.label == "A2":
        lams = [(Fraction(3, 2), Fraction(5, 7)), (Fraction(7, 3), Fraction(4, 5))]
        for xv in A2_X:
            for lv in lams:
                out.append(S.f_connection_residual(p.point_numeric(xv), p.point_numeric(lv),
                                                   ctx.cut, **ctx.kw()))
        x = p.point_numeric(A2_X[0])
        out += [S.f_shintani_residual(b, x, ctx.cut, **ctx.kw()) for b in [(0, 0), (-1, 0), (-1, -1)]]
    else:
        x = p.point_numeric(_generic_x(rs))
        lam = p.point_numeric([Fraction(3 + i, 2 + i) for i in range(rs.rank)])
        out.append(S.f_connection_residual(x, lam, ctx.cut, **ctx.kw()))
    return out


def suite_limits_a1(ctx: SuiteContext) -> list:
    if ctx.label != "A1":
        return []
    p = ctx.params
    return [S.a1_limit_report(Fraction(2), p, "minus", 12, cut=ctx.cut),
            S.a1_limit_report(Fraction(1, 2), p, "plus", 12, cut=ctx.cut)]


SUITES: dict[str, Callable[[SuiteContext], list]] = {
    "a1-closed": suite_a1_closed,
    "hecke": suite_hecke,
    "eigen": suite_eigen,
    "eval": suite_eval,
    "duality": suite_duality,
    "sympoly": suite_sympoly,
    "ortho": suite_ortho,
    "mu-ct": suite_mu_ct,
    "shintani": suite_shintani,
    "hc-a1": suite_hc_a1,
    "hc-sym-a1": suite_hc_sym_a1,
    "hc-general": suite_hc_general,
    "stabilize": suite_stabilize,
    "orbit-sum": suite_orbit_sum,
    "f-connection": suite_f_connection,
    "limits-a1": suite_limits_a1,
}


def run_suite(name: str, ctx: SuiteContext) -> list:
    if name == "all":
        out = []
        for key in SUITES:
            out += run_suite(key, ctx)
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](ctx)
