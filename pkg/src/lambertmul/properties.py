"""Registry of verifiable claims with randomized violation checks.

Every claim the library is built around is bound to a check function that
takes a concrete :class:`~lambertmul.instances.Instance` and returns a
signed violation: negative values are pass margin, positive values measure
how badly the claim failed on that instance.

Violations are normalized by the tolerance policy: a claimed inequality
``lhs <= rhs`` is charged ``(lhs - rhs) / denom`` where ``denom`` is the
larger of the two sides' magnitudes, floored so that an absolute slack of
``1e-12`` never fails.  Exact claims (``E(1) = 1``) report raw absolute
deviation instead.

Checks derive everything they need deterministically from the instance
(functions, exponents, scalars, derived seeds), so a recorded witness
instance replays its violation exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import (
    ALGEBRA_IDENTITY,
    MultiplierContext,
    algebra_mul,
    conditional_power_mean,
    induced_norm,
    involution,
    multiplier_norm,
    split_decomposition,
    star,
)
from .expectation import CondExpectation
from .instances import Instance
from .measure import INF, lp_norm, make_space
from .operators import (
    NotInvertibleError,
    invert_operator,
    is_injective,
    mult_operator,
    operator_matrix,
    operator_norm,
)

__all__ = [
    "PropertyDef",
    "REGISTRY",
    "ALL_PROPERTY_IDS",
    "UnknownPropertyError",
    "get_property",
    "ineq_violation",
    "array_ineq_violation",
    "equality_violation",
    "conjugate_exponent",
]

ABS_FLOOR = 1e-12


class UnknownPropertyError(ValueError):
    """Requested property id is not registered."""


def _denom(scale: float, tol: float) -> float:
    if tol > 0.0:
        return max(scale, ABS_FLOOR / tol)
    return max(scale, 1.0)


def ineq_violation(lhs: float, rhs: float, tol: float) -> float:
    """Signed normalized violation of the scalar inequality lhs <= rhs."""
    scale = max(abs(lhs), abs(rhs))
    return (lhs - rhs) / _denom(scale, tol)


def array_ineq_violation(lhs, rhs, tol: float) -> float:
    """Worst normalized violation of an elementwise inequality lhs <= rhs."""
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    floor = ABS_FLOOR / tol if tol > 0.0 else 1.0
    denom = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), floor)
    return float(((lhs - rhs) / denom).max())


def equality_violation(a, b, tol: float) -> float:
    """Normalized deviation of an equality claim a = b (always >= 0)."""
    a = np.asarray(a)
    b = np.asarray(b)
    d = float(np.abs(a - b).max()) if a.size else 0.0
    scale = max(float(np.abs(a).max(initial=0.0)), float(np.abs(b).max(initial=0.0)))
    return d / _denom(scale, tol)


def conjugate_exponent(p: float) -> float:
    """The Hoelder conjugate: q with 1/p + 1/q = 1; inf for p = 1."""
    if p == 1.0:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


def _expectation(inst: Instance) -> CondExpectation:
    return CondExpectation(inst.space, inst.partition)


def _ctx(inst: Instance, E: CondExpectation, p: float) -> MultiplierContext:
    return MultiplierContext(inst.space, E, p)


def _fns(inst: Instance):
    return inst.functions["u"], inst.functions["v"], inst.functions["w"]


def _well_conditioned_symbol(u, E: CondExpectation, ctx: MultiplierContext) -> np.ndarray:
    """Deterministically shift and rescale u so min over blocks of |E(u)| >= 0.1.

    After norming to multiplier norm 1, every block expectation has modulus
    at most 1; adding the constant 1.1 + max|E| pushes every block
    expectation at least 1.1 away from zero, and renorming shrinks the
    total norm by at most 3.1, leaving a guaranteed margin above 0.1.
    """
    base = multiplier_norm(u, ctx)
    g = u / base if base > 0.0 else np.ones_like(u)
    shift = 1.1 + float(np.abs(E.block_means(g)).max())
    shifted = g + shift
    return shifted / multiplier_norm(shifted, ctx)


# ---------------------------------------------------------------------------
# conditional expectation claims
# ---------------------------------------------------------------------------


def _check_e1(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    f = u.real
    g = f + np.abs(v)
    return array_ineq_violation(E.apply(f), E.apply(g), tol)


def _check_e2(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    g = E.apply(v)
    return equality_violation(E.apply(u * g), E.apply(u) * g, tol)


def _check_e3(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    p = inst.params["p"]
    a = np.abs(u)
    pointwise = array_ineq_violation(E.apply(a) ** p, E.apply(a**p), tol)
    contract = ineq_violation(
        lp_norm(E.apply(u), p, inst.space), lp_norm(u, p, inst.space), tol
    )
    return max(pointwise, contract)


def _check_e4(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    nonneg = array_ineq_violation(0.0, E.apply(np.abs(u)), tol)
    d = 0.5
    strict = array_ineq_violation(d, E.apply(np.abs(u) + d), tol)
    return max(nonneg, strict)


def _check_e5(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    p = inst.params["p"]
    q = conjugate_exponent(p)
    lhs = E.apply(np.abs(u * v))
    rhs = conditional_power_mean(u, p, E) * conditional_power_mean(v, q, E)
    return array_ineq_violation(lhs, rhs, tol)


def _check_e6(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    one = np.ones(inst.space.n_atoms)
    # exact claim: raw absolute deviation, no normalization
    return float(np.abs(E.apply(one) - 1.0).max())


# ---------------------------------------------------------------------------
# star product and norm claims
# ---------------------------------------------------------------------------


def _check_star_comm(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    return equality_violation(star(u, v, E), star(v, u, E), tol)


def _check_star_assoc(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, w = _fns(inst)
    return equality_violation(star(star(u, v, E), w, E), star(u, star(v, w, E), E), tol)


def _check_star_dist(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, w = _fns(inst)
    return equality_violation(star(u, v + w, E), star(u, v, E) + star(u, w, E), tol)


def _check_star_scalar(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    lam = inst.params["lam"]
    ref = lam * star(u, v, E)
    return max(
        equality_violation(star(lam * u, v, E), ref, tol),
        equality_violation(star(u, lam * v, E), ref, tol),
    )


def _check_star_ident(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    one = np.ones(inst.space.n_atoms, dtype=np.complex128)
    return max(
        equality_violation(star(one, u, E), u, tol),
        equality_violation(star(u, one, E), u, tol),
    )


def _check_star_submult3(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    constant = float(inst.params.get("submult_constant", ALGEBRA_IDENTITY))
    lhs = multiplier_norm(star(u, v, E), ctx)
    rhs = constant * multiplier_norm(u, ctx) * multiplier_norm(v, ctx)
    return ineq_violation(lhs, rhs, tol)


def _check_star_submult3a(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    lhs = multiplier_norm(u * E.apply(v), ctx)
    rhs = multiplier_norm(u, ctx) * multiplier_norm(v, ctx)
    return ineq_violation(lhs, rhs, tol)


def _check_norm_equiv(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    est = induced_norm(u, ctx, seed=int(inst.params.get("search_seed", 0)))
    u0 = multiplier_norm(u, ctx)
    lower = ineq_violation(u0 / ALGEBRA_IDENTITY, est.lower_bound, tol)
    upper = ineq_violation(est.lower_bound, u0, tol)
    return max(lower, upper)


def _check_invol(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    norms = ineq_violation(
        abs(multiplier_norm(involution(u), ctx) - multiplier_norm(u, ctx)), 0.0, tol
    )
    product = equality_violation(
        involution(algebra_mul(u, v, E)), algebra_mul(involution(u), involution(v), E), tol
    )
    twice = equality_violation(involution(involution(u)), u, tol)
    return max(norms, product, twice)


# ---------------------------------------------------------------------------
# operator claims
# ---------------------------------------------------------------------------


def _check_op_add(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    lhs = operator_matrix(u, ctx).entries + operator_matrix(v, ctx).entries
    rhs = operator_matrix(u + v, ctx).entries
    return equality_violation(lhs, rhs, tol)


def _check_op_comp(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    lhs = operator_matrix(u, ctx).entries @ operator_matrix(v, ctx).entries
    rhs = operator_matrix(star(u, v, E), ctx).entries
    return equality_violation(lhs, rhs, tol)


def _check_op_linear(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, w = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    mat = operator_matrix(u, ctx).entries
    return max(
        equality_violation(mat @ v, star(u, v, E), tol),
        equality_violation(mat @ w, star(u, w, E), tol),
    )


def _check_inv_expect(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    good = _well_conditioned_symbol(u, E, ctx)
    try:
        w = invert_operator(good, ctx)
    except NotInvertibleError:
        return 1.0
    one = np.ones(inst.space.n_atoms)
    return max(
        equality_violation(star(good, w, E), one, tol),
        equality_violation(E.apply(w) * E.apply(good), one, tol),
    )


def _check_inv_ainf(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    ua = E.apply(u)
    mod = np.abs(ua)
    # lift small moduli so the symbol stays at least 0.5 away from zero
    ua = np.where(mod > 0.0, ua * np.where(mod < 0.5, 0.5 / np.maximum(mod, 1e-300), 1.0), 0.5)
    try:
        w = invert_operator(ua, ctx)
    except NotInvertibleError:
        return 1.0
    return equality_violation(w, 1.0 / ua, tol)


def _check_inj_delta(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    good = _well_conditioned_symbol(u, E, ctx)
    return 0.0 if is_injective(good, ctx) else 1.0


def _check_opnorm_consistent(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    ctx = _ctx(inst, E, 2.0)
    mat = operator_matrix(u, ctx)
    exact = operator_norm(mat, 2.0, 2.0).value
    est = operator_norm(
        mat, 2.0, 2.0, seed=int(inst.params.get("search_seed", 0)), force_search=True
    ).value
    never_above = ineq_violation(est, exact, tol)
    reaches = ineq_violation(0.999 * exact, est, tol)
    return max(never_above, reaches)


# ---------------------------------------------------------------------------
# inclusion, domination, and composition claims
# ---------------------------------------------------------------------------


def _check_holder(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    p = inst.params["p"]
    q = conjugate_exponent(p)
    lhs = multiplier_norm(u * v, _ctx(inst, E, 1.0))
    rhs = multiplier_norm(u, _ctx(inst, E, p)) * multiplier_norm(v, _ctx(inst, E, q))
    return ineq_violation(lhs, rhs, tol)


def _check_decomp(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    p, q, r = inst.params["p"], inst.params["q"], inst.params["r"]
    u1, u2 = split_decomposition(u, p, q, r)
    nq = multiplier_norm(u, _ctx(inst, E, q))
    small = ineq_violation(multiplier_norm(u1, _ctx(inst, E, p)), nq ** (q / p), tol)
    big_exp = 0.0 if r == INF else q / r
    big = ineq_violation(multiplier_norm(u2, _ctx(inst, E, r)), nq**big_exp, tol)
    exact_sum = equality_violation(u1 + u2, u, tol)
    return max(small, big, exact_sum)


def _check_incl_1inf(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    p = inst.params["p"]
    sup = float(np.abs(u).max())
    return array_ineq_violation(E.apply(np.abs(u) ** p), sup**p, tol)


def _check_incl_inf(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    sup = float(np.abs(u).max())
    return ineq_violation(multiplier_norm(u, _ctx(inst, E, inst.params["p"])), sup, tol)


def _check_interp(inst: Instance, tol: float) -> float:
    u, _, _ = _fns(inst)
    p, q, r = inst.params["p"], inst.params["q"], inst.params["r"]
    prob = make_space(inst.space.weights / inst.space.total_mass)
    lhs = lp_norm(u, q, prob)
    rhs = max(lp_norm(u, p, prob), lp_norm(u, r, prob))
    return ineq_violation(lhs, rhs, tol)


def _check_comp_pqs(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    ctx = _ctx(inst, E, 2.0)
    nu = operator_norm(operator_matrix(u, ctx), 2.0, 2.0).value
    nv = operator_norm(operator_matrix(v, ctx), 2.0, 2.0).value
    nuv = operator_norm(operator_matrix(star(u, v, E), ctx), 2.0, 2.0).value
    return ineq_violation(nuv, nu * nv, tol)


def _check_domin(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    p = inst.params["p"]
    au, av = np.abs(u), np.abs(v)
    scale = np.where(av > 0.0, np.minimum(1.0, au / np.maximum(av, 1e-300)), 0.0)
    dominated = v * scale
    pointwise = array_ineq_violation(
        E.apply(np.abs(dominated) ** p), E.apply(au**p), tol
    )
    norms = ineq_violation(
        multiplier_norm(dominated, _ctx(inst, E, p)),
        multiplier_norm(u, _ctx(inst, E, p)),
        tol,
    )
    return max(pointwise, norms)


def _check_domconv(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, v, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    dominator = np.abs(u) + np.abs(v)
    limit = u
    dominated = ineq_violation(
        multiplier_norm(limit, ctx), multiplier_norm(dominator, ctx), tol
    )
    start_gap = float(np.abs(v - u).max())
    gaps = []
    for n in (5, 10, 20, 40):
        t = 2.0**-n
        u_n = (1.0 - t) * u + t * v
        gaps.append(float(np.abs(u_n - limit).max()))
    monotone = 0.0
    for a, b in zip(gaps, gaps[1:]):
        monotone = max(monotone, (b - a) / _denom(start_gap, tol))
    tail = gaps[-1] / _denom(start_gap, tol)
    finite = 0.0 if np.isfinite(multiplier_norm(limit, ctx)) else 1.0
    return max(dominated, monotone, tail, finite)


def _check_mu_bound(inst: Instance, tol: float) -> float:
    E = _expectation(inst)
    u, _, _ = _fns(inst)
    ctx = _ctx(inst, E, inst.params["p"])
    block_constant = E.apply(u)
    report = mult_operator(
        block_constant, ctx, samples=24, seed=int(inst.params.get("sample_seed", 0))
    )
    return ineq_violation(report.ratio_sup, report.bound, tol)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PropertyDef:
    """A registered claim: identifier, human-readable statement, check."""

    id: str
    statement: str
    check: Callable[[Instance, float], float]


_DEFS = [
    PropertyDef("E1", "monotone: real f <= g pointwise implies E(f) <= E(g) pointwise", _check_e1),
    PropertyDef("E2", "module law: g constant on blocks implies E(f*g) = E(f)*g", _check_e2),
    PropertyDef("E3", "Jensen: (E|f|)^p <= E(|f|^p) pointwise, and ||E(f)||_p <= ||f||_p", _check_e3),
    PropertyDef("E4", "positive: f >= 0 implies E(f) >= 0, and f >= d > 0 implies E(f) >= d", _check_e4),
    PropertyDef("E5", "conditional Hoelder: E|fg| <= (E|f|^p)^(1/p) (E|g|^q)^(1/q) for conjugate p, q", _check_e5),
    PropertyDef("E6", "unital: E(1) = 1 exactly", _check_e6),
    PropertyDef("STAR-COMM", "star(u, v) = star(v, u)", _check_star_comm),
    PropertyDef("STAR-ASSOC", "star(star(u, v), w) = star(u, star(v, w))", _check_star_assoc),
    PropertyDef("STAR-DIST", "star(u, v + w) = star(u, v) + star(u, w)", _check_star_dist),
    PropertyDef("STAR-SCALAR", "star(c u, v) = star(u, c v) = c star(u, v) for complex scalars c", _check_star_scalar),
    PropertyDef("STAR-IDENT", "star(1, u) = star(u, 1) = u", _check_star_ident),
    PropertyDef("STAR-SUBMULT3", "||star(u, v)||0 <= 3 ||u||0 ||v||0", _check_star_submult3),
    PropertyDef("STAR-SUBMULT3a", "||u E(v)||0 <= ||u||0 ||v||0 (pointwise product)", _check_star_submult3a),
    PropertyDef("NORM-EQUIV", "||u||0 / 3 <= induced-norm lower bound <= ||u||0", _check_norm_equiv),
    PropertyDef("INVOL", "conjugation is an involution: ||conj(u)||0 = ||u||0, conj(u . v) = conj(u) . conj(v), conj(conj(u)) = u", _check_invol),
    PropertyDef("OP-ADD", "operator of u + v equals the sum of the operators of u and v", _check_op_add),
    PropertyDef("OP-COMP", "operator composition matches the operator of star(u, v)", _check_op_comp),
    PropertyDef("OP-LINEAR", "the operator matrix applied to f equals star(u, f)", _check_op_linear),
    PropertyDef("INV-EXPECT", "invertible symbol u with inverse symbol w: star(u, w) = 1 and E(w) E(u) = 1", _check_inv_expect),
    PropertyDef("INV-AINF", "block-constant u bounded away from zero: inverse symbol is 1/u pointwise", _check_inv_ainf),
    PropertyDef("INJ-DELTA", "|E(u)| >= 0.1 on every block (after norming) implies the operator is injective", _check_inj_delta),
    PropertyDef("OPNORM-CONSISTENT", "iterative L2 operator-norm estimate matches the singular-value answer", _check_opnorm_consistent),
    PropertyDef("HOLDER", "||u v||0 at exponent 1 <= ||u||0 at p times ||v||0 at the conjugate exponent", _check_holder),
    PropertyDef("DECOMP", "threshold split u = u1 + u2 with ||u1||0_p <= (||u||0_q)^(q/p) and ||u2||0_r <= (||u||0_q)^(q/r)", _check_decomp),
    PropertyDef("INCL-1INF", "E(|u|^p) <= (sup|u|)^p pointwise", _check_incl_1inf),
    PropertyDef("INCL-INF", "||u||0 at p <= sup|u|", _check_incl_inf),
    PropertyDef("INTERP", "on probability spaces ||u||_q <= max(||u||_p, ||u||_r) for p < q < r", _check_interp),
    PropertyDef("COMP-PQS", "L2 operator norm of star(u, v) <= product of the factors' operator norms", _check_comp_pqs),
    PropertyDef("DOMIN", "|v| <= |u| pointwise implies E(|v|^p) <= E(|u|^p) and ||v||0 <= ||u||0", _check_domin),
    PropertyDef("DOMCONV", "dominated pointwise limits stay multipliers: |u_n| <= v and u_n -> u give ||u||0 <= ||v||0", _check_domconv),
    PropertyDef("MU-BOUND", "multiplication by block-constant u is bounded: ||u f||0 / ||f||0 <= sup|u|", _check_mu_bound),
]

REGISTRY: dict[str, PropertyDef] = {d.id: d for d in _DEFS}
ALL_PROPERTY_IDS: tuple[str, ...] = tuple(d.id for d in _DEFS)


def get_property(prop_id: str) -> PropertyDef:
    try:
        return REGISTRY[prop_id]
    except KeyError:
        raise UnknownPropertyError(
            f"unknown property id {prop_id!r}; known ids: {', '.join(ALL_PROPERTY_IDS)}"
        ) from None
