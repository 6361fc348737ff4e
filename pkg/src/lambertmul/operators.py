"""Star-multiplication operators as explicit matrices on the atom basis.

``T_u f = star(u, f)`` is linear in ``f``, so on a finite space it is an
``n x n`` complex matrix, built column by column by applying the operator
to each atom indicator.  This module provides the matrix representation,
operator norms between weighted L^p spaces (exact via SVD when p = q = 2,
certified lower bounds otherwise), inversion with symbol recovery,
injectivity, and diagonal multiplication operators for block-constant
symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import MultiplierContext, multiplier_norm, star
from .expectation import CondExpectation
from .measure import INF, check_exponent, lp_norm

__all__ = [
    "LambertOperatorMatrix",
    "OperatorNormResult",
    "MultOperatorReport",
    "NotInvertibleError",
    "apply_multiplier",
    "operator_matrix",
    "compose",
    "operator_norm",
    "invert_operator",
    "is_injective",
    "mult_operator",
]

# Condition-number cutoff separating genuinely singular operators (a block
# expectation of the symbol vanishing) from float noise at desk scale.
CONDITION_LIMIT = 1e12

# Rank tolerance for injectivity: smallest singular value relative to largest.
RANK_RTOL = 1e-12


class NotInvertibleError(RuntimeError):
    """Raised when the operator matrix is numerically singular."""

    def __init__(self, smallest_singular_value: float, message: str | None = None):
        self.smallest_singular_value = float(smallest_singular_value)
        super().__init__(
            message
            or f"operator is not invertible (smallest singular value "
            f"{self.smallest_singular_value:.3e})"
        )


@dataclass(frozen=True)
class LambertOperatorMatrix:
    """Matrix of f -> star(u, f) on the atom basis.

    Column ``j`` equals the operator applied to the ``j``-th atom indicator,
    so ``entries @ f`` reproduces ``star(u, f)`` for every ``f``.
    """

    entries: np.ndarray
    symbol: np.ndarray
    context: MultiplierContext

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass
class OperatorNormResult:
    """Operator norm value with its certifying witness.

    When ``exact`` is true (p = q = 2) the value is the largest singular
    value of the measure-weighted similarity transform of the matrix; the
    witness is the corresponding singular vector mapped back.  Otherwise the
    value is the best ratio ||A f||_q / ||f||_p found by search, attained at
    ``witness``.
    """

    value: float
    exact: bool
    witness: np.ndarray


@dataclass
class MultOperatorReport:
    """Diagonal multiplication operator with a sampled norm-ratio report."""

    matrix: np.ndarray
    ratio_sup: float
    bound: float
    n_samples: int


def apply_multiplier(u, f, expectation: CondExpectation) -> np.ndarray:
    """Apply the star-multiplication operator with symbol ``u`` to ``f``."""
    return star(u, f, expectation)


def operator_matrix(u, ctx: MultiplierContext) -> LambertOperatorMatrix:
    """Build the matrix of f -> star(u, f) by applying it to atom indicators."""
    u = np.asarray(u, dtype=np.complex128)
    n = ctx.space.n_atoms
    if u.shape != (n,):
        raise ValueError(f"symbol has shape {u.shape}; expected ({n},)")
    basis = np.eye(n, dtype=np.complex128)
    entries = star(u, basis, ctx.expectation).T.copy()
    entries.flags.writeable = False
    return LambertOperatorMatrix(entries=entries, symbol=u, context=ctx)


def compose(a: LambertOperatorMatrix, b: LambertOperatorMatrix) -> np.ndarray:
    """Matrix product of two operators over the same space and partition."""
    if a.context.space != b.context.space or a.context.expectation.partition != b.context.expectation.partition:
        raise ValueError("context mismatch: operators live on different spaces or partitions")
    return a.entries @ b.entries


def _normalize_lp(F: np.ndarray, p: float, w: np.ndarray) -> np.ndarray:
    if p == INF:
        nrm = np.abs(F).max(axis=-1, keepdims=True)
    else:
        nrm = ((np.abs(F) ** p) @ w) ** (1.0 / p)
        nrm = nrm[..., None]
    return np.where(nrm > 0.0, F / np.maximum(nrm, 1e-300), F)


def _lq_norms(F: np.ndarray, q: float, w: np.ndarray) -> np.ndarray:
    if q == INF:
        return np.abs(F).max(axis=-1)
    return ((np.abs(F) ** q) @ w) ** (1.0 / q)


def _phase(z: np.ndarray) -> np.ndarray:
    a = np.abs(z)
    return np.where(a > 0.0, z / np.maximum(a, 1e-300), 1.0)


def operator_norm(
    a: LambertOperatorMatrix,
    p: float,
    q: float,
    restarts: int = 8,
    steps: int = 150,
    seed: int = 0,
    force_search: bool = False,
) -> OperatorNormResult:
    """Norm of the operator from weighted L^p to weighted L^q.

    For ``p = q = 2`` the answer is exact: the weighted L^2 space is
    isometric to Euclidean space under ``f -> sqrt(mu) f``, so the norm is
    the largest singular value of ``D^(1/2) A D^(-1/2)`` with
    ``D = diag(mu)``.  For other exponent pairs the routine runs a
    multi-start ascent on the ratio ``||A f||_q / ||f||_p`` (a weighted
    power-method step alternating with dual rescaling) and returns the best
    ratio found together with its witness; this is a certified lower bound.
    ``force_search`` runs the iterative path even at ``p = q = 2``, which is
    how the search is cross-checked against the exact answer.
    """
    p = check_exponent(p, "p")
    q = check_exponent(q, "q")
    M = a.entries
    w = a.context.space.weights
    n = M.shape[0]

    if p == 2.0 and q == 2.0 and not force_search:
        d = np.sqrt(w)
        B = M * d[:, None] / d[None, :]
        U, s, Vh = np.linalg.svd(B)
        witness = np.conj(Vh[0]) / d
        return OperatorNormResult(value=float(s[0]), exact=True, witness=witness)

    rng = np.random.default_rng(seed)
    R = max(2, int(restarts))
    F = np.empty((R, n), dtype=np.complex128)
    F[0] = 1.0
    col = int(np.abs(M).sum(axis=0).argmax())
    F[1] = 0.0
    F[1, col] = 1.0
    if R > 2:
        F[2:] = rng.random((R - 2, n)) * np.exp(1j * rng.uniform(0, 2 * np.pi, (R - 2, n)))
    F = _normalize_lp(F, p, w)

    Mc = np.conj(M)
    best_val = 0.0
    best_wit = F[0].copy()

    def keep_best(Fb):
        nonlocal best_val, best_wit
        ratios = _lq_norms(Fb @ M.T, q, w)
        k = int(ratios.argmax())
        if ratios[k] > best_val:
            best_val = float(ratios[k])
            best_wit = Fb[k].copy()

    keep_best(F)
    for _ in range(int(steps)):
        W = F @ M.T
        if q == INF:
            j = np.abs(W).argmax(axis=-1)
            Z = _phase(W[np.arange(R), j])[:, None] * Mc[j, :] / w
        else:
            absW = np.abs(W)
            with np.errstate(divide="ignore", invalid="ignore"):
                psi = np.where(absW > 0.0, absW ** (q - 2.0), 0.0) * W
            Z = ((psi * w) @ Mc) / w
        if p == INF:
            F = _phase(Z)
        elif p == 1.0:
            j = np.abs(Z).argmax(axis=-1)
            F = np.zeros_like(F)
            F[np.arange(R), j] = _phase(Z[np.arange(R), j]) / w[j]
        else:
            absZ = np.abs(Z)
            with np.errstate(divide="ignore", invalid="ignore"):
                F = np.where(absZ > 0.0, absZ ** (1.0 / (p - 1.0)), 0.0) * _phase(Z)
        F = _normalize_lp(F, p, w)
        keep_best(F)

    # pin the value to the ratio at the recorded witness
    denom = lp_norm(best_wit, p, a.context.space)
    if denom == 0.0:
        return OperatorNormResult(value=0.0, exact=False, witness=np.ones(n, dtype=np.complex128))
    value = lp_norm(M @ best_wit, q, a.context.space) / denom
    return OperatorNormResult(value=float(value), exact=False, witness=best_wit)


def invert_operator(u, ctx: MultiplierContext) -> np.ndarray:
    """Symbol of the inverse operator, recovered as the matrix inverse of 1.

    The inverse of a star-multiplication operator is again one, with symbol
    ``w = T_u^(-1) 1`` (applying any such operator to the constant one
    returns its symbol).  Raises :class:`NotInvertibleError` when the
    condition number exceeds ``1e12``.  The returned symbol satisfies
    ``star(u, w) = 1`` and ``E(w) E(u) = 1`` pointwise.
    """
    mat = operator_matrix(u, ctx)
    s = np.linalg.svd(mat.entries, compute_uv=False)
    smax, smin = float(s[0]), float(s[-1])
    if smax == 0.0 or smin == 0.0 or smax / smin > CONDITION_LIMIT:
        raise NotInvertibleError(smin)
    w = np.linalg.solve(mat.entries, np.ones(mat.n, dtype=np.complex128))
    residual = np.abs(star(u, w, ctx.expectation) - 1.0).max()
    if residual > 1e-6:
        raise NotInvertibleError(smin, f"inverse residual too large ({residual:.3e})")
    return w


def is_injective(u, ctx: MultiplierContext) -> bool:
    """Numerical full-rank test of the operator matrix."""
    mat = operator_matrix(u, ctx)
    s = np.linalg.svd(mat.entries, compute_uv=False)
    if s[0] == 0.0:
        return False
    return bool(s[-1] > RANK_RTOL * s[0])


def mult_operator(
    u,
    ctx: MultiplierContext,
    samples: int = 32,
    seed: int = 0,
    measurability_tol: float = 0.0,
) -> MultOperatorReport:
    """Diagonal multiplication operator for a block-constant symbol.

    ``u`` must be constant on every partition block; otherwise a
    ``ValueError`` names the first violating block.  The report samples
    random test functions ``f`` and records the largest observed ratio
    ``||u f||0 / ||f||0``, which can never exceed ``sup |u|``.
    """
    u = np.asarray(u, dtype=np.complex128)
    n = ctx.space.n_atoms
    if u.shape != (n,):
        raise ValueError(f"symbol has shape {u.shape}; expected ({n},)")
    for k, b in enumerate(ctx.expectation.partition.blocks):
        vals = u[list(b)]
        if np.any(np.abs(vals - vals[0]) > measurability_tol):
            raise ValueError(
                f"symbol is not constant on block {k} (atoms {list(b)}); "
                "a multiplication operator needs a block-constant symbol"
            )
    matrix = np.diag(u)
    matrix.flags.writeable = False
    rng = np.random.default_rng(seed)
    tests = [np.ones(n, dtype=np.complex128), u.copy()]
    for _ in range(max(0, int(samples) - len(tests))):
        tests.append(rng.random(n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n)))
    ratio_sup = 0.0
    used = 0
    for f in tests:
        denom = multiplier_norm(f, ctx)
        if denom == 0.0:
            continue
        used += 1
        ratio_sup = max(ratio_sup, multiplier_norm(u * f, ctx) / denom)
    return MultOperatorReport(
        matrix=matrix,
        ratio_sup=float(ratio_sup),
        bound=float(np.abs(u).max()),
        n_samples=used,
    )
