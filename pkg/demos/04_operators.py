"""Star-multiplication operators as matrices: norms, inverses, injectivity.

Run with: python demos/04_operators.py
"""

import numpy as np

import lambertmul as lm

space = lm.make_space([0.25, 0.75, 1.0])
part = lm.make_partition(space, [{0, 1}, {2}])
E = lm.CondExpectation(space, part)
ctx = lm.MultiplierContext(space, E, 2.0)

u = np.array([2.0 + 1j, -1.0, 3.0])

# The operator f -> star(u, f) is linear, so it is a matrix on the atom
# basis; column j is the image of the j-th indicator.
mat = lm.operator_matrix(u, ctx)
print("operator matrix:")
print(np.round(mat.entries, 3))

# Composition of two such operators is again one, with symbol star(u, v).
v = np.array([1.0, 1j, -2.0])
lhs = lm.compose(lm.operator_matrix(u, ctx), lm.operator_matrix(v, ctx))
rhs = lm.operator_matrix(lm.star(u, v, E), ctx).entries
print("composition stays in the class:", np.allclose(lhs, rhs))

# On weighted L2 the operator norm is exact: the largest singular value of
# the similarity transform by sqrt of the weights.
res = lm.operator_norm(mat, 2.0, 2.0)
print(f"L2 -> L2 norm: {res.value:.6f} (exact={res.exact})")

# Other exponent pairs get a certified lower bound with a witness.
res_1inf = lm.operator_norm(mat, 1.0, lm.INF, seed=0)
ratio = lm.lp_norm(mat.entries @ res_1inf.witness, lm.INF, space) / lm.lp_norm(
    res_1inf.witness, 1.0, space
)
print(f"L1 -> Linf norm >= {res_1inf.value:.6f}, witness ratio {ratio:.6f}")

# Inversion recovers the inverse symbol by applying the matrix inverse to
# the constant one; the product of the block expectations is then one.
shifted = u + 3.0
w = lm.invert_operator(shifted, ctx)
print("star(u, w)    =", np.round(lm.star(shifted, w, E), 12))
print("E(w) * E(u)   =", np.round(E.apply(w) * E.apply(shifted), 12))

# A symbol whose block expectation vanishes is not invertible: the operator
# collapses mean-zero functions on that block.
bad = np.array([1.0, -1.0 / 3.0, 2.0])  # block mean over {0,1} is zero
print("E(bad) on block 0:", E.apply(bad)[0])
try:
    lm.invert_operator(bad, ctx)
except lm.NotInvertibleError as err:
    print(f"refused: {err}")
print("injective:", lm.is_injective(bad, ctx))

# Multiplication by a block-constant symbol is bounded by its sup norm.
symbol = E.apply(u)
report = lm.mult_operator(symbol, ctx, samples=50, seed=1)
print(f"sampled ratio {report.ratio_sup:.6f} <= bound {report.bound:.6f}")
