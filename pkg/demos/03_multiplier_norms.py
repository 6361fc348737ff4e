"""Multiplier norms, the induced operator norm, and the threshold split.

Run with: python demos/03_multiplier_norms.py
"""

import numpy as np

import lambertmul as lm

space, part, (u, v, _) = lm.random_instance(3, lm.GeneratorConfig(max_atoms=8))
E = lm.CondExpectation(space, part)
print(f"{space}, {part.n_blocks} blocks")

# ||u||0 = max over blocks of E(|u|^p)^(1/p).  Finite for every function on
# a finite space, and equal to the sup norm when the partition is fine.
for p in (1.0, 2.0, 4.0, lm.INF):
    ctx = lm.MultiplierContext(space, E, p)
    print(f"  ||u||0 at p={p}: {lm.multiplier_norm(u, ctx):.6f}")

# The induced norm of multiplication by u on the unit ball of ||.||0 is
# estimated from below by projected gradient ascent.  The result always
# lands in the sandwich [||u||0 / 3, ||u||0]: the lower endpoint comes from
# the witness v = 1, the upper one from submultiplicativity.
ctx = lm.MultiplierContext(space, E, 2.0)
u0 = lm.multiplier_norm(u, ctx)
est = lm.induced_norm(u, ctx, seed=0)
print(f"||u||0 = {u0:.6f}")
print(f"induced norm >= {est.lower_bound:.6f} ({est.method}, {est.iterations} steps)")
print(f"sandwich: {u0 / 3:.6f} <= {est.lower_bound:.6f} <= {u0:.6f}")

# The witness certifies the bound: re-evaluating the objective reproduces it.
again = lm.multiplier_norm(lm.algebra_mul(u, est.witness, E), ctx)
print(f"objective at the recorded witness: {again:.6f}")

# Splitting at the modulus-1 threshold trades integrability up and down:
# the large part is controlled at smaller exponents, the small part at
# larger ones (including infinity).
p, q, r = 1.5, 2.5, 4.0
u1, u2 = lm.split_decomposition(u, p, q, r)
nq = lm.multiplier_norm(u, lm.MultiplierContext(space, E, q))
n1 = lm.multiplier_norm(u1, lm.MultiplierContext(space, E, p))
n2 = lm.multiplier_norm(u2, lm.MultiplierContext(space, E, r))
print(f"split: ||u1||0_p = {n1:.4f} <= {nq ** (q / p):.4f}")
print(f"       ||u2||0_r = {n2:.4f} <= {nq ** (q / r):.4f}")

# Hoelder across conjugate exponents, with the plain pointwise product:
p = 2.0
q = p / (p - 1)
lhs = lm.multiplier_norm(u * v, lm.MultiplierContext(space, E, 1.0))
rhs = lm.multiplier_norm(u, lm.MultiplierContext(space, E, p)) * lm.multiplier_norm(
    v, lm.MultiplierContext(space, E, q)
)
print(f"Hoelder: {lhs:.6f} <= {rhs:.6f}")
