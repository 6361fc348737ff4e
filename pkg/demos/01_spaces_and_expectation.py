"""Finite measure spaces and block-averaging conditional expectation.

Run with: python demos/01_spaces_and_expectation.py
"""

import numpy as np

import lambertmul as lm

# A four-atom space. Weights are the atom masses; nothing needs to sum to 1.
space = lm.make_space([0.5, 0.5, 1.0, 2.0], labels=["a", "b", "c", "d"])
print(space)

# A partition of the atoms plays the role of a sub-sigma-algebra.
part = lm.make_partition(space, [{0, 1}, {2, 3}])
print(part)

# Conditional expectation = weighted average over each block.
E = lm.CondExpectation(space, part)
f = np.array([1.0, 3.0, 10.0, 1.0])
print("f      =", f)
print("E(f)   =", E.apply(f))  # block means: (1*0.5 + 3*0.5)/1 = 2, (10*1 + 1*2)/3 = 4

# The defining property: f and E(f) have the same integral over every block.
for b in part.blocks:
    idx = list(b)
    print(
        f"block {b}: integral f = {(f[idx] * space.weights[idx]).sum():.6f}, "
        f"integral E(f) = {(E.apply(f)[idx] * space.weights[idx]).sum():.6f}"
    )

# The two degenerate partitions: one block (plain averaging over everything)
# and singletons (E is the identity).
print("coarse:", lm.CondExpectation(space, lm.coarse_partition(space)).apply(f))
print("fine:  ", lm.CondExpectation(space, lm.fine_partition(space)).apply(f))

# E is order preserving, unital, and idempotent.
g = f + 1.0
print("monotone:", np.all(E.apply(f) <= E.apply(g)))
print("E(1) == 1 exactly:", np.array_equal(E.apply(np.ones(4)), np.ones(4)))
print("idempotent:", np.allclose(E.apply(E.apply(f)), E.apply(f)))

# Complex functions are averaged componentwise.
z = np.array([1 + 1j, 1 - 1j, 2j, 4.0])
print("E(z)   =", E.apply(z))

# The exceptional set collects atoms whose block sees only zeros; with the
# literal definition the zero function is not even "conditionable", which is
# why downstream code uses always_defined instead.
h = np.array([0.0, 0.0, 5.0, -1.0])
print("exceptional set of h:", sorted(lm.exceptional_set(h, E)))
print("is_conditionable(h):", lm.is_conditionable(h, E))
print("always_defined(h):  ", lm.always_defined(h, E))
