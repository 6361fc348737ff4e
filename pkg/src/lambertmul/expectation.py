"""Conditional expectation by block averaging, and conditionability tests.

On a finite atomic space the conditional expectation onto the sub-algebra
generated by a partition is weighted averaging over each block:

    E(f)(i) = (sum_{j in block(i)} f_j mu_j) / mass(block(i))

The implementation reduces each block with a sequential ``np.add.reduceat``
over a precomputed atom ordering.  This keeps results deterministic and
makes ``E(1) = 1`` hold bit-exactly: the numerator for the constant one is
computed by the very same reduction that produced the block masses.
"""

from __future__ import annotations

import numpy as np

from .measure import MeasureSpace, Partition, pos_neg_parts

__all__ = [
    "CondExpectation",
    "cond_exp",
    "is_measurable_wrt",
    "exceptional_set",
    "is_conditionable",
    "always_defined",
]

# Relative zero threshold used when deciding that a block expectation
# vanishes.  Averages of exact zeros are exactly zero, so this only guards
# inputs that were themselves produced by rounded arithmetic.
_ZERO_FACTOR = 1e-14


class CondExpectation:
    """Conditional expectation operator onto the algebra of a partition.

    Immutable after construction; all derived layout (atom ordering, block
    boundaries, block masses) is precomputed, so applications are read-only
    and safe to share across threads.

    Attributes
    ----------
    space : MeasureSpace
    partition : Partition
    block_of : ndarray of int
        Atom index -> block index.
    block_mass : ndarray of float
        Total measure of each block; strictly positive.
    """

    __slots__ = ("space", "partition", "block_of", "block_mass",
                 "_order", "_starts", "_w_sorted", "_singletons", "_singleton_pos")

    def __init__(self, space: MeasureSpace, partition: Partition):
        if partition.n_atoms != space.n_atoms:
            raise ValueError(
                f"partition covers {partition.n_atoms} atoms but the space has {space.n_atoms}"
            )
        self.space = space
        self.partition = partition
        self.block_of = partition.block_of
        order = np.argsort(self.block_of, kind="stable")
        counts = np.bincount(self.block_of, minlength=partition.n_blocks)
        starts = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.intp)
        self._order = order
        self._starts = starts
        self._w_sorted = space.weights[order]
        self.block_mass = np.add.reduceat(self._w_sorted, starts)
        # averaging one value must return it exactly, so singleton blocks
        # bypass the multiply-sum-divide path
        self._singletons = np.flatnonzero(counts == 1)
        self._singleton_pos = starts[self._singletons]

    @property
    def n_blocks(self) -> int:
        return self.partition.n_blocks

    def _check(self, f) -> np.ndarray:
        f = np.asarray(f)
        if f.shape[-1] != self.space.n_atoms:
            raise ValueError(
                f"function has {f.shape[-1]} values but the space has {self.space.n_atoms} atoms"
            )
        return f

    def block_means(self, f) -> np.ndarray:
        """Per-block weighted means of ``f``; shape ``(..., n_blocks)``.

        Real and imaginary parts are reduced separately so complex inputs
        go through the same float64 summation that produced the block
        masses; this keeps E of the constant one bit-exact.
        """
        f = self._check(f)
        g = f[..., self._order]
        re = np.add.reduceat(g.real * self._w_sorted, self._starts, axis=-1) / self.block_mass
        if self._singletons.size:
            re[..., self._singletons] = g.real[..., self._singleton_pos]
        if not np.iscomplexobj(f):
            return re
        im = np.add.reduceat(g.imag * self._w_sorted, self._starts, axis=-1) / self.block_mass
        if self._singletons.size:
            im[..., self._singletons] = g.imag[..., self._singleton_pos]
        return re + 1j * im

    def apply(self, f) -> np.ndarray:
        """E(f): block means expanded back to one value per atom."""
        means = self.block_means(f)
        return means[..., self.block_of]

    def block_max(self, f) -> np.ndarray:
        """Per-block maximum of a real array; shape ``(..., n_blocks)``."""
        f = self._check(f)
        return np.maximum.reduceat(f[..., self._order], self._starts, axis=-1)

    def __repr__(self) -> str:
        return f"CondExpectation(n_atoms={self.space.n_atoms}, n_blocks={self.n_blocks})"


def cond_exp(f, expectation: CondExpectation) -> np.ndarray:
    """Apply the conditional expectation operator to ``f``."""
    return expectation.apply(f)


def is_measurable_wrt(f, partition: Partition, tol: float = 0.0) -> bool:
    """True iff ``f`` is constant on every block of ``partition``.

    The default is exact equality.  ``tol`` gives an absolute slack per
    atom for values produced by rounded arithmetic.
    """
    f = np.asarray(f)
    if f.shape[-1] != partition.n_atoms:
        raise ValueError(
            f"function has {f.shape[-1]} values but the partition has {partition.n_atoms} atoms"
        )
    for b in partition.blocks:
        vals = f[..., list(b)]
        dev = np.abs(vals - vals[..., :1])
        if tol == 0.0:
            if np.any(dev != 0.0):
                return False
        elif np.any(dev > tol):
            return False
    return True


def exceptional_set(f, expectation: CondExpectation) -> frozenset[int]:
    """Atoms where the expectations of both the positive and negative part vanish.

    For a real ``f`` this is the union of blocks on which ``f`` is
    identically zero.  Vanishing is decided against a relative threshold of
    ``1e-14`` times the block mean of ``|f|``; averaging exact zeros is
    exact, so the threshold only matters for derived inputs.
    """
    fp, fm = pos_neg_parts(f)
    ep = expectation.block_means(fp)
    em = expectation.block_means(fm)
    thr = _ZERO_FACTOR * expectation.block_means(np.abs(np.asarray(f, dtype=np.float64)))
    zero_blocks = (ep <= thr) & (em <= thr)
    block_of = expectation.block_of
    return frozenset(int(i) for i in np.flatnonzero(zero_blocks[block_of]))


def is_conditionable(f, expectation: CondExpectation) -> bool:
    """Literal conditionability: the exceptional set has measure zero.

    For complex ``f`` the test is applied to the real and imaginary parts
    separately.  Note the literal reading is degenerate on finite spaces:
    the zero function is *not* conditionable (its exceptional set is the
    whole space, which has positive measure), and any function vanishing on
    an entire block is penalized the same way.  The guard exists to rule
    out an inf-minus-inf when subtracting part expectations, which cannot
    happen here; use :func:`always_defined` for the effective predicate.
    """
    f = np.asarray(f)
    if np.iscomplexobj(f):
        return is_conditionable(f.real, expectation) and is_conditionable(f.imag, expectation)
    return len(exceptional_set(f, expectation)) == 0


def always_defined(f, expectation: CondExpectation) -> bool:
    """Effective conditionability on finite spaces: always true.

    Every block has finite positive mass and every function value is
    finite, so block averages are always well-defined.  This is the
    predicate downstream code relies on; :func:`is_conditionable` records
    the literal definition for comparison.
    """
    expectation._check(np.asarray(f))
    return True
