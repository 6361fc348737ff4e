"""Finite measure spaces, partitions, and weighted L^p machinery.

Everything in this package computes over a finite atomic measure space:
``n`` atoms carrying strictly positive weights.  A measurable function is a
plain complex (or real) numpy array with one value per atom, and a complete
sub-sigma-algebra is represented by a partition of the atom index set.

Because every atom has positive mass, almost-everywhere statements collapse
to pointwise statements and the essential supremum is the plain maximum.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

INF = float("inf")

__all__ = [
    "INF",
    "MeasureSpace",
    "Partition",
    "make_space",
    "make_partition",
    "coarse_partition",
    "fine_partition",
    "as_function",
    "check_exponent",
    "lp_norm",
    "ess_sup",
    "pos_neg_parts",
    "indicator",
]


class MeasureSpace:
    """A finite measure space: atoms 0..n-1 with strictly positive weights.

    Parameters
    ----------
    weights : sequence of float
        Atom masses.  Must be non-empty, finite, and strictly positive.
    labels : sequence of str, optional
        Cosmetic atom names; not part of the interchange file format.
    """

    __slots__ = ("weights", "labels", "total_mass")

    def __init__(self, weights: Sequence[float], labels: Sequence[str] | None = None):
        w = np.array(weights, dtype=np.float64, copy=True)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("a measure space needs a non-empty 1-d list of atom weights")
        if not np.all(np.isfinite(w)):
            bad = np.flatnonzero(~np.isfinite(w)).tolist()
            raise ValueError(f"atom weights must be finite; offending atoms {bad}")
        if np.any(w <= 0.0):
            bad = np.flatnonzero(w <= 0.0).tolist()
            raise ValueError(f"atom weights must be strictly positive; offending atoms {bad}")
        w.flags.writeable = False
        self.weights = w
        self.total_mass = float(w.sum())
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != w.size:
                raise ValueError("labels length must match the atom count")
        self.labels = labels

    @property
    def n_atoms(self) -> int:
        return self.weights.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeasureSpace):
            return NotImplemented
        return np.array_equal(self.weights, other.weights) and self.labels == other.labels

    def __repr__(self) -> str:
        return f"MeasureSpace(n_atoms={self.n_atoms}, total_mass={self.total_mass:.6g})"


class Partition:
    """A partition of the atom set into non-empty disjoint blocks.

    Blocks are canonicalized: atoms sorted within each block, blocks sorted
    by their smallest atom.  ``block_of[i]`` gives the block index of atom
    ``i`` under this canonical order.
    """

    __slots__ = ("n_atoms", "blocks", "block_of")

    def __init__(self, n_atoms: int, blocks: Iterable[Iterable[int]]):
        if n_atoms < 1:
            raise ValueError("partition needs at least one atom")
        raw = [sorted(int(i) for i in b) for b in blocks]
        for k, b in enumerate(raw):
            if not b:
                raise ValueError(f"block {k} is empty")
            out = [i for i in b if i < 0 or i >= n_atoms]
            if out:
                raise ValueError(f"block {k} contains out-of-range atom indices {out}")
        counts = np.zeros(n_atoms, dtype=np.intp)
        for b in raw:
            for i in b:
                counts[i] += 1
        dup = np.flatnonzero(counts > 1).tolist()
        if dup:
            raise ValueError(f"atoms {dup} appear in more than one block")
        missing = np.flatnonzero(counts == 0).tolist()
        if missing:
            raise ValueError(f"atoms {missing} are not covered by any block")
        raw.sort(key=lambda b: b[0])
        self.n_atoms = int(n_atoms)
        self.blocks = tuple(tuple(b) for b in raw)
        block_of = np.empty(n_atoms, dtype=np.intp)
        for k, b in enumerate(self.blocks):
            for i in b:
                block_of[i] = k
        block_of.flags.writeable = False
        self.block_of = block_of

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def is_coarse(self) -> bool:
        return self.n_blocks == 1

    def is_fine(self) -> bool:
        return self.n_blocks == self.n_atoms

    def refines(self, other: "Partition") -> bool:
        """True if every block of ``self`` sits inside a block of ``other``."""
        if self.n_atoms != other.n_atoms:
            return False
        for b in self.blocks:
            k = other.block_of[b[0]]
            if any(other.block_of[i] != k for i in b):
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.n_atoms == other.n_atoms and self.blocks == other.blocks

    def __repr__(self) -> str:
        return f"Partition(n_atoms={self.n_atoms}, blocks={list(map(list, self.blocks))})"


def make_space(weights: Sequence[float], labels: Sequence[str] | None = None) -> MeasureSpace:
    """Build a finite measure space from strictly positive atom weights."""
    return MeasureSpace(weights, labels)


def make_partition(space: MeasureSpace, blocks: Iterable[Iterable[int]]) -> Partition:
    """Build a partition of ``space``'s atoms; validates coverage and disjointness."""
    return Partition(space.n_atoms, blocks)


def coarse_partition(space: MeasureSpace) -> Partition:
    """The trivial partition: one block containing every atom."""
    return Partition(space.n_atoms, [range(space.n_atoms)])


def fine_partition(space: MeasureSpace) -> Partition:
    """The discrete partition: every atom its own block."""
    return Partition(space.n_atoms, [[i] for i in range(space.n_atoms)])


def as_function(space: MeasureSpace, values, real: bool = False) -> np.ndarray:
    """Validate ``values`` as a measurable function on ``space``.

    Returns a complex128 array (float64 when ``real=True``) of length
    ``space.n_atoms``.  Rejects NaN and infinite entries.
    """
    f = np.asarray(values)
    if real:
        if np.iscomplexobj(f):
            if np.any(f.imag != 0):
                raise ValueError("expected a real-valued function")
            f = f.real
        f = np.array(f, dtype=np.float64)
    else:
        f = np.array(f, dtype=np.complex128)
    if f.ndim != 1 or f.size != space.n_atoms:
        raise ValueError(
            f"function has {f.size} values but the space has {space.n_atoms} atoms"
        )
    if not np.all(np.isfinite(f.real)) or not np.all(np.isfinite(np.imag(f))):
        raise ValueError("function values must be finite")
    return f


def check_exponent(p: float, name: str = "p") -> float:
    """Validate an L^p exponent: a real number with 1 <= p, or inf."""
    p = float(p)
    if np.isnan(p) or p < 1.0:
        raise ValueError(f"exponent {name}={p!r} is invalid; need 1 <= {name} <= inf")
    return p


def _check_lives_on(f: np.ndarray, space: MeasureSpace) -> np.ndarray:
    f = np.asarray(f)
    if f.shape[-1] != space.n_atoms:
        raise ValueError(
            f"function has {f.shape[-1]} values but the space has {space.n_atoms} atoms"
        )
    return f


def lp_norm(f, p: float, space: MeasureSpace) -> float:
    """Weighted L^p norm (sum |f_i|^p mu_i)^(1/p); maximum modulus for p = inf."""
    f = _check_lives_on(f, space)
    p = check_exponent(p)
    a = np.abs(f)
    if p == INF:
        return float(a.max())
    return float((a**p) @ space.weights) ** (1.0 / p)


def ess_sup(f, space: MeasureSpace) -> float:
    """Essential supremum of |f|; the plain maximum since all atoms have mass."""
    f = _check_lives_on(f, space)
    return float(np.abs(f).max())


def pos_neg_parts(f) -> tuple[np.ndarray, np.ndarray]:
    """Split a real function into its positive and negative parts.

    Returns ``(fp, fm)`` with ``f = fp - fm``, both parts non-negative and
    ``fp * fm = 0`` pointwise.
    """
    f = np.asarray(f)
    if np.iscomplexobj(f):
        if np.any(f.imag != 0):
            raise ValueError("pos_neg_parts needs a real-valued function")
        f = f.real
    f = f.astype(np.float64, copy=False)
    return np.maximum(f, 0.0), np.maximum(-f, 0.0)


def indicator(space: MeasureSpace, atom_set: Iterable[int]) -> np.ndarray:
    """Indicator function of a set of atom indices (1 on the set, 0 elsewhere)."""
    out = np.zeros(space.n_atoms, dtype=np.float64)
    for i in atom_set:
        i = int(i)
        if i < 0 or i >= space.n_atoms:
            raise ValueError(f"atom index {i} out of range for a space with {space.n_atoms} atoms")
        out[i] = 1.0
    return out
