import numpy as np
import pytest

import lambertmul as lm


@pytest.fixture
def two_atom_uniform():
    """Uniform two-atom space with its coarse expectation."""
    sp = lm.make_space([1.0, 1.0])
    pt = lm.coarse_partition(sp)
    return sp, pt, lm.CondExpectation(sp, pt)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_setup(seed, max_atoms=12):
    """A random space, partition, expectation, and three functions."""
    sp, pt, fns = lm.random_instance(seed, lm.GeneratorConfig(max_atoms=max_atoms))
    return sp, pt, lm.CondExpectation(sp, pt), fns
