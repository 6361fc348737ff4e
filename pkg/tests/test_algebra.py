"""Star product, algebra multiplication, multiplier norms, and the induced norm."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import lambertmul as lm
from conftest import random_setup

RTOL = 1e-9


def ctx_for(sp, E, p):
    return lm.MultiplierContext(sp, E, p)


class TestStarProduct:
    def test_fine_partition_collapses_to_pointwise_product(self):
        sp = lm.make_space([0.5, 1.5, 2.0])
        E = lm.CondExpectation(sp, lm.fine_partition(sp))
        u = np.array([1 + 1j, 2.0, -0.5])
        v = np.array([3.0, 1j, 4.0])
        np.testing.assert_allclose(lm.star(u, v, E), u * v, rtol=1e-12)

    def test_one_is_neutral(self):
        for seed in range(30):
            sp, pt, E, fns = random_setup(seed)
            u = fns[0]
            one = np.ones(sp.n_atoms, dtype=complex)
            np.testing.assert_allclose(lm.star(one, u, E), u, rtol=1e-12, atol=1e-12)
            np.testing.assert_array_equal(lm.star(u, one, E), u)  # exact by grouping

    def test_hand_value_coarse(self, two_atom_uniform):
        # E(u) = 2, E(v) = 3: (1*3 + 2*2 - 2*3, 3*3 + 4*2 - 2*3) = (1, 11)
        _, _, E = two_atom_uniform
        out = lm.star(np.array([1.0, 3.0]), np.array([2.0, 4.0]), E)
        np.testing.assert_allclose(out, [1.0, 11.0], rtol=1e-14)

    def test_commutative_associative_distributive(self):
        for seed in range(40):
            sp, pt, E, (u, v, w) = random_setup(seed)
            np.testing.assert_allclose(lm.star(u, v, E), lm.star(v, u, E), rtol=RTOL, atol=1e-12)
            np.testing.assert_allclose(
                lm.star(lm.star(u, v, E), w, E),
                lm.star(u, lm.star(v, w, E), E),
                rtol=RTOL, atol=1e-12,
            )
            np.testing.assert_allclose(
                lm.star(u, v + w, E),
                lm.star(u, v, E) + lm.star(u, w, E),
                rtol=RTOL, atol=1e-12,
            )

    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(0, 10_000),
        st.tuples(st.floats(-3, 3), st.floats(-3, 3)).map(lambda t: complex(*t)),
    )
    def test_scalars_move_freely(self, seed, lam):
        sp, pt, E, (u, v, _) = random_setup(seed)
        ref = lam * lm.star(u, v, E)
        np.testing.assert_allclose(lm.star(lam * u, v, E), ref, rtol=RTOL, atol=1e-9)
        np.testing.assert_allclose(lm.star(u, lam * v, E), ref, rtol=RTOL, atol=1e-9)

    def test_conjugation_commutes_with_star(self):
        # oracle: evaluate both sides directly
        for seed in range(30):
            sp, pt, E, (u, v, _) = random_setup(seed)
            lhs = lm.involution(lm.star(u, v, E))
            rhs = lm.star(lm.involution(u), lm.involution(v), E)
            np.testing.assert_allclose(lhs, rhs, rtol=RTOL, atol=1e-12)


class TestAlgebraMul:
    def test_identity_is_constant_three(self):
        for seed in range(30):
            sp, pt, E, (u, _, _) = random_setup(seed)
            e = np.full(sp.n_atoms, lm.ALGEBRA_IDENTITY, dtype=complex)
            np.testing.assert_allclose(lm.algebra_mul(e, u, E), u, rtol=1e-12, atol=1e-12)
            np.testing.assert_allclose(lm.algebra_mul(u, e, E), u, rtol=1e-12, atol=1e-12)

    def test_commutative(self):
        for seed in range(30):
            sp, pt, E, (u, v, _) = random_setup(seed)
            np.testing.assert_allclose(
                lm.algebra_mul(u, v, E), lm.algebra_mul(v, u, E), rtol=RTOL, atol=1e-12
            )

    def test_hand_value_coarse(self, two_atom_uniform):
        _, _, E = two_atom_uniform
        out = lm.algebra_mul(np.array([1.0, 3.0]), np.array([2.0, 4.0]), E)
        np.testing.assert_allclose(out, [1.0 / 3.0, 11.0 / 3.0], rtol=1e-14)


class TestInvolution:
    def test_pointwise_conjugate(self):
        np.testing.assert_array_equal(
            lm.involution(np.array([1 + 2j, 3.0])), np.array([1 - 2j, 3.0])
        )

    def test_involutive(self):
        u = np.array([1 + 2j, -4j, 2.5])
        np.testing.assert_array_equal(lm.involution(lm.involution(u)), u)

    def test_norm_preserving_and_multiplicative(self):
        for seed in range(30):
            sp, pt, E, (u, v, _) = random_setup(seed)
            ctx = ctx_for(sp, E, 2.0)
            assert lm.multiplier_norm(lm.involution(u), ctx) == pytest.approx(
                lm.multiplier_norm(u, ctx), rel=1e-12
            )
            np.testing.assert_allclose(
                lm.involution(lm.algebra_mul(u, v, E)),
                lm.algebra_mul(lm.involution(u), lm.involution(v), E),
                rtol=RTOL, atol=1e-12,
            )


class TestMultiplierNorm:
    def test_constant_symbol(self):
        for seed in range(20):
            sp, pt, E, _ = random_setup(seed)
            c = 2.0 - 1.5j
            for p in (1.0, 2.0, 5.0, lm.INF):
                ctx = ctx_for(sp, E, p)
                got = lm.multiplier_norm(np.full(sp.n_atoms, c), ctx)
                assert got == pytest.approx(abs(c), rel=1e-12)

    def test_hand_value_coarse_p1(self, two_atom_uniform):
        # E|u| = (2 + 4)/2 = 3
        sp, _, E = two_atom_uniform
        assert lm.multiplier_norm(np.array([2.0, 4.0]), ctx_for(sp, E, 1.0)) == pytest.approx(3.0)

    def test_fine_partition_gives_sup_norm(self):
        sp = lm.make_space([0.5, 2.0, 1.0])
        E = lm.CondExpectation(sp, lm.fine_partition(sp))
        u = np.array([1.0, -3.0, 2.0 + 2.0j])
        for p in (1.0, 2.0, 7.0):
            got = lm.multiplier_norm(u, ctx_for(sp, E, p))
            assert got == pytest.approx(np.abs(u).max(), rel=1e-12)

    def test_finite_for_every_function(self):
        for seed in range(30):
            sp, pt, E, (u, _, _) = random_setup(seed)
            for p in (1.0, 2.0, 8.0):
                assert np.isfinite(lm.multiplier_norm(u, ctx_for(sp, E, p)))

    def test_submultiplicative_with_constant_three(self):
        for seed in range(60):
            sp, pt, E, (u, v, _) = random_setup(seed)
            for p in (1.0, 2.0, 4.0):
                ctx = ctx_for(sp, E, p)
                lhs = lm.multiplier_norm(lm.star(u, v, E), ctx)
                rhs = 3.0 * lm.multiplier_norm(u, ctx) * lm.multiplier_norm(v, ctx)
                assert lhs <= rhs * (1 + RTOL) + 1e-12

    def test_rescaled_product_is_banach(self):
        for seed in range(60):
            sp, pt, E, (u, v, _) = random_setup(seed)
            ctx = ctx_for(sp, E, 2.0)
            lhs = lm.multiplier_norm(lm.algebra_mul(u, v, E), ctx)
            rhs = lm.multiplier_norm(u, ctx) * lm.multiplier_norm(v, ctx)
            assert lhs <= rhs * (1 + RTOL) + 1e-12

    def test_load_bearing_sub_inequality(self):
        # the estimate behind submultiplicativity: ||u E(v)||0 <= ||u||0 ||v||0
        for seed in range(60):
            sp, pt, E, (u, v, _) = random_setup(seed)
            ctx = ctx_for(sp, E, 2.0)
            lhs = lm.multiplier_norm(u * E.apply(v), ctx)
            rhs = lm.multiplier_norm(u, ctx) * lm.multiplier_norm(v, ctx)
            assert lhs <= rhs * (1 + RTOL) + 1e-12


class TestInducedNorm:
    def test_identity_has_norm_one(self, two_atom_uniform):
        sp, _, E = two_atom_uniform
        e = np.full(2, 3.0, dtype=complex)
        est = lm.induced_norm(e, ctx_for(sp, E, 2.0))
        assert est.lower_bound == pytest.approx(1.0, rel=1e-9)

    def test_constant_one_has_norm_one_third(self, two_atom_uniform):
        # u.v = v/3 so the supremum over the unit ball is exactly 1/3
        sp, _, E = two_atom_uniform
        est = lm.induced_norm(np.ones(2, dtype=complex), ctx_for(sp, E, 2.0))
        assert est.lower_bound == pytest.approx(1.0 / 3.0, rel=1e-9)

    def test_zero_symbol(self, two_atom_uniform):
        sp, _, E = two_atom_uniform
        est = lm.induced_norm(np.zeros(2, dtype=complex), ctx_for(sp, E, 2.0))
        assert est.lower_bound == 0.0
        assert est.method == "exact"
        np.testing.assert_array_equal(est.witness, np.ones(2, dtype=complex))

    def test_witness_reproduces_bound(self):
        for seed in range(15):
            sp, pt, E, (u, _, _) = random_setup(seed)
            ctx = ctx_for(sp, E, 2.0)
            est = lm.induced_norm(u, ctx, seed=seed)
            again = lm.multiplier_norm(lm.algebra_mul(u, est.witness, E), ctx)
            assert again == pytest.approx(est.lower_bound, rel=1e-9)
            # the witness is feasible
            assert lm.multiplier_norm(est.witness, ctx) <= 1.0 + 1e-9

    def test_sandwich_between_third_and_full_norm(self):
        for seed in range(25):
            sp, pt, E, (u, _, _) = random_setup(seed)
            for p in (1.0, 2.0, 3.0):
                ctx = ctx_for(sp, E, p)
                u0 = lm.multiplier_norm(u, ctx)
                est = lm.induced_norm(u, ctx, seed=seed)
                assert est.lower_bound >= u0 / 3.0 - RTOL * max(u0, 1e-3)
                assert est.lower_bound <= u0 + RTOL * max(u0, 1e-3)

    def test_unit_witness_achieves_lower_endpoint(self):
        for seed in range(25):
            sp, pt, E, (u, _, _) = random_setup(seed)
            ctx = ctx_for(sp, E, 2.0)
            at_one = lm.multiplier_norm(
                lm.algebra_mul(u, np.ones(sp.n_atoms, dtype=complex), E), ctx
            )
            assert at_one == pytest.approx(lm.multiplier_norm(u, ctx) / 3.0, rel=1e-12)

    def test_rejects_infinite_exponent(self, two_atom_uniform):
        sp, _, E = two_atom_uniform
        with pytest.raises(ValueError, match="finite"):
            lm.induced_norm(np.ones(2), ctx_for(sp, E, lm.INF))


class TestSplitDecomposition:
    def test_small_function_goes_entirely_right(self):
        u = np.array([0.5, -0.25, 0.9j])
        u1, u2 = lm.split_decomposition(u, 1.0, 2.0, 3.0)
        np.testing.assert_array_equal(u1, np.zeros(3))
        np.testing.assert_array_equal(u2, u)

    def test_large_function_goes_entirely_left(self):
        u = np.array([1.5, -2.25, 3.9j])
        u1, u2 = lm.split_decomposition(u, 1.0, 2.0, 3.0)
        np.testing.assert_array_equal(u1, u)
        np.testing.assert_array_equal(u2, np.zeros(3))

    def test_hand_split(self):
        u1, u2 = lm.split_decomposition(np.array([0.5, 2.0]), 1.0, 2.0, 3.0)
        np.testing.assert_array_equal(u1, [0.0, 2.0])
        np.testing.assert_array_equal(u2, [0.5, 0.0])

    def test_exponent_ordering_enforced(self):
        with pytest.raises(ValueError, match="p < q < r"):
            lm.split_decomposition(np.array([1.0]), 2.0, 2.0, 3.0)

    def test_norm_bounds_including_infinite_top(self):
        for seed in range(40):
            sp, pt, E, (u, _, _) = random_setup(seed)
            for (p, q, r) in [(1.0, 2.0, 4.0), (1.5, 3.0, lm.INF)]:
                u1, u2 = lm.split_decomposition(u, p, q, r)
                np.testing.assert_array_equal(u1 + u2, u)
                nq = lm.multiplier_norm(u, ctx_for(sp, E, q))
                n1 = lm.multiplier_norm(u1, ctx_for(sp, E, p))
                n2 = lm.multiplier_norm(u2, ctx_for(sp, E, r))
                assert n1 <= nq ** (q / p) * (1 + RTOL) + 1e-12
                top = 1.0 if r == lm.INF else nq ** (q / r)
                assert n2 <= top * (1 + RTOL) + 1e-12


class TestSectionThreeInequalities:
    def test_holder_for_conjugate_pairs(self):
        for seed in range(40):
            sp, pt, E, (u, v, _) = random_setup(seed)
            for p in (1.0, 2.0, 3.0):
                q = lm.INF if p == 1.0 else p / (p - 1.0)
                lhs = lm.multiplier_norm(u * v, ctx_for(sp, E, 1.0))
                rhs = lm.multiplier_norm(u, ctx_for(sp, E, p)) * lm.multiplier_norm(
                    v, ctx_for(sp, E, q)
                )
                assert lhs <= rhs * (1 + RTOL) + 1e-12

    def test_bounded_functions_are_p_multipliers(self):
        for seed in range(40):
            sp, pt, E, (u, _, _) = random_setup(seed)
            sup = np.abs(u).max()
            for p in (1.0, 2.0, 6.0):
                assert np.all(E.apply(np.abs(u) ** p) <= sup**p * (1 + RTOL) + 1e-12)
                assert lm.multiplier_norm(u, ctx_for(sp, E, p)) <= sup * (1 + RTOL) + 1e-12

    def test_interpolation_on_probability_spaces(self):
        for seed in range(40):
            sp, pt, E, (u, _, _) = random_setup(seed)
            prob = lm.make_space(sp.weights / sp.total_mass)
            for (p, q, r) in [(1.0, 2.0, 3.0), (1.5, 2.5, lm.INF)]:
                lhs = lm.lp_norm(u, q, prob)
                rhs = max(lm.lp_norm(u, p, prob), lm.lp_norm(u, r, prob))
                assert lhs <= rhs * (1 + RTOL) + 1e-12

    def test_domination(self):
        for seed in range(40):
            sp, pt, E, (u, v, _) = random_setup(seed)
            au, av = np.abs(u), np.abs(v)
            dominated = v * np.where(av > 0, np.minimum(1.0, au / np.maximum(av, 1e-300)), 0.0)
            for p in (1.0, 2.0, 4.0):
                assert np.all(
                    E.apply(np.abs(dominated) ** p) <= E.apply(au**p) * (1 + RTOL) + 1e-12
                )
                assert (
                    lm.multiplier_norm(dominated, ctx_for(sp, E, p))
                    <= lm.multiplier_norm(u, ctx_for(sp, E, p)) * (1 + RTOL) + 1e-12
                )

    def test_dominated_convergence(self):
        for seed in range(40):
            sp, pt, E, (u, v, _) = random_setup(seed)
            ctx = ctx_for(sp, E, 2.0)
            dominator = np.abs(u) + np.abs(v)
            assert lm.multiplier_norm(u, ctx) <= lm.multiplier_norm(dominator, ctx) * (1 + RTOL)
            gaps = []
            for n in (5, 10, 20, 40):
                t = 2.0**-n
                u_n = (1 - t) * u + t * v
                assert np.all(np.abs(u_n) <= dominator * (1 + RTOL) + 1e-12)
                gaps.append(np.abs(u_n - u).max())
            assert all(a >= b for a, b in zip(gaps, gaps[1:]))
            # rounding of (1-t)u + tv leaves an eps-sized residue on top of
            # the exact 2^-40 factor
            assert gaps[-1] <= 2.0**-40 * max(1.0, np.abs(v - u).max()) + 1e-13
            assert np.isfinite(lm.multiplier_norm(u, ctx))
