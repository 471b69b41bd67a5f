"""Tests for group cohomology: resolution engine vs bar oracle, Shapiro,
inflation and tower reports."""

import random

import numpy as np
import pytest

from proflq import catalog, groupcoh as gc
from proflq.groups import (
    GroupHom,
    all_subgroups,
    cyclic_group,
    dihedral_group,
    direct_product,
    hom_from_generators,
    quotient_group,
    symmetric_group,
    trivial_group,
)


class TestGModule:
    def test_trivial(self):
        m = gc.trivial_module(symmetric_group(3), 2)
        assert m.dim == 1 and (m.matrices == 1).all()

    def test_regular_dimension(self):
        g = symmetric_group(3)
        assert gc.regular_module(g, 2).dim == 6

    def test_permutation_module_rejects_bad_action(self):
        g = cyclic_group(2)
        with pytest.raises(ValueError):
            gc.permutation_module(g, [[0, 1], [0, 0]], 2)
        with pytest.raises(ValueError):
            gc.permutation_module(g, [[1, 0], [0, 1]], 2)

    def test_homomorphism_validated(self):
        g = cyclic_group(3)
        mats = np.stack([np.eye(2, dtype=np.int64)] * 3)
        mats[1] = [[1, 1], [0, 1]]
        mats[2] = [[1, 1], [0, 1]]  # not consistent with g^2
        with pytest.raises(ValueError):
            gc.GModule(g, 2, mats)

    def test_direct_sum(self):
        g = cyclic_group(2)
        m = gc.direct_sum_module(gc.trivial_module(g, 2),
                                 gc.regular_module(g, 2))
        assert m.dim == 3
        assert gc.cohomology(g, m, 2) == (2, 1, 1)

    def test_act(self):
        g = cyclic_group(4)
        m = gc.regular_module(g, 3)
        v = np.zeros(4, dtype=np.int64)
        v[0] = 1
        assert list(m.act(1, v)) == [0, 1, 0, 0]


class TestCohomologyOracles:
    def test_cyclic_p(self):
        for p in (2, 3, 5):
            g = cyclic_group(p)
            assert gc.cohomology(g, gc.trivial_module(g, p), 4) == (1,) * 5

    def test_cyclic_prime_power(self):
        for n, p in ((4, 2), (8, 2), (9, 3)):
            g = cyclic_group(n)
            assert gc.cohomology(g, gc.trivial_module(g, p), 3) == (1, 1, 1, 1)

    def test_coprime_vanishing(self):
        g = cyclic_group(3)
        assert gc.cohomology(g, gc.trivial_module(g, 2), 3) == (1, 0, 0, 0)
        g = symmetric_group(3)
        assert gc.cohomology(g, gc.trivial_module(g, 5), 3) == (1, 0, 0, 0)

    def test_klein_four_kunneth(self):
        k4 = direct_product(cyclic_group(2), cyclic_group(2))
        assert gc.cohomology(k4, gc.trivial_module(k4, 2), 4) == (1, 2, 3, 4, 5)

    def test_s3_mod2_and_mod3(self):
        g = symmetric_group(3)
        assert gc.cohomology(g, gc.trivial_module(g, 2), 3) == (1, 1, 1, 1)
        # mod 3 cohomology of S_3 is 4-periodic: 1,0,0,1
        assert gc.cohomology(g, gc.trivial_module(g, 3), 4) == (1, 0, 0, 1, 1)

    def test_q8_period_four(self):
        q8 = catalog.quaternion_group()
        assert gc.cohomology(q8, gc.trivial_module(q8, 2), 4) == (1, 2, 2, 1, 1)

    def test_d4_poincare_series(self):
        d4 = dihedral_group(4)
        assert gc.cohomology(d4, gc.trivial_module(d4, 2), 4) == (1, 2, 3, 4, 5)

    def test_trivial_group(self):
        g = trivial_group()
        m = gc.trivial_module(g, 2, dim=3)
        assert gc.cohomology(g, m, 3) == (3, 0, 0, 0)

    def test_regular_module_acyclic(self):
        for g in (symmetric_group(3), dihedral_group(4), cyclic_group(4)):
            for p in (2, 3):
                dims = gc.cohomology(g, gc.regular_module(g, p), 3)
                assert dims[0] == 1 and dims[1:] == (0, 0, 0)

    def test_h0_is_invariants(self):
        g = symmetric_group(3)
        m = gc.permutation_module(
            g, [[g.mul(a, x) for x in range(6)] for a in range(6)], 2)
        # invariants of the regular module are spanned by the orbit sum
        assert gc.cohomology(g, m, 0) == (1,)

    def test_zero_module(self):
        g = cyclic_group(2)
        m = gc.GModule(g, 2, np.zeros((2, 0, 0), dtype=np.int64))
        assert gc.cohomology(g, m, 2) == (0, 0, 0)

    def test_budget(self):
        g = symmetric_group(4)
        with pytest.raises(gc.BudgetError):
            gc.cohomology(g, gc.regular_module(g, 2), 3, dim_budget=10)


class TestBarOracle:
    def test_matches_resolution_on_small_groups(self):
        for g in (cyclic_group(2), cyclic_group(3), cyclic_group(4),
                  direct_product(cyclic_group(2), cyclic_group(2)),
                  symmetric_group(3)):
            for p in (2, 3):
                m = gc.trivial_module(g, p)
                assert gc.bar_cohomology(g, m, 2, dim_budget=10 ** 6) == \
                    gc.cohomology(g, m, 2)

    def test_matches_on_nontrivial_coefficients(self):
        rng = random.Random(3)
        g = symmetric_group(3)
        subs = [s for s in all_subgroups(g) if len(s) in (2, 3)]
        for _ in range(6):
            s = rng.choice(subs)
            p = rng.choice([2, 3])
            m = gc.coset_module(g, s, p)
            assert gc.bar_cohomology(g, m, 2, dim_budget=10 ** 6) == \
                gc.cohomology(g, m, 2)

    def test_bar_budget(self):
        g = symmetric_group(4)
        with pytest.raises(gc.BudgetError):
            gc.bar_cohomology(g, gc.trivial_module(g, 2), 3)


class TestShapiro:
    def test_s3_c2_p2(self):
        g = symmetric_group(3)
        c2 = next(s for s in all_subgroups(g) if len(s) == 2)
        rep = gc.shapiro_check(g, c2, 2, 3)
        assert rep["equal"] and rep["lhs"] == (1, 1, 1, 1)

    def test_s3_c3_p3(self):
        g = symmetric_group(3)
        c3 = next(s for s in all_subgroups(g) if len(s) == 3)
        rep = gc.shapiro_check(g, c3, 3, 2)
        assert rep["equal"] and rep["lhs"] == (1, 1, 1)

    def test_whole_group(self):
        g = dihedral_group(4)
        rep = gc.shapiro_check(g, range(8), 2, 3)
        assert rep["equal"] and rep["index"] == 1
        assert rep["lhs"] == gc.cohomology(g, gc.trivial_module(g, 2), 3)

    def test_trivial_subgroup_gives_regular(self):
        g = symmetric_group(3)
        rep = gc.shapiro_check(g, {0}, 2, 3)
        assert rep["equal"] and rep["lhs"] == (1, 0, 0, 0)

    def test_random_pairs(self):
        rng = random.Random(11)
        pool = [dihedral_group(4), catalog.quaternion_group(),
                symmetric_group(4), catalog.by_name("Dic3")]
        for _ in range(8):
            g = rng.choice(pool)
            s = rng.choice(all_subgroups(g))
            assert gc.shapiro_check(g, s, rng.choice([2, 3]), 2)["equal"]


class TestInflation:
    def test_module_pullback(self):
        g8 = cyclic_group(8)
        g4, proj = quotient_group(g8, {0, 4})
        q = GroupHom(g8, g4, proj)
        m = gc.regular_module(g4, 2)
        infl = gc.inflation(q, m)
        assert infl.dim == 4 and infl.group is g8

    def test_requires_surjective(self):
        q = GroupHom(cyclic_group(2), cyclic_group(4), [0, 2])
        with pytest.raises(ValueError):
            gc.inflation(q, gc.trivial_module(cyclic_group(4), 2))

    def test_identity_inflation_full_rank(self):
        g = symmetric_group(3)
        q = GroupHom(g, g, list(range(6)))
        dims = gc.cohomology(g, gc.trivial_module(g, 2), 2)
        assert gc.inflation_ranks(q, 2, 2, dim_budget=10 ** 6) == dims

    def test_cyclic_tower_ranks(self):
        t = gc.cyclic_p_tower(2, 2)
        # H^1 classes survive inflation, H^2 classes die
        assert gc.inflation_ranks(t.transitions[0], 2, 3) == (1, 1, 0, 0)

    def test_onto_trivial(self):
        g = cyclic_group(3)
        q = GroupHom(g, trivial_group(), [0, 0, 0])
        assert gc.inflation_ranks(q, 3, 2, dim_budget=10 ** 5) == (1, 0, 0)


class TestGroupTower:
    def test_validation(self):
        g = cyclic_group(4)
        h = cyclic_group(2)
        q = GroupHom(g, h, [0, 1, 0, 1])
        gc.GroupTower([h, g], [q])
        with pytest.raises(ValueError):
            gc.GroupTower([g, h], [q])
        inj = GroupHom(h, g, [0, 2])
        with pytest.raises(ValueError):
            gc.GroupTower([g, h], [inj])

    def test_cyclic_p_tower_shape(self):
        t = gc.cyclic_p_tower(3, 3)
        assert [g.order for g in t.levels] == [3, 9, 27]
        assert all(q.is_surjective for q in t.transitions)

    def test_continuous_cohomology_zp(self):
        for p in (2, 3):
            t = gc.cyclic_p_tower(p, 3)
            rep = gc.continuous_cohomology(t, p, 2, dim_budget=10 ** 6)
            assert rep["dims"] == [(1, 1, 1)] * 3
            # H^0 and H^1 stabilize (limit Z_p has dims 1,1,0,...);
            # degree 2 classes die along inflation, so it never stabilizes
            assert rep["inflation_ranks"] == [(1, 1, 0)] * 2
            assert rep["stable_degrees"] == [0, 1]
            assert rep["growing_degrees"] == [2]

    def test_constant_tower_stabilizes(self):
        g = symmetric_group(3)
        rep = gc.continuous_cohomology(gc.constant_group_tower(g, 3), 2, 2,
                                       dim_budget=10 ** 5)
        assert rep["stable_degrees"] == [0, 1, 2]

    def test_trivial_tower(self):
        rep = gc.continuous_cohomology(
            gc.constant_group_tower(trivial_group(), 3), 2, 3)
        assert rep["dims"] == [(1, 0, 0, 0)] * 3


class TestRandomizedConsistency:
    def test_resolution_vs_bar_random_coset_modules(self):
        rng = random.Random(23)
        pool = [g for g in catalog.all_groups(8) if g.order <= 8]
        for _ in range(12):
            g = rng.choice(pool)
            s = rng.choice(all_subgroups(g))
            p = rng.choice([2, 3])
            m = gc.coset_module(g, s, p)
            assert gc.cohomology(g, m, 2) == \
                gc.bar_cohomology(g, m, 2, dim_budget=10 ** 6)

    def test_h0_equals_invariants_dimension(self):
        rng = random.Random(5)
        from proflq import linalg
        for _ in range(10):
            g = rng.choice([symmetric_group(3), dihedral_group(4)])
            s = rng.choice(all_subgroups(g))
            p = rng.choice([2, 3])
            m = gc.coset_module(g, s, p)
            stacked = np.vstack([m.matrices[a] - np.eye(m.dim, dtype=np.int64)
                                 for a in range(g.order)])
            inv_dim = m.dim - linalg.rank(stacked, p)
            assert gc.cohomology(g, m, 0) == (inv_dim,)
