"""Tests for Rep(V, G) enumeration, strata, Weyl images and rep towers."""

import random

import pytest

from proflq import catalog, groupcoh as gc, repv
from proflq.groups import (
    GroupHom,
    alternating_group,
    cyclic_group,
    dihedral_group,
    direct_product,
    symmetric_group,
    trivial_group,
)
from proflq.repv import (
    ElementaryAbelian,
    echelon_basis,
    hom_enumerate,
    image_rank,
    rank_strata,
    rep_classes,
    rep_tower,
    weyl_image,
)


class TestElementaryAbelian:
    def test_valid(self):
        v = ElementaryAbelian(3, 2)
        assert v.order == 9

    def test_rank_zero(self):
        assert ElementaryAbelian(2, 0).order == 1

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            ElementaryAbelian(4, 1)
        with pytest.raises(ValueError):
            ElementaryAbelian(2, -1)


class TestHomEnumerate:
    def test_s3_rank1(self):
        homs = hom_enumerate(ElementaryAbelian(2, 1), symmetric_group(3))
        assert len(homs) == 4  # trivial + three transpositions

    def test_rank_zero_single(self):
        assert hom_enumerate(ElementaryAbelian(2, 0), symmetric_group(3)) == [()]

    def test_q8_unique_involution(self):
        homs = hom_enumerate(ElementaryAbelian(2, 1), catalog.quaternion_group())
        assert len(homs) == 2

    def test_lexicographic_and_contains_trivial(self):
        homs = hom_enumerate(ElementaryAbelian(2, 2), dihedral_group(4))
        assert homs == sorted(homs)
        assert homs[0] == (0, 0)

    def test_commuting_constraint(self):
        g = symmetric_group(3)
        homs = hom_enumerate(ElementaryAbelian(2, 2), g)
        for h in homs:
            assert g.mul(h[0], h[1]) == g.mul(h[1], h[0])
        # pairs of commuting involutions in S_3 need a common axis
        assert len(homs) == 1 + 3 + 3 + 3  # (e,e), (e,t), (t,e), (t,t)

    def test_abelian_count(self):
        # hom((Z/2)^2, (Z/2)^2) = 16
        k4 = direct_product(cyclic_group(2), cyclic_group(2))
        assert len(hom_enumerate(ElementaryAbelian(2, 2), k4)) == 16

    def test_budget(self):
        with pytest.raises(repv.BudgetError):
            hom_enumerate(ElementaryAbelian(2, 2), symmetric_group(4), budget=10)


class TestRepClasses:
    def test_s3(self):
        classes, orbit_map = rep_classes(ElementaryAbelian(2, 1), symmetric_group(3))
        assert len(classes) == 2
        assert classes[0].representative == (0,)
        assert {c.orbit_size for c in classes} == {1, 3}

    def test_orbit_map_consistent(self):
        v = ElementaryAbelian(2, 1)
        g = dihedral_group(4)
        classes, orbit_map = rep_classes(v, g)
        homs = hom_enumerate(v, g)
        for i, h in enumerate(homs):
            assert h in classes[orbit_map[i]].orbit

    def test_orbit_counting(self):
        for g in catalog.all_groups(12):
            for p, r in ((2, 1), (3, 1), (2, 2)):
                v = ElementaryAbelian(p, r)
                classes, _ = rep_classes(v, g)
                assert sum(c.orbit_size for c in classes) == \
                    len(hom_enumerate(v, g))

    def test_abelian_all_singletons(self):
        v = ElementaryAbelian(2, 1)
        g = cyclic_group(8)
        classes, _ = rep_classes(v, g)
        assert all(c.orbit_size == 1 for c in classes)
        assert len(classes) == 2

    def test_representative_is_lex_smallest(self):
        classes, _ = rep_classes(ElementaryAbelian(2, 1), symmetric_group(4))
        for c in classes:
            assert c.representative == min(c.orbit)

    def test_centralizer_times_orbit(self):
        # stabilizer of the tuple = centralizer of the image (pointwise)
        for g in (symmetric_group(4), dihedral_group(6)):
            classes, _ = rep_classes(ElementaryAbelian(2, 1), g)
            for c in classes:
                assert len(c.centralizer) * c.orbit_size == g.order

    def test_a4_3cycles(self):
        classes, _ = rep_classes(ElementaryAbelian(3, 1), alternating_group(4))
        nontrivial = [c for c in classes if c.image_rank == 1]
        assert len(nontrivial) == 2  # the two A_4-classes of order-3 subgroup gens
        assert all(c.orbit_size == 4 for c in nontrivial)


class TestStrata:
    def test_s3(self):
        classes, _ = rep_classes(ElementaryAbelian(2, 1), symmetric_group(3))
        assert [len(s) for s in rank_strata(classes)] == [1, 1]

    def test_stratum0_singleton(self):
        for g in catalog.all_groups(16):
            for p, r in ((2, 1), (2, 2), (3, 1)):
                classes, _ = rep_classes(ElementaryAbelian(p, r), g)
                strata = rank_strata(classes)
                assert strata[0] == [0]
                assert sum(len(s) for s in strata) == len(classes)

    def test_d4_rank2(self):
        classes, _ = rep_classes(ElementaryAbelian(2, 2), dihedral_group(4))
        strata = rank_strata(classes)
        assert len(strata) == 3
        assert sum(len(s) for s in strata) == len(classes)


class TestWeylImage:
    def test_trivial_hom(self):
        assert weyl_image(symmetric_group(3), (0,), 2) == [()]

    def test_a4_versus_s4(self):
        a4, s4 = alternating_group(4), symmetric_group(4)
        rho_a4 = next(c.representative for c in
                      rep_classes(ElementaryAbelian(3, 1), a4)[0]
                      if c.image_rank == 1)
        rho_s4 = next(c.representative for c in
                      rep_classes(ElementaryAbelian(3, 1), s4)[0]
                      if c.image_rank == 1)
        assert len(weyl_image(a4, rho_a4, 3)) == 1      # trivial
        assert len(weyl_image(s4, rho_s4, 3)) == 2      # full Aut(Z/3)

    def test_weyl_is_group(self):
        import numpy as np
        g = symmetric_group(4)
        classes, _ = rep_classes(ElementaryAbelian(2, 2), g)
        for c in classes:
            if c.image_rank == 0:
                continue
            mats = {tuple(m) for m in c.weyl}
            i = c.image_rank
            # closure under product (columns are images of basis vectors)
            for a in mats:
                for b in mats:
                    am = np.array(a).transpose()
                    bm = np.array(b).transpose()
                    prod = (am @ bm) % 2
                    assert tuple(map(tuple, prod.transpose())) in mats

    def test_orbit_formula_injective(self):
        # |Aut(V) . rho| * |eta(N)| = |Aut(V)| for injective rho
        for g in catalog.all_groups(16):
            for p, r in ((2, 1), (3, 1), (2, 2)):
                v = ElementaryAbelian(p, r)
                classes, orbit_map = rep_classes(v, g)
                homs = hom_enumerate(v, g)
                pos = {h: i for i, h in enumerate(homs)}
                aut = _aut_matrices(p, r)
                for ci, c in enumerate(classes):
                    if c.image_rank != r:
                        continue
                    orbit_classes = set()
                    for m in aut:
                        image = _apply_aut(g, c.representative, m, p)
                        orbit_classes.add(orbit_map[pos[image]])
                    assert len(orbit_classes) * len(c.weyl) == len(aut)


def _aut_matrices(p, r):
    """All invertible r x r matrices over F_p."""
    import itertools

    import numpy as np

    from proflq import linalg
    mats = []
    for entries in itertools.product(range(p), repeat=r * r):
        m = np.array(entries, dtype=np.int64).reshape(r, r)
        if linalg.rank(m, p) == r:
            mats.append(m)
    return mats


def _apply_aut(group, hom, mat, p):
    """Precompose a homomorphism tuple with an automorphism of V."""
    out = []
    for j in range(len(hom)):
        x = 0
        for i in range(len(hom)):
            x = group.mul(x, group.power(hom[i], int(mat[i, j])))
        out.append(x)
    return tuple(out)


class TestRepTower:
    def test_cyclic_2adic(self):
        t = gc.cyclic_p_tower(2, 3)
        rt = rep_tower(ElementaryAbelian(2, 1), t)
        assert [len(l) for l in rt["levels"]] == [2, 2, 2]
        assert rt["persistent_threads"] == [(0, 0, 0)]

    def test_cyclic_3adic(self):
        t = gc.cyclic_p_tower(3, 3)
        rt = rep_tower(ElementaryAbelian(3, 1), t)
        assert [len(l) for l in rt["levels"]] == [3, 3, 3]
        assert rt["persistent_threads"] == [(0, 0, 0)]

    def test_constant_tower(self):
        g = symmetric_group(3)
        t = gc.constant_group_tower(g, 3)
        rt = rep_tower(ElementaryAbelian(2, 1), t)
        assert len(rt["threads"]) == 2
        assert all(th["persistent"] for th in rt["threads"])

    def test_class_maps_compose(self):
        # maps commute with transition composition on a 3-level tower
        t = gc.cyclic_p_tower(2, 3)
        rt = rep_tower(ElementaryAbelian(2, 1), t)
        m10, m21 = rt["class_maps"]
        composed = [m10[m21[i]] for i in range(len(rt["levels"][2]))]
        q = GroupHom(t.levels[2], t.levels[0],
                     [t.transitions[0](t.transitions[1](x))
                      for x in range(t.levels[2].order)])
        direct = repv.induced_class_map(
            ElementaryAbelian(2, 1), q, rt["levels"][2], rt["levels"][0],
            rep_classes(ElementaryAbelian(2, 1), t.levels[0])[1],
            hom_enumerate(ElementaryAbelian(2, 1), t.levels[0]))
        assert composed == direct

    def test_s3_times_c2_tower(self):
        s3 = symmetric_group(3)
        big = direct_product(s3, cyclic_group(2))
        proj = GroupHom(big, s3, [x // 2 for x in range(12)])
        t = gc.GroupTower([s3, big], [proj])
        rt = rep_tower(ElementaryAbelian(2, 1), t)
        # threads are in bijection with top-level classes
        assert len(rt["threads"]) == len(rt["levels"][1])


class TestEchelonBasis:
    def test_basis_size(self):
        g = dihedral_group(4)
        classes, _ = rep_classes(ElementaryAbelian(2, 2), g)
        for c in classes:
            basis = echelon_basis(g, c.representative)
            assert len(basis) == c.image_rank

    def test_redundant_entries_skipped(self):
        g = cyclic_group(2)
        assert echelon_basis(g, (1, 1)) == [1]
        assert image_rank(g, (1, 1), 2) == 1
