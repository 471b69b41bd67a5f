import random

import pytest

from proflq.etale import FiniteEtaleSpace, constant_space, sections, zero_space
from proflq.finring import (
    FiniteModule,
    FiniteRing,
    ModuleMap,
    cyclic,
    image,
    is_isomorphic,
    kernel,
    zero_map,
    zero_module,
)
from proflq.tower import (
    BudgetError,
    IndEtale,
    IndModule,
    ProEtale,
    ProModule,
    SpaceTower,
    TowerMap,
    canonical_components,
    constant_ind_etale,
    constant_pro_etale,
    coproduct_pro,
    decomposition_check,
    dual_tower,
    free_product,
    free_sum,
    levelwise_isomorphic,
    point_tower,
    product_ind,
    relative_product,
    relative_sum,
    restrict_tower,
    stalk_at_thread,
)

from .test_finring import random_module

F2 = FiniteRing(2)
Z4 = FiniteRing(4)


def binary_tower(depth):
    levels = [tuple("b" + format(i, f"0{k}b") if k else "b" for i in range(2 ** k))
              for k in range(depth + 1)]
    transitions = [{p: p[:-1] for p in levels[k + 1]} for k in range(depth)]
    return SpaceTower(levels, transitions)


def chain_tower(sizes, rng=None):
    """A tower with the given level sizes and surjective transitions."""
    levels = [tuple(f"L{k}_{i}" for i in range(n)) for k, n in enumerate(sizes)]
    transitions = []
    for k in range(len(sizes) - 1):
        lo, hi = levels[k], levels[k + 1]
        tr = {}
        for i, p in enumerate(hi):
            if i < len(lo):
                tr[p] = lo[i]
            else:
                tr[p] = (rng or random).choice(lo)
        transitions.append(tr)
    return SpaceTower(levels, transitions)


def random_tower(rng, max_depth=3, max_size=6):
    sizes = [rng.randint(1, max_size)]
    for _ in range(rng.randint(0, max_depth)):
        sizes.append(rng.randint(sizes[-1], max_size + 2))
    return chain_tower(sizes, rng)


def random_tower_map(rng, depth=2, max_top=4):
    """A levelwise tower surjection whose fibers stay fiberwise surjective."""
    t = random_tower(rng, max_depth=depth, max_size=max_top)
    s_levels = []
    s_transitions = []
    pis = []
    # level 0: random partition of T_0
    blocks = {}
    n0 = rng.randint(1, len(t.levels[0]))
    for i, p in enumerate(t.levels[0]):
        blocks[p] = f"S0_{i % n0}"
    s_levels.append(tuple(sorted(set(blocks.values()))))
    pis.append(blocks)
    for k in range(t.depth):
        pi_k = pis[k]
        pi_next = {}
        s_next = []
        tr = {}
        for s in s_levels[k]:
            fiber = [u for u in t.levels[k] if pi_k[u] == s]
            pre = [u for u in t.levels[k + 1] if t.transitions[k][u] in fiber]
            mult = min(
                sum(1 for u in pre if t.transitions[k][u] == f) for f in fiber
            )
            nblocks = rng.randint(1, min(mult, 2))
            names = [f"S{k + 1}_{s}_{b}" for b in range(nblocks)]
            # round-robin the preimages of each fiber point across the blocks
            for f in fiber:
                ups = [u for u in pre if t.transitions[k][u] == f]
                for i, u in enumerate(ups):
                    pi_next[u] = names[i % nblocks]
            for name in names:
                tr[name] = s
                s_next.append(name)
        s_levels.append(tuple(s_next))
        s_transitions.append(tr)
        pis.append(pi_next)
    s = SpaceTower(s_levels, s_transitions)
    return TowerMap(t, s, pis)


class TestSpaceTower:
    def test_threads_of_binary_tower(self):
        t = binary_tower(3)
        threads = t.threads()
        assert len(threads) == 8
        assert all(t.is_thread(th) for th in threads)

    def test_non_surjective_transition_rejected(self):
        with pytest.raises(ValueError):
            SpaceTower([("a", "b"), ("c",)], [{"c": "a"}])

    def test_point_tower(self):
        t = point_tower(3)
        assert t.threads() == [("pt",) * 4]


class TestFreeProduct:
    def test_binary_tower_f2(self):
        a = cyclic(F2, 2)
        fp = free_product(a, binary_tower(3))
        assert [m.order for m in fp.levels] == [2, 4, 16, 256]

    def test_one_point_tower(self):
        a = FiniteModule(Z4, (2, 4))
        fp = free_product(a, point_tower(2))
        assert all(is_isomorphic(m, a) for m in fp.levels)

    def test_zero_module(self):
        fp = free_product(zero_module(F2), binary_tower(2))
        assert all(m.is_zero for m in fp.levels)

    def test_budget(self):
        with pytest.raises(BudgetError):
            free_product(cyclic(F2, 2), binary_tower(5), bit_budget=4)

    def test_transitions_injective(self):
        fp = free_product(cyclic(Z4, 4), binary_tower(2))
        assert all(f.is_injective() for f in fp.transitions)


class TestFreeSum:
    def test_growing_chain(self):
        a = cyclic(Z4, 4)
        fs = free_sum(a, chain_tower([1, 2, 3]))
        assert [m.factors for m in fs.levels] == [(4,), (4, 4), (4, 4, 4)]

    def test_one_point_tower(self):
        a = FiniteModule(Z4, (2, 4))
        fs = free_sum(a, point_tower(3))
        assert all(is_isomorphic(m, a) for m in fs.levels)

    def test_dual_of_free_product_is_free_sum(self):
        rng = random.Random(2)
        for _ in range(10):
            ring = FiniteRing(rng.choice([4, 6, 8]))
            a = random_module(rng, ring, max_rank=2)
            t = random_tower(rng, max_depth=2, max_size=4)
            lhs = dual_tower(free_product(a, t))
            rhs = free_sum(a, t)
            assert levelwise_isomorphic(lhs, rhs)
            assert isinstance(lhs, ProModule)

    def test_transitions_surjective(self):
        fs = free_sum(cyclic(Z4, 4), binary_tower(2))
        assert all(f.is_surjective() for f in fs.transitions)


class TestProductInd:
    def test_constant_equals_free_product(self):
        a = FiniteModule(Z4, (2, 4))
        t = binary_tower(2)
        p = product_ind(constant_ind_etale(a, t))
        fp = free_product(a, t)
        assert levelwise_isomorphic(p, fp)
        for f, g in zip(p.transitions, fp.transitions):
            assert f == g

    def test_single_level(self):
        a = cyclic(Z4, 4)
        t = SpaceTower([("x", "y")], [])
        p = product_ind(constant_ind_etale(a, t))
        assert p.levels[0].order == 16
        assert p.transitions == []

    def test_zero_fibers(self):
        t = binary_tower(1)
        e = IndEtale(
            t,
            [zero_space(lv, F2) for lv in t.levels],
            [{s: zero_map(zero_module(F2), zero_module(F2)) for s in t.levels[1]}],
        )
        p = product_ind(e)
        assert all(m.is_zero for m in p.levels)


class TestCoproductPro:
    def test_constant_equals_free_sum(self):
        a = cyclic(Z4, 2)
        t = binary_tower(2)
        c = coproduct_pro(constant_pro_etale(a, t))
        assert levelwise_isomorphic(c, free_sum(a, t))

    def test_duality_with_product(self):
        rng = random.Random(5)
        for _ in range(10):
            ring = FiniteRing(rng.choice([4, 6, 9]))
            a = random_module(rng, ring, max_rank=2)
            t = random_tower(rng, max_depth=2, max_size=4)
            e = constant_pro_etale(a, t)
            lhs = dual_tower(coproduct_pro(e))
            rhs = product_ind(dual_tower(e))
            assert levelwise_isomorphic(lhs, rhs)
            for f, g in zip(lhs.transitions, rhs.transitions):
                assert f.matrix == g.matrix


class TestDualTower:
    @pytest.mark.parametrize("seed", range(100))
    def test_double_dual_is_identity(self, seed):
        rng = random.Random(seed)
        ring = FiniteRing(rng.choice([4, 6, 8, 9, 12]))
        a = random_module(rng, ring, max_rank=2)
        t = random_tower(rng, max_depth=3, max_size=4)
        for x in (free_product(a, t), free_sum(a, t)):
            dd = dual_tower(dual_tower(x))
            assert type(dd) is type(x)
            assert dd.levels == x.levels
            for f, g in zip(dd.transitions, x.transitions):
                assert f.matrix == g.matrix

    def test_dual_swaps_kinds_and_transition_type(self):
        a = cyclic(Z4, 4)
        t = chain_tower([1, 3])
        fs = free_sum(a, t)
        d = dual_tower(fs)
        assert isinstance(d, IndModule)
        assert all(f.is_injective() for f in d.transitions)

    def test_dual_of_constant_pro_etale(self):
        a = cyclic(Z4, 4)
        t = binary_tower(1)
        d = dual_tower(constant_pro_etale(a, t))
        assert isinstance(d, IndEtale)


class TestRelative:
    def test_identity_map(self):
        a = cyclic(F2, 2)
        t = binary_tower(2)
        pi = TowerMap(t, t, [{p: p for p in lv} for lv in t.levels])
        rel = relative_product(a, pi)
        for k, lv in enumerate(t.levels):
            for s in lv:
                assert is_isomorphic(rel.levels[k].fiber(s), a)

    def test_map_to_point(self):
        a = cyclic(Z4, 2)
        t = binary_tower(2)
        s = point_tower(2)
        pi = TowerMap(t, s, [{p: "pt" for p in lv} for lv in t.levels])
        rel = relative_product(a, pi)
        fp = free_product(a, t)
        for k in range(3):
            assert is_isomorphic(rel.levels[k].fiber("pt"), fp.levels[k])
        rels = relative_sum(a, pi)
        fs = free_sum(a, t)
        for k in range(3):
            assert is_isomorphic(rels.levels[k].fiber("pt"), fs.levels[k])

    def test_stalk_orders_along_thread(self):
        # fiber sizes 1, 2, 2 over the thread -> orders |A|, |A|^2, |A|^2
        a = FiniteModule(Z4, (4,))
        t = SpaceTower(
            [("t0",), ("a", "b"), ("aa", "ab", "ba", "bb")],
            [{"a": "t0", "b": "t0"},
             {"aa": "a", "ab": "a", "ba": "b", "bb": "b"}],
        )
        s = SpaceTower([("s0",), ("s0a",), ("s0aa", "s0ab")],
                       [{"s0a": "s0"}, {"s0aa": "s0a", "s0ab": "s0a"}])
        pi = TowerMap(t, s, [
            {"t0": "s0"},
            {"a": "s0a", "b": "s0a"},
            {"aa": "s0aa", "ba": "s0aa", "ab": "s0ab", "bb": "s0ab"},
        ])
        rel = relative_product(a, pi)
        stalk = stalk_at_thread(rel, ("s0", "s0a", "s0aa"))
        assert [m.order for m in stalk.levels] == [4, 16, 16]
        # matches the free product over the fiber tower
        fp = free_product(a, pi.fiber_tower(("s0", "s0a", "s0aa")))
        assert levelwise_isomorphic(stalk, fp)


class TestDecomposition:
    def test_binary_tower_levelshift(self):
        a = cyclic(F2, 2)
        t = binary_tower(3)
        s = binary_tower(3)
        # quotient by forgetting the last bit at each positive level
        pis = [{p: p if k == 0 else p[:-1] or "b" for p in t.levels[k]}
               for k in range(4)]
        s_levels = [tuple(sorted(set(pi.values()))) for pi in pis]
        s = SpaceTower(
            s_levels,
            [{q: q[:-1] if len(q) > 1 else "b" for q in s_levels[k + 1]}
             for k in range(3)],
        )
        pi = TowerMap(t, s, pis)
        report = decomposition_check(a, pi)
        assert report["ok"]
        assert all(lv["product_iso"] and lv["sum_iso"] for lv in report["levels"])

    def test_identity_map(self):
        a = cyclic(Z4, 4)
        t = chain_tower([2, 3])
        pi = TowerMap(t, t, [{p: p for p in lv} for lv in t.levels])
        assert decomposition_check(a, pi)["ok"]

    def test_map_to_point(self):
        a = cyclic(F2, 2)
        t = binary_tower(2)
        pi = TowerMap(t, point_tower(2), [{p: "pt" for p in lv} for lv in t.levels])
        assert decomposition_check(a, pi)["ok"]

    @pytest.mark.parametrize("seed", range(30))
    def test_random_tower_maps(self, seed):
        rng = random.Random(seed)
        pi = random_tower_map(rng)
        ring = FiniteRing(rng.choice([2, 4, 6]))
        a = random_module(rng, ring, max_rank=1)
        report = decomposition_check(a, pi, bit_budget=64)
        assert report["ok"]


class TestStalks:
    def test_constant_tower(self):
        a = FiniteModule(Z4, (2, 4))
        t = binary_tower(2)
        stalk = stalk_at_thread(constant_ind_etale(a, t), ("b", "b0", "b00"))
        assert all(is_isomorphic(m, a) for m in stalk.levels)

    def test_invalid_thread_rejected(self):
        a = cyclic(F2, 2)
        t = binary_tower(2)
        with pytest.raises(ValueError):
            stalk_at_thread(constant_ind_etale(a, t), ("b", "b1", "b00"))

    def test_zero_fiber_stalk(self):
        t = binary_tower(1)
        e = ProEtale(
            t,
            [zero_space(lv, F2) for lv in t.levels],
            [{s: zero_map(zero_module(F2), zero_module(F2)) for s in t.levels[1]}],
        )
        stalk = stalk_at_thread(e, ("b", "b0"))
        assert all(m.is_zero for m in stalk.levels)


class TestCanonicalComponents:
    def test_two_separated_threads(self):
        a = cyclic(F2, 2)
        t = binary_tower(2)
        p = product_ind(constant_ind_etale(a, t))
        report = canonical_components(p, [("b", "b0", "b00"), ("b", "b1", "b10")])
        assert report["ok"]
        assert all(lv["joint_kernel_trivial"] for lv in report["levels"])
        # at level >= 1 the two threads are distinguished and jointly surjective
        assert report["levels"][1]["joint_surjective"]

    def test_single_thread_point_tower(self):
        a = cyclic(Z4, 4)
        p = product_ind(constant_ind_etale(a, point_tower(0)))
        report = canonical_components(p, [("pt",)])
        assert report["ok"]
        comp = report["components"][("pt",)][0]
        assert comp == a.identity_map()

    def test_density_of_inclusions(self):
        a = cyclic(F2, 2)
        t = binary_tower(2)
        c = coproduct_pro(constant_pro_etale(a, t))
        threads = t.threads()  # transversal covering every level
        report = canonical_components(c, threads)
        assert report["ok"]
        assert all(lv["dense"] for lv in report["levels"])

    def test_duplicate_threads_reported(self):
        a = cyclic(F2, 2)
        p = product_ind(constant_ind_etale(a, point_tower(1)))
        report = canonical_components(p, [("pt", "pt"), ("pt", "pt")])
        assert not report["ok"]
        assert report["indistinguishable_pairs"]


class TestClopenSplitting:
    @pytest.mark.parametrize("seed", range(15))
    def test_product_splits_over_top_partition(self, seed):
        rng = random.Random(seed)
        ring = FiniteRing(rng.choice([2, 4, 6]))
        a = random_module(rng, ring, max_rank=1)
        t = random_tower(rng, max_depth=2, max_size=4)
        full = free_product(a, t, bit_budget=64)
        pts = list(t.levels[0])
        if len(pts) < 2:
            pytest.skip("nothing to split")
        cut = rng.randint(1, len(pts) - 1)
        blocks = [pts[:cut], pts[cut:]]
        orders = []
        for b in blocks:
            sub = restrict_tower(t, b)
            orders.append([m.order for m in free_product(a, sub, bit_budget=64).levels])
        for k in range(len(t.levels)):
            assert full.levels[k].order == orders[0][k] * orders[1][k]


class TestExactness:
    @pytest.mark.parametrize("seed", range(15))
    def test_product_and_sum_preserve_exactness_levelwise(self, seed):
        # 0 -> K -> A -> Q -> 0 of constant towers stays exact at every level
        rng = random.Random(seed)
        ring = FiniteRing(rng.choice([4, 6, 8, 9]))
        a = random_module(rng, ring, max_rank=2)
        b = random_module(rng, ring, max_rank=2)
        from .test_finring import random_map
        from proflq.finring import cokernel

        f = random_map(rng, a, b)
        kmod, incl = kernel(f)
        qmod, proj = cokernel(incl)
        t = random_tower(rng, max_depth=2, max_size=3)
        for builder in (free_product, free_sum):
            tk = builder(kmod, t, bit_budget=64)
            ta = builder(a, t, bit_budget=64)
            tq = builder(qmod, t, bit_budget=64)
            for k in range(len(t.levels)):
                si, sa, sq = tk.section_levels[k], ta.section_levels[k], tq.section_levels[k]
                pts = sa.points
                lift_i = zero_map(si.module, sa.module)
                lift_p = zero_map(sa.module, sq.module)
                for ptt in pts:
                    lift_i = lift_i.add(
                        sa.injections[ptt].compose(incl).compose(si.projections[ptt]))
                    lift_p = lift_p.add(
                        sq.injections[ptt].compose(proj).compose(sa.projections[ptt]))
                assert lift_i.is_injective()
                assert lift_p.is_surjective()
                assert lift_p.compose(lift_i).is_zero
                assert image(lift_i).order == kernel(lift_p)[0].order
