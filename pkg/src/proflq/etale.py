"""Finite-level etale spaces: a finite base set with one finite module
per point.

Sections over subsets, stalkwise Hom/tensor/duality, pushforward and
pullback along maps of finite bases, skyscraper families and the finite
case of the product/coproduct functors.  Over a finite base the product
and the coproduct both coincide with the module of global sections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .finring import (
    FiniteModule,
    FiniteRing,
    ModuleMap,
    direct_sum,
    dual_map,
    hom_module,
    pontryagin_dual,
    tensor_module,
    zero_module,
)


class FiniteEtaleSpace:
    """A finite base (ordered point ids) with a module fiber per point."""

    def __init__(self, base, fibers: dict):
        base = tuple(base)
        if len(set(base)) != len(base):
            raise ValueError("duplicate point ids in base")
        if set(fibers) != set(base):
            raise ValueError("fibers must be given at exactly the base points")
        rings = {m.ring for m in fibers.values()}
        if len(rings) > 1:
            raise ValueError("all fibers must share one ring")
        self.base = base
        self.fibers = dict(fibers)
        self.ring = rings.pop() if rings else None

    def fiber(self, t) -> FiniteModule:
        return self.fibers[t]

    def __eq__(self, other):
        return (
            isinstance(other, FiniteEtaleSpace)
            and self.base == other.base
            and self.fibers == other.fibers
        )

    def __repr__(self):
        return f"FiniteEtaleSpace({self.base}, {self.fibers})"


def constant_space(base, module: FiniteModule) -> FiniteEtaleSpace:
    return FiniteEtaleSpace(base, {t: module for t in base})


def zero_space(base, ring: FiniteRing) -> FiniteEtaleSpace:
    return FiniteEtaleSpace(base, {t: zero_module(ring) for t in base})


class EtaleMorphism:
    """A base map with a compatible module map on every source fiber."""

    def __init__(self, source: FiniteEtaleSpace, target: FiniteEtaleSpace,
                 base_map: dict, fiber_maps: dict):
        if set(base_map) != set(source.base):
            raise ValueError("base_map must cover the source base")
        for t, s in base_map.items():
            if s not in target.fibers:
                raise ValueError(f"base_map sends {t} outside the target base")
        if set(fiber_maps) != set(source.base):
            raise ValueError("one fiber map per source point required")
        for t, f in fiber_maps.items():
            if f.source != source.fiber(t) or f.target != target.fiber(base_map[t]):
                raise ValueError(f"fiber map at {t} has wrong endpoints")
        self.source = source
        self.target = target
        self.base_map = dict(base_map)
        self.fiber_maps = dict(fiber_maps)

    def compose(self, other: "EtaleMorphism") -> "EtaleMorphism":
        """self after other; base-map compatibility is checked eagerly."""
        if other.target != self.source:
            raise ValueError("morphisms are not composable")
        base_map = {t: self.base_map[other.base_map[t]] for t in other.source.base}
        fiber_maps = {
            t: self.fiber_maps[other.base_map[t]].compose(other.fiber_maps[t])
            for t in other.source.base
        }
        return EtaleMorphism(other.source, self.target, base_map, fiber_maps)


def identity_morphism(e: FiniteEtaleSpace) -> EtaleMorphism:
    return EtaleMorphism(e, e, {t: t for t in e.base},
                         {t: e.fiber(t).identity_map() for t in e.base})


@dataclass
class SectionModule:
    """Sections over a subset, with the canonical per-point maps.

    projections[t] is the evaluation map at t ("omicron"), injections[t]
    the inclusion of the fiber at t ("omega").
    """

    module: FiniteModule
    points: tuple
    injections: dict = field(default_factory=dict)
    projections: dict = field(default_factory=dict)


def sections(e: FiniteEtaleSpace, subset=None) -> SectionModule:
    """The module of sections of e over `subset` (default: the whole base)."""
    pts = tuple(e.base) if subset is None else tuple(
        t for t in e.base if t in set(subset))
    if subset is not None:
        unknown = set(subset) - set(e.base)
        if unknown:
            raise ValueError(f"unknown point ids: {sorted(unknown)}")
    if not pts:
        return SectionModule(zero_module(e.ring), ())
    total, injs, projs = direct_sum([e.fiber(t) for t in pts])
    return SectionModule(
        total, pts,
        injections={t: injs[i] for i, t in enumerate(pts)},
        projections={t: projs[i] for i, t in enumerate(pts)},
    )


def product_finite(e: FiniteEtaleSpace) -> SectionModule:
    """The product over a finite base: the module of global sections."""
    return sections(e)


def coproduct_finite(e: FiniteEtaleSpace) -> SectionModule:
    """Over a finite base the coproduct equals the product."""
    return sections(e)


def _fiberwise(e, f, op, name):
    if e.base != f.base:
        raise ValueError(f"base mismatch in {name}")
    if e.ring != f.ring:
        raise ValueError(f"ring mismatch in {name}")
    return FiniteEtaleSpace(e.base, {t: op(e.fiber(t), f.fiber(t)) for t in e.base})


def hom_etale(e: FiniteEtaleSpace, f: FiniteEtaleSpace) -> FiniteEtaleSpace:
    return _fiberwise(e, f, hom_module, "hom_etale")


def tensor_etale(e: FiniteEtaleSpace, f: FiniteEtaleSpace) -> FiniteEtaleSpace:
    return _fiberwise(e, f, tensor_module, "tensor_etale")


def dual_etale(e: FiniteEtaleSpace) -> FiniteEtaleSpace:
    return FiniteEtaleSpace(e.base, {t: pontryagin_dual(e.fiber(t)) for t in e.base})


def dual_morphism(phi: EtaleMorphism) -> EtaleMorphism:
    """Fiberwise Pontryagin dual of a morphism over the identity base map."""
    if any(phi.base_map[t] != t for t in phi.source.base):
        raise ValueError("dual_morphism requires an identity base map")
    return EtaleMorphism(
        dual_etale(phi.target), dual_etale(phi.source),
        {t: t for t in phi.source.base},
        {t: dual_map(phi.fiber_maps[t]) for t in phi.source.base},
    )


def pushforward(e: FiniteEtaleSpace, psi: dict, target_base) -> FiniteEtaleSpace:
    """Push e over T forward along a surjection psi: T -> S.

    The fiber at s is the module of sections of e over psi^{-1}(s).
    """
    target_base = tuple(target_base)
    if set(psi) != set(e.base):
        raise ValueError("psi must be defined on the whole base")
    if set(psi.values()) != set(target_base):
        raise ValueError("psi must be surjective onto the target base")
    fibers = {}
    for s in target_base:
        pre = [t for t in e.base if psi[t] == s]
        fibers[s] = sections(e, pre).module
    return FiniteEtaleSpace(target_base, fibers)


def pullback(e: FiniteEtaleSpace, psi: dict, source_base) -> FiniteEtaleSpace:
    """Pull e over S back along psi: T -> S; the fiber at t is e_{psi(t)}."""
    source_base = tuple(source_base)
    if set(psi) != set(source_base):
        raise ValueError("psi must be defined on the whole source base")
    for t, s in psi.items():
        if s not in e.fibers:
            raise ValueError(f"psi sends {t} outside the base of e")
    return FiniteEtaleSpace(source_base, {t: e.fiber(psi[t]) for t in source_base})


class SkyscraperFamily:
    """Modules supported on a subset of the base.

    Kept distinct from etale spaces with zero fibers: over profinite bases
    skyscrapers fall outside the Hausdorff category, and only their
    products are used here.
    """

    def __init__(self, base, support, modules: dict, ring: FiniteRing | None = None):
        base = tuple(base)
        if not set(support) <= set(base):
            raise ValueError("support must be a subset of the base")
        support = tuple(s for s in base if s in set(support))
        if set(modules) != set(support):
            raise ValueError("one module per support point required")
        if ring is None:
            if not modules:
                raise ValueError("an empty family must name its ring")
            ring = next(iter(modules.values())).ring
        self.base = base
        self.support = support
        self.modules = dict(modules)
        self.ring = ring


def skyscraper_product(k: SkyscraperFamily) -> FiniteModule:
    """Product over the base of a skyscraper family: only the support counts."""
    mods = [k.modules[s] for s in k.support]
    if not mods:
        return zero_module(k.ring)
    return direct_sum(mods)[0]


def _annihilated_elements(module: FiniteModule, order: int):
    """Elements z of `module` with order * z = 0."""
    from math import gcd

    ranges = []
    for b in module.factors:
        g = gcd(order, b)
        step = b // g
        ranges.append([t * step for t in range(g)])
    return itertools.product(*ranges)


def _raw_tensor_orders(m: FiniteModule, n: FiniteModule):
    from math import gcd

    return [(j, i, gcd(a, b)) for j, a in enumerate(m.factors)
            for i, b in enumerate(n.factors)]


def adjunction_check(f: FiniteEtaleSpace, g: FiniteEtaleSpace,
                     l: FiniteEtaleSpace, max_side: int = 4096) -> dict:
    """Verify hom(F (x) G, L) = hom(G, Hom(F, L)) by explicit enumeration.

    Works fiberwise: both hom sets decompose over the base, and the
    currying bijection phi |-> (y |-> (x |-> phi(x (x) y))) is checked to
    be an additive bijection at every point.
    """
    if not (f.base == g.base == l.base):
        raise ValueError("common base required")
    report = {"fibers": {}, "ok": True}
    for t in f.base:
        ft, gt, lt = f.fiber(t), g.fiber(t), l.fiber(t)
        gens = _raw_tensor_orders(ft, gt)
        lhs_count = 1
        choices = []
        for _, _, order in gens:
            imgs = list(_annihilated_elements(lt, order))
            choices.append(imgs)
            lhs_count *= len(imgs)
        homfl = hom_module(ft, lt)
        rhs_count = hom_module(gt, homfl).order
        if lhs_count > max_side or rhs_count > max_side:
            raise ValueError(f"adjunction fiber at {t} exceeds size bound")

        gt_elts = list(gt.elements())
        ft_elts = list(ft.elements())

        def curried(images):
            table = []
            for y in gt_elts:
                row = []
                for x in ft_elts:
                    val = lt.zero_element()
                    for (jj, ii, order), img in zip(gens, images):
                        c = (x[jj] * y[ii]) % order
                        val = lt.add(val, lt.smul(c, img))
                    row.append(val)
                table.append(tuple(row))
            return tuple(table)

        seen = {}
        all_images = list(itertools.product(*choices))
        for images in all_images:
            tab = curried(images)
            if tab in seen:
                report["ok"] = False
                report["fibers"][t] = {"verdict": "collision"}
                break
            seen[images] = tab
        else:
            additive = True
            if len(all_images) >= 2:
                a, b = all_images[0], all_images[-1]
                s = tuple(lt.add(x, y) for x, y in zip(a, b))
                tab_s = curried(s)
                tab_ab = tuple(
                    tuple(lt.add(x, y) for x, y in zip(r1, r2))
                    for r1, r2 in zip(seen[a], curried(b))
                )
                additive = tab_s == tab_ab
            fiber_ok = len(seen) == lhs_count == rhs_count and additive
            report["fibers"][t] = {
                "lhs": lhs_count,
                "rhs": rhs_count,
                "bijective": len(seen) == rhs_count,
                "additive": additive,
                "verdict": "iso" if fiber_ok else "mismatch",
            }
            if not fiber_ok:
                report["ok"] = False
    return report
