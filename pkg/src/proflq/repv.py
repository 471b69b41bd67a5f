"""Rep(V, G) for elementary abelian V = (Z/p)^r and finite G.

hom(V, G) is the set of r-tuples of pairwise-commuting elements of order
dividing p, enumerated lexicographically; G acts by simultaneous
conjugation and Rep(V, G) is the orbit set.  Each class carries its
canonical representative (lex-smallest tuple), orbit size, image rank,
centralizer and Weyl image: the normalizer of the image acting as
automorphism matrices over F_p in an echelonized basis drawn from the
representative's entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup
from .groupcoh import GroupTower

DEFAULT_HOM_BUDGET = 1 << 20


class BudgetError(Exception):
    pass


@dataclass(frozen=True)
class ElementaryAbelian:
    p: int
    r: int

    def __post_init__(self):
        if self.p < 2 or any(self.p % q == 0 for q in range(2, self.p)):
            raise ValueError("p must be prime")
        if self.r < 0:
            raise ValueError("rank must be non-negative")

    @property
    def order(self):
        return self.p ** self.r


def hom_enumerate(v: ElementaryAbelian, group: FiniteGroup,
                  budget: int = DEFAULT_HOM_BUDGET) -> list[tuple[int, ...]]:
    """All homomorphisms V -> G as r-tuples of images, lex order."""
    if group.order ** v.r > budget:
        raise BudgetError(f"|G|^r = {group.order ** v.r} exceeds budget")
    p = v.p
    torsion = [x for x in group.elements()
               if group.power(x, p) == 0]
    homs = [()]
    for _ in range(v.r):
        homs = [t + (x,) for t in homs for x in torsion
                if all(group.mul(x, y) == group.mul(y, x) for y in t)]
    return sorted(homs)


def image_subgroup(group: FiniteGroup, hom: tuple[int, ...]) -> frozenset[int]:
    return group.closure(hom)


def image_rank(group: FiniteGroup, hom: tuple[int, ...], p: int) -> int:
    order = len(image_subgroup(group, hom))
    r = 0
    while order > 1:
        order //= p
        r += 1
    return r


def echelon_basis(group: FiniteGroup, hom: tuple[int, ...]) -> list[int]:
    """Basis of the image subgroup, greedily drawn from the tuple entries."""
    basis: list[int] = []
    span = frozenset({0})
    for x in hom:
        if x not in span:
            basis.append(x)
            span = group.closure(basis)
    return basis


def _discrete_log_table(group: FiniteGroup, basis: list[int],
                        p: int) -> dict[int, tuple[int, ...]]:
    """element of the image subgroup -> exponent vector in the basis."""
    table = {}
    for exps in itertools.product(range(p), repeat=len(basis)):
        x = 0
        for b, e in zip(basis, exps):
            x = group.mul(x, group.power(b, e))
        table.setdefault(x, exps)
    return table


def weyl_image(group: FiniteGroup, hom: tuple[int, ...], p: int,
               normalizer_source: FiniteGroup | None = None,
               source_map=None) -> list[tuple[tuple[int, ...], ...]]:
    """Image of N_G(rho(V)) -> Aut(rho(V)) as i x i matrices over F_p.

    Matrices act on exponent vectors in the echelonized basis; the list
    is sorted and duplicate-free, so it can be compared as a set.
    Passing `normalizer_source`/`source_map` computes the image of
    eta: N_H(rho(V) cap ...) for a subgroup H mapping into G instead.
    """
    basis = echelon_basis(group, hom)
    i = len(basis)
    if i == 0:
        return [()]
    subgroup = image_subgroup(group, hom)
    logs = _discrete_log_table(group, basis, p)
    if normalizer_source is None:
        candidates = ((group, n) for n in group.normalizer(subgroup))
    else:
        candidates = ((group, source_map[n])
                      for n in normalizer_source.elements()
                      if frozenset(group.conj(source_map[n], x)
                                   for x in subgroup) == subgroup)
    mats = set()
    for _, n in candidates:
        cols = tuple(logs[group.conj(n, b)] for b in basis)
        mats.add(cols)  # column j = image of basis vector j
    return sorted(mats)


@dataclass(frozen=True)
class RepClass:
    representative: tuple[int, ...]
    orbit: tuple[tuple[int, ...], ...]
    image_rank: int
    centralizer: tuple[int, ...]
    weyl: tuple = field(default=(), compare=False)

    @property
    def orbit_size(self):
        return len(self.orbit)


def rep_classes(v: ElementaryAbelian, group: FiniteGroup,
                budget: int = DEFAULT_HOM_BUDGET):
    """(classes, orbit_map): orbits of hom(V,G) under conjugation.

    orbit_map[i] is the class index of the i-th homomorphism in the
    lexicographic enumeration.
    """
    homs = hom_enumerate(v, group, budget)
    pos = {h: i for i, h in enumerate(homs)}
    orbit_map = [-1] * len(homs)
    classes = []
    for i, h in enumerate(homs):
        if orbit_map[i] != -1:
            continue
        orbit = sorted({tuple(group.conj(g, x) for x in h)
                        for g in group.elements()})
        idx = len(classes)
        for t in orbit:
            orbit_map[pos[t]] = idx
        rep = orbit[0]
        cent = tuple(group.centralizer(rep))
        classes.append(RepClass(
            representative=rep,
            orbit=tuple(orbit),
            image_rank=image_rank(group, rep, v.p),
            centralizer=cent,
            weyl=tuple(weyl_image(group, rep, v.p)),
        ))
    return classes, orbit_map


def rank_strata(classes) -> list[list[int]]:
    """Class indices partitioned by image rank (index i = stratum i)."""
    top = max((c.image_rank for c in classes), default=0)
    strata = [[] for _ in range(top + 1)]
    for i, c in enumerate(classes):
        strata[c.image_rank].append(i)
    return strata


def class_of(v: ElementaryAbelian, group: FiniteGroup, hom,
             classes=None, orbit_map=None, budget=DEFAULT_HOM_BUDGET) -> int:
    """Index of the class of a given homomorphism tuple."""
    if classes is None or orbit_map is None:
        classes, orbit_map = rep_classes(v, group, budget)
    homs = hom_enumerate(v, group, budget)
    return orbit_map[homs.index(tuple(hom))]


# ---------------------------------------------------------------------------
# towers


def induced_class_map(v: ElementaryAbelian, transition,
                      upper_classes, lower_classes, lower_orbit_map,
                      lower_homs) -> list[int]:
    """Rep(V, G_{k+1}) -> Rep(V, G_k) on class indices."""
    pos = {h: i for i, h in enumerate(lower_homs)}
    out = []
    for c in upper_classes:
        image = tuple(transition(x) for x in c.representative)
        out.append(lower_orbit_map[pos[image]])
    return out


def rep_tower(v: ElementaryAbelian, tower: GroupTower,
              budget: int = DEFAULT_HOM_BUDGET) -> dict:
    """Levelwise Rep classes, induced maps, and thread analysis.

    A thread is a compatible sequence of class indices; it is determined
    by its deepest class.  The `persistent` flag marks threads whose
    image rank is constant across the last two levels — evidence of a
    genuine limit class, while a rank drop pins the thread as a
    truncation artifact.  No claim is made beyond the supplied depth.
    """
    levels = []
    for g in tower.levels:
        classes, orbit_map = rep_classes(v, g, budget)
        homs = hom_enumerate(v, g, budget)
        levels.append({"classes": classes, "orbit_map": orbit_map,
                       "homs": homs})
    maps = []
    for k, q in enumerate(tower.transitions):
        maps.append(induced_class_map(
            v, q, levels[k + 1]["classes"], levels[k]["classes"],
            levels[k]["orbit_map"], levels[k]["homs"]))
    threads = []
    depth = tower.depth
    for top in range(len(levels[-1]["classes"])):
        seq = [top]
        for k in range(depth - 2, -1, -1):
            seq.append(maps[k][seq[-1]])
        seq.reverse()
        ranks = [levels[k]["classes"][seq[k]].image_rank for k in range(depth)]
        persistent = depth < 2 or ranks[-1] == ranks[-2]
        threads.append({"classes": tuple(seq), "ranks": tuple(ranks),
                        "persistent": persistent})
    return {"levels": [lv["classes"] for lv in levels],
            "class_maps": maps,
            "threads": threads,
            "persistent_threads": [t["classes"] for t in threads
                                   if t["persistent"]]}
