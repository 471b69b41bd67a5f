"""The Lannes–Quillen engine.

T_V H^•(G) is computed two independent ways and compared degreewise:

* lhs — cohomology of G with coefficients in the Symonds module, the
  permutation module on hom(V, G) with the conjugation action.  Large
  modules are handled orbitwise: the Symonds module splits G-equivariantly
  into coset modules F_p[G / Stab(rho)], and cohomology is additive, so
  each block is fed to the resolution engine separately (still honest
  G-cohomology of induced modules, never the subgroup shortcut).
* rhs — the centralizer decomposition: one copy of H^•(C_G(rho(V)); F_p)
  per class of Rep(V, G).

Equality of the two is the theorem; a mismatch is by definition an
internal error and raises with a diagnostic dump.
"""

from __future__ import annotations

import numpy as np

from . import groupcoh as gc
from . import repv
from .groups import FiniteGroup, subgroup_group
from .repv import ElementaryAbelian

DEFAULT_DIRECT_DIM = 160  # largest Symonds module fed to cohomology whole


class LqError(AssertionError):
    """A failed lq_check: an implementation bug by definition."""

    def __init__(self, message, dump):
        super().__init__(message)
        self.dump = dump


def symonds_module(v: ElementaryAbelian, group: FiniteGroup, p: int,
                   budget: int = repv.DEFAULT_HOM_BUDGET) -> gc.GModule:
    """F_p-valued functions on hom(V, G) with the conjugation action."""
    if p != v.p:
        raise ValueError("module prime must match V")
    homs = repv.hom_enumerate(v, group, budget)
    pos = {h: i for i, h in enumerate(homs)}
    action = [[pos[tuple(group.conj(g, x) for x in h)] for h in homs]
              for g in group.elements()]
    return gc.permutation_module(group, action, p)


def _subgroup_key(group: FiniteGroup, elements) -> tuple:
    """Canonical key of a subgroup up to conjugacy (for dimension caches)."""
    s = frozenset(elements)
    return (group.table.tobytes(),
            min(tuple(sorted(group.conjugate_subgroup(g, s)))
                for g in group.elements()))


_COSET_DIMS: dict[tuple, tuple] = {}
_SUB_DIMS: dict[tuple, tuple] = {}


def _coset_cohomology(group: FiniteGroup, stab, p: int, k_max: int,
                      dim_budget: int) -> tuple[int, ...]:
    """dims of H^•(G; F_p[G/Stab]) — honest G-cohomology, cached."""
    key = (*_subgroup_key(group, stab), p, k_max)
    if key not in _COSET_DIMS:
        module = gc.coset_module(group, stab, p)
        _COSET_DIMS[key] = gc.cohomology(group, module, k_max, dim_budget)
    return _COSET_DIMS[key]


def _subgroup_cohomology(group: FiniteGroup, elements, p: int, k_max: int,
                         dim_budget: int) -> tuple[int, ...]:
    """dims of H^•(H; F_p) for a subgroup given by its elements, cached."""
    key = (*_subgroup_key(group, elements), p, k_max, "sub")
    if key not in _SUB_DIMS:
        h, _ = subgroup_group(group, elements)
        _SUB_DIMS[key] = gc.cohomology(h, gc.trivial_module(h, p),
                                       k_max, dim_budget)
    return _SUB_DIMS[key]


def _orbit_lhs(v, group, classes, k_max, dim_budget):
    """Per-class dims of H^•(G; F_p[orbit]) via the coset-module blocks."""
    out = []
    for c in classes:
        stab = [g for g in group.elements()
                if all(group.conj(g, x) == x for x in c.representative)]
        assert len(stab) * c.orbit_size == group.order
        out.append(_coset_cohomology(group, stab, v.p, k_max, dim_budget))
    return out


def tv_lhs(v: ElementaryAbelian, group: FiniteGroup, k_max: int,
           dim_budget: int = gc.DEFAULT_DIM_BUDGET,
           direct_dim: int = DEFAULT_DIRECT_DIM) -> tuple[int, ...]:
    """dims of H^•(G; C(hom(V,G), F_p)), k <= k_max."""
    homs = repv.hom_enumerate(v, group)
    if len(homs) <= direct_dim:
        return gc.cohomology(group, symonds_module(v, group, v.p),
                             k_max, dim_budget)
    classes, _ = repv.rep_classes(v, group)
    blocks = _orbit_lhs(v, group, classes, k_max, dim_budget)
    return tuple(sum(b[k] for b in blocks) for k in range(k_max + 1))


def tv_rhs(v: ElementaryAbelian, group: FiniteGroup, k_max: int,
           dim_budget: int = gc.DEFAULT_DIM_BUDGET):
    """(per-class dims of H^•(C_G(rho(V))), coordinatewise total)."""
    classes, _ = repv.rep_classes(v, group)
    fibers = [_subgroup_cohomology(group, c.centralizer, v.p, k_max,
                                   dim_budget) for c in classes]
    total = tuple(sum(f[k] for f in fibers) for k in range(k_max + 1))
    return fibers, total


def lq_check(v: ElementaryAbelian, group: FiniteGroup, k_max: int,
             dim_budget: int = gc.DEFAULT_DIM_BUDGET,
             direct_dim: int = DEFAULT_DIRECT_DIM) -> dict:
    """Verify tv_lhs == tv_rhs degreewise; raise LqError on mismatch."""
    classes, _ = repv.rep_classes(v, group)
    lhs = tv_lhs(v, group, k_max, dim_budget, direct_dim)
    fibers, total = tv_rhs(v, group, k_max, dim_budget)
    verdict = [lhs[k] == total[k] for k in range(k_max + 1)]
    report = {
        "group": group.name or f"order{group.order}",
        "p": v.p, "r": v.r, "k_max": k_max,
        "lhs": lhs, "rhs": fibers, "rhs_total": total,
        "classes": [c.representative for c in classes],
        "verdict": verdict,
    }
    if not all(verdict):
        dump = {
            "report": report,
            "orbit_lhs": _orbit_lhs(v, group, classes, k_max, dim_budget),
            "centralizers": [c.centralizer for c in classes],
        }
        raise LqError(f"lq mismatch for {report['group']}, p={v.p}, "
                      f"r={v.r}: lhs={lhs}, rhs={total}", dump)
    return report


def degree0(v: ElementaryAbelian, group: FiniteGroup,
            dim_budget: int = gc.DEFAULT_DIM_BUDGET) -> int:
    """dim T_V H^0(G) = dim of invariants of the Symonds module."""
    module = symonds_module(v, group, v.p)
    return gc.cohomology(group, module, 0, dim_budget)[0]


def strata_split(v: ElementaryAbelian, group: FiniteGroup, k_max: int,
                 dim_budget: int = gc.DEFAULT_DIM_BUDGET) -> dict:
    """Split the Symonds module along rank strata and reconcile the dims.

    Stratum 0 is the fixed point of the trivial homomorphism; its block
    must contribute exactly the dims of H^•(G; F_p), and all strata
    together must add up to tv_lhs.
    """
    classes, _ = repv.rep_classes(v, group)
    strata = repv.rank_strata(classes)
    per_class = _orbit_lhs(v, group, classes, k_max, dim_budget)
    stratum_dims = [tuple(sum(per_class[i][k] for i in stratum)
                          for k in range(k_max + 1))
                    for stratum in strata]
    trivial = gc.cohomology(group, gc.trivial_module(group, v.p),
                            k_max, dim_budget)
    lhs = tv_lhs(v, group, k_max, dim_budget)
    totals = tuple(sum(s[k] for s in stratum_dims)
                   for k in range(k_max + 1))
    return {
        "strata_sizes": [len(s) for s in strata],
        "stratum_dims": stratum_dims,
        "stratum0_is_group_cohomology": stratum_dims[0] == trivial,
        "totals_match_lhs": totals == lhs,
        "lhs": lhs,
    }


def profinite_lq(v: ElementaryAbelian, tower: gc.GroupTower, k_max: int,
                 dim_budget: int = gc.DEFAULT_DIM_BUDGET) -> dict:
    """Levelwise lq_check over a group tower plus the Rep-thread report.

    The per-level fibers (class -> centralizer cohomology dims) assemble
    the CohomologyEtale over the Rep tower; stabilization is read off
    the thread flags, with no claim beyond the supplied depth.
    """
    reports = [lq_check(v, g, k_max, dim_budget) for g in tower.levels]
    rt = repv.rep_tower(v, tower)
    fibers = [list(zip([c.representative for c in rt["levels"][k]],
                       reports[k]["rhs"])) for k in range(tower.depth)]
    return {
        "levels": reports,
        "rep_tower": rt,
        "fibers": fibers,
        "persistent_threads": rt["persistent_threads"],
        "nontrivial_limit_classes": [
            t["classes"] for t in rt["threads"]
            if t["persistent"] and t["ranks"][-1] > 0],
    }
