"""Separability checks: how Rep(V, -) and the p-subgroup category see a
homomorphism f: G -> L.

`fv_map` pushes Rep(V, G) into Rep(V, L) and reports injectivity and
surjectivity with witnesses.  `fullness_check` compares the two Weyl
images eta(N_G(rho(V))) and mu(N_L(f rho(V))) after transporting the
basis along f; since conjugation by n and by f(n) give the same matrix,
eta sits inside mu and the question is whether the inclusion is onto.
`sp_functor_check` runs the analogous conditions over all finite
p-subgroups, and the `*_distinguished` helpers scan quotient towers for
the first level separating two conjugacy threads.
"""

from __future__ import annotations

from .groups import FiniteGroup, GroupHom, p_subgroups_up_to_conjugacy
from .groupcoh import GroupTower
from . import repv
from .repv import ElementaryAbelian


def _push_hom(f: GroupHom, hom):
    return tuple(f(x) for x in hom)


def fv_map(v: ElementaryAbelian, f: GroupHom,
           budget: int = repv.DEFAULT_HOM_BUDGET) -> dict:
    """The induced map Rep(V, G) -> Rep(V, L) with verdicts.

    Injectivity failures are witnessed by pairs of source classes that
    collide; surjectivity failures by the unhit target classes.
    """
    src_classes, _ = repv.rep_classes(v, f.source, budget)
    dst_classes, dst_orbit_map = repv.rep_classes(v, f.target, budget)
    dst_homs = repv.hom_enumerate(v, f.target, budget)
    pos = {h: i for i, h in enumerate(dst_homs)}
    mapping = [dst_orbit_map[pos[_push_hom(f, c.representative)]]
               for c in src_classes]
    collisions = {}
    for i, j in enumerate(mapping):
        collisions.setdefault(j, []).append(i)
    collision_witnesses = [tuple(v_) for v_ in collisions.values()
                           if len(v_) > 1]
    missed = sorted(set(range(len(dst_classes))) - set(mapping))
    return {
        "mapping": mapping,
        "injective": not collision_witnesses,
        "surjective": not missed,
        "collisions": collision_witnesses,
        "missed_classes": [dst_classes[i].representative for i in missed],
    }


def fullness_check(v: ElementaryAbelian, f: GroupHom, class_index: int,
                   budget: int = repv.DEFAULT_HOM_BUDGET) -> dict:
    """Compare eta(N_G(rho(V))) with mu(N_L(f rho(V))) for one class.

    Skips (with a note) classes whose representative is not injective,
    or on which f fails to be injective — the orbit formula behind the
    comparison needs a free Aut(V)-action.
    """
    classes, _ = repv.rep_classes(v, f.source, budget)
    c = classes[class_index]
    if c.image_rank != v.r:
        return {"skipped": True,
                "note": "non-injective rho: fullness not asserted",
                "class": c.representative}
    g, l = f.source, f.target
    image = repv.image_subgroup(g, c.representative)
    if len({f(x) for x in image}) != len(image):
        return {"skipped": True,
                "note": "f is not injective on the image of rho",
                "class": c.representative}
    eta = set(repv.weyl_image(g, c.representative, v.p))
    pushed = _push_hom(f, c.representative)
    mu = set(repv.weyl_image(l, pushed, v.p))
    assert eta <= mu, "conjugation by f(n) must reproduce eta"
    witness = None
    if eta != mu:
        missing = sorted(mu - eta)[0]
        basis = repv.echelon_basis(l, pushed)
        target_sub = repv.image_subgroup(l, pushed)
        logs = repv._discrete_log_table(l, basis, v.p)
        for n in l.normalizer(target_sub):
            cols = tuple(logs[l.conj(n, b)] for b in basis)
            if cols == missing:
                witness = {"matrix": missing, "realized_by": n}
                break
    return {
        "skipped": False,
        "class": c.representative,
        "eta_order": len(eta),
        "mu_order": len(mu),
        "injective": True,  # the transported map is a set inclusion
        "surjective": eta == mu,
        "bijective": eta == mu,
        "witness": witness,
    }


def _image_subgroup_set(f: GroupHom, elements) -> frozenset[int]:
    return frozenset(f(x) for x in elements)


def _aut_perms(group: FiniteGroup, sub) -> frozenset:
    """Conjugation automorphisms of a subgroup as index permutations."""
    elems = sorted(sub)
    pos = {x: i for i, x in enumerate(elems)}
    out = set()
    for n in group.normalizer(sub):
        out.add(tuple(pos[group.conj(n, x)] for x in elems))
    return frozenset(out)


def sp_functor_check(f: GroupHom, p: int) -> dict:
    """The Section-5 bullet conditions for f_p: S_p(G) -> S_p(L).

    (a) p-subgroups of G are conjugate iff their images are conjugate;
    (b) the normalizer automorphism images agree after transport
        (fullness at the level of finite p-subgroups);
    (c) every p-subgroup of L is conjugate to an image (density).
    """
    g, l = f.source, f.target
    subs_g = p_subgroups_up_to_conjugacy(g, p)
    subs_l = p_subgroups_up_to_conjugacy(l, p)

    a_failures = []
    for i in range(len(subs_g)):
        for j in range(i + 1, len(subs_g)):
            # representatives of distinct classes are never conjugate
            if l.are_conjugate_subgroups(_image_subgroup_set(f, subs_g[i]),
                                         _image_subgroup_set(f, subs_g[j])):
                a_failures.append((sorted(subs_g[i]), sorted(subs_g[j])))

    b_failures = []
    b_skipped = []
    for s in subs_g:
        image = _image_subgroup_set(f, s)
        if len(image) != len(s):
            b_skipped.append(sorted(s))
            continue
        eta = _aut_perms(g, s)
        # transport: index elements of the image by f of the sorted source
        elems = sorted(s)
        img_order = {f(x): i for i, x in enumerate(elems)}
        pos = {x: i for i, x in enumerate(elems)}
        mu = set()
        for n in l.normalizer(image):
            mu.add(tuple(img_order[l.conj(n, f(x))] for x in elems))
        if eta != frozenset(mu):
            b_failures.append({"subgroup": elems,
                               "eta_order": len(eta), "mu_order": len(mu)})

    hit = [any(l.are_conjugate_subgroups(_image_subgroup_set(f, s), t)
               for s in subs_g) for t in subs_l]
    c_failures = [sorted(subs_l[i]) for i, ok in enumerate(hit) if not ok]

    return {
        "a_conjugacy_reflected": not a_failures,
        "a_witnesses": a_failures,
        "b_full": not b_failures,
        "b_witnesses": b_failures,
        "b_skipped": b_skipped,
        "c_dense": not c_failures,
        "c_witnesses": c_failures,
        "equivalence": not (a_failures or b_failures or c_failures),
    }


def _check_thread(tower: GroupTower, thread) -> list[int]:
    thread = list(thread)
    if len(thread) != tower.depth:
        raise ValueError("thread length must equal tower depth")
    for k, q in enumerate(tower.transitions):
        if q(thread[k + 1]) != thread[k]:
            raise ValueError(f"thread incompatible at transition {k}")
    return thread


def conjugacy_distinguished(x_thread, y_thread, tower: GroupTower) -> dict:
    """Smallest level separating two element threads, or an exhausted report."""
    x = _check_thread(tower, x_thread)
    y = _check_thread(tower, y_thread)
    for k, g in enumerate(tower.levels):
        if not g.are_conjugate(x[k], y[k]):
            return {"separated": True, "level": k,
                    "x": x[k], "y": y[k]}
    return {"separated": False, "levels_checked": tower.depth,
            "note": "all supplied levels conjugate; no claim beyond depth"}


def _check_subgroup_thread(tower: GroupTower, thread) -> list[frozenset[int]]:
    thread = [frozenset(s) for s in thread]
    if len(thread) != tower.depth:
        raise ValueError("thread length must equal tower depth")
    for k, q in enumerate(tower.transitions):
        if frozenset(q(x) for x in thread[k + 1]) != thread[k]:
            raise ValueError(f"subgroup thread incompatible at transition {k}")
    return thread


def subgroup_conjugacy_distinguished(a_thread, b_thread,
                                     tower: GroupTower) -> dict:
    """Subgroup version of `conjugacy_distinguished`."""
    a = _check_subgroup_thread(tower, a_thread)
    b = _check_subgroup_thread(tower, b_thread)
    for k, g in enumerate(tower.levels):
        if not g.are_conjugate_subgroups(a[k], b[k]):
            return {"separated": True, "level": k,
                    "a": sorted(a[k]), "b": sorted(b[k])}
    return {"separated": False, "levels_checked": tower.depth,
            "note": "all supplied levels conjugate; no claim beyond depth"}
