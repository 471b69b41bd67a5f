"""Finite groups as multiplication tables.

Groups are built from permutation generators (BFS closure with a
deterministic element order) or from explicit constructions (cyclic,
dihedral, dicyclic, semidirect and direct products, quotients).  Element
0 is always the identity.  Conjugacy, centralizers, normalizers and
subgroup enumeration are table scans; everything stays at desk scale.
"""

from __future__ import annotations

import itertools

import numpy as np

DEFAULT_ORDER_BOUND = 360


class FiniteGroup:
    def __init__(self, table, name: str | None = None,
                 perm_generators=None, validate: bool = True):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("multiplication table must be square")
        self.table = table
        self.order = n
        self.name = name
        self.perm_generators = perm_generators
        if validate:
            self._validate()
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            b = int(np.nonzero(table[a] == 0)[0][0])
            inv[a] = b
        self.inverse = inv

    def _validate(self):
        t, n = self.table, self.order
        if not ((t >= 0) & (t < n)).all():
            raise ValueError("table entries out of range")
        if not (t[0] == np.arange(n)).all() or not (t[:, 0] == np.arange(n)).all():
            raise ValueError("element 0 must be the identity")
        for a in range(n):
            if 0 not in t[a]:
                raise ValueError(f"element {a} has no inverse")
        if n <= 64:
            # t[t][a,b,c] = t[t[a,b],c] and t[:,t][a,b,c] = t[a,t[b,c]]
            if not (t[t] == t[:, t]).all():
                raise ValueError("table is not associative")
        else:
            rng = np.random.default_rng(0)
            for _ in range(2000):
                a, b, c = rng.integers(0, n, 3)
                if t[t[a, b], c] != t[a, t[b, c]]:
                    raise ValueError("table is not associative")

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, x: int) -> int:
        """g x g^{-1}."""
        return self.mul(self.mul(g, x), self.inv(g))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def elements(self):
        return range(self.order)

    @property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.transpose()).all())

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        out = 0
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def closure(self, elements) -> frozenset[int]:
        seen = set(elements) | {0}
        frontier = list(seen)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(seen):
                    for c in (self.mul(a, b), self.mul(b, a)):
                        if c not in seen:
                            seen.add(c)
                            nxt.append(c)
            frontier = nxt
        return frozenset(seen)

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        seen = [False] * self.order
        classes = []
        for x in range(self.order):
            if seen[x]:
                continue
            orbit = sorted({self.conj(g, x) for g in range(self.order)})
            for y in orbit:
                seen[y] = True
            classes.append(tuple(orbit))
        return classes

    def centralizer(self, subset) -> list[int]:
        subset = list(subset)
        return [g for g in range(self.order)
                if all(self.mul(g, x) == self.mul(x, g) for x in subset)]

    def normalizer(self, subgroup_elements) -> list[int]:
        s = frozenset(subgroup_elements)
        return [g for g in range(self.order)
                if frozenset(self.conj(g, x) for x in s) == s]

    def center(self) -> list[int]:
        return self.centralizer(range(self.order))

    def generators_greedy(self) -> list[int]:
        gens: list[int] = []
        span = frozenset({0})
        for x in sorted(range(self.order),
                        key=lambda a: -self.element_order(a)):
            if x not in span:
                gens.append(x)
                span = self.closure(gens)
                if len(span) == self.order:
                    break
        return gens

    def conjugate_subgroup(self, g: int, elements) -> frozenset[int]:
        return frozenset(self.conj(g, x) for x in elements)

    def are_conjugate_subgroups(self, a, b) -> bool:
        a, b = frozenset(a), frozenset(b)
        if len(a) != len(b):
            return False
        return any(self.conjugate_subgroup(g, a) == b for g in range(self.order))

    def are_conjugate(self, x: int, y: int) -> bool:
        return any(self.conj(g, x) == y for g in range(self.order))

    def __repr__(self):
        return f"FiniteGroup(order={self.order}, name={self.name!r})"


def _perm_compose(p, q):
    """(p . q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(p)))


def group_from_permutations(generators, name=None,
                            order_bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
    """Close a set of permutations (tuples of 0-based images) under product.

    Elements are ordered by BFS over the generators with lexicographic
    tie-break, the identity first, so the numbering is deterministic.
    """
    if not generators:
        return FiniteGroup([[0]], name=name or "1", perm_generators=[])
    degree = len(generators[0])
    gens = []
    for g in generators:
        if sorted(g) != list(range(degree)):
            raise ValueError(f"{g} is not a permutation of 0..{degree - 1}")
        gens.append(tuple(g))
    identity = tuple(range(degree))
    elems = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in sorted(gens):
                q = _perm_compose(p, g)
                if q not in index:
                    if len(elems) >= order_bound:
                        raise ValueError(f"group order exceeds bound {order_bound}")
                    index[q] = len(elems)
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    n = len(elems)
    table = [[index[_perm_compose(elems[a], elems[b])] for b in range(n)]
             for a in range(n)]
    return FiniteGroup(table, name=name, perm_generators=[list(g) for g in gens],
                       validate=False)


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], name="1")


def cyclic_group(n: int) -> FiniteGroup:
    if n == 1:
        return trivial_group()
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, name=f"C{n}", validate=False)


def direct_product(g: FiniteGroup, h: FiniteGroup, name=None) -> FiniteGroup:
    n, m = g.order, h.order
    idx = lambda a, b: a * m + b
    table = [[0] * (n * m) for _ in range(n * m)]
    for a1 in range(n):
        for b1 in range(m):
            for a2 in range(n):
                for b2 in range(m):
                    table[idx(a1, b1)][idx(a2, b2)] = idx(g.mul(a1, a2), h.mul(b1, b2))
    return FiniteGroup(table, name=name or f"{g.name}x{h.name}", validate=False)


def semidirect_cyclic(n: int, k: int, unit: int, name=None) -> FiniteGroup:
    """C_n x| C_k where the generator of C_k acts on C_n by x -> unit * x."""
    if pow(unit, k, n) != 1 % n:
        raise ValueError("unit does not define an action of C_k")
    idx = lambda i, j: j * n + i
    table = [[0] * (n * k) for _ in range(n * k)]
    for i1 in range(n):
        for j1 in range(k):
            for i2 in range(n):
                for j2 in range(k):
                    i = (i1 + pow(unit, j1, n) * i2) % n
                    j = (j1 + j2) % k
                    table[idx(i1, j1)][idx(i2, j2)] = idx(i, j)
    return FiniteGroup(table, name=name, validate=False)


def semidirect_product(n_group: FiniteGroup, h_group: FiniteGroup,
                       action, name=None) -> FiniteGroup:
    """N x| H.  `action[h]` is the permutation of N's elements giving the
    automorphism by which h in H acts; multiplication is
    (n1, h1)(n2, h2) = (n1 * action[h1](n2), h1 h2)."""
    n, k = n_group.order, h_group.order
    action = [list(a) for a in action]
    if len(action) != k:
        raise ValueError("one automorphism per element of H required")
    for h in range(k):
        a = action[h]
        if sorted(a) != list(range(n)) or a[0] != 0:
            raise ValueError(f"action[{h}] is not a permutation fixing 1")
        for x in range(n):
            for y in range(n):
                if a[n_group.mul(x, y)] != n_group.mul(a[x], a[y]):
                    raise ValueError(f"action[{h}] is not an automorphism")
    for h1 in range(k):
        for h2 in range(k):
            composed = [action[h1][action[h2][x]] for x in range(n)]
            if composed != action[h_group.mul(h1, h2)]:
                raise ValueError("action is not a homomorphism H -> Aut(N)")
    idx = lambda x, h: h * n + x
    table = [[0] * (n * k) for _ in range(n * k)]
    for x1 in range(n):
        for h1 in range(k):
            for x2 in range(n):
                for h2 in range(k):
                    x = n_group.mul(x1, action[h1][x2])
                    table[idx(x1, h1)][idx(x2, h2)] = idx(x, h_group.mul(h1, h2))
    return FiniteGroup(table, name=name, validate=False)


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    return semidirect_cyclic(n, 2, n - 1, name=f"D{n}")


def dicyclic_group(n: int) -> FiniteGroup:
    """Dic_n of order 4n: <a, b | a^{2n} = 1, b^2 = a^n, b a b^{-1} = a^{-1}>."""
    m = 2 * n
    idx = lambda i, j: j * m + i
    table = [[0] * (4 * n) for _ in range(4 * n)]
    for i1 in range(m):
        for j1 in range(2):
            for i2 in range(m):
                for j2 in range(2):
                    if j1 == 0:
                        i, j = (i1 + i2) % m, j2
                    elif j2 == 0:
                        i, j = (i1 - i2) % m, 1
                    else:
                        i, j = (i1 - i2 + n) % m, 0
                    table[idx(i1, j1)][idx(i2, j2)] = idx(i, j)
    return FiniteGroup(table, name=f"Dic{n}", validate=False)


def symmetric_group(n: int) -> FiniteGroup:
    if n <= 1:
        return trivial_group()
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return group_from_permutations(gens, name=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    if n <= 2:
        return trivial_group()
    threecycle = tuple([1, 2, 0] + list(range(3, n)))
    gens = [threecycle]
    if n > 3:
        if n % 2:
            gens.append(tuple(list(range(1, n)) + [0]))
        else:
            gens.append(tuple([0] + list(range(2, n)) + [1]))
    return group_from_permutations(gens, name=f"A{n}")


def quotient_group(g: FiniteGroup, normal_elements, name=None):
    """(Q, projection) for a normal subgroup given by its element set."""
    n_set = frozenset(normal_elements)
    if g.closure(n_set) != n_set:
        raise ValueError("subset is not a subgroup")
    for x in n_set:
        for h in range(g.order):
            if g.conj(h, x) not in n_set:
                raise ValueError("subgroup is not normal")
    coset_of = {}
    reps = []
    for a in range(g.order):
        if a in coset_of:
            continue
        coset = frozenset(g.mul(a, x) for x in n_set)
        rep_idx = len(reps)
        reps.append(min(coset))
        for y in coset:
            coset_of[y] = rep_idx
    # reindex so the identity coset is 0
    order = [coset_of[0]] + [i for i in range(len(reps)) if i != coset_of[0]]
    renum = {old: new for new, old in enumerate(order)}
    proj = [renum[coset_of[a]] for a in range(g.order)]
    q = len(reps)
    table = [[0] * q for _ in range(q)]
    rep_for = [0] * q
    for a in range(g.order):
        rep_for[proj[a]] = a
    for i in range(q):
        for j in range(q):
            table[i][j] = proj[g.mul(rep_for[i], rep_for[j])]
    return FiniteGroup(table, name=name, validate=False), proj


def subgroup_group(g: FiniteGroup, elements, name=None):
    """(H, embedding) where embedding[i] is the parent index of element i."""
    elems = frozenset(elements)
    if g.closure(elems) != elems:
        raise ValueError("subset is not closed")
    order = [0] + sorted(x for x in elems if x != 0)
    pos = {x: i for i, x in enumerate(order)}
    table = [[pos[g.mul(a, b)] for b in order] for a in order]
    return FiniteGroup(table, name=name, validate=False), order


def all_subgroups(g: FiniteGroup) -> list[frozenset[int]]:
    """Every subgroup of g, as element sets."""
    subs = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for s in frontier:
            for x in range(1, g.order):
                if x in s:
                    continue
                t = g.closure(s | {x})
                if t not in subs:
                    subs.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


def subgroups_up_to_conjugacy(g: FiniteGroup, subs=None) -> list[frozenset[int]]:
    subs = all_subgroups(g) if subs is None else list(subs)
    reps = []
    seen = set()
    for s in subs:
        if s in seen:
            continue
        orbit = {g.conjugate_subgroup(x, s) for x in range(g.order)}
        seen |= orbit
        reps.append(s)
    return reps


def p_subgroups_up_to_conjugacy(g: FiniteGroup, p: int) -> list[frozenset[int]]:
    subs = [s for s in all_subgroups(g) if _is_p_power(len(s), p)]
    return subgroups_up_to_conjugacy(g, subs)


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


class GroupHom:
    """A homomorphism between table groups, stored as an image list."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images):
        images = list(images)
        if len(images) != source.order:
            raise ValueError("one image per source element required")
        for a in range(source.order):
            for b in range(source.order):
                if images[source.mul(a, b)] != target.mul(images[a], images[b]):
                    raise ValueError("images are not multiplicative")
        self.source = source
        self.target = target
        self.images = images

    def __call__(self, a: int) -> int:
        return self.images[a]

    @property
    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.order

    @property
    def is_injective(self) -> bool:
        return len(set(self.images)) == self.source.order

    def compose(self, other: "GroupHom") -> "GroupHom":
        if other.target is not self.source and other.target.order != self.source.order:
            raise ValueError("homs are not composable")
        return GroupHom(other.source, self.target,
                        [self.images[x] for x in other.images])


def hom_from_generators(source: FiniteGroup, target: FiniteGroup,
                        gen_images: dict[int, int]) -> GroupHom:
    """Extend images of generating elements to the whole group by closure."""
    images = {0: 0}
    images.update(gen_images)
    frontier = list(images)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(images):
                for x, y in ((source.mul(a, b), target.mul(images[a], images[b])),
                             (source.mul(b, a), target.mul(images[b], images[a]))):
                    if x in images:
                        if images[x] != y:
                            raise ValueError("generator images are inconsistent")
                    else:
                        images[x] = y
                        nxt.append(x)
        frontier = nxt
    if len(images) != source.order:
        raise ValueError("generators do not generate the source")
    return GroupHom(source, target, [images[a] for a in range(source.order)])


def identity_hom(g: FiniteGroup) -> GroupHom:
    return GroupHom(g, g, list(range(g.order)))


def trivial_hom(g: FiniteGroup, target: FiniteGroup | None = None) -> GroupHom:
    return GroupHom(g, target or trivial_group(), [0] * g.order)


def _element_invariant(g: FiniteGroup, x: int, class_size: dict[int, int]):
    return (g.element_order(x), class_size[x], len(g.centralizer([x])))


def fingerprint(g: FiniteGroup):
    """A cheap isomorphism invariant used to pre-filter iso testing."""
    class_size = {}
    for cls in g.conjugacy_classes():
        for x in cls:
            class_size[x] = len(cls)
    orders = sorted((g.element_order(x), class_size[x]) for x in range(g.order))
    return (g.order, g.is_abelian, len(g.center()), tuple(orders))


def are_isomorphic(g: FiniteGroup, h: FiniteGroup) -> bool:
    """Backtracking isomorphism search over generator images."""
    if fingerprint(g) != fingerprint(h):
        return False
    gens = g.generators_greedy()
    class_size_g, class_size_h = {}, {}
    for grp, store in ((g, class_size_g), (h, class_size_h)):
        for cls in grp.conjugacy_classes():
            for x in cls:
                store[x] = len(cls)

    def extend(assignment: dict[int, int], frontier):
        """Close a partial map; return the closed map or None on clash."""
        assignment = dict(assignment)
        frontier = list(frontier)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(assignment):
                    for x, y in (
                        (g.mul(a, b), h.mul(assignment[a], assignment[b])),
                        (g.mul(b, a), h.mul(assignment[b], assignment[a])),
                    ):
                        if x in assignment:
                            if assignment[x] != y:
                                return None
                        else:
                            assignment[x] = y
                            nxt.append(x)
            frontier = nxt
        if len(set(assignment.values())) != len(assignment):
            return None
        return assignment

    def search(i, assignment):
        if i == len(gens):
            return len(assignment) == g.order
        target_inv = _element_invariant(g, gens[i], class_size_g)
        for y in range(h.order):
            if _element_invariant(h, y, class_size_h) != target_inv:
                continue
            closed = extend({**assignment, gens[i]: y}, [gens[i]])
            if closed is not None and search(i + 1, closed):
                return True
        return False

    return search(0, {0: 0})
