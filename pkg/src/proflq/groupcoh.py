"""Mod-p cohomology of finite groups.

H^k(G; M) is computed from a free F_pG-resolution of the trivial module,
built once per (group, prime) and cached; applying Hom_G(-, M) turns the
differentials into small block matrices over F_p, so many coefficient
modules reuse one resolution.  An inhomogeneous bar-cochain complex is
kept alongside as an independent oracle and as the carrier for explicit
inflation maps, which is what the tower reports need.

Conventions: C(X, F_p) and F_p[X] are identified through the
indicator-function basis, so a permutation module is its own function
space and no transposes appear downstream.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from . import linalg
from .groups import FiniteGroup, GroupHom

DEFAULT_DIM_BUDGET = 5000


class BudgetError(Exception):
    pass


class GModule:
    """An F_p[G]-module: one invertible d x d matrix over F_p per element."""

    def __init__(self, group: FiniteGroup, p: int, matrices, validate: bool = True):
        matrices = np.asarray(matrices, dtype=np.int64) % p
        n = group.order
        if matrices.shape[0] != n or matrices.ndim != 3 \
                or matrices.shape[1] != matrices.shape[2]:
            raise ValueError("need one square matrix per group element")
        self.group = group
        self.p = p
        self.dim = matrices.shape[1]
        self.matrices = matrices
        if validate:
            self._validate()

    def _validate(self):
        n, d, p = self.group.order, self.dim, self.p
        if d and not (self.matrices[0] == np.eye(d, dtype=np.int64)).all():
            raise ValueError("identity must act as the identity matrix")
        pairs = itertools.product(range(n), range(n)) if n <= 12 else \
            zip(np.random.default_rng(0).integers(0, n, 60),
                np.random.default_rng(1).integers(0, n, 60))
        for a, b in pairs:
            lhs = self.matrices[self.group.mul(a, b)]
            rhs = self.matrices[a] @ self.matrices[b] % p
            if not (lhs == rhs).all():
                raise ValueError("action is not a homomorphism")
        for g in range(n):
            if d and linalg.rank(self.matrices[g], p) != d:
                raise ValueError(f"element {g} does not act invertibly")

    def act(self, g: int, vec):
        return self.matrices[g] @ np.asarray(vec, dtype=np.int64) % self.p

    def __repr__(self):
        return f"GModule(p={self.p}, dim={self.dim}, |G|={self.group.order})"


def trivial_module(group: FiniteGroup, p: int, dim: int = 1) -> GModule:
    eye = np.broadcast_to(np.eye(dim, dtype=np.int64),
                          (group.order, dim, dim)).copy()
    return GModule(group, p, eye, validate=False)


def permutation_module(group: FiniteGroup, action, p: int) -> GModule:
    """F_p[X] for a G-set X given as action[g][x] = g . x."""
    action = [list(row) for row in action]
    n = group.order
    if len(action) != n:
        raise ValueError("one permutation per group element required")
    m = len(action[0])
    for g, row in enumerate(action):
        if sorted(row) != list(range(m)):
            raise ValueError(f"action of element {g} is not a permutation of X")
    if action[0] != list(range(m)):
        raise ValueError("identity must act trivially")
    for a in range(n):
        for b in range(n):
            ab = group.mul(a, b)
            if any(action[a][action[b][x]] != action[ab][x] for x in range(m)):
                raise ValueError("action is not associative")
    mats = np.zeros((n, m, m), dtype=np.int64)
    for g in range(n):
        for x in range(m):
            mats[g, action[g][x], x] = 1
    return GModule(group, p, mats, validate=False)


def regular_module(group: FiniteGroup, p: int) -> GModule:
    action = [[group.mul(g, x) for x in range(group.order)]
              for g in range(group.order)]
    return permutation_module(group, action, p)


def coset_module(group: FiniteGroup, subgroup_elements, p: int) -> GModule:
    """F_p[G/H]: the induced module on left cosets of H."""
    h = frozenset(subgroup_elements)
    cosets = []
    coset_of = {}
    for a in range(group.order):
        if a in coset_of:
            continue
        c = frozenset(group.mul(a, x) for x in h)
        for y in c:
            coset_of[y] = len(cosets)
        cosets.append(min(c))
    action = [[coset_of[group.mul(g, rep)] for rep in cosets]
              for g in range(group.order)]
    return permutation_module(group, action, p)


def direct_sum_module(a: GModule, b: GModule) -> GModule:
    if a.group is not b.group or a.p != b.p:
        raise ValueError("summands must share group and prime")
    n, da, db = a.group.order, a.dim, b.dim
    mats = np.zeros((n, da + db, da + db), dtype=np.int64)
    mats[:, :da, :da] = a.matrices
    mats[:, da:, da:] = b.matrices
    return GModule(a.group, a.p, mats, validate=False)


# ---------------------------------------------------------------------------
# free resolutions


class FreeResolution:
    """... -> F_2 -> F_1 -> F_0 -> F_p -> 0 with F_i = (F_pG)^{betti[i]}.

    differentials[i] is the F_p matrix of d_i: F_i -> F_{i-1} in the
    basis {g . e_j}; column (j, g) holds g . d_i(e_j).
    """

    def __init__(self, group: FiniteGroup, p: int):
        self.group = group
        self.p = p
        self.betti = [1]
        self.differentials: list[np.ndarray] = []
        n = group.order
        # cache left-translation permutations: left[g][h] = g h
        self._left = np.array([[group.mul(g, h) for h in range(n)]
                               for g in range(n)])

    def _translate(self, g: int, vec, blocks: int):
        """Act by g on F_p^{blocks * n}, blockwise left translation."""
        n = self.group.order
        out = np.zeros_like(vec)
        v = vec.reshape(blocks, n)
        out.reshape(blocks, n)[:, self._left[g]] = v
        return out

    def extend_to(self, length: int):
        """Ensure differentials d_1 .. d_length exist."""
        while len(self.differentials) < length:
            self._extend_once()

    def _extend_once(self):
        n, p = self.group.order, self.p
        i = len(self.differentials)
        if i == 0:
            # kernel of the augmentation (F_pG)^1 -> F_p
            prev = np.ones((1, n), dtype=np.int64)
        else:
            prev = self.differentials[-1]
        kernel = linalg.nullspace(prev, p).transpose()  # rows span ker d_i
        blocks = self.betti[i]
        gens = []
        span = np.zeros((0, blocks * n), dtype=np.int64)
        pivots: list[int] = []
        for v in kernel:
            if not v.any() or linalg.in_row_space(v, span, pivots, p):
                continue
            gens.append(v)
            translates = np.stack([self._translate(g, v, blocks)
                                   for g in range(n)])
            span, pivots = linalg.rref(np.vstack([span, translates]), p)
            span = span[:len(pivots)]
            if span.shape[0] == kernel.shape[0]:
                break
        b_new = len(gens)
        d = np.zeros((blocks * n, b_new * n), dtype=np.int64)
        for j, v in enumerate(gens):
            for g in range(n):
                d[:, j * n + g] = self._translate(g, v, blocks)
        self.betti.append(b_new)
        self.differentials.append(d)


_RESOLUTIONS: dict[tuple, FreeResolution] = {}


def free_resolution(group: FiniteGroup, p: int, length: int) -> FreeResolution:
    key = (group.table.tobytes(), p)
    res = _RESOLUTIONS.get(key)
    if res is None:
        res = _RESOLUTIONS[key] = FreeResolution(group, p)
    res.extend_to(length)
    return res


def _hom_coboundary(res: FreeResolution, module: GModule, i: int) -> np.ndarray:
    """Matrix of Hom_G(F_i, M) -> Hom_G(F_{i+1}, M) on stacked coordinates."""
    n, p, d = res.group.order, res.p, module.dim
    b_src, b_dst = res.betti[i], res.betti[i + 1]
    diff = res.differentials[i]  # (b_src * n) x (b_dst * n)
    out = np.zeros((b_dst * d, b_src * d), dtype=np.int64)
    for k in range(b_dst):
        col = diff[:, k * n].reshape(b_src, n)  # d_{i+1}(e_k)
        for j in range(b_src):
            block = np.zeros((d, d), dtype=np.int64)
            for g in range(n):
                c = int(col[j, g])
                if c:
                    block += c * module.matrices[g]
            out[k * d:(k + 1) * d, j * d:(j + 1) * d] = block % p
    return out


def cohomology(group: FiniteGroup, module: GModule, k_max: int,
               dim_budget: int = DEFAULT_DIM_BUDGET) -> tuple[int, ...]:
    """Graded dimensions (dim H^0, ..., dim H^{k_max})."""
    if module.group is not group and \
            not (module.group.table == group.table).all():
        raise ValueError("module is not over the given group")
    p = module.p
    if module.dim == 0:
        return (0,) * (k_max + 1)
    res = free_resolution(group, p, k_max + 1)
    for b in res.betti[:k_max + 2]:
        if b * module.dim > dim_budget:
            raise BudgetError(f"cochain dimension {b * module.dim} "
                              f"exceeds budget {dim_budget}")
    dims = []
    prev_rank = 0
    for k in range(k_max + 1):
        delta = _hom_coboundary(res, module, k)
        r = linalg.rank(delta, p)
        dims.append(res.betti[k] * module.dim - r - prev_rank)
        prev_rank = r
    return tuple(dims)


# ---------------------------------------------------------------------------
# bar cochains (independent oracle + explicit inflation maps)


def _bar_coboundary(group: FiniteGroup, module: GModule, k: int) -> np.ndarray:
    """delta: C^k(G; M) -> C^{k+1}(G; M), inhomogeneous cochains."""
    n, p, d = group.order, module.p, module.dim
    tuples_k = list(itertools.product(range(n), repeat=k))
    tuples_k1 = list(itertools.product(range(n), repeat=k + 1))
    pos = {t: i for i, t in enumerate(tuples_k)}
    out = np.zeros((len(tuples_k1) * d, len(tuples_k) * d), dtype=np.int64)
    for i, t in enumerate(tuples_k1):
        rows = slice(i * d, (i + 1) * d)
        j = pos[t[1:]]
        out[rows, j * d:(j + 1) * d] += module.matrices[t[0]]
        sign = -1
        for m in range(k):
            merged = t[:m] + (group.mul(t[m], t[m + 1]),) + t[m + 2:]
            j = pos[merged]
            out[rows, j * d:(j + 1) * d] += sign * np.eye(d, dtype=np.int64)
            sign = -sign
        j = pos[t[:-1]]
        out[rows, j * d:(j + 1) * d] += sign * np.eye(d, dtype=np.int64)
    return out % p


def bar_cohomology(group: FiniteGroup, module: GModule, k_max: int,
                   dim_budget: int = DEFAULT_DIM_BUDGET) -> tuple[int, ...]:
    """The same dimensions as `cohomology`, by brute-force bar cochains."""
    n, d = group.order, module.dim
    if n ** (k_max + 1) * max(d, 1) > dim_budget:
        raise BudgetError("bar cochain spaces exceed budget")
    if d == 0:
        return (0,) * (k_max + 1)
    dims = []
    prev_rank = 0
    for k in range(k_max + 1):
        delta = _bar_coboundary(group, module, k)
        r = linalg.rank(delta, module.p)
        dims.append(n ** k * d - r - prev_rank)
        prev_rank = r
    return tuple(dims)


def inflation(q: GroupHom, module: GModule) -> GModule:
    """Pull a module over G back to G' along a surjection q: G' -> G."""
    if not q.is_surjective:
        raise ValueError("inflation requires a surjective homomorphism")
    mats = module.matrices[[q(g) for g in range(q.source.order)]]
    return GModule(q.source, module.p, mats, validate=False)


def _bar_pullback(q: GroupHom, k: int, dim: int) -> np.ndarray:
    """Matrix of q^#: C^k(G; F_p^dim) -> C^k(G'; F_p^dim), trivial action."""
    n_src, n_dst = q.target.order, q.source.order
    tuples_src = list(itertools.product(range(n_src), repeat=k))
    pos = {t: i for i, t in enumerate(tuples_src)}
    tuples_dst = list(itertools.product(range(n_dst), repeat=k))
    out = np.zeros((len(tuples_dst) * dim, len(tuples_src) * dim),
                   dtype=np.int64)
    eye = np.eye(dim, dtype=np.int64)
    for i, t in enumerate(tuples_dst):
        j = pos[tuple(q(x) for x in t)]
        out[i * dim:(i + 1) * dim, j * dim:(j + 1) * dim] = eye
    return out


def inflation_ranks(q: GroupHom, p: int, k_max: int,
                    dim_budget: int = DEFAULT_DIM_BUDGET) -> tuple[int, ...]:
    """rank of H^k(G; F_p) -> H^k(G'; F_p) along a surjection q, k <= k_max."""
    g, gp = q.target, q.source
    if max(g.order, gp.order) ** (k_max + 1) > dim_budget:
        raise BudgetError("bar cochain spaces exceed budget")
    m_g = trivial_module(g, p)
    m_gp = trivial_module(gp, p)
    ranks = []
    for k in range(k_max + 1):
        cocycles = linalg.nullspace(_bar_coboundary(g, m_g, k), p).transpose()
        pulled = (cocycles @ _bar_pullback(q, k, 1).transpose()) % p
        if k == 0:
            coboundaries = np.zeros((0, gp.order ** k), dtype=np.int64)
        else:
            delta_prev = _bar_coboundary(gp, m_gp, k - 1)
            coboundaries = linalg.row_space_basis(delta_prev.transpose() % p, p)
        base = linalg.rank(coboundaries, p)
        ranks.append(linalg.rank(np.vstack([coboundaries, pulled]), p) - base)
    return tuple(ranks)


# ---------------------------------------------------------------------------
# Shapiro and towers


def shapiro_check(group: FiniteGroup, subgroup_elements, p: int, k_max: int,
                  dim_budget: int = DEFAULT_DIM_BUDGET) -> dict:
    """Compare H^k(G; F_p[G/H]) with H^k(H; F_p), k <= k_max."""
    from .groups import subgroup_group

    induced = coset_module(group, subgroup_elements, p)
    lhs = cohomology(group, induced, k_max, dim_budget)
    h, _ = subgroup_group(group, subgroup_elements)
    rhs = cohomology(h, trivial_module(h, p), k_max, dim_budget)
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs,
            "index": group.order // len(frozenset(subgroup_elements))}


class GroupTower:
    """G_0 <- G_1 <- ... with surjective transitions G_{k+1} -> G_k."""

    def __init__(self, levels, transitions):
        levels = list(levels)
        transitions = list(transitions)
        if len(transitions) != len(levels) - 1:
            raise ValueError("need one transition per consecutive pair")
        for k, q in enumerate(transitions):
            if q.source is not levels[k + 1] or q.target is not levels[k]:
                raise ValueError(f"transition {k} does not connect the levels")
            if not q.is_surjective:
                raise ValueError(f"transition {k} is not surjective")
        self.levels = levels
        self.transitions = transitions

    @property
    def depth(self):
        return len(self.levels)


def constant_group_tower(group: FiniteGroup, depth: int) -> GroupTower:
    from .groups import identity_hom
    levels = [group] * depth
    return GroupTower(levels, [identity_hom(group) for _ in range(depth - 1)])


def cyclic_p_tower(p: int, depth: int) -> GroupTower:
    """Z/p <- Z/p^2 <- ... <- Z/p^depth with reduction maps."""
    from .groups import cyclic_group
    levels = [cyclic_group(p ** (k + 1)) for k in range(depth)]
    transitions = [GroupHom(levels[k + 1], levels[k],
                            [x % p ** (k + 1) for x in range(p ** (k + 2))])
                   for k in range(depth - 1)]
    return GroupTower(levels, transitions)


def continuous_cohomology(tower: GroupTower, p: int, k_max: int,
                          dim_budget: int = DEFAULT_DIM_BUDGET) -> dict:
    """Levelwise dims plus inflation ranks, with stabilization flags.

    A degree is flagged stable when the last two inflation ranks equal the
    corresponding dimensions (the colimit has stopped moving at the
    supplied depth -- evidence, not proof).
    """
    dims = [cohomology(g, trivial_module(g, p), k_max, dim_budget)
            for g in tower.levels]
    ranks = [inflation_ranks(q, p, k_max, dim_budget)
             for q in tower.transitions]
    stable = []
    for k in range(k_max + 1):
        if len(ranks) >= 2:
            ok = all(r[k] == dims[i][k] == dims[i + 1][k]
                     for i, r in enumerate(ranks[-2:], start=len(ranks) - 2))
        else:
            ok = False
        stable.append(ok)
    return {"dims": [tuple(d) for d in dims],
            "inflation_ranks": [tuple(r) for r in ranks],
            "stable_degrees": [k for k in range(k_max + 1) if stable[k]],
            "growing_degrees": [k for k in range(k_max + 1) if not stable[k]],
            "k_max": k_max, "p": p, "depth": tower.depth}
