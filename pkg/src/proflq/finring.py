"""Finite modules over Z/m in invariant-factor normal form.

A module is a direct sum Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... | d_k,
all d_i > 1 dividing the ambient modulus m.  Maps are integer matrices
read modulo the target factors.  Kernels, cokernels, Hom, tensor and
Pontryagin duality (Hom into Z/m, standing in for Q/Z at exponent m) are
all computed exactly through Smith normal form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod

from . import snf


@dataclass(frozen=True)
class FiniteRing:
    """The coefficient ring Z/m, m >= 2."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")

    @property
    def is_prime(self) -> bool:
        m = self.modulus
        if m < 2:
            return False
        return all(m % d for d in range(2, int(m ** 0.5) + 1))


@dataclass(frozen=True)
class FiniteModule:
    ring: FiniteRing
    factors: tuple[int, ...]

    def __post_init__(self):
        m = self.ring.modulus
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError(f"factors {self.factors} are not a divisibility chain")
        for d in self.factors:
            if d <= 1 or m % d:
                raise ValueError(f"factor {d} invalid for modulus {m}")

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def is_zero(self) -> bool:
        return not self.factors

    def elements(self):
        return itertools.product(*(range(d) for d in self.factors))

    def zero_element(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def neg(self, x) -> tuple[int, ...]:
        return tuple((-a) % d for a, d in zip(x, self.factors))

    def smul(self, c: int, x) -> tuple[int, ...]:
        return tuple((c * a) % d for a, d in zip(x, self.factors))

    def identity_map(self) -> "ModuleMap":
        return ModuleMap(self, self, snf.identity(self.rank))


def zero_module(ring: FiniteRing) -> FiniteModule:
    return FiniteModule(ring, ())


def cyclic(ring: FiniteRing, d: int) -> FiniteModule:
    return FiniteModule(ring, (d,)) if d > 1 else zero_module(ring)


class ModuleMap:
    """A homomorphism between finite modules, stored as an integer matrix.

    Entry (i, j) is read modulo the i-th target factor; well-definedness
    (source factor annihilates its column) is validated eagerly.
    """

    def __init__(self, source: FiniteModule, target: FiniteModule, matrix):
        if source.ring != target.ring:
            raise ValueError("source and target live over different rings")
        rows, cols = target.rank, source.rank
        if len(matrix) != rows or any(len(r) != cols for r in matrix):
            raise ValueError(f"matrix must be {rows}x{cols}")
        reduced = tuple(
            tuple(int(matrix[i][j]) % target.factors[i] for j in range(cols))
            for i in range(rows)
        )
        for i in range(rows):
            for j in range(cols):
                if (reduced[i][j] * source.factors[j]) % target.factors[i]:
                    raise ValueError(
                        f"entry ({i},{j}) does not define a homomorphism"
                    )
        self.source = source
        self.target = target
        self.matrix = reduced

    def __call__(self, x) -> tuple[int, ...]:
        return tuple(
            sum(self.matrix[i][j] * x[j] for j in range(self.source.rank)) % d
            for i, d in enumerate(self.target.factors)
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModuleMap)
            and self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def __repr__(self):
        return f"ModuleMap({self.source.factors}->{self.target.factors}, {self.matrix})"

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return ModuleMap(
            other.source, self.target, snf.mat_mul(list(map(list, self.matrix)),
                                                   list(map(list, other.matrix)))
        )

    def add(self, other: "ModuleMap") -> "ModuleMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("maps with different endpoints")
        return ModuleMap(
            self.source,
            self.target,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)],
        )

    @property
    def is_zero(self) -> bool:
        return all(all(e == 0 for e in row) for row in self.matrix)

    def is_injective(self) -> bool:
        return kernel(self)[0].is_zero

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_zero

    def is_isomorphism(self) -> bool:
        return (
            self.source.order == self.target.order
            and self.is_injective()
        )


def zero_map(source: FiniteModule, target: FiniteModule) -> ModuleMap:
    return ModuleMap(source, target, snf.zeros(target.rank, source.rank))


def _column_lattice_basis(columns: list[list[int]]) -> list[list[int]]:
    """Basis (columns, full rank assumed) of the lattice spanned by `columns`."""
    left, d, _ = snf.smith_normal_form(columns)
    linv = snf.invert_unimodular(left)
    diag = snf.diagonal_of(d)
    basis = []
    for j, dj in enumerate(diag):
        if dj:
            basis.append([linv[i][j] * dj for i in range(len(columns))])
    return snf.transpose(basis)


def _quotient_structure(basis: list[list[int]], sub: list[list[int]]):
    """Invariant factors of lattice(basis)/lattice(sub) plus adapted basis.

    Returns (kept_factors, adapted) where adapted's columns are lattice
    elements generating the quotient cyclically with the given orders.
    """
    x = snf.solve_integer(basis, sub)
    u, d, _ = snf.smith_normal_form(x)
    uinv = snf.invert_unimodular(u)
    adapted = snf.mat_mul(basis, uinv)
    diag = snf.diagonal_of(d)
    kept = [(i, di) for i, di in enumerate(diag) if di > 1]
    cols = [[adapted[r][i] for i, _ in kept] for r in range(len(adapted))]
    return [di for _, di in kept], cols


def kernel(f: ModuleMap) -> tuple[FiniteModule, ModuleMap]:
    """(K, iota) with iota: K -> source the universal map killed by f."""
    src, tgt = f.source, f.target
    k, n = src.rank, tgt.rank
    if k == 0:
        kmod = zero_module(src.ring)
        return kmod, zero_map(kmod, src)
    if n == 0:
        return src, src.identity_map()
    # lattice L = {x in Z^k : F x in diag(b) Z^n}
    aug = [list(f.matrix[i]) + [tgt.factors[i] if j == i else 0 for j in range(n)]
           for i in range(n)]
    ker_cols = snf.integer_kernel(aug)
    proj = [row[:] for row in ker_cols[:k]] if ker_cols else snf.zeros(k, 0)
    rel = snf.zeros(k, k)
    for j in range(k):
        rel[j][j] = src.factors[j]
    span = [proj[i] + rel[i] for i in range(k)]
    basis = _column_lattice_basis(span)
    factors, gen_cols = _quotient_structure(basis, rel)
    kmod = FiniteModule(src.ring, tuple(factors))
    incl = ModuleMap(kmod, src, [[gen_cols[i][j] for j in range(kmod.rank)]
                                 for i in range(k)])
    return kmod, incl


def cokernel(f: ModuleMap) -> tuple[FiniteModule, ModuleMap]:
    """(Q, pi) with pi: target -> Q the universal map killing im(f)."""
    src, tgt = f.source, f.target
    k, n = src.rank, tgt.rank
    if n == 0:
        q = zero_module(src.ring)
        return q, zero_map(tgt, q)
    aug = [list(f.matrix[i]) + [tgt.factors[i] if j == i else 0 for j in range(n)]
           for i in range(n)]
    u, d, _ = snf.smith_normal_form(aug)
    diag = snf.diagonal_of(d)
    kept = [(i, di) for i, di in enumerate(diag[:n]) if di > 1]
    q = FiniteModule(src.ring, tuple(di for _, di in kept))
    proj = ModuleMap(tgt, q, [u[i] for i, _ in kept]) if kept else zero_map(tgt, q)
    return q, proj


def image(f: ModuleMap) -> FiniteModule:
    """The image of f as an abstract module (no embedding returned)."""
    tgt = f.target
    n = tgt.rank
    if n == 0 or f.source.rank == 0:
        return zero_module(f.source.ring)
    rel = snf.zeros(n, n)
    for i in range(n):
        rel[i][i] = tgt.factors[i]
    span = [list(f.matrix[i]) + rel[i] for i in range(n)]
    basis = _column_lattice_basis(span)
    factors, _ = _quotient_structure(basis, rel)
    return FiniteModule(f.source.ring, tuple(factors))


def from_cyclic(ring: FiniteRing, orders: list[int]):
    """Normalize a direct sum of cyclic groups Z/orders[l].

    Returns (M, to_normal, from_normal) where M is the invariant-factor
    module and the matrices are mutually inverse isomorphisms between the
    raw coordinate presentation and M.  Order-1 summands are allowed and
    vanish.
    """
    n = len(orders)
    diag = snf.zeros(n, n)
    for i, c in enumerate(orders):
        if c < 1 or ring.modulus % c:
            raise ValueError(f"cyclic order {c} invalid for modulus {ring.modulus}")
        diag[i][i] = c
    u, d, _ = snf.smith_normal_form(diag)
    uinv = snf.invert_unimodular(u)
    dd = snf.diagonal_of(d)
    kept = [(i, di) for i, di in enumerate(dd) if di > 1]
    mod = FiniteModule(ring, tuple(di for _, di in kept))
    to_normal = [u[i] for i, _ in kept]
    from_normal = [[uinv[r][i] for i, _ in kept] for r in range(n)]
    return mod, to_normal, from_normal


def direct_sum(modules: list[FiniteModule]):
    """Normalized direct sum with explicit injections and projections."""
    if not modules:
        raise ValueError("direct_sum of an empty list needs a ring; use zero_module")
    ring = modules[0].ring
    if any(m.ring != ring for m in modules):
        raise ValueError("ring mismatch in direct_sum")
    orders = [d for m in modules for d in m.factors]
    total, to_normal, from_normal = from_cyclic(ring, orders)
    injections, projections = [], []
    off = 0
    for m in modules:
        block = range(off, off + m.rank)
        inj = [[to_normal[i][j] for j in block] for i in range(total.rank)]
        proj = [from_normal[j] for j in block]
        injections.append(ModuleMap(m, total, inj))
        projections.append(ModuleMap(total, m, proj))
        off += m.rank
    return total, injections, projections


def hom_module(m: FiniteModule, n: FiniteModule) -> FiniteModule:
    """Hom(M, N), extended biadditively from Hom(Z/a, Z/b) = Z/gcd(a, b)."""
    if m.ring != n.ring:
        raise ValueError("ring mismatch")
    orders = [gcd(a, b) for a in m.factors for b in n.factors]
    return from_cyclic(m.ring, orders)[0]


def tensor_module(m: FiniteModule, n: FiniteModule) -> FiniteModule:
    """M (x) N, extended biadditively from Z/a (x) Z/b = Z/gcd(a, b)."""
    if m.ring != n.ring:
        raise ValueError("ring mismatch")
    orders = [gcd(a, b) for a in m.factors for b in n.factors]
    return from_cyclic(m.ring, orders)[0]


def tensor_pure(m: FiniteModule, n: FiniteModule, x, y) -> tuple[int, ...]:
    """Coordinates of x (x) y in the raw presentation of tensor_module.

    The raw presentation is the direct sum of Z/gcd(a_j, b_i) in (j, i)
    lexicographic order; compose with from_cyclic to land in normal form.
    """
    return tuple(
        (x[j] * y[i]) % gcd(a, b)
        for j, a in enumerate(m.factors)
        for i, b in enumerate(n.factors)
    )


def pontryagin_dual(m: FiniteModule) -> FiniteModule:
    """Hom(M, Z/m): finite cyclic groups are self-dual, so same factors."""
    return m


def dual_pairing(m: FiniteModule, x, xi) -> int:
    """<x, xi> in Z/m, where xi are coordinates in the dual (same factors)."""
    mm = m.ring.modulus
    return sum(x_i * xi_i * (mm // d) for x_i, xi_i, d in zip(x, xi, m.factors)) % mm


def dual_map(f: ModuleMap) -> ModuleMap:
    """f^v: N^v -> M^v defined by <f(x), xi> = <x, f^v(xi)>."""
    src, tgt = f.source, f.target
    matrix = [
        [f.matrix[i][j] * src.factors[j] // tgt.factors[i] for i in range(tgt.rank)]
        for j in range(src.rank)
    ]
    return ModuleMap(pontryagin_dual(tgt), pontryagin_dual(src), matrix)


def is_isomorphic(m: FiniteModule, n: FiniteModule) -> bool:
    if m.ring != n.ring:
        raise ValueError("ring mismatch")
    return m.factors == n.factors


def hom_maps(m: FiniteModule, n: FiniteModule):
    """All homomorphisms M -> N, enumerated as ModuleMaps.

    There are prod gcd(a_j, b_i) of them; use only at small orders.
    """
    if m.ring != n.ring:
        raise ValueError("ring mismatch")
    choices = []
    for i, b in enumerate(n.factors):
        for j, a in enumerate(m.factors):
            g = gcd(a, b)
            choices.append([t * (b // g) for t in range(g)])
    for flat in itertools.product(*choices):
        matrix = [
            [flat[i * m.rank + j] for j in range(m.rank)] for i in range(n.rank)
        ]
        yield ModuleMap(m, n, matrix)
