"""Finitely generated abelian groups, their elements and homomorphisms.

Groups are kept in invariant-factor form ``Z/d1 + ... + Z/dk`` with
``d1 | d2 | ...`` and ``0`` standing for an infinite cyclic factor (zeros
last).  Kernels, images and cokernels go through relation lattices, so they
work for infinite groups too; element enumeration is only for finite groups.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterator, Optional, Sequence

from sympy import isprime

from .intlin import IntMatrix, kernel_basis, smith_right, solve

ENV_ENUM_CAP = "WHITEHEAD_MAX_ENUM"
DEFAULT_ENUM_CAP = 4096


def default_enum_cap() -> int:
    raw = os.environ.get(ENV_ENUM_CAP)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_ENUM_CAP} must be an integer, got {raw!r}") from None
        if value < 1:
            raise ValueError(f"{ENV_ENUM_CAP} must be positive")
        return value
    return DEFAULT_ENUM_CAP


class InfiniteEnumeration(ValueError):
    """Raised when asked to list the elements of an infinite group."""


class SizeCap(ValueError):
    """Raised when a computation would exceed a configured size cap."""

    def __init__(self, size: int, cap: int, what: str = "group order"):
        self.size = size
        self.cap = cap
        super().__init__(
            f"{what} {size} exceeds the enumeration cap {cap} "
            f"(raise it with --max-enum or {ENV_ENUM_CAP})"
        )


@dataclass(frozen=True)
class FgAbGroup:
    invariants: tuple[int, ...] = ()

    def __post_init__(self):
        inv = tuple(int(x) for x in self.invariants)
        object.__setattr__(self, "invariants", inv)
        for i, d in enumerate(inv):
            if d == 1 or d < 0:
                raise ValueError(f"invariant factors must be 0 or >= 2, got {inv}")
            if i + 1 < len(inv):
                nxt = inv[i + 1]
                if d == 0 and nxt != 0:
                    raise ValueError(f"infinite factors must come last: {inv}")
                if d and nxt and nxt % d:
                    raise ValueError(f"divisibility chain broken: {inv}")

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FgAbGroup":
        """Canonical form of ``Z/o1 + Z/o2 + ...`` for arbitrary orders (0 = Z, 1 = trivial)."""
        return canonicalize(Presentation.from_orders(orders)).group

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls((0,) * rank)

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        return cls.from_orders([n])

    @property
    def ngens(self) -> int:
        return len(self.invariants)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariants if d == 0)

    @property
    def is_finite(self) -> bool:
        return 0 not in self.invariants

    @property
    def is_trivial(self) -> bool:
        return not self.invariants

    @property
    def order(self) -> Optional[int]:
        """Group order, or None for an infinite group."""
        return prod(self.invariants) if self.is_finite else None

    @property
    def exponent(self) -> Optional[int]:
        if not self.is_finite:
            return None
        return self.invariants[-1] if self.invariants else 1

    @property
    def torsion_invariants(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d)

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.ngens)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    def gens(self) -> list["GroupElement"]:
        return [self.element([int(i == j) for j in range(self.ngens)]) for i in range(self.ngens)]

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return tuple(c % d if d else c for c, d in zip(coords, self.invariants))

    def __iter__(self) -> Iterator["GroupElement"]:
        return enumerate_elements(self)

    def __str__(self) -> str:
        if not self.invariants:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariants)


@dataclass(frozen=True)
class GroupElement:
    parent: FgAbGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", self.parent.reduce(self.coords))

    def _check(self, other: "GroupElement") -> None:
        if not isinstance(other, GroupElement) or other.parent != self.parent:
            raise TypeError("elements of different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.parent, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, n: int) -> "GroupElement":
        return GroupElement(self.parent, tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        """Additive order; 0 for elements of infinite order."""
        n = 1
        for c, d in zip(self.coords, self.parent.invariants):
            if c == 0:
                continue
            if d == 0:
                return 0
            k = d // gcd(c, d)
            n = n * k // gcd(n, k)
        return n

    def __repr__(self) -> str:
        return f"{list(self.coords)} in {self.parent}"


class GroupHom:
    """A homomorphism given by an integer matrix acting on coordinate columns.

    Columns are reduced modulo the codomain invariants on construction, so
    equality of homomorphisms is equality of matrices.
    """

    __slots__ = ("dom", "cod", "matrix")

    def __init__(self, dom: FgAbGroup, cod: FgAbGroup, matrix: IntMatrix):
        if matrix.shape != (cod.ngens, dom.ngens):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match {cod.ngens}x{dom.ngens}"
            )
        cols = [cod.reduce(c) for c in matrix.columns()]
        for j, (c, d) in enumerate(zip(cols, dom.invariants)):
            if d and any(cod.reduce([d * x for x in c])):
                raise ValueError(
                    f"not well defined: generator {j} has order {d} but its image does not"
                )
        self.dom = dom
        self.cod = cod
        self.matrix = IntMatrix.from_cols(cols, cod.ngens)

    @classmethod
    def from_images(cls, dom: FgAbGroup, cod: FgAbGroup,
                    images: Sequence[Sequence[int] | GroupElement]) -> "GroupHom":
        cols = [im.coords if isinstance(im, GroupElement) else tuple(im) for im in images]
        return cls(dom, cod, IntMatrix.from_cols(cols, cod.ngens))

    @classmethod
    def identity(cls, g: FgAbGroup) -> "GroupHom":
        return cls(g, g, IntMatrix.identity(g.ngens))

    @classmethod
    def zero(cls, dom: FgAbGroup, cod: FgAbGroup) -> "GroupHom":
        return cls(dom, cod, IntMatrix.zeros(cod.ngens, dom.ngens))

    @classmethod
    def scalar(cls, g: FgAbGroup, n: int) -> "GroupHom":
        return cls(g, g, n * IntMatrix.identity(g.ngens))

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.parent != self.dom:
            raise TypeError(f"element of {x.parent} passed to a map from {self.dom}")
        return GroupElement(self.cod, tuple(self.matrix @ x.coords))

    def images(self) -> list[GroupElement]:
        return [self.cod.element(c) for c in self.matrix.columns()]

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        """Composition: ``(g @ f)(x) = g(f(x))``."""
        if other.cod != self.dom:
            raise ValueError(f"cannot compose: {other.cod} is not {self.dom}")
        return GroupHom(other.dom, self.cod, self.matrix @ other.matrix)

    def _same(self, other: "GroupHom") -> None:
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise ValueError("homomorphisms between different groups")

    def __add__(self, other: "GroupHom") -> "GroupHom":
        self._same(other)
        return GroupHom(self.dom, self.cod, self.matrix + other.matrix)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        self._same(other)
        return GroupHom(self.dom, self.cod, self.matrix - other.matrix)

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.dom, self.cod, -self.matrix)

    def __mul__(self, n: int) -> "GroupHom":
        return GroupHom(self.dom, self.cod, n * self.matrix)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupHom) and self.dom == other.dom
                and self.cod == other.cod and self.matrix == other.matrix)

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.matrix))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self) -> str:
        return f"GroupHom({self.dom} -> {self.cod}, {self.matrix.tolist()})"


@dataclass(frozen=True)
class Presentation:
    """``Z^generator_count`` modulo the row span of ``relations``."""

    generator_count: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.cols != self.generator_count:
            raise ValueError("relation matrix needs one column per generator")

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "Presentation":
        n = len(orders)
        return cls(n, IntMatrix.diagonal(list(orders), n, n))

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[Sequence[int]]) -> "Presentation":
        return cls(n, IntMatrix.from_rows(rows, n))


@dataclass(frozen=True)
class CanonicalForm:
    """Result of canonicalising a presentation.

    ``forward`` (g x n) sends presentation coordinates to coordinates of
    ``group``; ``backward`` (n x g) sends each canonical generator to a
    representative in presentation coordinates.
    """

    group: FgAbGroup
    forward: IntMatrix
    backward: IntMatrix

    def to_element(self, vec: Sequence[int]) -> GroupElement:
        return GroupElement(self.group, tuple(self.forward @ list(vec)))

    def lift(self, x: GroupElement) -> list[int]:
        if x.parent != self.group:
            raise TypeError("element is not in the canonical group")
        return self.backward @ list(x.coords)

    def forward_hom(self) -> GroupHom:
        """Forward map out of the free group on the presentation generators."""
        return GroupHom(FgAbGroup.free(self.forward.cols), self.group, self.forward)


def canonicalize(p: Presentation) -> CanonicalForm:
    """Invariant-factor form of a presented group with explicit maps both ways."""
    n = p.generator_count
    d, right = smith_right(p.relations.tolist(), n)
    d = d + [0] * (n - len(d))
    # x -> x @ right re-expresses a row vector in the diagonal basis
    keep = [i for i in range(n) if d[i] != 1]
    inv = _unimodular_inverse(right)
    forward_rows = [[right[k, i] for k in range(n)] for i in keep]
    backward_cols = [inv.row(i) for i in keep]
    group = FgAbGroup(tuple(d[i] for i in keep))
    forward = IntMatrix.from_rows(forward_rows, n)
    backward = IntMatrix.from_cols(backward_cols, n) if keep else IntMatrix.zeros(n, 0)
    return CanonicalForm(group, forward, backward)


def _unimodular_inverse(u: IntMatrix) -> IntMatrix:
    n = u.rows
    cols = []
    for j in range(n):
        x = solve(u, [int(i == j) for i in range(n)])
        assert x is not None, "matrix is not unimodular"
        cols.append(x)
    return IntMatrix.from_cols(cols, n) if n else IntMatrix.zeros(0, 0)


def _relation_diag(g: FgAbGroup) -> IntMatrix:
    return IntMatrix.diagonal(list(g.invariants))


def subgroup(g: FgAbGroup, gens: IntMatrix) -> tuple[FgAbGroup, GroupHom]:
    """The subgroup of ``g`` generated by the columns of ``gens``, with its inclusion."""
    k = gens.cols
    # c in Z^k is a relation iff gens c lies in the relation lattice of g
    stacked = gens.hstack(-_relation_diag(g))
    ker = kernel_basis(stacked)
    rel_rows = [col[:k] for col in ker.columns()]
    cf = canonicalize(Presentation(k, IntMatrix.from_rows(rel_rows, k) if rel_rows
                                   else IntMatrix.zeros(0, k)))
    incl = GroupHom(cf.group, g, gens @ cf.backward)
    return cf.group, incl


def kernel(f: GroupHom) -> tuple[FgAbGroup, GroupHom]:
    """Kernel of ``f`` with its inclusion into ``f.dom``."""
    n = f.dom.ngens
    stacked = f.matrix.hstack(-_relation_diag(f.cod))
    ker = kernel_basis(stacked)
    gens = IntMatrix.from_cols([col[:n] for col in ker.columns()], n) if ker.cols else IntMatrix.zeros(n, 0)
    return subgroup(f.dom, gens)


def image(f: GroupHom) -> tuple[FgAbGroup, GroupHom]:
    """Image of ``f`` with its inclusion into ``f.cod``."""
    return subgroup(f.cod, f.matrix)


def cokernel(f: GroupHom) -> tuple[FgAbGroup, GroupHom]:
    """Cokernel of ``f`` with the projection from ``f.cod``."""
    m = f.cod.ngens
    rows = f.matrix.T.tolist() + _relation_diag(f.cod).tolist()
    cf = canonicalize(Presentation(m, IntMatrix.from_rows(rows, m) if rows else IntMatrix.zeros(0, m)))
    return cf.group, GroupHom(f.cod, cf.group, cf.forward)


def preimage_coords(incl: GroupHom, x: GroupElement) -> Optional[list[int]]:
    """Coordinates y with ``incl(y) == x``, or None if x is not in the image."""
    stacked = incl.matrix.hstack(_relation_diag(incl.cod))
    sol = solve(stacked, list(x.coords))
    if sol is None:
        return None
    return list(incl.dom.reduce(sol[:incl.dom.ngens]))


def contains(incl: GroupHom, x: GroupElement) -> bool:
    """Whether ``x`` lies in the image of ``incl``."""
    return preimage_coords(incl, x) is not None


def factor_through(f: GroupHom, incl: GroupHom) -> GroupHom:
    """The map g with ``incl @ g == f``; requires im f inside im incl."""
    if f.cod != incl.cod:
        raise ValueError("maps have different codomains")
    cols = []
    for j, y in enumerate(f.images()):
        c = preimage_coords(incl, y)
        if c is None:
            raise ValueError(f"image of generator {j} is not in the subgroup")
        cols.append(c)
    return GroupHom.from_images(f.dom, incl.dom, cols)


@dataclass(frozen=True)
class DirectSum:
    group: FgAbGroup
    injections: tuple[GroupHom, GroupHom]
    projections: tuple[GroupHom, GroupHom]


def direct_sum(a: FgAbGroup, b: FgAbGroup) -> DirectSum:
    na, nb = a.ngens, b.ngens
    cf = canonicalize(Presentation.from_orders(a.invariants + b.invariants))
    g = cf.group
    f, bk = cf.forward, cf.backward
    inj_a = GroupHom(a, g, f.select_cols(range(na)))
    inj_b = GroupHom(b, g, f.select_cols(range(na, na + nb)))
    proj_a = GroupHom(g, a, bk.select_rows(range(na)) if na else IntMatrix.zeros(0, g.ngens))
    proj_b = GroupHom(g, b, bk.select_rows(range(na, na + nb)) if nb else IntMatrix.zeros(0, g.ngens))
    return DirectSum(g, (inj_a, inj_b), (proj_a, proj_b))


def _cyclic_subgroup(a: FgAbGroup, parts: list[tuple[int, int]]) -> tuple[FgAbGroup, GroupHom]:
    # parts[i] = (order, multiplier) for the generator multiplier*e_i
    keep = [(i, o, m) for i, (o, m) in enumerate(parts) if o != 1]
    sub = FgAbGroup(tuple(o for _, o, _ in keep))
    cols = []
    for i, _, m in keep:
        col = [0] * a.ngens
        col[i] = m
        cols.append(col)
    return sub, GroupHom.from_images(sub, a, cols)


def n_torsion(a: FgAbGroup, n: int) -> tuple[FgAbGroup, GroupHom]:
    """The subgroup of elements killed by ``n``."""
    if n < 1:
        raise ValueError("n must be positive")
    parts = []
    for d in a.invariants:
        if d == 0:
            parts.append((1, 0))
        else:
            g = gcd(n, d)
            parts.append((g, d // g))
    return _cyclic_subgroup(a, parts)


def p_primary_part(a: FgAbGroup, p: int) -> tuple[FgAbGroup, GroupHom]:
    """The subgroup of elements of ``p``-power order."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    parts = []
    for d in a.invariants:
        if d == 0:
            parts.append((1, 0))
            continue
        q = 1
        while d % (q * p) == 0:
            q *= p
        parts.append((q, d // q))
    return _cyclic_subgroup(a, parts)


def mod2(a: FgAbGroup) -> tuple[FgAbGroup, GroupHom]:
    """``A/2`` with the quotient map."""
    return cokernel(GroupHom.scalar(a, 2))


def enumerate_elements(a: FgAbGroup, cap: Optional[int] = None) -> Iterator[GroupElement]:
    if not a.is_finite:
        raise InfiniteEnumeration(f"cannot enumerate the infinite group {a}")
    cap = default_enum_cap() if cap is None else cap
    if a.order > cap:
        raise SizeCap(a.order, cap)
    return (GroupElement(a, c) for c in itertools.product(*(range(d) for d in a.invariants)))


def isomorphism_classes(order: int) -> list[FgAbGroup]:
    """All abelian groups of the given order, one per isomorphism class."""
    from sympy import factorint
    from sympy.utilities.iterables import partitions

    per_prime = []
    for p, e in sorted(factorint(order).items()):
        options = []
        for part in partitions(e):
            exps = sorted(k for k, mult in part.items() for _ in range(mult))
            options.append([p ** k for k in exps])
        per_prime.append(options)
    groups = []
    for combo in itertools.product(*per_prime):
        groups.append(FgAbGroup.from_orders([q for prime_powers in combo for q in prime_powers]))
    return sorted(groups, key=lambda g: (len(g.invariants), g.invariants))
