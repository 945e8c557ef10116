"""Whitehead's quadratic functor Gamma, built two independent ways.

``gamma_presentation`` takes the free group on symbols w(a), a in A, modulo
the relations w(a) = w(-a) and the seven-term cube identity.  ``gamma_structural``
assembles Gamma from the invariant factors: Gamma(Z/d) is cyclic of order
d*gcd(d, 2) on gamma(1), and each pair of factors contributes a cross term
Z/gcd(d_i, d_j) carrying the pairing [e_i, e_j].
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Mapping, Optional, Sequence, Union

from ..abgroup import (
    CanonicalForm,
    FgAbGroup,
    GroupElement,
    GroupHom,
    InfiniteEnumeration,
    Presentation,
    canonicalize,
    enumerate_elements,
    mod2,
)
from ..intlin import IntMatrix
from .bilinear import TensorValue, tensor

QuadraticTable = Union[Mapping[GroupElement, GroupElement], Callable[[GroupElement], GroupElement]]

# A formal sum of gamma values: ((coefficient, element of A), ...)
Word = tuple[tuple[int, GroupElement], ...]


@dataclass(frozen=True)
class GammaValue:
    source: FgAbGroup
    group: FgAbGroup
    kind: str
    gamma_map: Callable[[GroupElement], GroupElement]
    psi: GroupHom
    phi: GroupHom
    pairing: GroupHom
    tensor: TensorValue
    mod2_projection: GroupHom
    generator_words: tuple[Word, ...]

    def bracket(self, a: GroupElement, b: GroupElement) -> GroupElement:
        """``[a, b] = gamma(a + b) - gamma(a) - gamma(b)``."""
        g = self.gamma_map
        return g(a + b) - g(a) - g(b)


def _as_callable(f: QuadraticTable) -> Callable[[GroupElement], GroupElement]:
    return f.__getitem__ if isinstance(f, Mapping) else f


def _words_to_hom(gv_group: FgAbGroup, words: Sequence[Word], f, cod: FgAbGroup) -> GroupHom:
    images = []
    for word in words:
        acc = cod.zero()
        for c, x in word:
            acc = acc + c * f(x)
        images.append(acc)
    return GroupHom.from_images(gv_group, cod, images)


def _assemble(source, group, kind, gamma_map, words, t: TensorValue) -> GammaValue:
    a2, proj = mod2(source)
    psi = _words_to_hom(group, words, lambda x: t.element(x, x), t.group)
    phi = _words_to_hom(group, words, proj, a2)
    gens = source.gens()
    on_labels = [gamma_map(gens[i] + gens[j]) - gamma_map(gens[i]) - gamma_map(gens[j])
                 for i, j in t.labels]
    pair_images = []
    for g in t.group.gens():
        acc = group.zero()
        for c, v in zip(t.to_labels(g), on_labels):
            if c:
                acc = acc + c * v
        pair_images.append(acc)
    pairing = GroupHom.from_images(t.group, group, pair_images)
    return GammaValue(source, group, kind, gamma_map, psi, phi, pairing, t, proj, tuple(words))


def _cube_row(idx, elems, i, j, k, n) -> Optional[list[int]]:
    a, b, c = elems[i], elems[j], elems[k]
    row = [0] * n
    for sign, x in ((1, a + b + c), (-1, a + b), (-1, a + c), (-1, b + c),
                    (1, a), (1, b), (1, c)):
        row[idx[x.coords]] += sign
    return row if any(row) else None


def gamma_relations(a: FgAbGroup, cap: Optional[int] = None) -> tuple[list[GroupElement], list[list[int]]]:
    """Elements of A and the relation rows on the symbols w(x).

    Cube relations are symmetric in their three arguments, so only sorted
    index triples are generated.
    """
    elems = list(enumerate_elements(a, cap))
    n = len(elems)
    idx = {x.coords: k for k, x in enumerate(elems)}
    rows = []
    zero_row = [0] * n
    zero_row[idx[a.zero().coords]] = 1
    rows.append(zero_row)
    for k, x in enumerate(elems):
        j = idx[(-x).coords]
        if j > k:
            row = [0] * n
            row[k], row[j] = 1, -1
            rows.append(row)
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                row = _cube_row(idx, elems, i, j, k, n)
                if row is not None:
                    rows.append(row)
    return elems, rows


def gamma_presentation(a: FgAbGroup, cap: Optional[int] = None) -> GammaValue:
    """Gamma(A) as the symbols w(x) modulo the quadratic relations (finite A only)."""
    if not a.is_finite:
        raise InfiniteEnumeration(f"the presentation of Gamma needs a finite group, got {a}")
    elems, rows = gamma_relations(a, cap)
    n = len(elems)
    canon = canonicalize(Presentation(n, IntMatrix.from_rows(rows, n)))
    table = {x.coords: canon.group.element(canon.forward.col(k)) for k, x in enumerate(elems)}

    def gamma_map(x: GroupElement) -> GroupElement:
        if x.parent != a:
            raise TypeError(f"{x} is not an element of {a}")
        return table[x.coords]

    words = []
    for col in canon.backward.columns():
        words.append(tuple((c, elems[k]) for k, c in enumerate(col) if c))
    return _assemble(a, canon.group, "presentation", gamma_map, words, tensor(a, a))


def gamma_structural(a: FgAbGroup) -> GammaValue:
    """Gamma(A) from the invariant factors of A; works for infinite groups."""
    inv = a.invariants
    k = len(inv)
    labels = [("g", i) for i in range(k)] + [("p", i, j) for i in range(k) for j in range(i + 1, k)]
    orders = [inv[lab[1]] * gcd(inv[lab[1]], 2) if lab[0] == "g" else gcd(inv[lab[1]], inv[lab[2]])
              for lab in labels]
    canon: CanonicalForm = canonicalize(Presentation.from_orders(orders))
    group = canon.group

    def gamma_map(x: GroupElement) -> GroupElement:
        if x.parent != a:
            raise TypeError(f"{x} is not an element of {a}")
        c = x.coords
        vec = [c[lab[1]] ** 2 if lab[0] == "g" else c[lab[1]] * c[lab[2]] for lab in labels]
        return canon.to_element(vec)

    gens = a.gens()
    label_words: list[Word] = []
    for lab in labels:
        if lab[0] == "g":
            label_words.append(((1, gens[lab[1]]),))
        else:
            ei, ej = gens[lab[1]], gens[lab[2]]
            label_words.append(((1, ei + ej), (-1, ei), (-1, ej)))
    words = []
    for col in canon.backward.columns():
        acc: dict = {}
        for c, word in zip(col, label_words):
            if c:
                for coef, x in word:
                    acc[x] = acc.get(x, 0) + c * coef
        words.append(tuple((c, x) for x, c in acc.items() if c))
    return _assemble(a, group, "structural", gamma_map, words, tensor(a, a))


def quadratic_check(f: QuadraticTable, a: FgAbGroup, cap: Optional[int] = None) -> bool:
    """Whether ``f`` is quadratic on the finite group ``a``.

    Checks f(x) = f(-x) for all x, and additivity of the cross effect
    B(x, y) = f(x + y) - f(x) - f(y) in x.  Additivity against every
    generator for every (x, y) already gives additivity for all pairs, and B
    is symmetric, so this decides bilinearity exactly.
    """
    f = _as_callable(f)
    elems = list(enumerate_elements(a, cap))
    values = {x: f(x) for x in elems}
    for x in elems:
        if values[x] != values[-x]:
            return False

    def cross(x, y):
        return values[x + y] - values[x] - values[y]

    gens = a.gens()
    for x in elems:
        for y in elems:
            bxy = cross(x, y)
            for g in gens:
                if cross(x + g, y) != bxy + cross(g, y):
                    return False
    return True


def universal_factorization(gv: GammaValue, f: QuadraticTable, cap: Optional[int] = None) -> GroupHom:
    """The unique homomorphism h: Gamma(A) -> B with ``h(gamma(x)) = f(x)``."""
    a = gv.source
    if not a.is_finite:
        raise InfiniteEnumeration("universal factorization is checked on finite groups only")
    if not quadratic_check(f, a, cap):
        raise ValueError("map is not quadratic")
    f = _as_callable(f)
    cod = f(a.zero()).parent
    h = _words_to_hom(gv.group, gv.generator_words, f, cod)
    for x in enumerate_elements(a, cap):
        if h(gv.gamma_map(x)) != f(x):
            raise ArithmeticError(f"factorization fails at {x}")
    return h


def gamma_image_generates(gv: GammaValue) -> bool:
    """Whether the gamma values generate Gamma(A), which makes factorizations unique."""
    from ..abgroup import image

    a = gv.source
    vals = [gv.gamma_map(x) for x in enumerate_elements(a)]
    h = GroupHom.from_images(FgAbGroup.free(len(vals)), gv.group, vals)
    return image(h)[0] == gv.group


@dataclass(frozen=True)
class GammaComparison:
    iso: GroupHom
    is_isomorphism: bool
    commutes_gamma: bool
    commutes_psi: bool
    commutes_phi: bool
    commutes_pairing: bool

    @property
    def ok(self) -> bool:
        return (self.is_isomorphism and self.commutes_gamma and self.commutes_psi
                and self.commutes_phi and self.commutes_pairing)


def compare_gamma(src: GammaValue, dst: GammaValue, cap: Optional[int] = None) -> GammaComparison:
    """Build the map ``src -> dst`` induced by ``dst.gamma_map`` and test it is a compatible iso."""
    if src.source != dst.source:
        raise ValueError("Gamma values of different groups")
    h = universal_factorization(src, dst.gamma_map, cap)
    elems = list(enumerate_elements(src.source, cap))
    return GammaComparison(
        iso=h,
        is_isomorphism=h.is_isomorphism(),
        commutes_gamma=all(h(src.gamma_map(x)) == dst.gamma_map(x) for x in elems),
        commutes_psi=dst.psi @ h == src.psi,
        commutes_phi=dst.phi @ h == src.phi,
        commutes_pairing=h @ src.pairing == dst.pairing,
    )
