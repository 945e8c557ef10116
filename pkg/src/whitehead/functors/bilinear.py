"""Tensor products, exterior powers and Tor of finitely generated abelian groups.

Tor is computed as the first homology of the tensor product of two
presentation resolutions ``0 -> F1 -> F0 -> A -> 0``, where F0 is free on the
canonical generators of A, F1 is free on its finite-order generators and the
boundary is diagonal.  The middle term ``F0(x)G1 + F1(x)G0`` is addressed by
labels ``("01", i, s)`` and ``("10", r, j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Optional, Sequence

from ..abgroup import (
    CanonicalForm,
    FgAbGroup,
    GroupElement,
    GroupHom,
    Presentation,
    canonicalize,
    cokernel,
    n_torsion,
)
from ..intlin import IntMatrix, kernel_basis, smith_normal_form, _solve_with


@dataclass(frozen=True)
class BifunctorValue:
    """A functor value together with the labelled coordinates it was built from.

    ``canon`` converts between label coordinates and coordinates of the
    canonical ``group``; involutions and tau maps are written on labels and
    transported through it.
    """

    group: FgAbGroup
    labels: tuple
    canon: CanonicalForm
    left: FgAbGroup
    right: FgAbGroup

    def from_labels(self, vec: Sequence[int]) -> GroupElement:
        return self.canon.to_element(vec)

    def to_labels(self, x: GroupElement) -> list[int]:
        return self.canon.lift(x)


@dataclass(frozen=True)
class TensorValue(BifunctorValue):
    def element(self, a: GroupElement, b: GroupElement) -> GroupElement:
        """The class of ``a (x) b``."""
        if a.parent != self.left or b.parent != self.right:
            raise TypeError("factors do not belong to the tensor's groups")
        nb = self.right.ngens
        vec = [0] * len(self.labels)
        for i, x in enumerate(a.coords):
            if x:
                for j, y in enumerate(b.coords):
                    vec[i * nb + j] = x * y
        return self.from_labels(vec)


def tensor(a: FgAbGroup, b: FgAbGroup) -> TensorValue:
    """``A (x) B``; the generator pair (i, j) has order gcd(d_i, e_j) with gcd(0, d) = d."""
    labels = tuple((i, j) for i in range(a.ngens) for j in range(b.ngens))
    orders = [gcd(a.invariants[i], b.invariants[j]) for i, j in labels]
    canon = canonicalize(Presentation.from_orders(orders))
    return TensorValue(canon.group, labels, canon, a, b)


def tensor_hom(f: GroupHom, g: GroupHom,
               src: Optional[TensorValue] = None, dst: Optional[TensorValue] = None) -> GroupHom:
    """``f (x) g`` between the tensor products of the domains and codomains."""
    src = src or tensor(f.dom, g.dom)
    dst = dst or tensor(f.cod, g.cod)
    fm, gm = f.matrix, g.matrix
    kron = IntMatrix.from_rows(
        [[fm[i2, i] * gm[j2, j] for i, j in src.labels] for i2, j2 in dst.labels],
        len(src.labels),
    )
    return GroupHom(src.group, dst.group, dst.canon.forward @ kron @ src.canon.backward)


def swap_tensor(a: FgAbGroup, t: Optional[TensorValue] = None) -> GroupHom:
    """The factor swap ``x (x) y -> y (x) x`` on ``A (x) A``."""
    t = t or tensor(a, a)
    n = a.ngens
    perm = IntMatrix.from_cols(
        [[int(lab == (j, i)) for lab in t.labels] for i, j in t.labels], len(t.labels)
    ) if n else IntMatrix.zeros(0, 0)
    return GroupHom(t.group, t.group, t.canon.forward @ perm @ t.canon.backward)


def exterior_square(a: FgAbGroup, t: Optional[TensorValue] = None) -> tuple[FgAbGroup, GroupHom]:
    """``A ^ A`` as the quotient of ``A (x) A`` by all ``x (x) x``, with the projection."""
    t = t or tensor(a, a)
    n = a.ngens
    idx = {lab: k for k, lab in enumerate(t.labels)}
    rels = []
    for i in range(n):
        v = [0] * len(t.labels)
        v[idx[i, i]] = 1
        rels.append(v)
        for j in range(i + 1, n):
            v = [0] * len(t.labels)
            v[idx[i, j]] = 1
            v[idx[j, i]] = 1
            rels.append(v)
    images = [t.from_labels(v) for v in rels]
    gens = GroupHom.from_images(FgAbGroup.free(len(images)), t.group, images)
    return cokernel(gens)


def exterior_cube(a: FgAbGroup) -> FgAbGroup:
    """``A ^ A ^ A``: one cyclic factor of order gcd(d_i, d_j, d_k) per triple i < j < k."""
    inv = a.invariants
    n = len(inv)
    orders = [gcd(gcd(inv[i], inv[j]), inv[k])
              for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)]
    return FgAbGroup.from_orders(orders)


def _finite_gens(g: FgAbGroup) -> list[int]:
    return [i for i, d in enumerate(g.invariants) if d]


@dataclass(frozen=True)
class TorValue(BifunctorValue):
    """``Tor(A, B)`` as cycles modulo boundaries of the resolution complex.

    ``cycles`` has one column per chosen basis vector of ker(d1) in middle
    coordinates; ``canon`` is the canonical form of the quotient of that
    cycle lattice by im(d2).
    """

    d1: IntMatrix = field(repr=False, default=None)
    d2: IntMatrix = field(repr=False, default=None)
    cycles: IntMatrix = field(repr=False, default=None)

    @cached_property
    def _cycle_snf(self):
        return smith_normal_form(self.cycles)

    def class_of(self, z: Sequence[int]) -> GroupElement:
        """Homology class of a cycle given in middle coordinates."""
        c = _solve_with(self._cycle_snf, self.cycles.cols, list(z))
        if c is None:
            raise ValueError("vector is not a cycle")
        return self.canon.to_element(c)

    def from_labels(self, vec: Sequence[int]) -> GroupElement:
        return self.class_of(vec)

    def representative(self, x: GroupElement) -> list[int]:
        """A cycle in middle coordinates representing ``x``."""
        return self.cycles @ self.canon.lift(x)

    to_labels = representative

    def induced(self, chain_map: IntMatrix) -> GroupHom:
        """Endomorphism of Tor induced by a chain map given on the middle term."""
        images = [self.class_of(chain_map @ self.representative(g)) for g in self.group.gens()]
        return GroupHom.from_images(self.group, self.group, images)

    @property
    def is_square(self) -> bool:
        return self.left == self.right

    @cached_property
    def sigma_eps(self) -> GroupHom:
        """The involution of ``Tor(A, A)`` with ``sigma_eps(tau_n(a, b)) = tau_n(b, a)``."""
        if not self.is_square:
            raise ValueError("sigma_eps is only defined on Tor(A, A)")
        return self.induced(-self.swap_chain())

    def swap_chain(self) -> IntMatrix:
        """Factor swap ``x (x) y -> y (x) x`` on the middle term, without sign."""
        if not self.is_square:
            raise ValueError("the swap is only defined on Tor(A, A)")
        idx = {lab: k for k, lab in enumerate(self.labels)}
        cols = []
        for kind, p, q in self.labels:
            v = [0] * len(self.labels)
            v[idx["10" if kind == "01" else "01", q, p]] = 1
            cols.append(v)
        return IntMatrix.from_cols(cols, len(self.labels)) if cols else IntMatrix.zeros(0, 0)

    def tau_witnesses(self, n: int) -> dict[tuple[int, int], GroupElement]:
        """``tau_n`` on all pairs of generators of the n-torsion subgroups."""
        sa, ia = n_torsion(self.left, n)
        sb, ib = n_torsion(self.right, n)
        return {(i, j): tau_n(ia(x), ib(y), n, self)
                for i, x in enumerate(sa.gens()) for j, y in enumerate(sb.gens())}


def resolution_complex(a: FgAbGroup, b: FgAbGroup):
    """Labels and boundary matrices of ``F1(x)G1 -> F0(x)G1 + F1(x)G0 -> F0(x)G0``."""
    fa, fb = _finite_gens(a), _finite_gens(b)
    na, nb = a.ngens, b.ngens
    mid = [("01", i, s) for i in range(na) for s in range(len(fb))]
    mid += [("10", r, j) for r in range(len(fa)) for j in range(nb)]
    bottom = {(i, j): k for k, (i, j) in enumerate((i, j) for i in range(na) for j in range(nb))}
    midx = {lab: k for k, lab in enumerate(mid)}

    d1_cols = []
    for kind, p, q in mid:
        v = [0] * len(bottom)
        if kind == "01":
            j = fb[q]
            v[bottom[p, j]] = b.invariants[j]
        else:
            i = fa[p]
            v[bottom[i, q]] = a.invariants[i]
        d1_cols.append(v)
    d2_cols = []
    for r in range(len(fa)):
        for s in range(len(fb)):
            v = [0] * len(mid)
            v[midx["01", fa[r], s]] = a.invariants[fa[r]]
            v[midx["10", r, fb[s]]] = -b.invariants[fb[s]]
            d2_cols.append(v)
    d1 = IntMatrix.from_cols(d1_cols, len(bottom)) if d1_cols else IntMatrix.zeros(len(bottom), 0)
    d2 = IntMatrix.from_cols(d2_cols, len(mid)) if d2_cols else IntMatrix.zeros(len(mid), 0)
    return tuple(mid), d1, d2


def tor(a: FgAbGroup, b: FgAbGroup) -> TorValue:
    """``Tor_1(A, B)`` as ker(d1) / im(d2)."""
    labels, d1, d2 = resolution_complex(a, b)
    cycles = kernel_basis(d1)
    snf = smith_normal_form(cycles)
    k = cycles.cols
    rel_rows = []
    for col in d2.columns():
        c = _solve_with(snf, k, col)
        assert c is not None, "boundary is not a cycle"
        rel_rows.append(c)
    canon = canonicalize(Presentation(k, IntMatrix.from_rows(rel_rows, k) if rel_rows
                                      else IntMatrix.zeros(0, k)))
    return TorValue(canon.group, labels, canon, a, b, d1=d1, d2=d2, cycles=cycles)


def _resolution_lift(x: GroupElement, n: int) -> list[int]:
    # the F1 coordinates of the element whose boundary is n times the lift of x
    out = []
    for c, d in zip(x.coords, x.parent.invariants):
        if d == 0:
            if c:
                raise ValueError(f"{x} is not {n}-torsion")
            continue
        if (n * c) % d:
            raise ValueError(f"{x} is not {n}-torsion")
        out.append(n * c // d)
    return out


def tau_cycle(a: GroupElement, b: GroupElement, n: int, labels: Sequence) -> list[int]:
    """The cycle ``x (x) b~ - a~ (x) y`` where ``dx = n a~`` and ``dy = n b~``.

    Under the projection onto ``F (x) B`` it becomes ``x (x) b``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    x = _resolution_lift(a, n)
    y = _resolution_lift(b, n)
    vec = []
    for kind, p, q in labels:
        if kind == "01":
            vec.append(-a.coords[p] * y[q])
        else:
            vec.append(x[p] * b.coords[q])
    return vec


def tau_n(a: GroupElement, b: GroupElement, n: int, tor_ab: TorValue) -> GroupElement:
    """``tau_n(a, b)`` in ``Tor(A, B)`` for ``n a = 0`` and ``n b = 0``."""
    if a.parent != tor_ab.left or b.parent != tor_ab.right:
        raise TypeError("elements do not belong to the groups of this Tor")
    return tor_ab.class_of(tau_cycle(a, b, n, tor_ab.labels))


def tau_map(a: FgAbGroup, b: FgAbGroup, n: int, tor_ab: Optional[TorValue] = None) -> GroupHom:
    """The homomorphism ``nA (x) nB -> Tor(A, B)``, ``x (x) y -> tau_n(x, y)``."""
    tor_ab = tor_ab or tor(a, b)
    sa, ia = n_torsion(a, n)
    sb, ib = n_torsion(b, n)
    t = tensor(sa, sb)
    ga, gb = sa.gens(), sb.gens()
    on_labels = [tau_n(ia(ga[i]), ib(gb[j]), n, tor_ab) for i, j in t.labels]
    images = []
    for g in t.group.gens():
        acc = tor_ab.group.zero()
        for c, v in zip(t.to_labels(g), on_labels):
            if c:
                acc = acc + c * v
        images.append(acc)
    return GroupHom.from_images(t.group, tor_ab.group, images)


@dataclass(frozen=True)
class Involutions:
    sigma0: GroupHom
    sigma_eps: GroupHom
    tensor: TensorValue
    tor: TorValue


def sigma_involutions(a: FgAbGroup) -> Involutions:
    """Factor swap on ``A (x) A`` and the involution ``sigma_eps`` on ``Tor(A, A)``."""
    t = tensor(a, a)
    tv = tor(a, a)
    return Involutions(swap_tensor(a, t), tv.sigma_eps, t, tv)


def norm_chain(tv: TorValue) -> IntMatrix:
    """Middle component of the chain map lifting ``x (x) y -> x (x) y + y (x) x``.

    On ``(x (x) y, y' (x) x')`` it returns ``(x (x) y + x' (x) y', y (x) x + y' (x) x')``.
    """
    return IntMatrix.identity(len(tv.labels)) + tv.swap_chain()


def norm_chain_outer(tv: TorValue) -> tuple[IntMatrix, IntMatrix]:
    """The outer components of the same chain map, on ``F0(x)F0`` and ``F1(x)F1``.

    Degree 0 adds the plain swap, degree 2 subtracts it.
    """
    a = tv.left
    n, f = a.ngens, len(_finite_gens(a))

    def swap(k):
        pairs = [(i, j) for i in range(k) for j in range(k)]
        if not pairs:
            return IntMatrix.zeros(0, 0)
        return IntMatrix.from_cols([[int(p == (j, i)) for p in pairs] for i, j in pairs], len(pairs))

    return (IntMatrix.identity(n * n) + swap(n), IntMatrix.identity(f * f) - swap(f))


def norm_chain_map(a: FgAbGroup, tv: Optional[TorValue] = None) -> GroupHom:
    """Endomorphism of ``Tor(A, A)`` induced by the norm chain map."""
    tv = tv or tor(a, a)
    return tv.induced(norm_chain(tv))


def _torsion_exponent(g: FgAbGroup) -> int:
    t = g.torsion_invariants
    return t[-1] if t else 1


def tau_colimit_map(a: FgAbGroup, b: FgAbGroup, tor_ab: Optional[TorValue] = None) -> GroupHom:
    """The map from the colimit of the ``nA (x) nB`` to ``Tor(A, B)`` induced by the tau maps.

    The colimit is taken over all n dividing the torsion exponent N, glued by
    ``tau_n(x, y) = tau_s(m x, y)`` (x in nA, y in sB) and
    ``tau_n(x, y) = tau_s(x, m y)`` (x in sA, y in nB) for every n = s m.
    Beyond N the n-torsion subgroups are constant, so this finite diagram
    already computes the full colimit.
    """
    from ..abgroup import preimage_coords

    tor_ab = tor_ab or tor(a, b)
    e = _torsion_exponent(a) * _torsion_exponent(b) // gcd(_torsion_exponent(a), _torsion_exponent(b))
    divisors = [n for n in range(1, e + 1) if e % n == 0]
    parts = {}
    offset = 0
    for n in divisors:
        sa, ia = n_torsion(a, n)
        sb, ib = n_torsion(b, n)
        t = tensor(sa, sb)
        parts[n] = (sa, ia, sb, ib, t, offset)
        offset += t.group.ngens
    total = offset

    def embed(n: int, x: GroupElement, y: GroupElement) -> list[int]:
        sa, ia, sb, ib, t, off = parts[n]
        xs = sa.element(preimage_coords(ia, x))
        ys = sb.element(preimage_coords(ib, y))
        v = [0] * total
        v[off:off + t.group.ngens] = t.element(xs, ys).coords
        return v

    rows = []
    for n in divisors:
        t, off = parts[n][4], parts[n][5]
        for k, d in enumerate(t.group.invariants):
            v = [0] * total
            v[off + k] = d
            rows.append(v)
    for n in divisors:
        for s in divisors:
            if n % s or s == n:
                continue
            m = n // s
            _, ia_n, _, ib_n, _, _ = parts[n]
            sa_s, ia_s, sb_s, ib_s, _, _ = parts[s]
            for x in parts[n][0].gens():
                for y in sb_s.gens():
                    xa, yb = ia_n(x), ib_s(y)
                    rows.append([p - q for p, q in zip(embed(n, xa, yb), embed(s, m * xa, yb))])
            for x in sa_s.gens():
                for y in parts[n][2].gens():
                    xa, yb = ia_s(x), ib_n(y)
                    rows.append([p - q for p, q in zip(embed(n, xa, yb), embed(s, xa, m * yb))])
    canon = canonicalize(Presentation(total, IntMatrix.from_rows(rows, total) if rows
                                      else IntMatrix.zeros(0, total)))
    on_coords = []
    for n in divisors:
        h = tau_map(a, b, n, tor_ab)
        on_coords.extend(h.images())
    images = []
    for g in canon.group.gens():
        acc = tor_ab.group.zero()
        for c, v in zip(canon.lift(g), on_coords):
            if c:
                acc = acc + c * v
        images.append(acc)
    return GroupHom.from_images(canon.group, tor_ab.group, images)
