"""Concrete exact sequences around Gamma(A) -> A (x) A and their verification."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence

from .abgroup import (
    FgAbGroup,
    GroupHom,
    SizeCap,
    contains,
    default_enum_cap,
    image,
    isomorphism_classes,
    kernel,
    n_torsion,
    p_primary_part,
    preimage_coords,
)
from .functors import (
    exterior_cube,
    exterior_square,
    gamma_presentation,
    gamma_structural,
    compare_gamma,
    swap_tensor,
    tau_colimit_map,
    tau_n,
    tensor,
    tor,
)
from .functors.gamma import GammaValue
from .sym2homology import InvolutiveModule, coinvariants, h1, invariants


@dataclass(frozen=True)
class SequenceSpec:
    """Arrows ``arrows[i]: nodes[i] -> nodes[i + 1]``, optionally flanked by zeros."""

    arrows: tuple[GroupHom, ...]
    leading_zero: bool = False
    trailing_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if not self.arrows:
            raise ValueError("a sequence needs at least one arrow")
        for i, (f, g) in enumerate(zip(self.arrows, self.arrows[1:])):
            if f.cod != g.dom:
                raise ValueError(f"arrows {i} and {i + 1} are not composable")

    @property
    def nodes(self) -> list[FgAbGroup]:
        return [self.arrows[0].dom] + [f.cod for f in self.arrows]


@dataclass(frozen=True)
class NodeReport:
    index: int
    group: tuple[int, ...]
    kernel: tuple[int, ...]
    image: tuple[int, ...]
    exact: bool
    witnesses: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"index": self.index, "group": list(self.group), "kernel": list(self.kernel),
               "image": list(self.image), "exact": self.exact}
        if not self.exact:
            out["witnesses"] = self.witnesses
        return out


@dataclass(frozen=True)
class ExactnessReport:
    nodes: tuple[NodeReport, ...]

    @property
    def overall(self) -> bool:
        return all(n.exact for n in self.nodes)

    def as_dict(self) -> dict:
        return {"overall": self.overall, "nodes": [n.as_dict() for n in self.nodes]}


def check_exactness(s: SequenceSpec) -> ExactnessReport:
    """Compare kernel of the outgoing arrow with image of the incoming one at each node."""
    nodes = s.nodes
    last = len(nodes) - 1
    checked = list(range(1, last))
    if s.leading_zero:
        checked.insert(0, 0)
    if s.trailing_zero:
        checked.append(last)
    reports = []
    for i in checked:
        g = nodes[i]
        incoming = s.arrows[i - 1] if i > 0 else GroupHom.zero(FgAbGroup(), g)
        outgoing = s.arrows[i] if i < last else GroupHom.zero(g, FgAbGroup())
        kgrp, kincl = kernel(outgoing)
        igrp, iincl = image(incoming)
        ker_not_im = [list(kincl(x).coords) for x in kgrp.gens() if not contains(iincl, kincl(x))]
        im_not_ker = [list(iincl(x).coords) for x in igrp.gens() if not contains(kincl, iincl(x))]
        exact = not ker_not_im and not im_not_ker
        witnesses = {}
        if ker_not_im:
            witnesses["kernel_not_in_image"] = ker_not_im
        if im_not_ker:
            witnesses["image_not_in_kernel"] = im_not_ker
        reports.append(NodeReport(i, g.invariants, kgrp.invariants, igrp.invariants, exact, witnesses))
    return ExactnessReport(tuple(reports))


def descend(f: GroupHom, proj: GroupHom) -> GroupHom:
    """The map g with ``g @ proj == f``, for a surjection ``proj`` whose kernel f kills."""
    images = []
    for q in proj.cod.gens():
        x = preimage_coords(proj, q)
        if x is None:
            raise ValueError("projection is not surjective")
        images.append(f(proj.dom.element(x)))
    g = GroupHom.from_images(proj.cod, f.cod, images)
    if g @ proj != f:
        raise ValueError("map does not factor through the projection")
    return g


def two_primary_tor_module(a: FgAbGroup) -> InvolutiveModule:
    """``(Tor(T, T), sigma_eps)`` for the 2-primary part T of A."""
    t, _ = p_primary_part(a, 2)
    tv = tor(t, t)
    return InvolutiveModule(tv.group, tv.sigma_eps)


def kernel_term(a: FgAbGroup) -> FgAbGroup:
    """``H_1`` of the two-element group acting on ``Tor(T, T)`` by ``sigma_eps``, T the 2-primary part."""
    return h1(two_primary_tor_module(a))


@dataclass(frozen=True)
class H4Result:
    group: FgAbGroup
    gamma: GammaValue
    lambda2: FgAbGroup
    kernel: FgAbGroup
    h1_term: FgAbGroup
    report: ExactnessReport
    kernel_iso: bool
    kernel_in_pairing_image: bool
    kernel_two_torsion: bool
    orders_ok: Optional[bool]
    oracle_ok: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return (self.report.overall and self.kernel_iso and self.kernel_in_pairing_image
                and self.kernel_two_torsion and self.orders_ok is not False
                and self.oracle_ok is not False)


def theorem_h4_suite(a: FgAbGroup, oracle: bool = False, cap: Optional[int] = None) -> H4Result:
    """Check ``0 -> H_1 -> Gamma(A) -> A (x) A -> A ^ A -> 0`` for one group.

    Gamma is built structurally; ``oracle=True`` additionally rebuilds it from
    the presentation (finite A only) and checks the two agree.
    """
    gv = gamma_structural(a)
    lam, p = exterior_square(a, gv.tensor)
    kgrp, kincl = kernel(gv.psi)
    seq = SequenceSpec((kincl, gv.psi, p), leading_zero=True, trailing_zero=True)
    report = check_exactness(seq)
    h = kernel_term(a)
    _, pair_incl = image(gv.pairing)
    in_pairing = all(contains(pair_incl, kincl(x)) for x in kgrp.gens())
    two_torsion = (2 * kincl).is_zero()
    orders_ok = None
    if a.is_finite:
        orders_ok = gv.group.order * lam.order == kgrp.order * gv.tensor.group.order
    oracle_ok = None
    if oracle:
        if not a.is_finite:
            raise ValueError("the presentation cross-check needs a finite group")
        oracle_ok = compare_gamma(gamma_presentation(a, cap), gv, cap).ok
    return H4Result(a, gv, lam, kgrp, h, report, kgrp == h, in_pairing, two_torsion,
                    orders_ok, oracle_ok)


@dataclass(frozen=True)
class CorollaryResult:
    group: FgAbGroup
    kernel: FgAbGroup
    tensor_term: FgAbGroup
    stabilization: tuple[tuple[int, tuple[int, ...], tuple[int, ...]], ...]
    stable_at: int

    @property
    def matches_kernel(self) -> bool:
        return self.tensor_term == self.kernel

    @property
    def stabilized(self) -> bool:
        return all(FgAbGroup(h) == self.tensor_term
                   for n, _, h in self.stabilization if n >= self.stable_at)

    @property
    def ok(self) -> bool:
        return self.matches_kernel and self.stabilized


def swap_h1(t: FgAbGroup) -> FgAbGroup:
    """``H_1`` of the two-element group acting on ``T (x) T`` by the factor swap."""
    tv = tensor(t, t)
    return h1(InvolutiveModule(tv.group, swap_tensor(t, tv)))


def corollary_suite(a: FgAbGroup, h4: Optional[H4Result] = None) -> CorollaryResult:
    """Kernel of Psi via ``T (x) T`` with the swap, T the 2-primary part, and its 2^n-torsion approximations.

    The sequence of ``2^n``-torsion subgroups is followed until it reaches
    the whole 2-primary part; ``stable_at`` is that n, and one further step
    is computed to confirm the value stays put.
    """
    h4 = h4 or theorem_h4_suite(a)
    t, _ = p_primary_part(a, 2)
    term = swap_h1(t)
    steps = []
    n = 0
    while True:
        sub, _ = n_torsion(a, 2 ** n)
        steps.append((n, sub.invariants, swap_h1(sub).invariants))
        if sub.order == t.order:
            break
        n += 1
    sub, _ = n_torsion(a, 2 ** (n + 1))
    steps.append((n + 1, sub.invariants, swap_h1(sub).invariants))
    return CorollaryResult(a, h4.kernel, term, tuple(steps), n)


@dataclass(frozen=True)
class Exact1Result:
    group: FgAbGroup
    report: ExactnessReport
    pairing_kernel_is_antisymmetric: bool

    @property
    def ok(self) -> bool:
        return self.report.overall and self.pairing_kernel_is_antisymmetric


def exact1_suite(a: FgAbGroup, gv: Optional[GammaValue] = None) -> Exact1Result:
    """``0 -> (A (x) A)_swap -> Gamma(A) -> A/2 -> 0`` and ``ker [ , ] = <x (x) y - y (x) x>``."""
    gv = gv or gamma_structural(a)
    t = gv.tensor
    omega = InvolutiveModule(t.group, swap_tensor(a, t))
    _, pk_incl = kernel(gv.pairing)
    _, anti_incl = image(omega.difference)
    gens_match = (all(contains(anti_incl, pk_incl(x)) for x in pk_incl.dom.gens())
                  and all(contains(pk_incl, anti_incl(x)) for x in anti_incl.dom.gens()))
    _, proj = coinvariants(omega)
    induced = descend(gv.pairing, proj)
    report = check_exactness(SequenceSpec((induced, gv.phi), leading_zero=True, trailing_zero=True))
    return Exact1Result(a, report, gens_match)


@dataclass(frozen=True)
class GradedHomology:
    degrees: tuple[FgAbGroup, FgAbGroup, FgAbGroup, FgAbGroup]

    def __getitem__(self, n: int) -> FgAbGroup:
        return self.degrees[n]


def _cyclic_homology(d: int) -> list[list[int]]:
    # orders of cyclic summands (0 = Z) in degrees 0..3
    if d == 0:
        return [[0], [0], [], []]
    return [[0], [d], [], [d]]


def _tensor_orders(xs: Sequence[int], ys: Sequence[int]) -> list[int]:
    return [gcd(x, y) for x in xs for y in ys]


def _tor_orders(xs: Sequence[int], ys: Sequence[int]) -> list[int]:
    return [gcd(x, y) for x in xs for y in ys if x and y]


def kunneth_homology(a: FgAbGroup, top: int = 3) -> GradedHomology:
    """Integral homology of A in degrees 0..3 by iterating the Kunneth formula.

    Uses only the cyclic base cases and gcd rules for tensor and Tor of
    cyclic groups, independently of the functor module.
    """
    h = [[0]] + [[] for _ in range(top)]
    for d in a.invariants:
        c = _cyclic_homology(d)
        new = []
        for n in range(top + 1):
            orders = []
            for i in range(n + 1):
                orders += _tensor_orders(h[i], c[n - i])
            for i in range(n):
                orders += _tor_orders(h[i], c[n - 1 - i])
            new.append(orders)
        h = new
    return GradedHomology(tuple(FgAbGroup.from_orders(o) for o in h))


@dataclass(frozen=True)
class H3AResult:
    h3_order: int
    lambda3_order: int
    tor_invariants_order: int

    @property
    def ok(self) -> bool:
        return self.h3_order == self.lambda3_order * self.tor_invariants_order


def h3a_orders(a: FgAbGroup) -> H3AResult:
    if not a.is_finite:
        raise ValueError(f"the H3 order check needs a finite group, got {a}")
    tv = tor(a, a)
    inv, _ = invariants(InvolutiveModule(tv.group, tv.sigma_eps))
    return H3AResult(kunneth_homology(a)[3].order, exterior_cube(a).order, inv.order)


def h3a_order_check(a: FgAbGroup) -> bool:
    """``|H_3(A)| == |A^A^A| * |Tor(A, A)^sigma_eps|`` for finite A."""
    return h3a_orders(a).ok


def functor_identities(a: FgAbGroup, gv: Optional[GammaValue] = None) -> dict[str, bool]:
    """Homomorphism-level identities among gamma, Psi, Phi, the pairing and Tor."""
    gv = gv or gamma_structural(a)
    t = gv.tensor
    omega = swap_tensor(a, t)
    ident_t = GroupHom.identity(t.group)
    _, kincl = kernel(gv.psi)
    _, pincl = image(gv.pairing)
    tv = tor(a, a)
    sig = tv.sigma_eps
    out = {
        "psi_pairing_is_id_plus_swap": gv.psi @ gv.pairing == ident_t + omega,
        "pairing_psi_is_times_two": gv.pairing @ gv.psi == GroupHom.scalar(gv.group, 2),
        "pairing_symmetric": gv.pairing @ omega == gv.pairing,
        "phi_kills_pairing": (gv.phi @ gv.pairing).is_zero(),
        "kernel_psi_two_torsion": (2 * kincl).is_zero(),
        "kernel_psi_in_pairing_image": all(contains(pincl, kincl(x)) for x in kincl.dom.gens()),
        "sigma_eps_involution": sig @ sig == GroupHom.identity(tv.group),
        "tau_colimit_iso": tau_colimit_map(a, a, tv).is_isomorphism(),
    }
    exp = a.exponent if a.is_finite else None
    if exp is not None:
        sub, incl = n_torsion(a, exp)
        gens = [incl(x) for x in sub.gens()]
        out["tau_swap_intertwining"] = all(
            sig(tau_n(x, y, exp, tv)) == tau_n(y, x, exp, tv) for x in gens for y in gens
        )
    return out


@dataclass(frozen=True)
class GroupResult:
    group: FgAbGroup
    checks: dict
    seconds: float
    details: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


@dataclass(frozen=True)
class BatchSummary:
    max_order: int
    results: tuple[GroupResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.ok)


def verify_group(a: FgAbGroup, oracle: bool = False, cap: Optional[int] = None) -> GroupResult:
    """Every per-group suite used by :func:`batch_verify`."""
    start = time.perf_counter()
    h4 = theorem_h4_suite(a, oracle=oracle, cap=cap)
    cor = corollary_suite(a, h4)
    e1 = exact1_suite(a, h4.gamma)
    checks = {
        "h4_exact": h4.report.overall,
        "h4_kernel_iso": h4.kernel_iso,
        "h4_kernel_in_pairing_image": h4.kernel_in_pairing_image,
        "h4_order_bookkeeping": h4.orders_ok is not False,
        "swap_tensor_kernel": cor.ok,
        "exact1": e1.ok,
        "h2_kunneth_is_lambda2": kunneth_homology(a)[2] == h4.lambda2,
    }
    if a.is_finite:
        checks["h3a_orders"] = h3a_order_check(a)
    if oracle:
        checks["gamma_oracle"] = bool(h4.oracle_ok)
    checks.update(functor_identities(a, h4.gamma))
    details = {
        "gamma": list(h4.gamma.group.invariants),
        "tensor": list(h4.gamma.tensor.group.invariants),
        "lambda2": list(h4.lambda2.invariants),
        "kernel": list(h4.kernel.invariants),
        "h1_term": list(h4.h1_term.invariants),
        "stable_at": cor.stable_at,
    }
    return GroupResult(a, checks, time.perf_counter() - start, details)


def _verify_args(args):
    return verify_group(*args)


def batch_verify(max_order: int, oracle: bool = False, cap: Optional[int] = None,
                 workers: int = 1) -> BatchSummary:
    """Run every suite on each abelian group of order at most ``max_order``."""
    if max_order < 1:
        raise ValueError("max_order must be positive")
    cap = default_enum_cap() if cap is None else cap
    if max_order > cap:
        raise SizeCap(max_order, cap, what="max order")
    groups = [g for n in range(1, max_order + 1) for g in isomorphism_classes(n)]
    jobs = [(g, oracle, cap) for g in groups]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_verify_args, jobs))
    else:
        results = [verify_group(*job) for job in jobs]
    return BatchSummary(max_order, tuple(results))


__all__ = [
    "BatchSummary", "CorollaryResult", "Exact1Result", "ExactnessReport", "GradedHomology",
    "GroupResult", "H3AResult", "H4Result", "NodeReport", "SequenceSpec", "batch_verify",
    "check_exactness", "corollary_suite", "descend", "exact1_suite", "functor_identities",
    "h3a_order_check", "h3a_orders", "kernel_term", "kunneth_homology", "swap_h1",
    "theorem_h4_suite", "two_primary_tor_module", "verify_group",
]
