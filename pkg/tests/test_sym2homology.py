import pytest
from hypothesis import given, strategies as st

from conftest import fg_groups, finite_groups
from whitehead.abgroup import FgAbGroup, GroupHom, direct_sum, mod2, n_torsion
from whitehead.functors import swap_tensor, tensor
from whitehead.sym2homology import (
    InvolutiveModule,
    coinvariants,
    h1,
    h1_with_projection,
    invariants,
)

Z = FgAbGroup.free(1)


def C(*orders):
    return FgAbGroup.from_orders(orders)


def swap_module(m: FgAbGroup) -> InvolutiveModule:
    s = direct_sum(m, m)
    (i1, i2), (p1, p2) = s.injections, s.projections
    return InvolutiveModule(s.group, i1 @ p2 + i2 @ p1)


def test_sigma_must_be_an_involution():
    with pytest.raises(ValueError):
        InvolutiveModule(C(5), GroupHom.scalar(C(5), 2))
    with pytest.raises(ValueError):
        InvolutiveModule(C(2), GroupHom.zero(C(2), C(4)))


def test_coinvariants_examples():
    assert coinvariants(InvolutiveModule.trivial(C(2)))[0] == C(2)
    assert coinvariants(InvolutiveModule.sign(Z))[0] == C(2)
    assert coinvariants(swap_module(C(2)))[0] == C(2)


def test_invariants_examples():
    assert invariants(InvolutiveModule.trivial(C(2)))[0] == C(2)
    assert invariants(InvolutiveModule.sign(Z))[0] == FgAbGroup()
    a = C(2, 2)
    t = tensor(a, a)
    assert invariants(InvolutiveModule(t.group, swap_tensor(a, t)))[0] == C(2, 2, 2)


def test_h1_examples():
    assert h1(InvolutiveModule.trivial(C(2))) == C(2)
    assert h1(InvolutiveModule.sign(Z)) == FgAbGroup()
    a = C(2, 2)
    t = tensor(a, a)
    assert h1(InvolutiveModule(t.group, swap_tensor(a, t))) == C(2, 2)


def test_h1_brute_force_on_swap_of_tensor():
    a = C(2, 4)
    t = tensor(a, a)
    m = InvolutiveModule(t.group, swap_tensor(a, t))
    elems = list(t.group)
    fixed = {x for x in elems if m.sigma(x) == x}
    norms = {m.norm(x) for x in elems}
    assert h1(m).order == len(fixed) // len(norms)


@given(fg_groups(32))
def test_h1_of_trivial_action_is_mod_two(m):
    h = h1(InvolutiveModule.trivial(m))
    assert h == mod2(m)[0]
    if m.is_finite:
        assert h == n_torsion(m, 2)[0]


@given(fg_groups(32))
def test_h1_is_killed_by_two(m):
    for mod in (InvolutiveModule.trivial(m), InvolutiveModule.sign(m), swap_module(m)):
        group, _, proj = h1_with_projection(mod)
        assert all((2 * g).is_zero() for g in group.gens())
        assert proj.is_surjective()


@given(fg_groups(24))
def test_induced_module_is_acyclic(m):
    assert h1(swap_module(m)) == FgAbGroup()


@given(fg_groups(16), st.integers(-3, 3))
def test_h1_invariant_under_conjugation(m, k):
    base = swap_module(m)
    s = base.carrier
    s_sum = direct_sum(m, m)
    i2, p1 = s_sum.injections[1], s_sum.projections[0]
    # phi(x, y) = (x, y + k x) and its inverse
    phi = GroupHom.identity(s) + k * (i2 @ p1)
    phi_inv = GroupHom.identity(s) - k * (i2 @ p1)
    assert phi @ phi_inv == GroupHom.identity(s)
    conj = InvolutiveModule(s, phi @ base.sigma @ phi_inv)
    assert h1(conj) == h1(base)
    assert invariants(conj)[0] == invariants(base)[0]


@given(finite_groups(32))
def test_coinvariants_projection_is_invariant(m):
    t = tensor(m, m)
    mod = InvolutiveModule(t.group, swap_tensor(m, t))
    _, proj = coinvariants(mod)
    assert proj @ mod.sigma == proj
