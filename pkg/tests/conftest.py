import os

from hypothesis import HealthCheck, settings, strategies as st

from whitehead.abgroup import FgAbGroup, GroupElement, n_torsion

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def finite_groups(max_order=64, max_factors=3):
    """Finite groups given by a list of cyclic orders, capped in size."""

    def ok(orders):
        n = 1
        for d in orders:
            n *= d
        return n <= max_order

    return (st.lists(st.integers(2, 16), max_size=max_factors)
            .filter(ok).map(FgAbGroup.from_orders))


def fg_groups(max_torsion=64, max_rank=2):
    return st.tuples(finite_groups(max_torsion), st.integers(0, max_rank)).map(
        lambda p: FgAbGroup.from_orders(list(p[0].invariants) + [0] * p[1]))


@st.composite
def elements(draw, g: FgAbGroup, bound=20):
    coords = [draw(st.integers(0, d - 1)) if d else draw(st.integers(-bound, bound))
              for d in g.invariants]
    return g.element(coords)


@st.composite
def torsion_elements(draw, g: FgAbGroup, n: int):
    sub, incl = n_torsion(g, n)
    return incl(draw(elements(sub)))


@st.composite
def homs(draw, dom: FgAbGroup, cod: FgAbGroup):
    """A random well-defined homomorphism: generator j goes into the d_j-torsion."""
    from whitehead.abgroup import GroupHom

    images = []
    for d in dom.invariants:
        if d == 0:
            images.append(draw(elements(cod)))
        else:
            images.append(draw(torsion_elements(cod, d)))
    return GroupHom.from_images(dom, cod, images)


def brute_elements(g: FgAbGroup) -> list[GroupElement]:
    return list(g)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
