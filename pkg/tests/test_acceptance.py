"""Acceptance criteria, one test per criterion.

Each criterion prints a single PASS/FAIL line (collected again in the pytest
terminal summary). Run directly with ``python tests/test_acceptance.py`` for
the lines alone.
"""

import json
import random
import subprocess
import sys
import time

import pytest

from whitehead.abgroup import (
    FgAbGroup,
    GroupHom,
    contains,
    direct_sum,
    image,
    isomorphism_classes,
    kernel,
    mod2,
    n_torsion,
)
from whitehead.functors import (
    compare_gamma,
    exterior_square,
    gamma_presentation,
    gamma_structural,
    norm_chain_map,
    swap_tensor,
    tau_colimit_map,
    tau_map,
    tau_n,
    tor,
)
from whitehead.sym2homology import InvolutiveModule, coinvariants
from whitehead.theorems import (
    exact1_suite,
    h3a_order_check,
    kunneth_homology,
    theorem_h4_suite,
)

LINES: list[str] = []


def groups_up_to(n):
    return [g for k in range(1, n + 1) for g in isomorphism_classes(k)]


def record(number, title, ok, detail, seconds, budget):
    within = seconds <= budget
    status = "PASS" if ok and within else "FAIL"
    timing = f"{seconds:.1f}s of {budget}s" + ("" if within else " OVER BUDGET")
    line = f"[{status}] criterion {number}: {title} ({detail}; {timing})"
    LINES.append(line)
    print(line)
    return ok and within


def timed(fn):
    start = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - start


def criterion_1():
    failed = []
    groups = groups_up_to(64)
    for a in groups:
        r = theorem_h4_suite(a)
        if not (r.report.overall and r.kernel_iso):
            failed.append(str(a))
    return not failed, f"{len(groups) - len(failed)}/{len(groups)} groups exact with matching kernel" + (
        f"; failing {failed[:5]}" if failed else "")


def criterion_2():
    failed = []
    groups = groups_up_to(32)
    for a in groups:
        if not compare_gamma(gamma_presentation(a), gamma_structural(a)).ok:
            failed.append(str(a))
    return not failed, f"{len(groups) - len(failed)}/{len(groups)} groups with compatible isomorphism"


def criterion_3():
    Z = FgAbGroup.free(1)
    cases = [
        (FgAbGroup.from_orders([2]), (4,)),
        (FgAbGroup.from_orders([3]), (3,)),
        (FgAbGroup.from_orders([2, 2]), (2, 4, 4)),
    ]
    bad = []
    for a, want in cases:
        gp = gamma_presentation(a)
        gs = gamma_structural(a)
        t = gs.tensor
        co, _ = coinvariants(InvolutiveModule(t.group, swap_tensor(a, t)))
        if not (gp.group.invariants == gs.group.invariants == want
                and gp.group.order == co.order * mod2(a)[0].order):
            bad.append(str(a))
    if gamma_structural(Z).group != Z:
        bad.append("Z")
    return not bad, "Gamma(Z/2)=Z/4, Gamma(Z/3)=Z/3, Gamma((Z/2)^2)=Z/2+Z/4+Z/4, Gamma(Z)=Z" + (
        f"; wrong for {bad}" if bad else "")


def criterion_4():
    rnd = random.Random(20240501)
    classes = groups_up_to(64)
    cache = {}
    failures = []
    for k in range(200):
        a = rnd.choice(classes)
        if a not in cache:
            gv = gamma_structural(a)
            t = gv.tensor
            omega = swap_tensor(a, t)
            _, kincl = kernel(gv.psi)
            _, pincl = image(gv.pairing)
            hom_ok = (gv.psi @ gv.pairing == GroupHom.identity(t.group) + omega
                      and gv.pairing @ gv.psi == GroupHom.scalar(gv.group, 2)
                      and (2 * kincl).is_zero()
                      and all(contains(pincl, kincl(x)) for x in kincl.dom.gens()))
            cache[a] = (gv, hom_ok)
        gv, hom_ok = cache[a]
        t = gv.tensor
        elems = list(a)
        x, y, z = (rnd.choice(elems) for _ in range(3))
        n = rnd.randint(0, 12)
        g = gv.gamma_map
        ok = (hom_ok
              and g(n * x) == n * n * g(x)
              and gv.bracket(x, y) == gv.bracket(y, x)
              and gv.bracket(x + y, z) == gv.bracket(x, z) + gv.bracket(y, z)
              and gv.phi(gv.bracket(x, y)).is_zero()
              and gv.psi(gv.bracket(x, y)) == t.element(x, y) + t.element(y, x))
        if not ok:
            failures.append((k, str(a)))
    return not failures, f"{200 - len(failures)}/200 samples, {len(cache)} distinct groups"


def criterion_5():
    failed = []
    groups = groups_up_to(64)
    for a in groups:
        if not exact1_suite(a).ok:
            failed.append(str(a))
    return not failed, f"{len(groups) - len(failed)}/{len(groups)} groups exact, pairing kernel = antisymmetric tensors"


def _divisor_pairs(limit):
    return [(s, m) for s in range(1, limit + 1) for m in range(1, limit + 1) if s * m <= limit]


def criterion_6():
    rnd = random.Random(7)
    classes = [g for g in groups_up_to(64) if not g.is_trivial]
    compat_bad = 0
    swap_bad = 0
    samples = 0
    for _ in range(60):
        a = rnd.choice(classes)
        b = rnd.choice(classes)
        tab = tor(a, b)
        taa = tor(a, a)
        s, m = rnd.choice(_divisor_pairs(12))
        n = s * m

        def pick(g, k):
            sub, incl = n_torsion(g, k)
            return incl(rnd.choice(list(sub)))

        x, y = pick(a, n), pick(b, s)
        x2, y2 = pick(a, s), pick(b, n)
        if tau_n(x, y, n, tab) != tau_n(m * x, y, s, tab):
            compat_bad += 1
        if tau_n(x2, y2, n, tab) != tau_n(x2, m * y2, s, tab):
            compat_bad += 1
        u, v = pick(a, n), pick(a, n)
        if taa.sigma_eps(tau_n(u, v, n, taa)) != tau_n(v, u, n, taa):
            swap_bad += 1
        samples += 1
    stab_total = 0
    stab_bad = []
    for a in groups_up_to(64):
        e = a.exponent
        stab_total += 1
        if not tau_map(a, a, e).is_isomorphism():
            stab_bad.append(str(a))
    ok = compat_bad == 0 and swap_bad == 0 and not stab_bad
    detail = (f"compatibility {2 * samples - compat_bad}/{2 * samples}, "
              f"intertwining {samples - swap_bad}/{samples}, "
              f"tau_e isomorphism {stab_total - len(stab_bad)}/{stab_total}")
    if stab_bad:
        detail += f" (not an isomorphism for e.g. {', '.join(stab_bad[:3])})"
    return ok, detail


def criterion_6_colimit():
    bad = [str(a) for a in groups_up_to(64) if not tau_colimit_map(a, a).is_isomorphism()]
    return not bad, f"colimit of tau_n over n | exponent is an isomorphism for {117 - len(bad)}/117 groups"


def criterion_7():
    groups = groups_up_to(32)
    bad = []
    for a in groups:
        tv = tor(a, a)
        if norm_chain_map(a, tv) != GroupHom.identity(tv.group) + tv.sigma_eps:
            bad.append(str(a))
    detail = f"norm_chain_map = id + sigma_eps for {len(groups) - len(bad)}/{len(groups)} groups"
    if bad:
        detail += f" (differs for e.g. {', '.join(bad[:3])})"
    return not bad, detail


def criterion_8():
    groups = groups_up_to(64)
    h3_bad = [str(a) for a in groups if not h3a_order_check(a)]
    h2_bad = [str(a) for a in groups if kunneth_homology(a)[2] != exterior_square(a)[0]]
    return not h3_bad and not h2_bad, (f"H3 orders {len(groups) - len(h3_bad)}/{len(groups)}, "
                                       f"H2 = exterior square {len(groups) - len(h2_bad)}/{len(groups)}")


def criterion_9():
    rnd = random.Random(99)
    twos = [g for k in (1, 2, 4, 8, 16) for g in isomorphism_classes(k)]
    odds = [g for k in range(1, 28, 2) for g in isomorphism_classes(k)]
    bad = 0
    for _ in range(50):
        t = rnd.choice(twos)
        odd = rnd.choice(odds)
        c = FgAbGroup.from_orders(list(odd.invariants) + [0] * rnd.randint(0, 2))
        a = direct_sum(t, c).group
        if theorem_h4_suite(a).kernel != theorem_h4_suite(t).kernel:
            bad += 1
    return bad == 0, f"{50 - bad}/50 pairs with equal kernel"


def criterion_10():
    def cli(*args):
        return subprocess.run([sys.executable, "-m", "whitehead", *args], capture_output=True, text=True)

    p = cli("verify", "Z/2", "--json")
    verify_ok = p.returncode == 0 and json.loads(p.stdout)["results"]["kernel"] == [2]
    p = cli("sweep", "--max-order", "16")
    sweep_ok = p.returncode == 0
    p = cli("verify", "Z/1")
    reject_ok = p.returncode != 0 and "semantic error" in p.stderr
    return verify_ok and sweep_ok and reject_ok, (
        f"verify Z/2 {'ok' if verify_ok else 'bad'}, sweep 16 {'ok' if sweep_ok else 'bad'}, "
        f"Z/1 rejected {'ok' if reject_ok else 'bad'}")


CRITERIA = [
    (1, "four-term sequence and kernel for all groups of order <= 64", criterion_1, 300),
    (2, "structural and presented Gamma agree up to order 32", criterion_2, 120),
    (3, "known values of Gamma", criterion_3, 10),
    (4, "identity suite on 200 random samples", criterion_4, 60),
    (5, "exactness of 0 -> coinvariants -> Gamma -> A/2 -> 0 up to order 64", criterion_5, 120),
    (6, "tau compatibility, swap intertwining and tau_e stabilization", criterion_6, 60),
    ("6*", "supplementary: tau colimit isomorphism", criterion_6_colimit, 60),
    (7, "norm chain map equals id + sigma_eps up to order 32", criterion_7, 60),
    (8, "H3 order identity and Kunneth H2 up to order 64", criterion_8, 120),
    (9, "kernel depends only on the 2-primary part", criterion_9, 60),
    (10, "command-line contract", criterion_10, 60),
]


@pytest.mark.parametrize("number,title,fn,budget", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, budget):
    ok, detail, seconds = timed(fn)
    assert record(number, title, ok, detail, seconds, budget), LINES[-1]


if __name__ == "__main__":
    results = []
    for number, title, fn, budget in CRITERIA:
        ok, detail, seconds = timed(fn)
        results.append(record(number, title, ok, detail, seconds, budget))
    sys.exit(0 if all(results) else 1)
