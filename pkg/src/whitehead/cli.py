"""Command-line front end: parse group expressions, run suites, print reports."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from . import __version__
from .abgroup import FgAbGroup, GroupHom, InfiniteEnumeration, SizeCap, default_enum_cap
from .functors import compare_gamma, exterior_square, gamma_presentation, gamma_structural, tor
from .sym2homology import InvolutiveModule, h1, invariants
from .theorems import batch_verify, corollary_suite, kunneth_homology, theorem_h4_suite

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP = 3


class ParseError(ValueError):
    """Malformed group expression; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class SemanticError(ValueError):
    """Well-formed expression with a disallowed modulus or exponent."""


@dataclass(frozen=True)
class Atom:
    modulus: int  # 0 for Z
    count: int = 1

    def __str__(self) -> str:
        base = "Z" if self.modulus == 0 else f"Z/{self.modulus}"
        return base if self.count == 1 else f"{base}^{self.count}"


@dataclass(frozen=True)
class GroupExpression:
    atoms: tuple[Atom, ...]

    def group(self) -> FgAbGroup:
        return FgAbGroup.from_orders([a.modulus for a in self.atoms for _ in range(a.count)])

    def __str__(self) -> str:
        return " + ".join(str(a) for a in self.atoms) if self.atoms else "0"


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<sym>[Z/^+])|(?P<bad>\S))")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while text[pos:].strip():
        m = _TOKEN.match(text, pos)
        kind = m.lastgroup
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group(kind)!r}", text, m.start(kind))
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def parse_group(text: str) -> GroupExpression:
    """Parse ``atom ('+' atom)*`` with atoms ``Z``, ``Z^k``, ``Z/n``, ``Z/n^k``.

    A lone ``0`` denotes the trivial group, so printed forms parse back.
    """
    toks = _tokens(text)
    if [t[1] for t in toks] == ["0"]:
        return GroupExpression(())
    i = 0

    def peek():
        return toks[i] if i < len(toks) else ("end", "", len(text))

    def expect_int() -> tuple[int, int]:
        nonlocal i
        kind, val, pos = peek()
        if kind != "int":
            raise ParseError("expected an integer", text, pos)
        i += 1
        return int(val), pos

    atoms = []
    while True:
        kind, val, pos = peek()
        if val != "Z":
            raise ParseError("expected 'Z'", text, pos)
        i += 1
        modulus = 0
        if peek()[1] == "/":
            i += 1
            modulus, mpos = expect_int()
            if modulus < 2:
                raise SemanticError(f"modulus must be at least 2, got {modulus} at position {mpos}")
        count = 1
        if peek()[1] == "^":
            i += 1
            count, cpos = expect_int()
            if count < 1:
                raise SemanticError(f"exponent must be at least 1, got {count} at position {cpos}")
        atoms.append(Atom(modulus, count))
        kind, val, pos = peek()
        if kind == "end":
            return GroupExpression(tuple(atoms))
        if val != "+":
            raise ParseError("expected '+' or end of input", text, pos)
        i += 1


def format_group(g: FgAbGroup) -> str:
    """Canonical print of a group, parseable by :func:`parse_group`."""
    atoms: list[Atom] = []
    for d in g.invariants:
        if atoms and atoms[-1].modulus == d:
            atoms[-1] = Atom(d, atoms[-1].count + 1)
        else:
            atoms.append(Atom(d))
    return str(GroupExpression(tuple(atoms)))


def _inv(g: FgAbGroup) -> list[int]:
    return list(g.invariants)


def _mat(f: GroupHom) -> list[list[int]]:
    return f.matrix.tolist()


def _cmd_gamma(a: FgAbGroup, args) -> tuple[dict, dict]:
    gv = gamma_structural(a)
    results = {
        "gamma": _inv(gv.group),
        "tensor": _inv(gv.tensor.group),
        "mod2": _inv(gv.phi.cod),
        "psi": _mat(gv.psi),
        "phi": _mat(gv.phi),
        "pairing": _mat(gv.pairing),
    }
    checks = {}
    if args.oracle:
        pres = gamma_presentation(a, args.max_enum)
        results["gamma_presentation"] = _inv(pres.group)
        checks["gamma_oracle"] = compare_gamma(pres, gv, args.max_enum).ok
    return results, checks


def _cmd_tor(a: FgAbGroup, args) -> tuple[dict, dict]:
    tv = tor(a, a)
    module = InvolutiveModule(tv.group, tv.sigma_eps)
    inv, _ = invariants(module)
    results = {
        "tor": _inv(tv.group),
        "sigma_eps": _mat(tv.sigma_eps),
        "invariants": _inv(inv),
        "h1": _inv(h1(module)),
    }
    checks = {"sigma_eps_involution": tv.sigma_eps @ tv.sigma_eps == GroupHom.identity(tv.group)}
    return results, checks


def _cmd_verify(a: FgAbGroup, args) -> tuple[dict, dict]:
    res = theorem_h4_suite(a, oracle=args.oracle, cap=args.max_enum)
    cor = corollary_suite(a, res)
    results = {
        "gamma": _inv(res.gamma.group),
        "tensor": _inv(res.gamma.tensor.group),
        "lambda2": _inv(res.lambda2),
        "kernel": _inv(res.kernel),
        "h1_term": _inv(res.h1_term),
        "exactness": res.report.as_dict(),
        "swap_tensor_kernel": {
            "h1_swap_term": _inv(cor.tensor_term),
            "matches_kernel": cor.matches_kernel,
            "stable_at": cor.stable_at,
            "stabilization": [{"n": n, "torsion": list(t), "h1": list(h)}
                              for n, t, h in cor.stabilization],
        },
    }
    checks = {"exact": res.report.overall, "kernel_iso": res.kernel_iso}
    if args.oracle:
        checks["gamma_oracle"] = bool(res.oracle_ok)
    return results, checks


def _cmd_homology(a: FgAbGroup, args) -> tuple[dict, dict]:
    hom = kunneth_homology(a)
    lam, _ = exterior_square(a)
    results = {"homology": [_inv(hom[n]) for n in range(4)], "lambda2": _inv(lam)}
    return results, {"h2_is_lambda2": hom[2] == lam}


def _cmd_sweep(args) -> tuple[dict, dict, dict]:
    summary = batch_verify(args.max_order, oracle=args.oracle, cap=args.max_enum,
                           workers=args.workers)
    groups = []
    for r in summary.results:
        entry = {"group": format_group(r.group), "invariants": _inv(r.group), "ok": r.ok,
                 **r.details}
        failed = sorted(k for k, v in r.checks.items() if not v)
        if failed:
            entry["failed"] = failed
        groups.append(entry)
    results = {"max_order": args.max_order, "classes": len(summary.results),
               "passed": summary.passed, "groups": groups}
    timings = {format_group(r.group): round(r.seconds, 4) for r in summary.results}
    return results, {"all_groups_pass": summary.ok}, timings


def _human(report: dict) -> str:
    lines = []
    if "input" in report:
        inp = report["input"]
        lines.append(f"A = {inp['canonical']}  invariants {inp['invariants']}")
    res = report["results"]
    if report["command"] == "sweep":
        for g in res["groups"]:
            mark = "ok  " if g["ok"] else "FAIL"
            extra = f"  failed: {', '.join(g['failed'])}" if "failed" in g else ""
            lines.append(f"{mark} {g['group']}  Gamma {g['gamma']}  kernel {g['kernel']}{extra}")
        lines.append(f"{res['passed']}/{res['classes']} classes pass")
    else:
        for key, val in res.items():
            if key == "exactness":
                for node in val["nodes"]:
                    state = "exact" if node["exact"] else "NOT exact"
                    lines.append(f"node {node['index']} {node['group']}: {state}"
                                 f" (ker {node['kernel']}, im {node['image']})")
                    for w, gens in node.get("witnesses", {}).items():
                        lines.append(f"  {w}: {gens}")
            elif key == "homology":
                for n, h in enumerate(val):
                    lines.append(f"H_{n} = {h}")
            elif key == "swap_tensor_kernel":
                lines.append(f"2-primary tensor square: swap H1 {val['h1_swap_term']}, "
                             f"matches kernel {val['matches_kernel']}, stable at n = {val['stable_at']}")
            else:
                lines.append(f"{key}: {val}")
    for key, val in report["checks"].items():
        lines.append(f"check {key}: {'pass' if val else 'FAIL'}")
    lines.append("OK" if report["ok"] else "FAILED")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the machine-format report")
    common.add_argument("--oracle", action="store_true",
                        help="cross-check Gamma against its presentation")
    common.add_argument("--max-enum", type=int, default=None, metavar="N",
                        help="enumeration cap (default from WHITEHEAD_MAX_ENUM or 4096)")
    common.add_argument("--quiet", action="store_true", help="suppress the human report")

    parser = argparse.ArgumentParser(prog="whitehead", parents=[common],
                                     description="Gamma functor and Tor computations on abelian groups.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("gamma", "Gamma(A) with Psi, Phi and the pairing"),
                       ("tor", "Tor(A, A) with its involution"),
                       ("verify", "four-term sequence and kernel checks"),
                       ("homology", "integral homology in degrees 0..3")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("expr", help='group expression, e.g. "Z/4 + Z/6 + Z"')
    p = sub.add_parser("sweep", parents=[common], help="verify every group up to an order")
    p.add_argument("--max-order", type=int, required=True, metavar="N")
    p.add_argument("--workers", type=int, default=1, metavar="K")
    return parser


_COMMANDS = {"gamma": _cmd_gamma, "tor": _cmd_tor, "verify": _cmd_verify, "homology": _cmd_homology}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.max_enum is None:
        args.max_enum = default_enum_cap()
    start = time.perf_counter()
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "whitehead", "version": __version__},
        "command": args.command,
    }
    try:
        if args.command == "sweep":
            results, checks, timings = _cmd_sweep(args)
        else:
            expr = parse_group(args.expr)
            a = expr.group()
            report["input"] = {"expression": args.expr, "canonical": format_group(a),
                               "invariants": _inv(a)}
            results, checks = _COMMANDS[args.command](a, args)
            timings = {}
    except (ParseError, SemanticError) as e:
        kind = "syntax error" if isinstance(e, ParseError) else "semantic error"
        print(f"whitehead: {kind}: {e}", file=err)
        return EXIT_USAGE
    except (SizeCap, InfiniteEnumeration) as e:
        print(f"whitehead: {e}", file=err)
        return EXIT_CAP
    except ValueError as e:
        print(f"whitehead: {e}", file=err)
        return EXIT_USAGE
    report["results"] = results
    report["checks"] = checks
    report["ok"] = all(checks.values())
    report["timing"] = {"seconds": round(time.perf_counter() - start, 4), **({"groups": timings} if timings else {})}
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True), file=out)
    elif not args.quiet:
        print(_human(report), file=out)
    return EXIT_OK if report["ok"] else EXIT_CHECK_FAILED


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
