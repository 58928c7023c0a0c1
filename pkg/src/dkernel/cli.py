"""Command line entry point: ``dkernel <command> --spec FILE [flags]``.

Every command prints one JSON report (``--pretty`` for a readable
rendering).  Exit status is 0 when the verdict is true, 1 when it is
false and 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import dgroup, dme, hopf, ore, prolongation
from .derivation import fit_magic_constant, u_sequence
from .groebner import DEFAULT_MAX_BASIS, DEFAULT_MAX_DEGREE, Ideal, ResourceExhausted, resource_limits
from .parsing import ParseError, parse_element
from .ring import embed
from .specfile import SpecDocument, SpecError, bundled_specs, load_spec
from .verdict import Verdict


class CommandError(Exception):
    pass


# ---------- helpers ----------


def _v(verdict: Verdict) -> dict:
    return {"ok": verdict.ok, "certificate": verdict.certificate, **({"details": verdict.details} if verdict.details else {})}


def _element(doc: SpecDocument, text: str, what: str, algebra=None):
    A = algebra if algebra is not None else doc.algebra
    try:
        return parse_element(text, A)
    except ParseError as exc:
        raise CommandError(f"--{what}: {exc}") from None


def _a(doc, args):
    return _element(doc, args.a if args.a is not None else "1", "a")


def _ideal(doc: SpecDocument, args, flag="ideal", cand_flag="candidate") -> Ideal:
    text = getattr(args, flag, None)
    name = getattr(args, cand_flag, None)
    if name is not None:
        if name not in doc.candidates:
            raise CommandError(f"no candidate named {name!r}")
        return doc.candidates[name]
    if text is None:
        raise CommandError(f"give --{flag} or --{cand_flag}")
    gens = [] if text.strip() == "0" else [_element(doc, g, flag) for g in text.split(",")]
    return Ideal(doc.algebra, gens, name=text)


def _point(doc: SpecDocument, text: str | None) -> dict:
    if not text:
        raise CommandError("give --point NAME=VALUE,...")
    S = doc.algebra.scalars()
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise CommandError(f"bad point coordinate {item!r}")
        k, v = (s.strip() for s in item.split("=", 1))
        out[k] = _element(doc, v, "point", S)
    return out


def _needs(doc: SpecDocument, *names):
    try:
        doc.require(*names)
    except SpecError as exc:
        raise CommandError(str(exc)) from None


# ---------- commands ----------


def cmd_prolong(doc, args):
    I = _ideal(doc, args) if (args.ideal or args.candidate) else Ideal(doc.algebra, [])
    tau = prolongation.prolongation_ideal(I)
    return True, {"ideal": str(I), "prolongation": [str(g) for g in tau.generators], "variables": list(tau.algebra.variables)}


def _affine(doc):
    _needs(doc, "delta")
    if doc.delta.is_twisted:
        raise CommandError("D-varieties need an untwisted delta")
    return prolongation.AffineDVariety.from_derivation(doc.delta)


def cmd_d_subvariety(doc, args):
    V = _affine(doc)
    J = _ideal(doc, args)
    v = prolongation.is_d_subvariety(V, J)
    oracle = prolongation.is_d_subvariety_oracle(V, J)
    if oracle != v.ok:
        raise CommandError("internal disagreement between the two D-subvariety checks")
    return v.ok, {"ideal": str(J), "verdict": _v(v), "oracle": oracle}


def cmd_d_point(doc, args):
    V = _affine(doc)
    p = _point(doc, args.point)
    ok = prolongation.is_constant_d_point(V, p)
    return ok, {"point": {k: str(v) for k, v in p.items()}, "section_values": {
        k: str(prolongation.point_map(doc.algebra, p)(s)) for k, s in V.section.items()}}


def cmd_well_defined(doc, args):
    _needs(doc, "delta")
    v = doc.delta.check_well_defined()
    return v.ok, {"delta": {k: str(x) for k, x in doc.delta.images.items() if k in doc.algebra.variables}, "verdict": _v(v)}


def cmd_d_group(doc, args):
    _needs(doc, "dvariety")
    v = dgroup.check_d_group(doc.dvariety)
    return v.ok, {"sbar": [[str(e) for e in row] for row in doc.dvariety.sbar], "verdict": _v(v)}


def cmd_twisted(doc, args):
    _needs(doc, "dvariety")
    a = _a(doc, args)
    v = dgroup.check_twisted_d_group(doc.dvariety, a)
    return v.ok, {"a": str(a), "sbar": [[str(e) for e in row] for row in doc.dvariety.sbar], "verdict": _v(v)}


def cmd_coderivation(doc, args):
    _needs(doc, "hopf", "delta")
    a = _a(doc, args)
    v = hopf.check_a_coderivation(doc.hopf, doc.delta, a)
    return v.ok, {"a": str(a), "verdict": _v(v)}


def cmd_hopf_axioms(doc, args):
    _needs(doc, "hopf")
    checks = hopf.check_hopf_axioms(doc.hopf)
    return all(checks.values()), {
        "coproduct": {k: str(doc.hopf.coproduct.images[k]) for k in doc.algebra.variables},
        "checks": {k: _v(v) for k, v in checks.items()},
    }


def _expected_c(doc, args):
    if args.c is None:
        return None
    return _element(doc, args.c, "c")


def cmd_magic(doc, args):
    _needs(doc, "delta")
    a = _a(doc, args)
    fit = fit_magic_constant(doc.delta, a)
    if fit is None:
        return False, {"a": str(a), "c": None}
    ok = fit.residual_zero
    expected = _expected_c(doc, args)
    out = {"a": str(a), "c": str(fit.c), "underdetermined": fit.underdetermined, "residual_zero": fit.residual_zero}
    if expected is not None:
        out["matches_c"] = fit.c == expected
        ok = ok and out["matches_c"]
    return ok, out


def cmd_pi(doc, args):
    _needs(doc, "dvariety")
    a = _a(doc, args)
    r = dgroup.build_pi(doc.dvariety, a)
    out = {
        "a": str(a),
        "map": r.images(),
        "c": str(r.fit.c),
        "underdetermined": r.fit.underdetermined,
        "reports": {
            "homomorphism": _v(r.homomorphism),
            "coproduct_of_delta_a": _v(r.eq_coproduct),
            "magic_constant": _v(r.magic),
            "d_morphism": _v(r.d_morphism),
        },
    }
    ok = r.ok
    expected = _expected_c(doc, args)
    if expected is not None:
        out["matches_c"] = r.fit.c == expected
        ok = ok and out["matches_c"]
    return ok, out


def cmd_useq(doc, args):
    _needs(doc, "hopf", "delta")
    a = _a(doc, args)
    seq = u_sequence(doc.delta, a, max(args.m, 2))
    H = doc.hopf
    checks = {}
    for m in (1, 2):
        u = seq[m]
        expected = embed(u, 1, 2) + embed(a**m, 1, 2) * embed(u, 2, 2)
        lhs = H.delta(u)
        checks[f"u{m}"] = _v(Verdict(lhs == expected, None if lhs == expected else f"u{m}", {} if lhs == expected else {"lhs": str(lhs)}))
    return all(c["ok"] for c in checks.values()), {"u": [str(u) for u in seq[: args.m + 1]], "coproducts": checks}


def cmd_ore_mul(doc, args):
    _needs(doc, "ore")
    R = doc.ore
    try:
        p, q = R(args.p or "0"), R(args.q or "0")
    except ParseError as exc:
        raise CommandError(str(exc)) from None
    return True, {"p": str(p), "q": str(q), "product": str(p * q)}


def cmd_ore_inner(doc, args):
    _needs(doc, "ore")
    R = doc.ore
    f = _element(doc, args.f or "0", "f")
    w = ore.detect_inner(R, f)
    if w is None:
        return False, {"f": str(f), "witness": None}
    out = {"f": str(f), "witness": str(w.a), "verified": w.verified}
    if not w.verified:
        return False, out
    ch = ore.change_of_variable_inner(R, w.a)
    out["change_of_variable"] = {"t": f"{R.name} - ({w.a})", "commutation": _v(ch.verdict)}
    return ch.verdict.ok, out


def cmd_ore_shape(doc, args):
    _needs(doc, "ore", "hopf")
    if args.coproduct is not None:
        dx = _element(doc, args.coproduct, "coproduct", ore.doubled_algebra(doc.ore))
    elif doc.ore_coproduct is not None:
        dx = doc.ore_coproduct
    else:
        raise CommandError("no coproduct given ([ore] coproduct or --coproduct)")
    rep = ore.check_coproduct_shape(doc.ore, doc.hopf, dx)
    return rep.conforming, {"coproduct": str(dx), "shape": rep.as_dict()}


def cmd_ore_identity(doc, args):
    _needs(doc, "ore", "hopf")
    a = _a(doc, args)
    T = doc.hopf.tensor2
    w = _element(doc, args.w or "0", "w", T)
    v = ore.check_coderivation_identity(doc.ore, doc.hopf, a, w)
    return v.ok, {"a": str(a), "w": str(w), "verdict": _v(v)}


def _candidate(doc, name):
    if name is None:
        raise CommandError("give --candidate NAME")
    if name not in doc.candidates:
        raise CommandError(f"no candidate named {name!r}")
    return dme.DeltaIdealCandidate(doc.candidates[name], name=name)


def _delta(doc):
    _needs(doc, "delta")
    return doc.delta


def cmd_dme_delta_ideal(doc, args):
    I = _ideal(doc, args)
    v = dme.is_delta_ideal(I, _delta(doc))
    return v.ok, {"ideal": str(I), "verdict": _v(v)}


def cmd_dme_sigma_delta_ideal(doc, args):
    I = _ideal(doc, args)
    delta = _delta(doc)
    sigma = doc.sigma if doc.sigma is not None else hopf.AlgebraMap.identity(doc.algebra)
    v = dme.is_sigma_delta_ideal(I, sigma, delta)
    return v.ok, {"ideal": str(I), "verdict": _v(v)}


def _family(doc, args, exclude):
    names = args.among.split(",") if args.among else [n for n in doc.candidates if n != exclude]
    return [_candidate(doc, n.strip()) for n in names]


def cmd_dme_locally_closed(doc, args):
    P = _candidate(doc, args.candidate)
    res = dme.check_locally_closed_among(P, _family(doc, args, P.name), _delta(doc))
    return res.ok, {"P": P.label, **res.as_dict()}


def cmd_dme_rationality(doc, args):
    P = _candidate(doc, args.candidate)
    rep = dme.check_rationality_witness(P, _element(doc, args.p or "0", "p"), _element(doc, args.q or "1", "q"), _delta(doc))
    # true means the witness is consistent with δ-rationality (no refutation)
    return not rep.refutes, {"P": P.label, **rep.as_dict()}


def cmd_dme_primitivity(doc, args):
    P = _candidate(doc, args.candidate)
    if args.m is None:
        raise CommandError("give --m NAME (a candidate) or generators")
    m = doc.candidates[args.m] if args.m in doc.candidates else _ideal(doc, argparse.Namespace(ideal=args.m, candidate=None))
    v = dme.check_primitivity_witness(P, m, _family(doc, args, P.name), _delta(doc))
    return v.ok, {"P": P.label, "m": str(m), "verdict": _v(v)}


COMMANDS = {
    ("prolong",): cmd_prolong,
    ("check", "d-subvariety"): cmd_d_subvariety,
    ("check", "d-point"): cmd_d_point,
    ("check", "well-defined"): cmd_well_defined,
    ("check", "d-group"): cmd_d_group,
    ("check", "twisted"): cmd_twisted,
    ("check", "coderivation"): cmd_coderivation,
    ("check", "hopf-axioms"): cmd_hopf_axioms,
    ("magic",): cmd_magic,
    ("pi",): cmd_pi,
    ("useq",): cmd_useq,
    ("ore", "mul"): cmd_ore_mul,
    ("ore", "inner"): cmd_ore_inner,
    ("ore", "shape"): cmd_ore_shape,
    ("ore", "identity"): cmd_ore_identity,
    ("dme", "delta-ideal"): cmd_dme_delta_ideal,
    ("dme", "sigma-delta-ideal"): cmd_dme_sigma_delta_ideal,
    ("dme", "locally-closed"): cmd_dme_locally_closed,
    ("dme", "rationality"): cmd_dme_rationality,
    ("dme", "primitivity"): cmd_dme_primitivity,
}

_EXTRA = {
    "prolong": ["ideal", "candidate"],
    "d-subvariety": ["ideal", "candidate"],
    "d-point": ["point"],
    "useq": ["m_int"],
    "mul": ["p", "q"],
    "inner": ["f"],
    "shape": ["coproduct"],
    "identity": ["w"],
    "delta-ideal": ["ideal", "candidate"],
    "sigma-delta-ideal": ["ideal", "candidate"],
    "locally-closed": ["candidate", "among"],
    "rationality": ["candidate", "p", "q"],
    "primitivity": ["candidate", "m", "among"],
}

_HELP = {
    "ideal": "ideal generators, comma separated ('0' for the zero ideal)",
    "candidate": "name of an ideal from the [candidates] block",
    "point": "point coordinates as NAME=VALUE,...",
    "p": "first operand / numerator",
    "q": "second operand / denominator",
    "f": "base element whose f - sigma(f) should be a unit",
    "coproduct": "coproduct of the Ore variable (overrides the spec)",
    "w": "element of R⊗R in the corrected coderivation identity",
    "among": "comma separated candidate names (default: all others)",
    "m": "maximal ideal: candidate name or generators",
}


def _add_extra(p: argparse.ArgumentParser, name: str):
    for flag in _EXTRA.get(name, []):
        if flag == "m_int":
            p.add_argument("--m", type=int, default=2, help="length of the u-sequence")
        else:
            p.add_argument(f"--{flag}", help=_HELP[flag])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="spec file path or bundled spec name")
    common.add_argument("--a", help="group-like element a (default 1)")
    common.add_argument("--c", help="expected value of the magic constant")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--pretty", dest="format", action="store_const", const="pretty", help="human readable report")
    common.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE, help="Groebner degree cap (default %(default)s)")
    common.add_argument("--max-basis", type=int, default=DEFAULT_MAX_BASIS, help="Groebner basis size cap (default %(default)s)")

    ap = argparse.ArgumentParser(prog="dkernel", description="Exact checks for differential algebra, D-groups and Hopf-Ore data.")
    sub = ap.add_subparsers(dest="command", required=True)
    groups: dict[str, argparse._SubParsersAction] = {}
    for key in COMMANDS:
        if len(key) == 1:
            p = sub.add_parser(key[0], parents=[common])
            _add_extra(p, key[0])
        else:
            if key[0] not in groups:
                gp = sub.add_parser(key[0])
                groups[key[0]] = gp.add_subparsers(dest="subcommand", required=True)
            p = groups[key[0]].add_parser(key[1], parents=[common])
            _add_extra(p, key[1])
    sub.add_parser("list-specs", help="print the bundled spec names")
    return ap


def _pretty(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k in sorted(report):
        v = report[k]
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_pretty(v, indent + 1))
        elif isinstance(v, list):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(f"{pad}  - {json.dumps(item, ensure_ascii=False) if not isinstance(item, str) else item}")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(x for x in lines if x)


def _run(doc_source, key, args) -> tuple[int, dict]:
    report = {"command": " ".join(key), "spec": args.spec, "resource_events": []}
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "subcommand", "spec", "format") and v is not None}
    report["flags"] = {k: str(v) for k, v in sorted(flags.items())}
    start = time.perf_counter()
    code = 2
    try:
        doc = doc_source()
        with resource_limits(args.max_degree, args.max_basis):
            ok, result = COMMANDS[key](doc, args)
        report["verdict"] = bool(ok)
        report["result"] = result
        code = 0 if ok else 1
    except ResourceExhausted as exc:
        report["verdict"] = None
        report["error"] = str(exc)
        report["resource_events"].append({"kind": "exhausted", "message": str(exc)})
    except (CommandError, SpecError, ParseError, FileNotFoundError, ValueError, KeyError, ZeroDivisionError) as exc:
        report["verdict"] = None
        report["error"] = str(exc).strip("'\"") if isinstance(exc, KeyError) else str(exc)
    report["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return code, report


def _key(args):
    return (args.command,) if (args.command,) in COMMANDS else (args.command, args.subcommand)


def execute(args) -> tuple[int, dict]:
    """Run parsed command-line arguments; returns ``(exit code, report)``."""

    def load():
        if not args.spec:
            raise CommandError("--spec is required")
        return load_spec(args.spec)

    return _run(load, _key(args), args)


def run_command(doc: SpecDocument, command: str, flags: dict | None = None) -> tuple[int, dict]:
    """Run ``command`` (e.g. ``"check twisted"``) on an already parsed document.

    ``flags`` maps option names (``a``, ``c``, ``ideal``, ...) to values.
    """
    argv = command.split() + ["--spec", doc.source or "<document>"]
    args = build_parser().parse_args(argv)
    for k, v in (flags or {}).items():
        k = k.replace("-", "_")
        if not hasattr(args, k):
            raise KeyError(f"unknown flag {k!r} for {command!r}")
        setattr(args, k, v)
    return _run(lambda: doc, _key(args), args)


def render(report: dict, fmt: str | None) -> str:
    if fmt == "pretty":
        return _pretty(report)
    return json.dumps(report, sort_keys=True, ensure_ascii=False)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "list-specs":
        print("\n".join(bundled_specs()))
        return 0
    code, report = execute(args)
    print(render(report, getattr(args, "format", None)))
    return code


if __name__ == "__main__":
    sys.exit(main())
