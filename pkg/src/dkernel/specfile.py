"""Line-oriented ``.spec`` files.

::

    # comments start with '#'
    [algebra]
    variables = x, y
    parameters = c
    units = x                 # or "a*d - b*c as det_inv"
    relation = ...            # repeatable

    [delta]                   # δ on coordinate variables
    x = x*y
    [sigma]                   # optional twist
    [hopf]                    # matrix = [[..]] or coproduct(v)/counit(v)/antipode(v) = ...
    [section]                 # matrix = [[..]]: the map s̄ (else δ of the group matrix)
    [ore]                     # variable, sigma_inverse(v) = ..., coproduct = ...
    [candidates]              # NAME = generators (0 for the zero ideal)

Polynomials use ``^`` for powers; ``v@1``/``v@2`` address tensor factors.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from pathlib import Path

from .derivation import Derivation
from .dgroup import MatrixDVariety
from .groebner import Ideal
from .hopf import HopfData, MatrixGroupSpec, NotAGroup, hopf_from_matrix_group
from .ore import OreRing, doubled_algebra
from .parsing import ParseError, _prepare, parse_element, parse_node
from .ring import AlgebraElement, AlgebraMap, PresentedAlgebra, tensor_power

SECTIONS = ("algebra", "delta", "sigma", "hopf", "section", "ore", "candidates")
BUNDLED = Path(__file__).parent / "specs"

_HEADER = re.compile(r"^\[\s*([A-Za-z_]+)\s*\]$")
_CALL_KEY = re.compile(r"^([A-Za-z_]+)\(\s*([^)]*?)\s*\)$")


class SpecError(ParseError):
    pass


@dataclass
class Entry:
    key: str
    value: str
    line: int
    col: int


@dataclass
class SpecDocument:
    sections: dict[str, list[Entry]]
    algebra: PresentedAlgebra
    delta: Derivation | None = None
    sigma: AlgebraMap | None = None
    group: MatrixGroupSpec | None = None
    hopf: HopfData | None = None
    dvariety: MatrixDVariety | None = None
    ore: OreRing | None = None
    ore_coproduct: AlgebraElement | None = None
    candidates: dict[str, Ideal] = field(default_factory=dict)
    source: str | None = None

    def require(self, *names: str):
        for n in names:
            if getattr(self, n) is None:
                raise SpecError(f"spec has no {n} data for this command")


def _split_top(text: str) -> list[str]:
    """Split on commas outside brackets."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    last = "".join(cur).strip()
    if last or out:
        out.append(last)
    return [x for x in out if x]


def read_sections(text: str) -> dict[str, list[Entry]]:
    sections: dict[str, list[Entry]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        m = _HEADER.match(stripped)
        if m:
            current = m.group(1).lower()
            if current not in SECTIONS:
                raise SpecError(f"unknown section [{current}]", lineno, line.index("[") + 1)
            if current in sections:
                raise SpecError(f"duplicate section [{current}]", lineno, 1)
            sections[current] = []
            continue
        if current is None:
            raise SpecError("entry outside of a section", lineno, 1)
        if "=" not in line:
            raise SpecError("expected 'key = value'", lineno, len(line) - len(line.lstrip()) + 1)
        key, value = line.split("=", 1)
        col = len(key) + 2 + (len(value) - len(value.lstrip()))
        key = " ".join(key.split())
        value = value.strip()
        if not key:
            raise SpecError("missing key", lineno, 1)
        sections[current].append(Entry(key, value, lineno, col))
    return sections


def _expr(entry: Entry, algebra: PresentedAlgebra, text: str | None = None, offset: int = 0) -> AlgebraElement:
    text = entry.value if text is None else text
    try:
        return parse_element(text, algebra)
    except ParseError as exc:
        col = entry.col + offset + ((exc.col or 1) - 1)
        raise SpecError(exc.message, entry.line, col) from None
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        raise SpecError(str(exc), entry.line, entry.col) from None


def _matrix(entry: Entry, algebra: PresentedAlgebra):
    try:
        tree = ast.parse(_prepare(entry.value), mode="eval").body
    except SyntaxError as exc:
        raise SpecError("malformed matrix", entry.line, entry.col + (exc.offset or 1) - 1) from None
    if not isinstance(tree, ast.List) or not all(isinstance(r, ast.List) for r in tree.elts):
        raise SpecError("matrix must be a list of rows [[..], ..]", entry.line, entry.col)
    rows = []
    for r in tree.elts:
        row = []
        for node in r.elts:
            try:
                row.append(parse_node(node, algebra))
            except ParseError as exc:
                raise SpecError(exc.message, entry.line, entry.col + node.col_offset) from None
        rows.append(row)
    return rows


def _names(entry: Entry) -> list[str]:
    names = _split_top(entry.value)
    for n in names:
        if not re.fullmatch(r"[A-Za-z_]\w*", n):
            raise SpecError(f"bad name {n!r}", entry.line, entry.col + entry.value.find(n))
    return names


def _build_algebra(entries: list[Entry]) -> PresentedAlgebra:
    variables, parameters, relations, units = [], [], [], []
    for e in entries:
        if e.key == "variables":
            variables += _names(e)
        elif e.key == "parameters":
            parameters += _names(e)
        elif e.key in ("relation", "relations"):
            relations.append(e)
        elif e.key == "units":
            units.append(e)
        else:
            raise SpecError(f"unknown key {e.key!r} in [algebra]", e.line, 1)
    if not variables:
        line = entries[0].line if entries else None
        raise SpecError("no variables", line, 1 if line else None)
    try:
        A = PresentedAlgebra(variables, parameters)
    except ValueError as exc:
        raise SpecError(str(exc), entries[0].line, 1) from None
    for e in units:
        for item in _split_top(e.value):
            m = re.fullmatch(r"(.*\S)\s+as\s+([A-Za-z_]\w*)", item)
            expr, name = (m.group(1), m.group(2)) if m else (item, None)
            f = _expr(e, A, expr, e.value.find(expr))
            try:
                A = A.localize(f, name)
            except (ValueError, ZeroDivisionError) as exc:
                raise SpecError(str(exc), e.line, e.col) from None
    rels = []
    for e in relations:
        for item in _split_top(e.value):
            rels.append(_expr(e, A, item, e.value.find(item)).poly)
    if rels:
        A = PresentedAlgebra(A.variables, A.parameters, list(A.relations) + rels, A.units)
    if not A.is_proper():
        raise SpecError("relations generate the unit ideal", entries[0].line, 1)
    return A


def _images(entries: list[Entry], A: PresentedAlgebra, section: str, target: PresentedAlgebra | None = None):
    target = A if target is None else target
    out = {}
    for e in entries:
        if e.key not in A.index:
            raise SpecError(f"unknown variable {e.key!r} in [{section}]", e.line, 1)
        out[e.key] = _expr(e, target)
    return out


def parse_spec(text: str, source: str | None = None) -> SpecDocument:
    sections = read_sections(text)
    if "algebra" not in sections:
        raise SpecError("no variables (missing [algebra] section)", 1, 1)
    A = _build_algebra(sections["algebra"])
    doc = SpecDocument(sections, A, source=source)

    def fail(sec, msg):
        entries = sections.get(sec) or []
        line = entries[0].line if entries else None
        return SpecError(msg, line, 1 if line else None)

    if "sigma" in sections:
        imgs = {v: A.gen(v) for v in A.variables if A.inverse_of(v) is None}
        imgs.update(_images(sections["sigma"], A, "sigma"))
        try:
            doc.sigma = AlgebraMap(A, A, imgs)
        except (KeyError, ValueError) as exc:
            raise fail("sigma", str(exc)) from None
        v = doc.sigma.check_well_defined()
        if not v:
            raise fail("sigma", f"sigma is not well defined: {v.certificate}")

    if "delta" in sections:
        imgs = _images(sections["delta"], A, "delta")
        try:
            doc.delta = Derivation(A, imgs, doc.sigma)
        except (KeyError, ValueError) as exc:
            raise fail("delta", str(exc)) from None
        v = doc.delta.check_well_defined()
        if not v:
            raise fail("delta", f"delta is not well defined: {v.certificate}")

    if "hopf" in sections:
        entries = sections["hopf"]
        mats = [e for e in entries if e.key == "matrix"]
        try:
            if mats:
                if len(entries) != 1:
                    raise fail("hopf", "give either a matrix or explicit images, not both")
                doc.group = MatrixGroupSpec(A, _matrix(mats[0], A))
                doc.hopf = hopf_from_matrix_group(doc.group)
            else:
                T, _ = tensor_power(A, 2)
                maps = {"coproduct": {}, "counit": {}, "antipode": {}}
                targets = {"coproduct": T, "counit": A.scalars(), "antipode": A}
                for e in entries:
                    m = _CALL_KEY.match(e.key)
                    if not m or m.group(1) not in maps:
                        raise SpecError(f"unknown key {e.key!r} in [hopf]", e.line, 1)
                    kind, var = m.groups()
                    if var not in A.index or var in A.parameters:
                        raise SpecError(f"unknown variable {var!r} in [hopf]", e.line, 1)
                    maps[kind][var] = _expr(e, targets[kind])
                doc.hopf = HopfData.from_images(A, maps["coproduct"], maps["counit"], maps["antipode"])
                for name in ("coproduct", "counit", "antipode"):
                    v = getattr(doc.hopf, name).check_well_defined()
                    if not v:
                        raise fail("hopf", f"{name} is not well defined: {v.certificate}")
        except SpecError:
            raise
        except (NotAGroup, KeyError, ValueError) as exc:
            raise fail("hopf", str(exc)) from None

    if "section" in sections:
        if doc.group is None:
            raise fail("section", "[section] needs a matrix group in [hopf]")
        entries = sections["section"]
        if len(entries) != 1 or entries[0].key != "matrix":
            raise fail("section", "[section] takes a single 'matrix = [[..]]' entry")
        sbar = _matrix(entries[0], A)
        try:
            doc.dvariety = MatrixDVariety(doc.group, sbar)
        except ValueError as exc:
            raise fail("section", str(exc)) from None
        if doc.delta is None:
            doc.delta = doc.dvariety.derivation
        elif doc.delta.is_twisted or any(doc.delta(v) != doc.dvariety.derivation(v) for v in A.variables):
            raise fail("section", "[section] disagrees with [delta]")
    elif doc.group is not None and doc.delta is not None and not doc.delta.is_twisted:
        doc.dvariety = MatrixDVariety(doc.group, derivation=doc.delta)

    if "ore" in sections:
        name = "x"
        inv_entries, co_entry = [], None
        for e in sections["ore"]:
            m = _CALL_KEY.match(e.key)
            if e.key == "variable":
                name = e.value
            elif m and m.group(1) == "sigma_inverse":
                inv_entries.append((m.group(2), e))
            elif e.key == "coproduct":
                co_entry = e
            else:
                raise SpecError(f"unknown key {e.key!r} in [ore]", e.line, 1)
        sig_inv = None
        if inv_entries:
            imgs = {v: A.gen(v) for v in A.variables if A.inverse_of(v) is None}
            for var, e in inv_entries:
                if var not in A.index:
                    raise SpecError(f"unknown variable {var!r} in [ore]", e.line, 1)
                imgs[var] = _expr(e, A)
            sig_inv = AlgebraMap(A, A, imgs)
        try:
            doc.ore = OreRing(A, doc.sigma, sig_inv, doc.delta, name)
        except ValueError as exc:
            raise fail("ore", str(exc)) from None
        if co_entry is not None:
            doc.ore_coproduct = _expr(co_entry, doubled_algebra(doc.ore))

    for e in sections.get("candidates", []):
        gens = [] if e.value.strip() == "0" else [_expr(e, A, g, e.value.find(g)) for g in _split_top(e.value)]
        doc.candidates[e.key] = Ideal(A, gens, name=e.key)
    return doc


def format_spec(doc: SpecDocument) -> str:
    """Canonical text: known sections in fixed order, one ``key = value`` per line."""
    out = []
    for sec in SECTIONS:
        if sec not in doc.sections:
            continue
        if out:
            out.append("")
        out.append(f"[{sec}]")
        for e in doc.sections[sec]:
            out.append(f"{e.key} = {' '.join(e.value.split())}")
    return "\n".join(out) + "\n"


def resolve_spec_path(name: str) -> Path:
    """A file path, or the stem of a bundled spec (``e_tc``)."""
    p = Path(name)
    if p.is_file():
        return p
    for cand in (BUNDLED / name, BUNDLED / f"{name}.spec"):
        if cand.is_file():
            return cand
    raise FileNotFoundError(f"no spec file {name!r}")


def load_spec(name: str) -> SpecDocument:
    path = resolve_spec_path(name)
    return parse_spec(path.read_text(encoding="utf-8"), str(path))


def bundled_specs() -> list[str]:
    return sorted(p.stem for p in BUNDLED.glob("*.spec"))
