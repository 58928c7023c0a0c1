"""Exact sparse polynomials and finitely presented commutative algebras.

A :class:`Poly` is a dict from exponent tuples to :class:`fractions.Fraction`
coefficients over a fixed number of variables.  A :class:`PresentedAlgebra`
names those variables, marks some of them as formal parameters, and carries
a relation ideal; its elements (:class:`AlgebraElement`) always hold the
Groebner normal form of their representative, so equality is structural.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exp = tuple  # tuple[int, ...]

# ---------- monomial orders ----------


def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e):
    return e


class MonomialOrder:
    """A monomial order given by a sort key on exponent tuples (bigger is larger)."""

    def __init__(self, name, key):
        self.name = name
        self.key = key

    def __repr__(self):
        return f"MonomialOrder({self.name})"

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


GREVLEX = MonomialOrder("grevlex", grevlex_key)
LEX = MonomialOrder("lex", lex_key)


def elimination_order(eliminate: Iterable[int]) -> MonomialOrder:
    """Block order: total degree in ``eliminate`` first, then grevlex."""
    idx = tuple(sorted(set(eliminate)))

    def key(e):
        return (sum(e[i] for i in idx), grevlex_key(e))

    return MonomialOrder(f"elim{idx}", key)


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


# ---------- polynomials ----------


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not supported")
    return Fraction(c)


class Poly:
    """Sparse polynomial with exact rational coefficients in ``nvars`` variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        if terms:
            self.terms = {e: c for e, c in terms.items() if c != 0}
        else:
            self.terms = {}

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def constant(cls, nvars, c):
        c = _as_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, e, c=1):
        c = _as_fraction(c)
        return cls._raw(len(e), {tuple(e): c} if c else {})

    def copy(self):
        return Poly._raw(self.nvars, dict(self.terms))

    # -- predicates --
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def support(self) -> set[int]:
        """Indices of variables that occur."""
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return used

    # -- arithmetic --
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live over different variable tables")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Poly._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = _as_fraction(c)
        if not c:
            return Poly(self.nvars)
        return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if other.nvars != self.nvars:
            raise ValueError("polynomials live over different variable tables")
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        terms: dict = {}
        get = terms.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = get(e, 0) + c1 * c2
        return Poly._raw(self.nvars, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def mul_term(self, e, c):
        return Poly._raw(
            self.nvars,
            {tuple(x + y for x, y in zip(m, e)): v * c for m, v in self.terms.items()},
        )

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self.terms == Poly.constant(self.nvars, other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- order-dependent --
    def leading_term(self, order: MonomialOrder = GREVLEX):
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def leading_monomial(self, order: MonomialOrder = GREVLEX):
        return max(self.terms, key=order.key)

    def monic(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            return self
        _, c = self.leading_term(order)
        return self.scale(1 / c)

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- calculus and substitution --
    def diff(self, i: int) -> Poly:
        terms = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                terms[tuple(f)] = c * k
        return Poly._raw(self.nvars, terms)

    def substitute(self, images: Sequence[Poly], nvars: int | None = None) -> Poly:
        """Replace variable ``i`` by ``images[i]`` (all images share one table)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if nvars is None:
            nvars = images[0].nvars if images else 0
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            p = powers.get(key)
            if p is None:
                p = images[i] if k == 1 else power(i, k - 1) * images[i]
                powers[key] = p
            return p

        out = Poly(nvars)
        acc: dict = {}
        for e, c in self.terms.items():
            term = Poly.constant(nvars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
                    if not term.terms:
                        break
            for m, v in term.terms.items():
                acc[m] = acc.get(m, 0) + v
        out.terms = {m: v for m, v in acc.items() if v}
        return out

    def rename(self, index_map: Sequence[int], nvars: int) -> Poly:
        """Move variable ``i`` to position ``index_map[i]`` in a table of size ``nvars``."""
        terms = {}
        for e, c in self.terms.items():
            f = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    f[index_map[i]] += k
            terms[tuple(f)] = terms.get(tuple(f), 0) + c
        return Poly(nvars, terms)

    def extend(self, extra: int) -> Poly:
        """Append ``extra`` unused variables at the end of the table."""
        z = (0,) * extra
        return Poly._raw(self.nvars + extra, {e + z: c for e, c in self.terms.items()})

    def to_str(self, names: Sequence[str], order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            out.append((sign, body))
        first_sign, first = out[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Poly({self.to_str([f'v{i}' for i in range(self.nvars)])})"


# ---------- presented algebras ----------


class PresentedAlgebra:
    """``k[params][variables] / (relations)`` with declared units.

    ``variables`` are the coordinate variables (inverse variables of declared
    units included); ``parameters`` are delta-constant formal scalars.  The
    table order is variables first, then parameters.  Instances are treated as
    immutable; :meth:`localize` and :func:`tensor_power` build new ones.
    """

    def __init__(
        self,
        variables: Sequence[str],
        parameters: Sequence[str] = (),
        relations: Iterable = (),
        units: Iterable = (),
    ):
        names = list(variables) + list(parameters)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for n in names:
            if not n or n[0].isdigit():
                raise ValueError(f"bad variable name {n!r}")
        self.variables = tuple(variables)
        self.parameters = tuple(parameters)
        self.names = tuple(names)
        self.nvars = len(names)
        self.index = {n: i for i, n in enumerate(names)}
        # parsing relation text multiplies elements, which reduces modulo relations
        self.relations = ()
        self._gb = None
        self._lock = threading.RLock()
        rels = []
        for r in relations:
            p = self._to_poly(r)
            if p:
                rels.append(p)
        unit_list = []
        for f, inv in units:
            fp = self._to_poly(f)
            if inv not in self.index:
                raise ValueError(f"unknown inverse variable {inv!r}")
            rel = fp * Poly.variable(self.nvars, self.index[inv]) - 1
            if rel not in rels:
                rels.append(rel)
            unit_list.append((fp, inv))
        self.relations = tuple(rels)
        self.units = tuple(unit_list)
        # set by tensor_power on the algebras it builds
        self.tensor_base: tuple[PresentedAlgebra, int] | None = None
        self._tensor_cache: dict = {}
        self._scalars = None

    # -- construction helpers --
    @classmethod
    def free(cls, variables, parameters=()):
        return cls(variables, parameters)

    def _to_poly(self, x) -> Poly:
        if isinstance(x, AlgebraElement):
            if x.algebra is not self and x.algebra.names != self.names:
                raise ValueError("element from a different algebra")
            return x.poly
        if isinstance(x, Poly):
            if x.nvars != self.nvars:
                raise ValueError("polynomial over a different variable table")
            return x
        if isinstance(x, str):
            from .parsing import parse_poly

            return parse_poly(x, self)
        return Poly.constant(self.nvars, x)

    def __call__(self, x) -> AlgebraElement:
        if isinstance(x, AlgebraElement) and x.algebra is self:
            return x
        return AlgebraElement(self, self._to_poly(x))

    def gen(self, name: str) -> AlgebraElement:
        if name not in self.index:
            raise KeyError(f"unknown variable {name!r}")
        return AlgebraElement(self, Poly.variable(self.nvars, self.index[name]), reduced=True)

    @property
    def gens(self) -> dict[str, AlgebraElement]:
        return {n: self.gen(n) for n in self.names}

    @property
    def zero(self):
        return AlgebraElement(self, Poly(self.nvars), reduced=True)

    @property
    def one(self):
        return AlgebraElement(self, Poly.constant(self.nvars, 1), reduced=True)

    def is_parameter(self, name: str) -> bool:
        return name in self.parameters

    def parameter_indices(self):
        return [self.index[p] for p in self.parameters]

    def coordinate_names(self):
        """Non-parameter variables that are not inverse variables of declared units."""
        invs = {inv for _, inv in self.units}
        return [v for v in self.variables if v not in invs]

    def inverse_of(self, name: str):
        """The declared unit whose inverse variable is ``name``, or None."""
        for f, inv in self.units:
            if inv == name:
                return f
        return None

    # -- identity and caching --
    def _key(self):
        return (
            self.variables,
            self.parameters,
            frozenset(self.relations),
            tuple((f, inv) for f, inv in self.units),
        )

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, PresentedAlgebra) and self._key() == other._key()

    def __hash__(self):
        return hash((self.variables, self.parameters, len(self.relations)))

    def __repr__(self):
        rels = ", ".join(r.to_str(self.names) for r in self.relations)
        params = f"[{', '.join(self.parameters)}]" if self.parameters else ""
        return f"k{params}[{', '.join(self.variables)}]/({rels})"

    @property
    def groebner_basis(self) -> list[Poly]:
        """Reduced grevlex basis of the relation ideal (computed once)."""
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    from .groebner import buchberger

                    self._gb = buchberger(list(self.relations), GREVLEX, self.nvars) if self.relations else []
        return self._gb

    def reduce(self, p: Poly) -> Poly:
        if not self.relations or not p.terms:
            return p
        from .groebner import normal_form

        return normal_form(p, self.groebner_basis, GREVLEX)

    def is_proper(self) -> bool:
        gb = self.groebner_basis
        return not (len(gb) == 1 and gb[0].is_constant())

    # -- new algebras --
    def localize(self, f, name: str | None = None) -> PresentedAlgebra:
        """Adjoin an inverse of ``f``; reuses an existing inverse variable if present.

        The new variable is ``name`` if given, else ``<var>_inv`` or ``u_inv``.
        """
        fe = self(f)
        if fe.is_zero():
            raise ZeroDivisionError("cannot localize at zero")
        for g, inv in self.units:
            if self(g) == fe:
                return self
        if fe.is_scalar():
            return self
        if name is not None:
            if name in self.index:
                raise ValueError(f"variable {name!r} already exists")
            base = None
        elif len(fe.poly.terms) == 1:
            (e, c), = fe.poly.terms.items()
            if c == 1 and sum(e) == 1:
                base = self.names[e.index(1)]
            else:
                base = "u"
        else:
            base = "u"
        if name is None:
            name = f"{base}_inv"
            k = 1
            while name in self.index:
                name = f"{base}_inv{k}"
                k += 1
        only_params = fe.poly.support() <= set(self.parameter_indices())
        variables = list(self.variables) + ([] if only_params else [name])
        parameters = list(self.parameters) + ([name] if only_params else [])
        new = PresentedAlgebra(variables, parameters)
        index_map = [new.index[n] for n in self.names]
        rels = [r.rename(index_map, new.nvars) for r in self.relations]
        units = [(g.rename(index_map, new.nvars), inv) for g, inv in self.units]
        units.append((fe.poly.rename(index_map, new.nvars), name))
        return PresentedAlgebra(variables, parameters, rels, units)

    def scalars(self) -> PresentedAlgebra:
        """The parameter-only algebra: parameters with the relations among them."""
        if self._scalars is None:
            pidx = set(self.parameter_indices())
            alg = PresentedAlgebra([], self.parameters)
            index_map = [alg.index.get(n, 0) for n in self.names]
            rels = [r.rename(index_map, alg.nvars) for r in self.relations if r.support() <= pidx]
            units = [
                (f.rename(index_map, alg.nvars), inv)
                for f, inv in self.units
                if inv in self.parameters
            ]
            self._scalars = PresentedAlgebra([], self.parameters, rels, units)
        return self._scalars

    def with_variables(self, extra: Sequence[str], relations=()) -> PresentedAlgebra:
        """Same algebra with extra free coordinate variables appended."""
        variables = list(self.variables) + list(extra)
        new = PresentedAlgebra(variables, self.parameters)
        index_map = [new.index[n] for n in self.names]
        rels = [r.rename(index_map, new.nvars) for r in self.relations]
        units = [(f.rename(index_map, new.nvars), inv) for f, inv in self.units]
        out = PresentedAlgebra(variables, self.parameters, rels, units)
        if relations:
            out = PresentedAlgebra(
                variables, self.parameters, list(out.relations) + [out._to_poly(r) for r in relations], units
            )
        return out

    def lift(self, x, source: PresentedAlgebra) -> AlgebraElement:
        """Re-express an element of ``source`` by variable name in this algebra."""
        x = source(x)
        index_map = []
        for n in source.names:
            if n not in self.index:
                raise KeyError(f"variable {n!r} has no counterpart")
            index_map.append(self.index[n])
        return self(x.poly.rename(index_map, self.nvars))

    def tensor_power(self, m: int):
        return tensor_power(self, m)


class AlgebraElement:
    """An element of a :class:`PresentedAlgebra`, stored in normal form."""

    __slots__ = ("algebra", "poly")

    def __init__(self, algebra: PresentedAlgebra, poly: Poly, reduced: bool = False):
        self.algebra = algebra
        self.poly = poly if reduced else algebra.reduce(poly)

    def _other(self, other) -> Poly:
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra and other.algebra != self.algebra:
                raise ValueError("elements belong to different algebras")
            return other.poly
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.algebra.nvars, other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        # sums of normal forms are normal forms
        return AlgebraElement(self.algebra, self.poly + o, reduced=True)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return AlgebraElement(self.algebra, self.poly - o, reduced=True)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return AlgebraElement(self.algebra, o - self.poly, reduced=True)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.poly, reduced=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraElement(self.algebra, self.poly.scale(other), reduced=True)
        o = self._other(other)
        if o is NotImplemented:
            return o
        return AlgebraElement(self.algebra, self.poly * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraElement(self.algebra, self.poly.scale(1 / Fraction(other)), reduced=True)
        other = self.algebra(other)
        inv = other.inverse()
        if inv is None:
            raise ZeroDivisionError(f"{other} is not a unit")
        return self * inv

    def __pow__(self, n: int):
        if n < 0:
            inv = self.inverse()
            if inv is None:
                raise ZeroDivisionError(f"{self} is not a unit")
            return inv ** (-n)
        result = self.algebra.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return (other.algebra is self.algebra or other.algebra == self.algebra) and self.poly == other.poly
        if isinstance(other, (int, Fraction)):
            return self.poly == Poly.constant(self.algebra.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def is_zero(self):
        return not self.poly.terms

    def __bool__(self):
        return not self.is_zero()

    def is_scalar(self):
        return self.poly.is_constant()

    def scalar_value(self) -> Fraction:
        return self.poly.constant_value()

    def involves_only_parameters(self):
        return self.poly.support() <= set(self.algebra.parameter_indices())

    def inverse(self) -> AlgebraElement | None:
        """The multiplicative inverse, or None when this is not a unit."""
        return find_inverse(self)

    def __str__(self):
        return self.poly.to_str(self.algebra.names)

    def __repr__(self):
        return f"<{self}>"


def find_inverse(a: AlgebraElement) -> AlgebraElement | None:
    A = a.algebra
    if a.is_zero():
        return None
    if a.is_scalar():
        return A(1 / a.scalar_value())
    for f, inv in A.units:
        if A(f) == a:
            return A.gen(inv)
        if a.poly == Poly.variable(A.nvars, A.index[inv]):
            return A(f)
    # c * monomial in unit variables
    if len(a.poly.terms) == 1:
        (e, c), = a.poly.terms.items()
        result = A(1 / c)
        ok = True
        for i, k in enumerate(e):
            if not k:
                continue
            name = A.names[i]
            partner = None
            for f, inv in A.units:
                if inv == name:
                    partner = A(f)
                    break
                if f == Poly.variable(A.nvars, i):
                    partner = A.gen(inv)
                    break
            if partner is None:
                ok = False
                break
            result = result * partner**k
        if ok:
            return result
    if not A.relations:
        return None
    return _inverse_by_groebner(a)


def _inverse_by_groebner(a: AlgebraElement) -> AlgebraElement | None:
    """Solve a*z = 1 by eliminating z from (relations, a*z - 1)."""
    from .groebner import buchberger, normal_form

    A = a.algebra
    n = A.nvars
    z = Poly.variable(n + 1, n)
    gens = [r.extend(1) for r in A.relations] + [a.poly.extend(1) * z - 1]
    order = elimination_order([n])
    gb = buchberger(gens, order, n + 1)
    if len(gb) == 1 and gb[0].is_constant():
        return None
    nf = normal_form(z, gb, order)
    if any(e[n] for e in nf.terms):
        return None
    cand = A(Poly(n, {e[:n]: c for e, c in nf.terms.items()}))
    if a * cand == 1:
        return cand
    return None


# ---------- algebra maps ----------


class AlgebraMap:
    """A k[params]-algebra map given by images of the source's coordinate variables.

    Parameters map to the same-named parameters of the target unless given.
    Images of inverse variables that are omitted are derived as inverses of
    the image of the declared unit.
    """

    def __init__(self, source: PresentedAlgebra, target: PresentedAlgebra, images: Mapping):
        self.source = source
        self.target = target
        img: dict[str, AlgebraElement] = {}
        for name, v in images.items():
            if name not in source.index:
                raise KeyError(f"unknown source variable {name!r}")
            img[name] = target(v)
        for p in source.parameters:
            if p not in img:
                if p not in target.index:
                    raise KeyError(f"parameter {p!r} missing from target")
                img[p] = target.gen(p)
        invs = {inv for _, inv in source.units}
        for v in source.variables:
            if v not in img and v not in invs:
                raise KeyError(f"no image for variable {v!r}")
        pending = [(f, inv) for f, inv in source.units if inv not in img]
        while pending:
            progress = []
            for f, inv in pending:
                fimg = self._apply_partial(f, img)
                if fimg is None:
                    continue
                finv = fimg.inverse()
                if finv is None:
                    raise ValueError(f"image of unit {f.to_str(source.names)} is not invertible")
                img[inv] = finv
                progress.append(inv)
            if not progress:
                raise KeyError(f"cannot derive image of {pending[0][1]!r}")
            pending = [(f, inv) for f, inv in pending if inv not in img]
        self.images = img
        self._polys = [img[n].poly for n in source.names]

    def _apply_partial(self, f: Poly, img):
        names = self.source.names
        if any(names[i] not in img for i in f.support()):
            return None
        zero = Poly(self.target.nvars)
        polys = [img[n].poly if n in img else zero for n in names]
        return self.target(f.substitute(polys, self.target.nvars))

    def __call__(self, x) -> AlgebraElement:
        x = self.source(x)
        return self.target(x.poly.substitute(self._polys, self.target.nvars))

    def apply_poly(self, p: Poly) -> AlgebraElement:
        return self.target(p.substitute(self._polys, self.target.nvars))

    def compose(self, inner: AlgebraMap) -> AlgebraMap:
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise ValueError("maps are not composable")
        return AlgebraMap(inner.source, self.target, {n: self(inner.images[n]) for n in inner.source.names})

    def check_well_defined(self):
        """Every source relation must map to zero in the target."""
        from .verdict import Verdict

        for r in self.source.relations:
            if not self.apply_poly(r).is_zero():
                return Verdict(False, f"relation {r.to_str(self.source.names)} does not map to 0")
        return Verdict(True)

    def __eq__(self, other):
        if not isinstance(other, AlgebraMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and all(self.images[n] == other.images[n] for n in self.source.names)
        )

    def __repr__(self):
        body = ", ".join(f"{n} -> {self.images[n]}" for n in self.source.variables)
        return f"AlgebraMap({body})"

    @classmethod
    def identity(cls, A: PresentedAlgebra) -> AlgebraMap:
        return cls(A, A, {n: A.gen(n) for n in A.variables})


def tensor_power(A: PresentedAlgebra, m: int):
    """``A^{⊗m}`` on disjoint copies ``v@1 .. v@m`` of the coordinate variables.

    Parameters are shared.  Returns ``(algebra, embeddings)``.
    """
    if m < 1:
        raise ValueError("tensor power needs m >= 1")
    with A._lock:
        cached = A._tensor_cache.get(m)
        if cached is not None:
            return cached
        variables = [f"{v}@{j}" for j in range(1, m + 1) for v in A.variables]
        T = PresentedAlgebra(variables, A.parameters)
        pidx = set(A.parameter_indices())
        rels = []
        units = []
        maps = []
        for j in range(1, m + 1):
            index_map = [T.index[f"{n}@{j}"] if n in A.variables else T.index[n] for n in A.names]
            maps.append(index_map)
        for r in A.relations:
            if r.support() <= pidx:
                rels.append(r.rename(maps[0], T.nvars))
            else:
                rels.extend(r.rename(im, T.nvars) for im in maps)
        for f, inv in A.units:
            if inv in A.parameters:
                units.append((f.rename(maps[0], T.nvars), inv))
            else:
                units.extend((f.rename(im, T.nvars), f"{inv}@{j}") for j, im in enumerate(maps, 1))
        T = PresentedAlgebra(variables, A.parameters, rels, units)
        T.tensor_base = (A, m)
        embeddings = [
            AlgebraMap(A, T, {v: T.gen(f"{v}@{j}") for v in A.variables}) for j in range(1, m + 1)
        ]
        A._tensor_cache[m] = (T, embeddings)
        return T, embeddings


def embed(x: AlgebraElement, j: int, m: int) -> AlgebraElement:
    """``ι_j(x)`` in the m-th tensor power of ``x``'s algebra."""
    _, emb = tensor_power(x.algebra, m)
    return emb[j - 1](x)


def tensor(*xs: AlgebraElement) -> AlgebraElement:
    """``x1 ⊗ x2 ⊗ ...`` as an element of the tensor power."""
    m = len(xs)
    A = xs[0].algebra
    T, emb = tensor_power(A, m)
    out = T.one
    for j, x in enumerate(xs):
        out = out * emb[j](A(x))
    return out


def reindex(x: AlgebraElement, positions: Sequence[int], m: int) -> AlgebraElement:
    """Send factor ``j`` of an element of ``A^{⊗k}`` to factor ``positions[j-1]`` of ``A^{⊗m}``."""
    src = x.algebra
    if src.tensor_base is None:
        raise ValueError("element is not in a tensor power")
    A, k = src.tensor_base
    if len(positions) != k:
        raise ValueError("need one position per tensor factor")
    T, _ = tensor_power(A, m)
    images = {}
    for j in range(1, k + 1):
        for v in A.variables:
            images[f"{v}@{j}"] = T.gen(f"{v}@{positions[j - 1]}")
    return AlgebraMap(src, T, images)(x)
