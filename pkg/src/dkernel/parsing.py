"""Infix polynomial expressions (``^`` for powers) parsed with :mod:`ast`.

A trailing prime (``x'``) is part of a variable name.  In a tensor power,
``x@1`` names the copy of ``x`` in factor 1 and ``(expr)@j`` embeds a
whole expression; the latter binds like ``*``, so write ``x@1*((x+y)@2)``.
Division is allowed by nonzero rationals and by units of the algebra.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction

from .ring import AlgebraElement, Poly, PresentedAlgebra


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}, column {col}: " if col is not None else f"line {line}: "
        super().__init__(where + message)


_TENSOR_NAME = re.compile(r"\b([A-Za-z_]\w*)@(\d+)")
_PRIMED_NAME = re.compile(r"\b([A-Za-z_]\w*)'")
_AT = "__at__"
_PRIME = "__prime"


def _prepare(text: str) -> str:
    # x' and x@1 are single variable names; (expr)@j still embeds a whole expression
    text = _PRIMED_NAME.sub(rf"\1{_PRIME}", text.replace("^", "**"))
    return _TENSOR_NAME.sub(rf"\1{_AT}\2", text)


def _unmangle(name: str) -> str:
    return name.replace(_AT, "@").replace(_PRIME, "'")


def parse_tree(text: str, mode="eval"):
    try:
        return ast.parse(_prepare(text).strip(), mode=mode)
    except SyntaxError as exc:
        raise ParseError(f"syntax error in {text.strip()!r}", None, exc.offset) from None


class _Evaluator:
    def __init__(self, algebra: PresentedAlgebra):
        self.A = algebra

    def const(self, node):
        """Evaluate a node that must be a rational constant."""
        val = self.eval(node)
        if isinstance(val, AlgebraElement):
            if not val.is_scalar():
                raise ParseError("expected a number", None, node.col_offset + 1)
            return val.scalar_value()
        return val

    def eval(self, node):
        A = self.A
        if isinstance(node, ast.Expression):
            return self.eval(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ParseError(
                    f"unsupported literal {node.value!r} (exact rationals only)", None, node.col_offset + 1
                )
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            name = _unmangle(node.id)
            if name not in A.index:
                raise ParseError(f"unknown variable {name!r}", None, node.col_offset + 1)
            return A.gen(name)
        if isinstance(node, ast.UnaryOp):
            v = self.eval(node.operand)
            if isinstance(node.op, ast.USub):
                return -v
            if isinstance(node.op, ast.UAdd):
                return v
        if isinstance(node, ast.BinOp):
            op = node.op
            if isinstance(op, ast.MatMult):
                return self.embed(node)
            if isinstance(op, ast.Pow):
                base = self.eval(node.left)
                exp = self.const(node.right)
                if exp.denominator != 1:
                    raise ParseError("exponents must be integers", None, node.right.col_offset + 1)
                return base ** int(exp)
            left = self.eval(node.left)
            right = self.eval(node.right)
            if isinstance(op, ast.Add):
                return left + right
            if isinstance(op, ast.Sub):
                return left - right
            if isinstance(op, ast.Mult):
                return left * right
            if isinstance(op, ast.Div):
                if isinstance(right, Fraction):
                    if right == 0:
                        raise ParseError("division by zero", None, node.col_offset + 1)
                    return left / right
                inv = right.inverse()
                if inv is None:
                    raise ParseError(f"cannot divide by non-unit {right}", None, node.col_offset + 1)
                return left * inv
        raise ParseError(f"unsupported expression {ast.unparse(node)!r}", None, getattr(node, "col_offset", 0) + 1)

    def embed(self, node):
        A = self.A
        if A.tensor_base is None:
            raise ParseError("'@' is only meaningful in a tensor power", None, node.col_offset + 1)
        base, m = A.tensor_base
        j = self.const(node.right)
        if j.denominator != 1 or not 1 <= j <= m:
            raise ParseError(f"tensor factor must be between 1 and {m}", None, node.right.col_offset + 1)
        inner = _Evaluator(base).eval(node.left)
        from .ring import embed

        return embed(base(inner), int(j), m)


def parse_element(text: str, algebra: PresentedAlgebra) -> AlgebraElement:
    tree = parse_tree(text)
    return algebra(_Evaluator(algebra).eval(tree))


def parse_poly(text: str, algebra: PresentedAlgebra) -> Poly:
    """Parse to a representative polynomial (reduced)."""
    return parse_element(text, algebra).poly


def parse_node(node, algebra: PresentedAlgebra) -> AlgebraElement:
    return algebra(_Evaluator(algebra).eval(node))
