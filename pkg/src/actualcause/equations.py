"""Expression AST for structural-equation bodies.

Equation bodies compute over the ordinal indices of declared values: a
variable reference evaluates to the index of its current value within the
variable's declared range, and the final integer result is mapped back into
the target's range by index. This lets one grammar mix {0,1} arithmetic
(`min`, `max`, `+`, `-`, comparisons) with symbolic ranges such as
{recovered, sick}.

Conditions inside `case` expressions are Boolean combinations of comparisons;
`ValueRef` keeps the surface symbol so printing reproduces the source tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

Expr = Union["Num", "ValueRef", "Var", "BinOp", "MinMax", "Case"]
Cond = Union["Cmp", "CNot", "CAnd", "COr"]


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class ValueRef:
    """A declared value symbol; evaluates to its ordinal, prints as itself."""

    symbol: str
    ordinal: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # '+' | '-'
    left: Expr
    right: Expr


@dataclass(frozen=True)
class MinMax:
    op: str  # 'min' | 'max'
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Case:
    branches: tuple[tuple[Cond, Expr], ...]
    default: Expr


@dataclass(frozen=True)
class Cmp:
    op: str  # '=' | '!=' | '>=' | '<=' | '>' | '<'
    left: Expr
    right: Expr


@dataclass(frozen=True)
class CNot:
    body: Cond


@dataclass(frozen=True)
class CAnd:
    left: Cond
    right: Cond


@dataclass(frozen=True)
class COr:
    left: Cond
    right: Cond


def eval_expr(expr: Expr, env: Mapping[str, int]) -> int:
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, ValueRef):
        return expr.ordinal
    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, BinOp):
        left = eval_expr(expr.left, env)
        right = eval_expr(expr.right, env)
        return left + right if expr.op == "+" else left - right
    if isinstance(expr, MinMax):
        left = eval_expr(expr.left, env)
        right = eval_expr(expr.right, env)
        return min(left, right) if expr.op == "min" else max(left, right)
    if isinstance(expr, Case):
        for cond, result in expr.branches:
            if eval_cond(cond, env):
                return eval_expr(result, env)
        return eval_expr(expr.default, env)
    raise TypeError(f"not an expression node: {expr!r}")


_CMP = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    ">=": lambda a, b: a >= b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    "<": lambda a, b: a < b,
}


def eval_cond(cond: Cond, env: Mapping[str, int]) -> bool:
    if isinstance(cond, Cmp):
        return _CMP[cond.op](eval_expr(cond.left, env), eval_expr(cond.right, env))
    if isinstance(cond, CNot):
        return not eval_cond(cond.body, env)
    if isinstance(cond, CAnd):
        return eval_cond(cond.left, env) and eval_cond(cond.right, env)
    if isinstance(cond, COr):
        return eval_cond(cond.left, env) or eval_cond(cond.right, env)
    raise TypeError(f"not a condition node: {cond!r}")


def expr_reads(expr: Expr) -> set[str]:
    """Names of all variables the expression reads."""
    out: set[str] = set()
    _collect_reads(expr, out)
    return out


def _collect_reads(node, out: set[str]) -> None:
    if isinstance(node, Var):
        out.add(node.name)
    elif isinstance(node, (BinOp, MinMax, Cmp, CAnd, COr)):
        _collect_reads(node.left, out)
        _collect_reads(node.right, out)
    elif isinstance(node, CNot):
        _collect_reads(node.body, out)
    elif isinstance(node, Case):
        for cond, result in node.branches:
            _collect_reads(cond, out)
            _collect_reads(result, out)
        _collect_reads(node.default, out)


def substitute(expr, fixed: Mapping[str, int]):
    """Replace reads of the given variables by numeric constants."""
    if isinstance(expr, Var):
        if expr.name in fixed:
            return Num(fixed[expr.name])
        return expr
    if isinstance(expr, (Num, ValueRef)):
        return expr
    if isinstance(expr, BinOp):
        return BinOp(expr.op, substitute(expr.left, fixed), substitute(expr.right, fixed))
    if isinstance(expr, MinMax):
        return MinMax(expr.op, substitute(expr.left, fixed), substitute(expr.right, fixed))
    if isinstance(expr, Cmp):
        return Cmp(expr.op, substitute(expr.left, fixed), substitute(expr.right, fixed))
    if isinstance(expr, CNot):
        return CNot(substitute(expr.body, fixed))
    if isinstance(expr, CAnd):
        return CAnd(substitute(expr.left, fixed), substitute(expr.right, fixed))
    if isinstance(expr, COr):
        return COr(substitute(expr.left, fixed), substitute(expr.right, fixed))
    if isinstance(expr, Case):
        branches = tuple(
            (substitute(c, fixed), substitute(r, fixed)) for c, r in expr.branches
        )
        return Case(branches, substitute(expr.default, fixed))
    raise TypeError(f"not an AST node: {expr!r}")


def unparse_expr(expr: Expr) -> str:
    if isinstance(expr, Num):
        return str(expr.value)
    if isinstance(expr, ValueRef):
        return expr.symbol
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, BinOp):
        left = unparse_expr(expr.left)
        # right side of +/- needs parens when it is itself a +/- chain
        right = unparse_expr(expr.right)
        if isinstance(expr.right, BinOp):
            right = f"({right})"
        return f"{left} {expr.op} {right}"
    if isinstance(expr, MinMax):
        return f"{expr.op}({unparse_expr(expr.left)}, {unparse_expr(expr.right)})"
    if isinstance(expr, Case):
        parts = [f"{unparse_cond(c)} -> {unparse_expr(r)};" for c, r in expr.branches]
        parts.append(f"else -> {unparse_expr(expr.default)};")
        return "case { " + " ".join(parts) + " }"
    raise TypeError(f"not an expression node: {expr!r}")


def unparse_cond(cond: Cond, _prec: int = 0) -> str:
    # precedence: | (1) < & (2) < ! (3)
    if isinstance(cond, Cmp):
        return f"{unparse_expr(cond.left)} {cond.op} {unparse_expr(cond.right)}"
    if isinstance(cond, CNot):
        return f"!{unparse_cond(cond.body, 3)}"
    if isinstance(cond, CAnd):
        text = f"{unparse_cond(cond.left, 2)} & {unparse_cond(cond.right, 2)}"
        return f"({text})" if _prec > 2 else text
    if isinstance(cond, COr):
        text = f"{unparse_cond(cond.left, 1)} | {unparse_cond(cond.right, 1)}"
        return f"({text})" if _prec > 1 else text
    raise TypeError(f"not a condition node: {cond!r}")
