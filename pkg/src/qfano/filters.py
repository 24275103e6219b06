"""Composable candidate predicates written in a small, safe expression language.

Expressions are Python-like, e.g.

    p1 >= 2 and genus <= 21 and maxr % 4 == 3
    all(3 * x <= maxr for x in indices if x % 4 == 1)
    A3 == 5/18 and has(9)

Division of integers yields an exact rational.  Only the names listed in
NAMES and FUNCTIONS are visible.
"""
from __future__ import annotations

import ast
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Callable

if TYPE_CHECKING:
    from .census import Candidate

NAMES = ("q", "genus", "A3", "Ac2", "N", "p", "indices", "maxr", "minr", "R",
         "npoints", "torsionfree", "coprime", "general",
         *(f"p{i}" for i in range(1, 21)))
FUNCTIONS: dict[str, Callable[..., Any]] = {
    "all": all, "any": any, "min": min, "max": max, "len": len, "sum": sum, "abs": abs,
}
CANDIDATE_FUNCTIONS = ("h", "mult", "has")

_BINOPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: lambda a, b: Fraction(a) / Fraction(b), ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod, ast.Pow: operator.pow,
}
_CMPOPS = {
    ast.Eq: operator.eq, ast.NotEq: operator.ne, ast.Lt: operator.lt, ast.LtE: operator.le,
    ast.Gt: operator.gt, ast.GtE: operator.ge,
    ast.In: lambda a, b: a in b, ast.NotIn: lambda a, b: a not in b,
}


_ALLOWED_NODES = (
    ast.Expression, ast.Constant, ast.Name, ast.Load, ast.Store, ast.BoolOp, ast.And, ast.Or,
    ast.UnaryOp, ast.Not, ast.USub, ast.BinOp, ast.Compare, ast.Call, ast.Subscript,
    ast.Tuple, ast.List, ast.Set, ast.GeneratorExp, ast.ListComp, ast.comprehension,
    *_BINOPS, *_CMPOPS,
)


class FilterError(ValueError):
    pass


def namespace(c: Candidate) -> dict[str, Any]:
    sk = c.skeleton
    idx = sk.basket.indices
    ns: dict[str, Any] = {
        "q": sk.q, "genus": c.genus, "A3": sk.A3, "Ac2": sk.Ac2, "N": c.N,
        "p": (None,) + tuple(c.p), "indices": idx,
        "maxr": max(idx, default=1), "minr": min(idx, default=1),
        "R": sk.gorenstein_index, "npoints": len(idx),
        "torsionfree": c.N == 1, "coprime": sk.qW_equals_qQ, "general": not sk.qW_equals_qQ,
        "h": lambda m, j=0: c.table.coeffs[m][j % c.N],
        "mult": idx.count,
        "has": lambda r: r in idx,
    }
    for i, v in enumerate(c.p, start=1):
        ns[f"p{i}"] = v
    return ns


class _Evaluator:
    def __init__(self, env: dict[str, Any]):
        self.env = [env]

    def lookup(self, name: str) -> Any:
        for scope in reversed(self.env):
            if name in scope:
                return scope[name]
        if name in FUNCTIONS:
            return FUNCTIONS[name]
        raise FilterError(f"unknown name {name!r}")

    def ev(self, node: ast.AST) -> Any:
        match node:
            case ast.Expression(body=body):
                return self.ev(body)
            case ast.Constant(value=v) if isinstance(v, (int, bool)):
                return v
            case ast.Name(id=name):
                return self.lookup(name)
            case ast.BoolOp(op=ast.And(), values=vals):
                return all(self.ev(v) for v in vals)
            case ast.BoolOp(op=ast.Or(), values=vals):
                return any(self.ev(v) for v in vals)
            case ast.UnaryOp(op=ast.Not(), operand=x):
                return not self.ev(x)
            case ast.UnaryOp(op=ast.USub(), operand=x):
                return -self.ev(x)
            case ast.BinOp(left=a, op=op, right=b) if type(op) in _BINOPS:
                return _BINOPS[type(op)](self.ev(a), self.ev(b))
            case ast.Compare(left=left, ops=ops, comparators=rest):
                a = self.ev(left)
                for op, nxt in zip(ops, rest):
                    b = self.ev(nxt)
                    if not _CMPOPS[type(op)](a, b):
                        return False
                    a = b
                return True
            case ast.Call(func=ast.Name(id=fname), args=args, keywords=[]):
                fn = self.lookup(fname)
                return fn(*(self.ev(a) for a in args))
            case ast.Subscript(value=v, slice=s):
                return self.ev(v)[self.ev(s)]
            case ast.Tuple(elts=e) | ast.List(elts=e):
                return tuple(self.ev(x) for x in e)
            case ast.Set(elts=e):
                return frozenset(self.ev(x) for x in e)
            case ast.GeneratorExp(elt=elt, generators=gens) | ast.ListComp(elt=elt, generators=gens):
                return list(self._comp(elt, gens))
        raise FilterError(f"unsupported syntax: {ast.dump(node)[:60]}")

    def _comp(self, elt: ast.AST, gens: list[ast.comprehension]):
        if not gens:
            yield self.ev(elt)
            return
        g = gens[0]
        if not isinstance(g.target, ast.Name) or g.is_async:
            raise FilterError("comprehension target must be a plain name")
        for x in self.ev(g.iter):
            self.env.append({g.target.id: x})
            try:
                if all(self.ev(c) for c in g.ifs):
                    yield from self._comp(elt, gens[1:])
            finally:
                self.env.pop()


def _check_names(tree: ast.AST) -> None:
    bound = {g.target.id for node in ast.walk(tree)
             if isinstance(node, (ast.GeneratorExp, ast.ListComp))
             for g in node.generators if isinstance(g.target, ast.Name)}
    known = set(NAMES) | set(FUNCTIONS) | set(CANDIDATE_FUNCTIONS) | bound
    for node in ast.walk(tree):
        if isinstance(node, ast.Name) and node.id not in known:
            raise FilterError(f"unknown name {node.id!r}")
        if isinstance(node, ast.Attribute):
            raise FilterError("attribute access is not allowed")
        if not isinstance(node, _ALLOWED_NODES):
            raise FilterError(f"unsupported syntax: {type(node).__name__}")


@dataclass(frozen=True)
class FilterExpr:
    """A named predicate over candidates; combine with &, | and ~."""

    source: str = "True"
    _tree: ast.Expression = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        try:
            tree = ast.parse(self.source.strip() or "True", mode="eval")
        except SyntaxError as exc:
            raise FilterError(f"cannot parse filter {self.source!r}: {exc.msg}") from None
        _check_names(tree)
        object.__setattr__(self, "_tree", tree)

    def __call__(self, candidate: Candidate) -> bool:
        return bool(_Evaluator(namespace(candidate)).ev(self._tree))

    def __and__(self, other: FilterExpr) -> FilterExpr:
        return FilterExpr(f"({self.source}) and ({other.source})")

    def __or__(self, other: FilterExpr) -> FilterExpr:
        return FilterExpr(f"({self.source}) or ({other.source})")

    def __invert__(self) -> FilterExpr:
        return FilterExpr(f"not ({self.source})")

    @classmethod
    def all_of(cls, sources: list[str]) -> FilterExpr:
        if not sources:
            return cls()
        out = cls(sources[0])
        for s in sources[1:]:
            out = out & cls(s)
        return out


TRUE = FilterExpr()
