"""Minimal S-expression reader/printer and conversion to and from the logic layer."""

from __future__ import annotations

import re
from typing import Union

from .logic import (FALSE, TRUE, And, Atom, AtomKind, Formula, Iff, Implies,
                    Ite, LogicError, Not, Op, Or, Store, SymbolKind, Term, Var,
                    Xor, atom_str, formula_nodes, term_str)

SExpr = Union[str, list]

_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|(\|[^|]*\|)|([^\s()|;]+))")


class ParseError(Exception):
    pass


def tokenize(text: str) -> list[str]:
    out: list[str] = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError(f"unexpected character at offset {pos}")
            break
        pos = m.end()
        if m.group(1) is not None:
            continue
        tok = m.group(2) or m.group(3) or m.group(4) or m.group(5)
        if tok:
            out.append(tok)
    return out


def read_all(text: str) -> list[SExpr]:
    tokens = tokenize(text)
    stack: list[list] = [[]]
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise ParseError("unbalanced '('")
    return stack[0]


def read_one(text: str) -> SExpr:
    items = read_all(text)
    if len(items) != 1:
        raise ParseError(f"expected one expression, got {len(items)}")
    return items[0]


def dumps(e: SExpr) -> str:
    if isinstance(e, str):
        return e
    return "(" + " ".join(dumps(x) for x in e) + ")"


# -- terms and formulas -------------------------------------------------------

def parse_term(store: Store, e: SExpr) -> Term:
    try:
        if isinstance(e, str):
            return store.term(e)
        if not e or not isinstance(e[0], str):
            raise ParseError(f"bad term {dumps(e)}")
        return store.term(e[0], *(parse_term(store, a) for a in e[1:]))
    except LogicError as exc:
        raise ParseError(str(exc)) from None


def _is_bool_expr(store: Store, e: SExpr) -> bool:
    if isinstance(e, str):
        if e in ("true", "false"):
            return True
        s = store.symbols.get(e)
        return s is not None and s.kind is SymbolKind.BOOL
    head = e[0] if e else None
    if head in ("and", "or", "not", "=>", "xor", "ite", "iff", "="):
        if head == "=":
            return _is_bool_expr(store, e[1])
        return True
    s = store.symbols.get(head) if isinstance(head, str) else None
    return s is not None and s.kind is SymbolKind.PREDICATE


def parse_formula(store: Store, e: SExpr) -> Formula:
    if isinstance(e, str):
        if e == "true":
            return TRUE
        if e == "false":
            return FALSE
        s = store.symbols.get(e)
        if s is None:
            raise ParseError(f"undeclared symbol {e}")
        if s.kind is not SymbolKind.BOOL:
            raise ParseError(f"{e} is not Boolean")
        return Var(store.bool_atom(s))
    if not e or not isinstance(e[0], str):
        raise ParseError(f"bad formula {dumps(e)}")
    head, args = e[0], e[1:]
    sub = [parse_formula(store, a) for a in args] if head in ("and", "or", "not", "=>", "xor", "ite", "iff") else None
    if head == "and":
        return And(*sub, simplify=False)
    if head == "or":
        return Or(*sub, simplify=False)
    if head == "not":
        _arity(e, 1)
        return Not(sub[0], simplify=False)
    if head == "=>":
        if len(sub) < 2:
            raise ParseError("=> needs two arguments")
        out = sub[-1]
        for a in reversed(sub[:-1]):
            out = Implies(a, out, simplify=False)
        return out
    if head == "xor":
        _arity(e, 2)
        return Xor(*sub, simplify=False)
    if head == "iff":
        _arity(e, 2)
        return Iff(*sub, simplify=False)
    if head == "ite":
        _arity(e, 3)
        return Ite(*sub, simplify=False)
    if head == "=":
        _arity(e, 2)
        if _is_bool_expr(store, args[0]) or _is_bool_expr(store, args[1]):
            return Iff(parse_formula(store, args[0]), parse_formula(store, args[1]), simplify=False)
        return Var(store.eq_atom(parse_term(store, args[0]), parse_term(store, args[1])))
    if head == "distinct":
        _arity(e, 2)
        return Not(Var(store.eq_atom(parse_term(store, args[0]), parse_term(store, args[1]))), simplify=False)
    s = store.symbols.get(head)
    if s is None:
        raise ParseError(f"undeclared symbol {head}")
    if s.kind is not SymbolKind.PREDICATE:
        raise ParseError(f"{head} is not a predicate")
    if len(args) != s.arity:
        raise ParseError(f"arity mismatch for {head}")
    return Var(store.pred_atom(s, *(parse_term(store, a) for a in args)))


def _arity(e: list, n: int) -> None:
    if len(e) - 1 != n:
        raise ParseError(f"{e[0]} expects {n} argument(s)")


def atom_sexpr(a: Atom) -> str:
    if a.kind is AtomKind.BOOL:
        return a.symbol.name
    if a.kind is AtomKind.PRED:
        return term_str(a.term)
    return atom_str(a)


def parse_literal(store: Store, e: SExpr) -> int:
    if isinstance(e, list) and e and e[0] == "not":
        return -parse_literal(store, e[1])
    f = parse_formula(store, e)
    if f.op is not Op.ATOM:
        raise ParseError(f"not a literal: {dumps(e)}")
    return f.atom


def parse_clause(store: Store, e: SExpr) -> frozenset[int]:
    if e == "false":
        return frozenset()
    if isinstance(e, list) and e and e[0] == "or":
        return frozenset(parse_literal(store, x) for x in e[1:])
    return frozenset((parse_literal(store, e),))


def formula_str(store: Store, f: Formula) -> str:
    """S-expression text; shared subformulas are printed in full."""
    memo: dict[int, str] = {}
    for g in formula_nodes(f):
        op = g.op
        if op is Op.TRUE:
            s = "true"
        elif op is Op.FALSE:
            s = "false"
        elif op is Op.ATOM:
            s = atom_sexpr(store.atoms[g.atom])
        else:
            s = f"({op.value} {' '.join(memo[a.uid] for a in g.args)})"
        memo[g.uid] = s
    return memo[f.uid]
