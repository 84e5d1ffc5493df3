"""Interned EUF syntax: symbols, terms, atoms, literals, clauses and formulas.

Terms and atoms live in a :class:`Store` and are hash-consed, so structural
equality coincides with identity.  Literals are signed atom ids (``+a`` /
``-a``) and clauses are ``frozenset`` s of literals, the usual SAT encoding.
Formulas are hash-consed independently of any store; their leaves refer to
atom ids.
"""

from __future__ import annotations

import enum
import weakref
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping


class LogicError(Exception):
    pass


class SymbolKind(enum.Enum):
    DOMAIN = "domain"
    BOOL = "bool"
    FUNCTION = "function"
    PREDICATE = "predicate"


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: SymbolKind
    arity: int = 0

    def __str__(self) -> str:
        return self.name


class Term:
    """Interned term; ``head`` is a function, predicate or domain variable."""

    __slots__ = ("id", "head", "args")

    def __init__(self, id: int, head: Symbol, args: tuple["Term", ...]):
        self.id = id
        self.head = head
        self.args = args

    @property
    def is_predicate_app(self) -> bool:
        return self.head.kind is SymbolKind.PREDICATE

    def __repr__(self) -> str:
        return term_str(self)

    def __lt__(self, other: "Term") -> bool:
        return self.id < other.id


class AtomKind(enum.Enum):
    BOOL = "bool"
    PRED = "pred"
    EQ = "eq"


class Atom:
    """Interned atom.

    ``EQ`` atoms keep ``lhs.id <= rhs.id`` so that ``a=b`` and ``b=a`` are one
    atom.  ``PRED`` atoms wrap a predicate-application term.
    """

    __slots__ = ("id", "kind", "symbol", "term", "lhs", "rhs")

    def __init__(self, id, kind, symbol=None, term=None, lhs=None, rhs=None):
        self.id = id
        self.kind = kind
        self.symbol: Symbol | None = symbol
        self.term: Term | None = term
        self.lhs: Term | None = lhs
        self.rhs: Term | None = rhs

    def __repr__(self) -> str:
        return atom_str(self)


def term_str(t: Term) -> str:
    if not t.args:
        return t.head.name
    return f"({t.head.name} {' '.join(term_str(a) for a in t.args)})"


def atom_str(a: Atom) -> str:
    if a.kind is AtomKind.BOOL:
        return a.symbol.name
    if a.kind is AtomKind.PRED:
        return term_str(a.term)
    # text order keeps printing independent of term creation order
    x, y = sorted((term_str(a.lhs), term_str(a.rhs)))
    return f"(= {x} {y})"


class Store:
    """Symbol table plus intern tables for terms and atoms.

    Atom ids start at 1 so that signed ids can encode literals.
    """

    def __init__(self) -> None:
        self.symbols: dict[str, Symbol] = {}
        self.terms: list[Term] = []
        self.atoms: list[Atom | None] = [None]
        self._term_table: dict[tuple, Term] = {}
        self._atom_table: dict[tuple, Atom] = {}
        self._fresh_counter = 0

    # -- symbols ---------------------------------------------------------
    def declare(self, name: str, kind: SymbolKind, arity: int = 0) -> Symbol:
        if kind in (SymbolKind.DOMAIN, SymbolKind.BOOL) and arity:
            raise LogicError(f"variable {name} must have arity 0")
        old = self.symbols.get(name)
        if old is not None:
            if old.kind is not kind or old.arity != arity:
                raise LogicError(f"symbol {name} redeclared with a different signature")
            return old
        sym = Symbol(name, kind, arity)
        self.symbols[name] = sym
        return sym

    def symbol(self, name: str) -> Symbol:
        try:
            return self.symbols[name]
        except KeyError:
            raise LogicError(f"undeclared symbol {name}") from None

    def fresh(self, prefix: str, kind: SymbolKind, arity: int = 0) -> Symbol:
        while True:
            self._fresh_counter += 1
            name = f"{prefix}!{self._fresh_counter}"
            if name not in self.symbols:
                return self.declare(name, kind, arity)

    # -- terms -----------------------------------------------------------
    def term(self, head: Symbol | str, *args: Term) -> Term:
        if isinstance(head, str):
            head = self.symbol(head)
        if head.kind is SymbolKind.BOOL:
            raise LogicError(f"Boolean variable {head.name} used as a term")
        if head.kind is SymbolKind.DOMAIN and args:
            raise LogicError(f"variable {head.name} applied to arguments")
        if head.kind in (SymbolKind.FUNCTION, SymbolKind.PREDICATE) and len(args) != head.arity:
            raise LogicError(f"arity mismatch for {head.name}: expected {head.arity}, got {len(args)}")
        for a in args:
            if a.is_predicate_app:
                raise LogicError("predicate applications cannot be function arguments")
        if self.symbols.get(head.name) is not head:
            raise LogicError(f"undeclared symbol {head.name}")
        key = (head.name, tuple(a.id for a in args))
        t = self._term_table.get(key)
        if t is None:
            t = Term(len(self.terms), head, tuple(args))
            self.terms.append(t)
            self._term_table[key] = t
        return t

    # -- atoms -----------------------------------------------------------
    def _atom(self, key, **kw) -> Atom:
        a = self._atom_table.get(key)
        if a is None:
            a = Atom(len(self.atoms), **kw)
            self.atoms.append(a)
            self._atom_table[key] = a
        return a

    def bool_atom(self, sym: Symbol | str) -> Atom:
        if isinstance(sym, str):
            sym = self.symbol(sym)
        if sym.kind is not SymbolKind.BOOL:
            raise LogicError(f"{sym.name} is not a Boolean variable")
        return self._atom(("b", sym.name), kind=AtomKind.BOOL, symbol=sym)

    def pred_atom(self, sym: Symbol | str, *args: Term) -> Atom:
        if isinstance(sym, str):
            sym = self.symbol(sym)
        if sym.kind is not SymbolKind.PREDICATE:
            raise LogicError(f"{sym.name} is not a predicate")
        t = self.term(sym, *args)
        return self._atom(("p", t.id), kind=AtomKind.PRED, term=t)

    def pred_atom_of_term(self, t: Term) -> Atom:
        return self._atom(("p", t.id), kind=AtomKind.PRED, term=t)

    def eq_atom(self, a: Term, b: Term) -> Atom:
        if a.is_predicate_app or b.is_predicate_app:
            raise LogicError("equality between predicate applications")
        if b.id < a.id:
            a, b = b, a
        return self._atom(("e", a.id, b.id), kind=AtomKind.EQ, lhs=a, rhs=b)

    def atom(self, lit: int) -> Atom:
        return self.atoms[abs(lit)]

    def lit_str(self, lit: int) -> str:
        s = atom_str(self.atoms[abs(lit)])
        return s if lit > 0 else f"(not {s})"

    def clause_str(self, clause: Iterable[int]) -> str:
        lits = sorted(clause, key=lambda l: (abs(l), l))
        if not lits:
            return "false"
        if len(lits) == 1:
            return self.lit_str(lits[0])
        return "(or " + " ".join(self.lit_str(l) for l in lits) + ")"


# -- symbol sets -------------------------------------------------------------

def term_symbols(t: Term, out: set[Symbol] | None = None) -> set[Symbol]:
    out = set() if out is None else out
    stack = [t]
    while stack:
        u = stack.pop()
        out.add(u.head)
        stack.extend(u.args)
    return out


def atom_symbols(a: Atom, out: set[Symbol] | None = None) -> set[Symbol]:
    out = set() if out is None else out
    if a.kind is AtomKind.BOOL:
        out.add(a.symbol)
    elif a.kind is AtomKind.PRED:
        term_symbols(a.term, out)
    else:
        term_symbols(a.lhs, out)
        term_symbols(a.rhs, out)
    return out


def clause_symbols(store: Store, clause: Iterable[int]) -> set[Symbol]:
    out: set[Symbol] = set()
    for lit in clause:
        atom_symbols(store.atom(lit), out)
    return out


def symbols_of(store: Store, obj) -> set[Symbol]:
    """Symbols occurring in a term, atom, literal (int), clause or formula."""
    if isinstance(obj, Term):
        return term_symbols(obj)
    if isinstance(obj, Atom):
        return atom_symbols(obj)
    if isinstance(obj, int):
        return atom_symbols(store.atom(obj))
    if isinstance(obj, Formula):
        out: set[Symbol] = set()
        for a in formula_atoms(obj):
            atom_symbols(store.atom(a), out)
        return out
    return clause_symbols(store, obj)


def restrict(store: Store, clause: Iterable[int], allowed: set[Symbol] | Callable[[int], bool]) -> frozenset[int]:
    """Keep the literals whose symbols all lie in ``allowed``.

    ``allowed`` may also be a predicate on literals (used with colour masks).
    """
    if callable(allowed):
        return frozenset(l for l in clause if allowed(l))
    return frozenset(l for l in clause if atom_symbols(store.atom(l)) <= allowed)


def is_tautological(clause: Iterable[int]) -> bool:
    s = set(clause)
    return any(-l in s for l in s)


# -- formulas ----------------------------------------------------------------

class Op(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    ATOM = "atom"
    NOT = "not"
    AND = "and"
    OR = "or"
    IMPLIES = "=>"
    XOR = "xor"
    IFF = "iff"


class Formula:
    """Hash-consed formula node.  Equal formulas are the same object."""

    __slots__ = ("op", "args", "atom", "uid", "__weakref__")
    _table: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()
    _next_uid = 0

    def __new__(cls, op: Op, args: tuple["Formula", ...] = (), atom: int = 0):
        key = (op, atom, tuple(a.uid for a in args))
        f = cls._table.get(key)
        if f is not None:
            return f
        f = object.__new__(cls)
        f.op = op
        f.args = args
        f.atom = atom
        Formula._next_uid += 1
        f.uid = Formula._next_uid
        cls._table[key] = f
        return f

    def __reduce__(self):
        return (Formula, (self.op, self.args, self.atom))

    def __repr__(self) -> str:
        if self.op is Op.ATOM:
            return f"a{self.atom}"
        if self.op in (Op.TRUE, Op.FALSE):
            return self.op.value
        return f"({self.op.value} {' '.join(map(repr, self.args))})"


TRUE = Formula(Op.TRUE)
FALSE = Formula(Op.FALSE)


def Var(atom: Atom | int) -> Formula:
    return Formula(Op.ATOM, (), atom if isinstance(atom, int) else atom.id)


def Lit(lit: int) -> Formula:
    f = Formula(Op.ATOM, (), abs(lit))
    return f if lit > 0 else Not(f)


def Const(value: bool) -> Formula:
    return TRUE if value else FALSE


def Not(f: Formula, simplify: bool = True) -> Formula:
    if simplify:
        if f is TRUE:
            return FALSE
        if f is FALSE:
            return TRUE
        if f.op is Op.NOT:
            return f.args[0]
    return Formula(Op.NOT, (f,))


def _nary(op: Op, unit: Formula, zero: Formula, args: Iterable[Formula], simplify: bool) -> Formula:
    if not simplify:
        args = tuple(args)
        if not args:
            return unit
        return args[0] if len(args) == 1 else Formula(op, args)
    flat: list[Formula] = []
    seen: set[int] = set()
    for a in args:
        parts = a.args if a.op is op else (a,)
        for p in parts:
            if p is zero:
                return zero
            if p is unit or p.uid in seen:
                continue
            seen.add(p.uid)
            flat.append(p)
    for p in flat:
        if p.op is Op.NOT and p.args[0].uid in seen:
            return zero
    if not flat:
        return unit
    if len(flat) == 1:
        return flat[0]
    return Formula(op, tuple(flat))


def And(*args: Formula, simplify: bool = True) -> Formula:
    return _nary(Op.AND, TRUE, FALSE, args, simplify)


def Or(*args: Formula, simplify: bool = True) -> Formula:
    return _nary(Op.OR, FALSE, TRUE, args, simplify)


def Implies(a: Formula, b: Formula, simplify: bool = True) -> Formula:
    if simplify:
        return Or(Not(a), b)
    return Formula(Op.IMPLIES, (a, b))


def Xor(a: Formula, b: Formula, simplify: bool = True) -> Formula:
    if simplify:
        if a is FALSE:
            return b
        if b is FALSE:
            return a
        if a is TRUE:
            return Not(b)
        if b is TRUE:
            return Not(a)
        if a is b:
            return FALSE
    return Formula(Op.XOR, (a, b))


def Iff(a: Formula, b: Formula, simplify: bool = True) -> Formula:
    if simplify:
        if a is TRUE:
            return b
        if b is TRUE:
            return a
        if a is FALSE:
            return Not(b)
        if b is FALSE:
            return Not(a)
        if a is b:
            return TRUE
    return Formula(Op.IFF, (a, b))


def Ite(c: Formula, t: Formula, e: Formula, simplify: bool = True) -> Formula:
    return And(Or(Not(c, simplify), t, simplify=simplify), Or(c, e, simplify=simplify), simplify=simplify)


def formula_nodes(f: Formula) -> Iterator[Formula]:
    """Distinct subformulas, children before parents."""
    seen: set[int] = set()
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        g, done = stack.pop()
        if done:
            yield g
            continue
        if g.uid in seen:
            continue
        seen.add(g.uid)
        stack.append((g, True))
        for a in reversed(g.args):
            if a.uid not in seen:
                stack.append((a, False))


def formula_atoms(f: Formula) -> set[int]:
    return {g.atom for g in formula_nodes(f) if g.op is Op.ATOM}


def formula_size(f: Formula) -> int:
    return sum(1 for _ in formula_nodes(f))


def evaluate(f: Formula, value: Callable[[int], bool] | Mapping[int, bool]) -> bool:
    get = value.__getitem__ if isinstance(value, Mapping) else value
    memo: dict[int, bool] = {}
    for g in formula_nodes(f):
        op = g.op
        if op is Op.TRUE:
            r = True
        elif op is Op.FALSE:
            r = False
        elif op is Op.ATOM:
            r = bool(get(g.atom))
        elif op is Op.NOT:
            r = not memo[g.args[0].uid]
        elif op is Op.AND:
            r = all(memo[a.uid] for a in g.args)
        elif op is Op.OR:
            r = any(memo[a.uid] for a in g.args)
        elif op is Op.IMPLIES:
            r = (not memo[g.args[0].uid]) or memo[g.args[1].uid]
        elif op is Op.XOR:
            r = memo[g.args[0].uid] != memo[g.args[1].uid]
        else:
            r = memo[g.args[0].uid] == memo[g.args[1].uid]
        memo[g.uid] = r
    return memo[f.uid]


def transform(f: Formula, leaf: Callable[[int], Formula], simplify: bool = True) -> Formula:
    """Rebuild ``f`` replacing every atom leaf by ``leaf(atom_id)``."""
    memo: dict[int, Formula] = {}
    for g in formula_nodes(f):
        op = g.op
        if op in (Op.TRUE, Op.FALSE):
            r = g
        elif op is Op.ATOM:
            r = leaf(g.atom)
        else:
            args = [memo[a.uid] for a in g.args]
            if op is Op.NOT:
                r = Not(args[0], simplify)
            elif op is Op.AND:
                r = And(*args, simplify=simplify)
            elif op is Op.OR:
                r = Or(*args, simplify=simplify)
            elif op is Op.IMPLIES:
                r = Implies(*args, simplify=simplify)
            elif op is Op.XOR:
                r = Xor(*args, simplify=simplify)
            else:
                r = Iff(*args, simplify=simplify)
        memo[g.uid] = r
    return memo[f.uid]


def simplify(f: Formula) -> Formula:
    return transform(f, Var, simplify=True)


def rename_term(store: Store, t: Term, mapping: Mapping[Symbol, Symbol]) -> Term:
    head = mapping.get(t.head, t.head)
    return store.term(head, *(rename_term(store, a, mapping) for a in t.args))


def rename_atom(store: Store, a: Atom, mapping: Mapping[Symbol, Symbol]) -> Atom:
    if a.kind is AtomKind.BOOL:
        return store.bool_atom(mapping.get(a.symbol, a.symbol))
    if a.kind is AtomKind.PRED:
        return store.pred_atom_of_term(rename_term(store, a.term, mapping))
    return store.eq_atom(rename_term(store, a.lhs, mapping), rename_term(store, a.rhs, mapping))


def rename(store: Store, f: Formula, mapping: Mapping[Symbol, Symbol], simplify: bool = False) -> Formula:
    """Homomorphic symbol renaming.  Targets must be declared with the same signature."""
    for src, dst in mapping.items():
        if src.kind is not dst.kind or src.arity != dst.arity:
            raise LogicError(f"cannot rename {src.name} to {dst.name}: signature differs")
        if store.symbols.get(dst.name) is not dst:
            raise LogicError(f"rename target {dst.name} is not declared")
    if len(set(mapping.values())) != len(mapping):
        raise LogicError("rename map is not injective")
    if not mapping:
        return f
    return transform(f, lambda a: Var(rename_atom(store, store.atoms[a], mapping)), simplify=simplify)


def substitute_bools(store: Store, f: Formula, mapping: Mapping[Symbol, Formula], simplify: bool = True) -> Formula:
    """Replace Boolean variables by formulas (used for control signals)."""
    by_atom = {store.bool_atom(s).id: g for s, g in mapping.items()}
    return transform(f, lambda a: by_atom.get(a, Var(a)), simplify=simplify)
