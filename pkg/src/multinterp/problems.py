"""Problem files: a fixed S-expression subset.

::

    (declare-sort U)
    (declare-fun f (U) U)
    (declare-fun pos (U) Bool)
    (declare-fun c1 () Bool)
    (inputs i1 i2) (controls c1 c2) (outputs o1 o2)
    (axiom e) ...
    (valid e)

Symbols absent from all three lists are global and treated like inputs.
"""

from __future__ import annotations

from .logic import Formula, Store, Symbol, SymbolKind, symbols_of
from .sexpr import ParseError, dumps, formula_str, parse_formula, read_all
from .synthesis import SynthesisProblem

SORT = "U"


def _kind(args: list, result: str) -> tuple[SymbolKind, int]:
    if any(a != SORT for a in args):
        raise ParseError("argument sorts must be U")
    if result == "Bool":
        return (SymbolKind.PREDICATE if args else SymbolKind.BOOL), len(args)
    if result == SORT:
        return (SymbolKind.FUNCTION if args else SymbolKind.DOMAIN), len(args)
    raise ParseError(f"unknown sort {result}")


def parse_problem(text: str, store: Store | None = None) -> SynthesisProblem:
    store = store or Store()
    lists: dict[str, list[Symbol]] = {}
    axioms: list[Formula] = []
    valid = None
    sort_declared = False
    for item in read_all(text):
        if not isinstance(item, list) or not item or not isinstance(item[0], str):
            raise ParseError(f"unexpected top-level item {dumps(item)}")
        head = item[0]
        if head == "declare-sort":
            if item[1:] != [SORT]:
                raise ParseError("only (declare-sort U) is supported")
            sort_declared = True
        elif head == "declare-fun":
            if len(item) != 4 or not isinstance(item[2], list):
                raise ParseError(f"bad declaration {dumps(item)}")
            kind, arity = _kind(item[2], item[3])
            if kind in (SymbolKind.FUNCTION, SymbolKind.DOMAIN) and not sort_declared:
                raise ParseError("sort U used before (declare-sort U)")
            if item[1] in store.symbols:
                raise ParseError(f"{item[1]} declared twice")
            store.declare(item[1], kind, arity)
        elif head in ("inputs", "controls", "outputs"):
            if head in lists:
                raise ParseError(f"duplicate ({head} ...)")
            try:
                lists[head] = [store.symbol(x) for x in item[1:]]
            except Exception as exc:
                raise ParseError(str(exc)) from None
        elif head == "axiom":
            if len(item) != 2:
                raise ParseError("axiom takes one expression")
            axioms.append(parse_formula(store, item[1]))
        elif head == "valid":
            if valid is not None or len(item) != 2:
                raise ParseError("exactly one (valid e) expected")
            valid = parse_formula(store, item[1])
        else:
            raise ParseError(f"unknown command {head}")
    if valid is None:
        raise ParseError("missing (valid e)")
    try:
        return SynthesisProblem(store, lists.get("inputs", []), lists.get("controls", []),
                                lists.get("outputs", []), valid, axioms)
    except Exception as exc:
        raise ParseError(str(exc)) from None


def _decl(s: Symbol) -> str:
    if s.kind is SymbolKind.BOOL:
        return f"(declare-fun {s.name} () Bool)"
    if s.kind is SymbolKind.DOMAIN:
        return f"(declare-fun {s.name} () U)"
    args = " ".join([SORT] * s.arity)
    res = "Bool" if s.kind is SymbolKind.PREDICATE else SORT
    return f"(declare-fun {s.name} ({args}) {res})"


def problem_symbols(p: SynthesisProblem) -> list[Symbol]:
    used = set(p.inputs) | set(p.controls) | set(p.outputs) | symbols_of(p.store, p.valid)
    for a in p.axioms:
        used |= symbols_of(p.store, a)
    return [s for s in p.store.symbols.values() if s in used]


def problem_to_text(p: SynthesisProblem) -> str:
    store = p.store
    syms = problem_symbols(p)
    lines = []
    if any(s.kind in (SymbolKind.DOMAIN, SymbolKind.FUNCTION) or
           (s.kind is SymbolKind.PREDICATE) for s in syms):
        lines.append(f"(declare-sort {SORT})")
    lines += [_decl(s) for s in syms]
    for key, xs in (("inputs", p.inputs), ("controls", p.controls), ("outputs", p.outputs)):
        lines.append("(" + " ".join([key] + [s.name for s in xs]) + ")")
    for a in p.axioms:
        lines.append(f"(axiom {formula_str(store, a)})")
    lines.append(f"(valid {formula_str(store, p.valid)})")
    return "\n".join(lines) + "\n"


def witnesses_to_text(p: SynthesisProblem, witnesses) -> str:
    return "".join(f"(witness {c.name} {formula_str(p.store, f)})\n"
                   for c, f in zip(p.controls, witnesses))


def parse_witnesses(p: SynthesisProblem, text: str) -> tuple[Formula, ...]:
    by_name = {}
    for item in read_all(text):
        if not (isinstance(item, list) and len(item) == 3 and item[0] == "witness"):
            raise ParseError(f"bad witness line {dumps(item)}")
        by_name[item[1]] = parse_formula(p.store, item[2])
    try:
        return tuple(by_name[c.name] for c in p.controls)
    except KeyError as exc:
        raise ParseError(f"missing witness for {exc}") from None
