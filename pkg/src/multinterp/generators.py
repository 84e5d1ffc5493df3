"""Deterministic benchmark families and random instance generators."""

from __future__ import annotations

import random

from .logic import (And, Formula, Iff, Implies, Not, Or, Store, SymbolKind as K, Var, Xor,
                    formula_atoms)
from .synthesis import HARD_CAP, SynthesisProblem

FAMILIES = ("const", "illu", "chain")


def _check_n(n: int) -> None:
    if not 1 <= n <= HARD_CAP:
        raise ValueError(f"size must be in 1..{HARD_CAP}")


def _dom(s: Store, name: str):
    s.declare(name, K.DOMAIN)
    return s.symbols[name]


def illu(n: int) -> SynthesisProblem:
    """``o_j`` is ``i_j`` or ``neg(i_j)``; neighbouring outputs must differ in sign.

    ``illu(2)`` is the introductory two-control example.
    """
    _check_n(n)
    s = Store()
    neg = s.declare("neg", K.FUNCTION, 1)
    s.declare("pos", K.PREDICATE, 1)
    ins = [_dom(s, f"i{j}") for j in range(1, n + 1)]
    outs = [_dom(s, f"o{j}") for j in range(1, n + 1)]
    ctl = [s.declare(f"c{j}", K.BOOL) for j in range(1, n + 1)]
    parts, axioms = [], []
    for i, o, c in zip(ins, outs, ctl):
        ti, to = s.term(i), s.term(o)
        cv = Var(s.bool_atom(c))
        parts.append(Or(And(cv, Var(s.eq_atom(to, ti))),
                        And(Not(cv), Var(s.eq_atom(to, s.term(neg, ti))))))
        axioms.append(Xor(Var(s.pred_atom("pos", ti)), Var(s.pred_atom("pos", s.term(neg, ti)))))
    prop = And(*(Iff(Var(s.pred_atom("pos", s.term(outs[j]))),
                     Not(Var(s.pred_atom("pos", s.term(outs[j + 1])))))
                 for j in range(n - 1))) if n > 1 else Var(s.pred_atom("pos", s.term(outs[0])))
    valid = Implies(And(*parts), prop)
    return SynthesisProblem(s, ins, ctl, outs, valid, [And(*axioms)])


def const(n: int) -> SynthesisProblem:
    """Each output selects ``x_j`` or ``y_j``; the property pins the choice, so
    constant witnesses suffice."""
    _check_n(n)
    s = Store()
    xs = [_dom(s, f"x{j}") for j in range(1, n + 1)]
    ys = [_dom(s, f"y{j}") for j in range(1, n + 1)]
    outs = [_dom(s, f"o{j}") for j in range(1, n + 1)]
    ctl = [s.declare(f"c{j}", K.BOOL) for j in range(1, n + 1)]
    body, prop = [], []
    for j, (x, y, o, c) in enumerate(zip(xs, ys, outs, ctl)):
        cv = Var(s.bool_atom(c))
        tx, ty, to = s.term(x), s.term(y), s.term(o)
        body.append(Or(And(cv, Var(s.eq_atom(to, tx))), And(Not(cv), Var(s.eq_atom(to, ty)))))
        prop.append(Var(s.eq_atom(to, tx if j % 2 == 0 else ty)))
    return SynthesisProblem(s, xs + ys, ctl, outs, Implies(And(*body), And(*prop)))


def chain(n: int) -> SynthesisProblem:
    """Control ``c_j`` must be ``x=y``.

    The false case needs a chain of ``j+1`` private terms from ``x`` to ``y``;
    the true case uses the equality ``x=y`` on its own private terms, through
    ``f`` for odd ``j``.  Refutations must combine both partitions, so the
    theory tautologies span partitions and have to be split.
    """
    _check_n(n)
    s = Store()
    x, y = _dom(s, "x"), _dom(s, "y")
    f = s.declare("f", K.FUNCTION, 1)
    tx, ty = s.term(x), s.term(y)
    ctl, outs, clauses = [], [], []
    for j in range(1, n + 1):
        c = s.declare(f"c{j}", K.BOOL)
        ctl.append(c)
        ms = [_dom(s, f"m{j}_{k}") for k in range(j)]
        a, b = _dom(s, f"a{j}"), _dom(s, f"b{j}")
        outs += ms + [a, b]
        tm = [s.term(m) for m in ms]
        links = [s.eq_atom(tm[0], tx)] + [s.eq_atom(tm[k], tm[k + 1]) for k in range(j - 1)] \
            + [s.eq_atom(tm[-1], ty)]
        false_case = Not(And(*(Var(l) for l in links)))
        ta, tb = s.term(a), s.term(b)
        goal = s.eq_atom(s.term(f, ta), s.term(f, tb)) if j % 2 else s.eq_atom(ta, tb)
        true_case = Implies(And(Var(s.eq_atom(ta, tx)), Var(s.eq_atom(tb, ty))), Var(goal))
        cv = Var(s.bool_atom(c))
        clauses.append(And(Implies(Not(cv), false_case), Implies(cv, true_case)))
    return SynthesisProblem(s, [x, y, f], ctl, outs, And(*clauses))


def generate(family: str, n: int) -> SynthesisProblem:
    try:
        gen = {"const": const, "illu": illu, "chain": chain}[family]
    except KeyError:
        raise ValueError(f"unknown family {family}") from None
    return gen(n)


def pipeline() -> SynthesisProblem:
    """Two-stage pipeline with an operand-forwarding mux and a squash signal.

    The reference machine reads ``rf(src)`` unless the older instruction is
    valid and writes ``src``, in which case it uses the forwarded result.  A
    taken branch in the older stage squashes the younger write.
    """
    s = Store()
    rf = s.declare("rf", K.FUNCTION, 1)
    alu = s.declare("alu", K.FUNCTION, 1)
    src, dst1, res1, wb = (_dom(s, n) for n in ("src", "dst1", "res1", "wb"))
    valid1 = s.declare("valid1", K.BOOL)
    taken = s.declare("taken", K.BOOL)
    fwd, squash = s.declare("fwd", K.BOOL), s.declare("squash", K.BOOL)
    op, out = _dom(s, "op"), _dom(s, "out")
    t = s.term
    hazard = And(Var(s.bool_atom(valid1)), Var(s.eq_atom(t(dst1), t(src))))
    fw = Var(s.bool_atom(fwd))
    impl_op = Or(And(fw, Var(s.eq_atom(t(op), t(res1)))),
                 And(Not(fw), Var(s.eq_atom(t(op), t(rf, t(src))))))
    sq = Var(s.bool_atom(squash))
    impl_out = Or(And(sq, Var(s.eq_atom(t(out), t(wb)))),
                  And(Not(sq), Var(s.eq_atom(t(out), t(alu, t(op))))))
    tk = Var(s.bool_atom(taken))
    spec_out = Or(And(tk, Var(s.eq_atom(t(out), t(wb)))),
                  And(Not(tk), Var(s.eq_atom(t(out), t(alu, t(rf, t(src))))),
                      Not(hazard)),
                  And(Not(tk), Var(s.eq_atom(t(out), t(alu, t(res1)))), hazard))
    valid = Implies(And(impl_op, impl_out), spec_out)
    return SynthesisProblem(s, [src, dst1, res1, wb, valid1, taken, rf, alu],
                            [fwd, squash], [op, out], valid)


def local_order_problem() -> SynthesisProblem:
    """Specification whose partitions are ``T``, ``b``, ``a`` and
    ``(l or not a) and (not l or not b)`` for ``FF, FT, TF, TT``."""
    s = Store()
    a, b = s.declare("a", K.BOOL), s.declare("b", K.BOOL)
    l = s.declare("l", K.BOOL)
    c1, c2 = s.declare("c1", K.BOOL), s.declare("c2", K.BOOL)
    va, vb, vl = Var(s.bool_atom(a)), Var(s.bool_atom(b)), Var(s.bool_atom(l))
    v1, v2 = Var(s.bool_atom(c1)), Var(s.bool_atom(c2))
    # not valid_w = phi_w
    phi = Or(And(Not(v1), Not(v2), simplify=False),
             And(Not(v1), v2, vb, simplify=False),
             And(v1, Not(v2), va, simplify=False),
             And(v1, v2, Or(vl, Not(va)), Or(Not(vl), Not(vb)), simplify=False), simplify=False)
    return SynthesisProblem(s, [a, b], [c1, c2], [l], Not(phi, simplify=False))


# -- random instances ---------------------------------------------------------------

def random_boolean(rng: random.Random, n_inputs: int, n_controls: int, n_outputs: int = 1,
                   depth: int = 3) -> SynthesisProblem:
    s = Store()
    ins = [s.declare(f"i{k}", K.BOOL) for k in range(1, n_inputs + 1)]
    ctl = [s.declare(f"c{k}", K.BOOL) for k in range(1, n_controls + 1)]
    outs = [s.declare(f"o{k}", K.BOOL) for k in range(1, n_outputs + 1)]
    leaves = [Var(s.bool_atom(x)) for x in ins + ctl + outs]

    def gen(d: int) -> Formula:
        if d == 0 or rng.random() < 0.25:
            v = rng.choice(leaves)
            return v if rng.random() < 0.6 else Not(v)
        op = rng.choice((And, Or, Xor, Iff, Implies))
        return op(gen(d - 1), gen(d - 1))
    # make the controls matter: each one guards a sub-formula
    valid = gen(depth)
    for c in ctl:
        cv = Var(s.bool_atom(c))
        valid = Or(And(cv, valid), And(Not(cv), gen(depth - 1)))
    return SynthesisProblem(s, ins, ctl, outs, valid)


def random_euf(rng: random.Random, n_controls: int, max_atoms: int = 12) -> SynthesisProblem:
    """Mux-shaped EUF specification over shared terms; may be unrealizable.

    Output ``o_j`` is one of two shared terms depending on ``c_j``.  Most
    properties say which one is wanted under a random input condition, often
    through ``f`` or ``P`` so that congruences link private copies of the
    outputs across partitions.  The rest are unstructured random formulas.
    """
    while True:
        s = Store()
        x, y, z = (_dom(s, v) for v in "xyz")
        f = s.declare("f", K.FUNCTION, 1)
        s.declare("P", K.PREDICATE, 1)
        p = s.declare("p", K.BOOL)
        ctl = [s.declare(f"c{k}", K.BOOL) for k in range(1, n_controls + 1)]
        outs = [_dom(s, f"o{k}") for k in range(1, n_controls + 1)]
        base = [s.term(v) for v in (x, y, z)]
        pool = base + [s.term(f, t) for t in base]
        oterms = [s.term(o) for o in outs]
        body, choices = [], []
        for c, to in zip(ctl, oterms):
            u, v = rng.sample(pool, 2)
            choices.append((u, v))
            cv = Var(s.bool_atom(c))
            body.append(Or(And(cv, Var(s.eq_atom(to, u))), And(Not(cv), Var(s.eq_atom(to, v)))))
        rich = oterms + [s.term(f, t) for t in oterms] + pool

        def atom(terms) -> Formula:
            r = rng.random()
            if r < 0.65:
                a, b = rng.sample(terms, 2)
                return Var(s.eq_atom(a, b))
            if r < 0.9:
                return Var(s.pred_atom("P", rng.choice(terms)))
            return Var(s.bool_atom(p))

        def gen(d: int, terms) -> Formula:
            if d == 0 or rng.random() < 0.3:
                a = atom(terms)
                return a if rng.random() < 0.6 else Not(a)
            op = rng.choice((And, Or, Or, Implies, Iff))
            return op(gen(d - 1, terms), gen(d - 1, terms))

        def same(o, t) -> Formula:
            r = rng.random()
            if r < 0.4:
                return Var(s.eq_atom(o, t))
            if r < 0.75:
                return Var(s.eq_atom(s.term(f, o), s.term(f, t)))
            return Iff(Var(s.pred_atom("P", o)), Var(s.pred_atom("P", t)))

        if rng.random() < 0.8:
            props = []
            for to, (u, v) in zip(oterms, choices):
                q = gen(rng.choice((0, 0, 1)), pool)
                props.append(And(Implies(q, same(to, u)), Implies(Not(q), same(to, v))))
            prop = And(*props)
            if rng.random() < 0.3:
                prop = Or(prop, gen(1, rich))
        else:
            prop = gen(3, rich)
        valid = Implies(And(*body), prop)
        if len(formula_atoms(valid)) - n_controls <= max_atoms:
            return SynthesisProblem(s, [x, y, z, f, p], ctl, outs, valid)
