"""Compilation of sentence ASTs into logic forms.

Declarative statements become description-logic axioms, variable rules
become inert Rule objects (stored, never interpreted), and questions become
Query objects.  The class-expression fragment is ALC without nominals:
anything that would need a named individual inside a class expression
(e.g. "Every city borders Zurich") is refused as out-of-fragment.

Conjunctions are normalized to right-nested form at construction time, so
equal meanings produced through different surface bracketings (relative
clause vs. coordination chain) compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from . import grammar as g
from .errors import OutOfFragmentError

# ---------------------------------------------------------------------------
# Class expressions and axioms


class ClassExpr:
    """Base marker; variants below."""

    __slots__ = ()


@dataclass(frozen=True)
class Thing(ClassExpr):
    pass


@dataclass(frozen=True)
class Nothing(ClassExpr):
    """Internal bottom; only ever produced by ``nnf``."""


@dataclass(frozen=True)
class Atom(ClassExpr):
    entity_id: str


@dataclass(frozen=True)
class Not(ClassExpr):
    arg: ClassExpr


@dataclass(frozen=True)
class And(ClassExpr):
    left: ClassExpr
    right: ClassExpr


@dataclass(frozen=True)
class Or(ClassExpr):
    left: ClassExpr
    right: ClassExpr


@dataclass(frozen=True)
class Exists(ClassExpr):
    relation: str
    arg: ClassExpr


@dataclass(frozen=True)
class Forall(ClassExpr):
    """Universal restriction; internal to the reasoner's normal form."""

    relation: str
    arg: ClassExpr


THING = Thing()
NOTHING = Nothing()


@dataclass(frozen=True)
class SubClassOf:
    sub: ClassExpr
    sup: ClassExpr


@dataclass(frozen=True)
class ClassAssertion:
    cls: ClassExpr
    individual: str


@dataclass(frozen=True)
class PropertyAssertion:
    relation: str
    subject: str
    object: str


Axiom = Union[SubClassOf, ClassAssertion, PropertyAssertion]


@dataclass(frozen=True)
class Rule:
    body: tuple[g.RuleAtom, ...]
    head: g.RuleAtom


@dataclass(frozen=True)
class ClassesOf:
    individual: str


@dataclass(frozen=True)
class RoleCondition:
    """Subject gap related to a named individual: "... borders Switzerland"."""

    relation: str
    target: str


@dataclass(frozen=True)
class ClassCondition:
    """Subject gap constrained by a class expression: "... is a city"."""

    expr: ClassExpr


@dataclass(frozen=True)
class SubjectsSuchThat:
    restriction: Optional[str]  # noun entity, from "Which <noun> ..."
    condition: Union[RoleCondition, ClassCondition]


Query = Union[ClassesOf, SubjectsSuchThat]


@dataclass(frozen=True)
class Axioms:
    axioms: tuple[Axiom, ...]


@dataclass(frozen=True)
class BeyondFragment:
    rule: Rule


@dataclass(frozen=True)
class QuestionForm:
    query: Query


LogicForm = Union[Axioms, BeyondFragment, QuestionForm]


# Documented out-of-fragment reasons; translate produces no others.
REASON_NAMED_IN_CLASS = "named individual in class position"
REASON_DISJUNCTIVE_INSTANCE = "disjunctive instance statement"
REASON_NEGATED_NAMED = "negated statement about a named individual"
OUT_OF_FRAGMENT_REASONS = frozenset(
    {REASON_NAMED_IN_CLASS, REASON_DISJUNCTIVE_INSTANCE, REASON_NEGATED_NAMED}
)


# ---------------------------------------------------------------------------
# Construction helpers


def mk_and(left: ClassExpr, right: ClassExpr) -> ClassExpr:
    """Conjunction, reassociated so the left argument is never an And."""
    if isinstance(left, And):
        return And(left.left, mk_and(left.right, right))
    return And(left, right)


def mk_or(left: ClassExpr, right: ClassExpr) -> ClassExpr:
    if isinstance(left, Or):
        return Or(left.left, mk_or(left.right, right))
    return Or(left, right)


# ---------------------------------------------------------------------------
# Translation


def _np_class(np: g.NP) -> ClassExpr:
    if isinstance(np, g.Named):
        raise OutOfFragmentError(REASON_NAMED_IN_CLASS)
    if np.rel is None:
        return Atom(np.entity_id)
    return mk_and(Atom(np.entity_id), _vp_class(np.rel))


def _vp_class(vp: g.VP) -> ClassExpr:
    if isinstance(vp, g.AndVP):
        return mk_and(_vp_class(vp.left), _vp_class(vp.right))
    if isinstance(vp, g.OrVP):
        return mk_or(_vp_class(vp.left), _vp_class(vp.right))
    if isinstance(vp, g.IsA):
        return _np_class(vp.np)
    if isinstance(vp, g.IsNotA):
        return Not(_np_class(vp.np))
    if isinstance(vp, g.Verb):
        return Exists(vp.verb, _np_class(vp.np))
    if isinstance(vp, g.DoesNotVerb):
        return Not(Exists(vp.verb, _np_class(vp.np)))
    if isinstance(vp, g.IsOf):
        return Exists(vp.of, _np_class(vp.np))
    if isinstance(vp, g.IsAdj):
        return Exists(vp.adj, _np_class(vp.np))
    raise TypeError(f"unexpected VP {vp!r}")


def _flatten_conjuncts(vp: g.VP) -> list[g.VP]:
    if isinstance(vp, g.OrVP):
        raise OutOfFragmentError(REASON_DISJUNCTIVE_INSTANCE)
    if isinstance(vp, g.AndVP):
        return _flatten_conjuncts(vp.left) + _flatten_conjuncts(vp.right)
    return [vp]


def _instance_axiom(subject: str, vp: g.VP) -> Axiom:
    if isinstance(vp, g.IsA):
        return ClassAssertion(_np_class(vp.np), subject)
    if isinstance(vp, g.IsNotA):
        return ClassAssertion(Not(_np_class(vp.np)), subject)
    if isinstance(vp, (g.Verb, g.IsOf, g.IsAdj)):
        relation = vp.verb if isinstance(vp, g.Verb) else vp.of if isinstance(vp, g.IsOf) else vp.adj
        if isinstance(vp.np, g.Named):
            return PropertyAssertion(relation, subject, vp.np.entity_id)
        return ClassAssertion(Exists(relation, _np_class(vp.np)), subject)
    if isinstance(vp, g.DoesNotVerb):
        if isinstance(vp.np, g.Named):
            # would need the nominal {object} under negation
            raise OutOfFragmentError(REASON_NEGATED_NAMED)
        return ClassAssertion(Not(Exists(vp.verb, _np_class(vp.np))), subject)
    raise TypeError(f"unexpected VP {vp!r}")


def _question_condition(vp: g.VP) -> Union[RoleCondition, ClassCondition]:
    if isinstance(vp, (g.Verb, g.IsOf, g.IsAdj)):
        relation = vp.verb if isinstance(vp, g.Verb) else vp.of if isinstance(vp, g.IsOf) else vp.adj
        if isinstance(vp.np, g.Named):
            return RoleCondition(relation, vp.np.entity_id)
        return ClassCondition(Exists(relation, _np_class(vp.np)))
    if isinstance(vp, g.IsA):
        return ClassCondition(_np_class(vp.np))
    raise TypeError(f"unexpected question VP {vp!r}")


def translate(ast: g.SentenceAST) -> LogicForm:
    """Deterministic compilation of an AST into its logic form.

    Raises OutOfFragmentError for the documented shapes the fragment cannot
    express (named objects in class positions, disjunctive assertions,
    negated assertions about named objects).
    """
    if isinstance(ast, g.QuantStatement):
        cls = _vp_class(ast.vp)
        if ast.quantifier == "no":
            cls = Not(cls)
        return Axioms((SubClassOf(Atom(ast.subject), cls),))
    if isinstance(ast, g.InstStatement):
        conjuncts = _flatten_conjuncts(ast.vp)
        return Axioms(tuple(_instance_axiom(ast.subject, c) for c in conjuncts))
    if isinstance(ast, g.RuleStatement):
        return BeyondFragment(Rule(ast.body, ast.head))
    if isinstance(ast, g.Question):
        form = ast.form
        if isinstance(form, g.WhatIs):
            return QuestionForm(ClassesOf(form.individual))
        if isinstance(form, g.WhatVP):
            return QuestionForm(SubjectsSuchThat(None, _question_condition(form.vp)))
        return QuestionForm(SubjectsSuchThat(form.noun, _question_condition(form.vp)))
    raise TypeError(f"unexpected AST {ast!r}")


# ---------------------------------------------------------------------------
# Negation normal form


def nnf(expr: ClassExpr) -> ClassExpr:
    """Equivalent form with Not only directly above Atom."""
    if isinstance(expr, (Atom, Thing, Nothing)):
        return expr
    if isinstance(expr, And):
        return And(nnf(expr.left), nnf(expr.right))
    if isinstance(expr, Or):
        return Or(nnf(expr.left), nnf(expr.right))
    if isinstance(expr, Exists):
        return Exists(expr.relation, nnf(expr.arg))
    if isinstance(expr, Forall):
        return Forall(expr.relation, nnf(expr.arg))
    arg = expr.arg
    if isinstance(arg, Atom):
        return expr
    if isinstance(arg, Not):
        return nnf(arg.arg)
    if isinstance(arg, And):
        return Or(nnf(Not(arg.left)), nnf(Not(arg.right)))
    if isinstance(arg, Or):
        return And(nnf(Not(arg.left)), nnf(Not(arg.right)))
    if isinstance(arg, Exists):
        return Forall(arg.relation, nnf(Not(arg.arg)))
    if isinstance(arg, Forall):
        return Exists(arg.relation, nnf(Not(arg.arg)))
    if isinstance(arg, Thing):
        return NOTHING
    if isinstance(arg, Nothing):
        return THING
    raise TypeError(f"unexpected expression {expr!r}")


# ---------------------------------------------------------------------------
# Entity extraction


def _expr_entities(expr: ClassExpr) -> set[str]:
    if isinstance(expr, Atom):
        return {expr.entity_id}
    if isinstance(expr, Not):
        return _expr_entities(expr.arg)
    if isinstance(expr, (And, Or)):
        return _expr_entities(expr.left) | _expr_entities(expr.right)
    if isinstance(expr, (Exists, Forall)):
        return {expr.relation} | _expr_entities(expr.arg)
    return set()


def axiom_entities(axiom: Axiom) -> set[str]:
    if isinstance(axiom, SubClassOf):
        return _expr_entities(axiom.sub) | _expr_entities(axiom.sup)
    if isinstance(axiom, ClassAssertion):
        return _expr_entities(axiom.cls) | {axiom.individual}
    return {axiom.relation, axiom.subject, axiom.object}


def _atom_entities(atom: g.RuleAtom) -> set[str]:
    if isinstance(atom, g.VarClass):
        return {atom.noun}
    return {atom.relation}


def entities_of(form: LogicForm) -> set[str]:
    """Every lexicon entity a logic form mentions (for article cross-listing)."""
    if isinstance(form, Axioms):
        out: set[str] = set()
        for axiom in form.axioms:
            out |= axiom_entities(axiom)
        return out
    if isinstance(form, BeyondFragment):
        out = set()
        for atom in form.rule.body + (form.rule.head,):
            out |= _atom_entities(atom)
        return out
    query = form.query
    if isinstance(query, ClassesOf):
        return {query.individual}
    out = set()
    if query.restriction is not None:
        out.add(query.restriction)
    condition = query.condition
    if isinstance(condition, RoleCondition):
        out |= {condition.relation, condition.target}
    else:
        out |= _expr_entities(condition.expr)
    return out
