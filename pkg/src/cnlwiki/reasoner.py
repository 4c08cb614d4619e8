"""Consistency, entailment, classification, and query answering.

The decision procedure is a tableau for ALC with ABox individuals under the
unique-name assumption: every expression is put in negation normal form,
the TBox is internalized as a meta-constraint applied to every node, and
termination comes from subset blocking (a node whose label is contained in
an ancestor's stops growing the tree).  Rule order is deterministic
(conjunction, universal propagation, disjunction branching left-first,
existential successors), so results and witness models are reproducible.

``check_model``/``enumerate_models``/``exists_model`` implement direct
set-theoretic semantics over finite models.  They are deliberately
independent of the tableau: the test suite uses them as the oracle side of
every consistency claim.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import ResourceLimitError
from .semantics import (
    And,
    Atom,
    Axiom,
    ClassAssertion,
    ClassesOf,
    ClassExpr,
    Exists,
    Forall,
    Not,
    Nothing,
    Or,
    PropertyAssertion,
    Query,
    RoleCondition,
    SubClassOf,
    Thing,
    nnf,
)

DEFAULT_NODE_BUDGET = 100_000


# ---------------------------------------------------------------------------
# Knowledge base


def expr_key(expr: ClassExpr) -> tuple:
    if isinstance(expr, Atom):
        return ("atom", expr.entity_id)
    if isinstance(expr, Thing):
        return ("thing",)
    if isinstance(expr, Nothing):
        return ("nothing",)
    if isinstance(expr, Not):
        return ("not", expr_key(expr.arg))
    if isinstance(expr, And):
        return ("and", expr_key(expr.left), expr_key(expr.right))
    if isinstance(expr, Or):
        return ("or", expr_key(expr.left), expr_key(expr.right))
    if isinstance(expr, Exists):
        return ("exists", expr.relation, expr_key(expr.arg))
    return ("forall", expr.relation, expr_key(expr.arg))


def axiom_key(axiom: Axiom) -> tuple:
    if isinstance(axiom, SubClassOf):
        return ("sub", expr_key(axiom.sub), expr_key(axiom.sup))
    if isinstance(axiom, ClassAssertion):
        return ("ca", axiom.individual, expr_key(axiom.cls))
    return ("pa", axiom.relation, axiom.subject, axiom.object)


def _expr_signature(expr: ClassExpr, classes: set[str], relations: set[str]) -> None:
    if isinstance(expr, Atom):
        classes.add(expr.entity_id)
    elif isinstance(expr, Not):
        _expr_signature(expr.arg, classes, relations)
    elif isinstance(expr, (And, Or)):
        _expr_signature(expr.left, classes, relations)
        _expr_signature(expr.right, classes, relations)
    elif isinstance(expr, (Exists, Forall)):
        relations.add(expr.relation)
        _expr_signature(expr.arg, classes, relations)


@dataclass(frozen=True)
class KnowledgeBase:
    """Immutable axiom sets; the single input to every reasoning call."""

    tbox: tuple[SubClassOf, ...] = ()
    abox_c: tuple[ClassAssertion, ...] = ()
    abox_r: tuple[PropertyAssertion, ...] = ()

    @staticmethod
    def from_axioms(axioms: Iterable[Axiom]) -> "KnowledgeBase":
        tbox = sorted((a for a in axioms if isinstance(a, SubClassOf)), key=axiom_key)
        abox_c = sorted((a for a in axioms if isinstance(a, ClassAssertion)), key=axiom_key)
        abox_r = sorted((a for a in axioms if isinstance(a, PropertyAssertion)), key=axiom_key)

        def dedup(items):
            out = []
            for item in items:
                if not out or out[-1] != item:
                    out.append(item)
            return tuple(out)

        return KnowledgeBase(dedup(tbox), dedup(abox_c), dedup(abox_r))

    @property
    def axioms(self) -> tuple[Axiom, ...]:
        return self.tbox + self.abox_c + self.abox_r

    @property
    def signature(self) -> tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]:
        """(atomic classes, relations, individuals) mentioned by the axioms."""
        classes: set[str] = set()
        relations: set[str] = set()
        individuals: set[str] = set()
        for axiom in self.tbox:
            _expr_signature(axiom.sub, classes, relations)
            _expr_signature(axiom.sup, classes, relations)
        for ca in self.abox_c:
            _expr_signature(ca.cls, classes, relations)
            individuals.add(ca.individual)
        for pa in self.abox_r:
            relations.add(pa.relation)
            individuals.add(pa.subject)
            individuals.add(pa.object)
        return tuple(sorted(classes)), tuple(sorted(relations)), tuple(sorted(individuals))

    def with_axioms(self, extra: Iterable[Axiom]) -> "KnowledgeBase":
        return KnowledgeBase.from_axioms(self.axioms + tuple(extra))


# ---------------------------------------------------------------------------
# Finite models and direct semantics


@dataclass
class Model:
    domain: tuple[str, ...]
    class_ext: dict[str, frozenset[str]]
    rel_ext: dict[str, frozenset[tuple[str, str]]]
    ind_map: dict[str, str]


def extension(model: Model, expr: ClassExpr) -> frozenset[str]:
    everything = frozenset(model.domain)
    if isinstance(expr, Thing):
        return everything
    if isinstance(expr, Nothing):
        return frozenset()
    if isinstance(expr, Atom):
        return model.class_ext.get(expr.entity_id, frozenset())
    if isinstance(expr, Not):
        return everything - extension(model, expr.arg)
    if isinstance(expr, And):
        return extension(model, expr.left) & extension(model, expr.right)
    if isinstance(expr, Or):
        return extension(model, expr.left) | extension(model, expr.right)
    pairs = model.rel_ext.get(expr.relation, frozenset())
    arg_ext = extension(model, expr.arg)
    if isinstance(expr, Exists):
        return frozenset(d for d in model.domain if any(e in arg_ext for d2, e in pairs if d2 == d))
    return frozenset(
        d for d in model.domain if all(e in arg_ext for d2, e in pairs if d2 == d)
    )


def check_model(model: Model, kb: KnowledgeBase) -> bool:
    """Direct set-theoretic satisfaction of every axiom (plus map sanity)."""
    _, _, individuals = kb.signature
    seen: set[str] = set()
    for ind in individuals:
        element = model.ind_map.get(ind)
        if element is None or element not in model.domain or element in seen:
            return False  # not total, or unique-name assumption violated
        seen.add(element)
    for axiom in kb.tbox:
        if not extension(model, axiom.sub) <= extension(model, axiom.sup):
            return False
    for ca in kb.abox_c:
        if model.ind_map[ca.individual] not in extension(model, ca.cls):
            return False
    for pa in kb.abox_r:
        pair = (model.ind_map[pa.subject], model.ind_map[pa.object])
        if pair not in model.rel_ext.get(pa.relation, frozenset()):
            return False
    return True


def enumerate_models(kb: KnowledgeBase, max_domain: int) -> Iterator[Model]:
    """Raw enumeration of every model up to the given domain size.

    Exponential in |relations| * n^2; usable only at oracle-test sizes.
    """
    classes, relations, individuals = kb.signature
    for n in range(1, max_domain + 1):
        domain = tuple(f"e{i}" for i in range(n))
        if len(individuals) > n:
            continue
        for mapping in itertools.permutations(domain, len(individuals)):
            ind_map = dict(zip(individuals, mapping))
            cls_cells = [(c, d) for c in classes for d in domain]
            rel_cells = [(r, d, e) for r in relations for d in domain for e in domain]
            for cls_bits in itertools.product((False, True), repeat=len(cls_cells)):
                class_ext = {c: set() for c in classes}
                for (c, d), bit in zip(cls_cells, cls_bits):
                    if bit:
                        class_ext[c].add(d)
                for rel_bits in itertools.product((False, True), repeat=len(rel_cells)):
                    rel_ext = {r: set() for r in relations}
                    for (r, d, e), bit in zip(rel_cells, rel_bits):
                        if bit:
                            rel_ext[r].add((d, e))
                    model = Model(
                        domain,
                        {c: frozenset(v) for c, v in class_ext.items()},
                        {r: frozenset(v) for r, v in rel_ext.items()},
                        ind_map,
                    )
                    if check_model(model, kb):
                        yield model


# -- pruned complete search (same answer as enumerate_models emptiness) ----

_TRUE, _FALSE, _UNKNOWN = True, False, None


def _k_not(v):
    return None if v is None else not v


def _k_and(values) -> Optional[bool]:
    saw_unknown = False
    for v in values:
        if v is False:
            return False
        if v is None:
            saw_unknown = True
    return None if saw_unknown else True


def _k_or(values) -> Optional[bool]:
    saw_unknown = False
    for v in values:
        if v is True:
            return True
        if v is None:
            saw_unknown = True
    return None if saw_unknown else False


class _PartialModel:
    def __init__(self, domain, class_ext, relations, ind_map):
        self.domain = domain
        self.class_ext = class_ext  # dict cls -> set of elements (fixed)
        self.edges: dict[tuple[str, int, int], Optional[bool]] = {}
        self.relations = relations
        self.ind_map = ind_map
        self._watch: Optional[tuple[str, int, int]] = None

    def _edge(self, relation: str, d: int, e: int) -> Optional[bool]:
        value = self.edges.get((relation, d, e))
        if value is None and self._watch is None:
            self._watch = (relation, d, e)  # first undecided cell consulted
        return value

    def eval_expr(self, expr: ClassExpr, d: int) -> Optional[bool]:
        if isinstance(expr, Thing):
            return True
        if isinstance(expr, Nothing):
            return False
        if isinstance(expr, Atom):
            return d in self.class_ext.get(expr.entity_id, ())
        if isinstance(expr, Not):
            return _k_not(self.eval_expr(expr.arg, d))
        if isinstance(expr, And):
            return _k_and((self.eval_expr(expr.left, d), self.eval_expr(expr.right, d)))
        if isinstance(expr, Or):
            return _k_or((self.eval_expr(expr.left, d), self.eval_expr(expr.right, d)))
        if isinstance(expr, Exists):
            return _k_or(
                _k_and((self._edge(expr.relation, d, e), self.eval_expr(expr.arg, e)))
                for e in self.domain
            )
        return _k_and(
            _k_or((_k_not(self._edge(expr.relation, d, e)), self.eval_expr(expr.arg, e)))
            for e in self.domain
        )

    def eval_axiom(self, axiom) -> Optional[bool]:
        if isinstance(axiom, SubClassOf):
            return _k_and(
                _k_or((_k_not(self.eval_expr(axiom.sub, d)), self.eval_expr(axiom.sup, d)))
                for d in self.domain
            )
        # property assertions are pre-forced edges, always true here
        return self.eval_expr(axiom.cls, self.ind_map[axiom.individual])

    def eval_group(self, axioms) -> Optional[bool]:
        return _k_and(self.eval_axiom(a) for a in axioms)

    def branch_cell(self, axioms) -> Optional[tuple[str, int, int]]:
        """An undecided edge cell some unknown axiom actually consulted.

        Branching only on cells that feed an unknown axiom's value keeps
        rows and relations that no longer constrain anything from doubling
        the search; any unknown verdict stems from at least one such cell.
        """
        for axiom in axioms:
            self._watch = None
            if self.eval_axiom(axiom) is None and self._watch is not None:
                return self._watch
        # defensive fallback: any undecided cell of an unknown axiom's relations
        unknown_rels: set[str] = set()
        for axiom in axioms:
            if self.eval_axiom(axiom) is None:
                unknown_rels |= _axiom_relations(axiom)
        for relation in sorted(unknown_rels):
            for d in self.domain:
                for e in self.domain:
                    if self.edges.get((relation, d, e)) is None:
                        return (relation, d, e)
        return None


def _axiom_relations(axiom) -> set[str]:
    classes: set[str] = set()
    relations: set[str] = set()
    if isinstance(axiom, SubClassOf):
        _expr_signature(axiom.sub, classes, relations)
        _expr_signature(axiom.sup, classes, relations)
    elif isinstance(axiom, ClassAssertion):
        _expr_signature(axiom.cls, classes, relations)
    else:
        relations.add(axiom.relation)
    return relations


def _relation_groups(axioms) -> list[list]:
    """Partition axioms into components connected by shared relations.

    With class extensions fixed, axioms constrain only their own relations'
    edges, so each component is satisfiable independently of the others.
    """
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: str, y: str) -> None:
        parent[find(x)] = find(y)

    relation_sets = [sorted(_axiom_relations(a)) for a in axioms]
    for relations in relation_sets:
        for other in relations[1:]:
            union(relations[0], other)
    groups: dict[str, list] = {}
    for axiom, relations in zip(axioms, relation_sets):
        groups.setdefault(find(relations[0]), []).append(axiom)
    return [groups[root] for root in sorted(groups)]


def exists_model(kb: KnowledgeBase, max_domain: int) -> Optional[Model]:
    """Complete bounded-model search; None iff no model with <= max_domain.

    Equivalent to ``enumerate_models`` emptiness but prunes with a
    three-valued evaluation over partially assigned relation edges, and
    searches one canonical individual placement per domain size (any model
    is isomorphic to one of the searched ones).
    """
    classes, relations, individuals = kb.signature
    for n in range(max(1, len(individuals)), max_domain + 1):
        domain = tuple(range(n))
        ind_map = {ind: i for i, ind in enumerate(individuals)}
        free = [d for d in domain if d >= len(individuals)]
        bound = [d for d in domain if d < len(individuals)]
        cls_list = sorted(classes)

        def type_choices():
            all_types = list(itertools.product((False, True), repeat=len(cls_list)))
            for bound_types in itertools.product(all_types, repeat=len(bound)):
                # anonymous elements are interchangeable: sorted types only
                for free_types in itertools.combinations_with_replacement(all_types, len(free)):
                    yield dict(zip(bound + free, bound_types + free_types))

        forced = {}
        for pa in kb.abox_r:
            forced[(pa.relation, ind_map[pa.subject], ind_map[pa.object])] = True

        for types in type_choices():
            class_ext = {
                c: {d for d in domain if types[d][k]} for k, c in enumerate(cls_list)
            }
            partial = _PartialModel(domain, class_ext, relations, ind_map)
            partial.edges.update(forced)

            def search(axioms) -> bool:
                verdict = partial.eval_group(axioms)
                if verdict is False:
                    return False
                if verdict is True:
                    return True
                cell = partial.branch_cell(axioms)
                assert cell is not None  # unknown verdict implies an undecided cell
                for bit in (False, True):
                    partial.edges[cell] = bit
                    if search(axioms):
                        return True
                del partial.edges[cell]
                return False

            pending = []
            doomed = False
            for axiom in kb.tbox + kb.abox_c:
                verdict = partial.eval_axiom(axiom)
                if verdict is False:
                    doomed = True
                    break
                if verdict is None:
                    pending.append(axiom)
            # independent relation components: satisfiable iff each is
            if not doomed and all(search(group) for group in _relation_groups(pending)):
                elements = tuple(f"e{d}" for d in domain)
                rel_ext = {r: set() for r in relations}
                for (r, d, e), bit in partial.edges.items():
                    if bit:
                        rel_ext[r].add((f"e{d}", f"e{e}"))
                return Model(
                    elements,
                    {c: frozenset(f"e{d}" for d in v) for c, v in class_ext.items()},
                    {r: frozenset(v) for r, v in rel_ext.items()},
                    {ind: f"e{i}" for ind, i in ind_map.items()},
                )
    return None


# ---------------------------------------------------------------------------
# Tableau


class _Clash(Exception):
    pass


class _Tableau:
    def __init__(self, kb: KnowledgeBase, budget: int):
        self.kb = kb
        self.budget = budget
        self.work = 0
        # internalized TBox: every node must satisfy each of these
        self.meta = tuple(
            Or(nnf(Not(axiom.sub)), nnf(axiom.sup)) for axiom in kb.tbox
        )
        self.labels: dict[int, dict[tuple, ClassExpr]] = {}
        self.parent: dict[int, tuple[int, str]] = {}
        self.edges: dict[tuple[int, str], list[int]] = {}
        self.done_or: set[tuple[int, tuple]] = set()
        self.done_ex: set[tuple[int, tuple]] = set()
        self.next_node = 0
        self.roots: dict[str, int] = {}

    def _spend(self) -> None:
        self.work += 1
        if self.work > self.budget:
            raise ResourceLimitError(f"tableau exceeded {self.budget} work units")

    def new_node(self, parent: Optional[tuple[int, str]] = None) -> int:
        self._spend()
        node = self.next_node
        self.next_node += 1
        self.labels[node] = {}
        if parent is not None:
            self.parent[node] = parent
            self.edges.setdefault((parent[0], parent[1]), []).append(node)
        for expr in self.meta:
            self.add(node, expr)
        return node

    def add(self, node: int, expr: ClassExpr) -> None:
        key = expr_key(expr)
        label = self.labels[node]
        if key in label:
            return
        self._spend()
        if isinstance(expr, Nothing):
            raise _Clash
        if (
            isinstance(expr, Not)
            and isinstance(expr.arg, Atom)
            and ("atom", expr.arg.entity_id) in label
        ):
            raise _Clash
        if isinstance(expr, Atom) and ("not", ("atom", expr.entity_id)) in label:
            raise _Clash
        label[key] = expr

    def setup(self) -> None:
        _, _, individuals = self.kb.signature
        for ind in individuals:
            self.roots[ind] = self.new_node()
        if not individuals:
            self.new_node()  # interpretation domains are non-empty
        for ca in self.kb.abox_c:
            self.add(self.roots[ca.individual], nnf(ca.cls))
        for pa in self.kb.abox_r:
            self.edges.setdefault((self.roots[pa.subject], pa.relation), []).append(
                self.roots[pa.object]
            )

    def _ancestors(self, node: int) -> Iterator[int]:
        while node in self.parent:
            node = self.parent[node][0]
            yield node

    def blocked(self, node: int) -> bool:
        label = set(self.labels[node])
        for ancestor in self._ancestors(node):
            if label <= set(self.labels[ancestor]):
                return True
        return False

    def saturate(self) -> None:
        """Conjunction and universal propagation to a fixpoint."""
        changed = True
        while changed:
            changed = False
            for node in sorted(self.labels):
                for expr in list(self.labels[node].values()):
                    if isinstance(expr, And):
                        before = len(self.labels[node])
                        self.add(node, expr.left)
                        self.add(node, expr.right)
                        changed = changed or len(self.labels[node]) != before
                    elif isinstance(expr, Forall):
                        for target in self.edges.get((node, expr.relation), ()):
                            before = len(self.labels[target])
                            self.add(target, expr.arg)
                            changed = changed or len(self.labels[target]) != before

    def _pick_or(self) -> Optional[tuple[int, Or]]:
        for node in sorted(self.labels):
            if self.blocked(node):
                continue
            for key, expr in self.labels[node].items():
                if isinstance(expr, Or) and (node, key) not in self.done_or:
                    if expr_key(expr.left) in self.labels[node] or expr_key(
                        expr.right
                    ) in self.labels[node]:
                        self.done_or.add((node, key))
                        continue
                    return node, expr
        return None

    def _pick_exists(self) -> Optional[tuple[int, Exists]]:
        for node in sorted(self.labels):
            if self.blocked(node):
                continue
            for key, expr in self.labels[node].items():
                if isinstance(expr, Exists) and (node, key) not in self.done_ex:
                    return node, expr
        return None

    def snapshot(self):
        return (
            {n: dict(l) for n, l in self.labels.items()},
            dict(self.parent),
            {k: list(v) for k, v in self.edges.items()},
            set(self.done_or),
            set(self.done_ex),
            self.next_node,
        )

    def restore(self, snap) -> None:
        labels, parent, edges, done_or, done_ex, next_node = snap
        self.labels = {n: dict(l) for n, l in labels.items()}
        self.parent = dict(parent)
        self.edges = {k: list(v) for k, v in edges.items()}
        self.done_or = set(done_or)
        self.done_ex = set(done_ex)
        self.next_node = next_node

    def solve(self) -> bool:
        """Expand to a clash-free saturated tableau; False if impossible."""
        try:
            self.saturate()
        except _Clash:
            return False
        choice = self._pick_or()
        if choice is not None:
            node, expr = choice
            key = expr_key(expr)
            snap = self.snapshot()
            for branch in (expr.left, expr.right):
                try:
                    self.add(node, branch)
                    self.done_or.add((node, key))
                    if self.solve():
                        return True
                except _Clash:
                    pass
                self.restore(snap)
            return False
        pending = self._pick_exists()
        if pending is not None:
            node, expr = pending
            self.done_ex.add((node, expr_key(expr)))
            try:
                child = self.new_node((node, expr.relation))
                self.add(child, expr.arg)
            except _Clash:
                return False
            return self.solve()
        return True

    def extract_model(self) -> Model:
        """Finite witness: blocked nodes fold into their blockers."""
        status: dict[int, tuple[str, Optional[int]]] = {}
        for node in sorted(self.labels):
            if node not in self.parent:
                status[node] = ("live", None)
                continue
            parent = self.parent[node][0]
            if status[parent][0] != "live":
                status[node] = ("excluded", None)
                continue
            blocker = None
            probe = node
            label = set(self.labels[node])
            while probe in self.parent:
                probe = self.parent[probe][0]
                if status[probe][0] == "live" and label <= set(self.labels[probe]):
                    blocker = probe
                    break
            status[node] = ("live", None) if blocker is None else ("blocked", blocker)

        def resolve(node: int) -> Optional[int]:
            kind, target = status[node]
            if kind == "live":
                return node
            if kind == "blocked":
                return target
            return None

        live = [n for n in sorted(self.labels) if status[n][0] == "live"]
        names = {n: f"e{i}" for i, n in enumerate(live)}
        classes, relations, _ = self.kb.signature
        class_ext = {
            c: frozenset(
                names[n] for n in live if ("atom", c) in self.labels[n]
            )
            for c in classes
        }
        rel_ext: dict[str, set[tuple[str, str]]] = {r: set() for r in relations}
        for (source, relation), targets in self.edges.items():
            if status[source][0] != "live":
                continue
            for target in targets:
                resolved = resolve(target)
                if resolved is not None:
                    rel_ext.setdefault(relation, set()).add((names[source], names[resolved]))
        return Model(
            tuple(names[n] for n in live),
            class_ext,
            {r: frozenset(v) for r, v in rel_ext.items()},
            {ind: names[node] for ind, node in self.roots.items()},
        )


def is_consistent(
    kb: KnowledgeBase, node_budget: int = DEFAULT_NODE_BUDGET
) -> tuple[bool, Optional[Model]]:
    """Satisfiability plus, when satisfiable, a finite witness model."""
    tableau = _Tableau(kb, node_budget)
    try:
        tableau.setup()
    except _Clash:
        return False, None
    if tableau.solve():
        return True, tableau.extract_model()
    return False, None


# ---------------------------------------------------------------------------
# Entailment and derived services


@dataclass(frozen=True)
class Hierarchy:
    """Transitively reduced subsumption edges plus equivalence partition."""

    edges: tuple[tuple[str, str], ...]
    equivalences: tuple[tuple[str, ...], ...]


_FRESH = "__probe__"


class Reasoner:
    """Caching facade over one immutable knowledge base."""

    def __init__(self, kb: KnowledgeBase, node_budget: int = DEFAULT_NODE_BUDGET):
        self.kb = kb
        self.node_budget = node_budget
        self._entails_cache: dict[tuple, bool] = {}
        self._consistency: Optional[tuple[bool, Optional[Model]]] = None

    def is_consistent(self) -> tuple[bool, Optional[Model]]:
        if self._consistency is None:
            self._consistency = is_consistent(self.kb, self.node_budget)
        return self._consistency

    def entails(self, goal: Axiom) -> bool:
        key = axiom_key(goal)
        if key in self._entails_cache:
            return self._entails_cache[key]
        if isinstance(goal, PropertyAssertion):
            # no role axioms in this fragment: role entailment is assertion lookup
            result = goal in self.kb.abox_r
        elif isinstance(goal, SubClassOf):
            probe = ClassAssertion(And(goal.sub, Not(goal.sup)), _FRESH)
            result = not is_consistent(self.kb.with_axioms((probe,)), self.node_budget)[0]
        else:
            probe = ClassAssertion(Not(goal.cls), goal.individual)
            result = not is_consistent(self.kb.with_axioms((probe,)), self.node_budget)[0]
        self._entails_cache[key] = result
        return result

    def classify(self) -> Hierarchy:
        classes, _, _ = self.kb.signature
        subsumed: dict[str, set[str]] = {c: set() for c in classes}
        for sub, sup in itertools.permutations(classes, 2):
            if self.entails(SubClassOf(Atom(sub), Atom(sup))):
                subsumed[sub].add(sup)
        groups: dict[str, list[str]] = {}
        for c in classes:
            rep = min([c] + [d for d in subsumed[c] if c in subsumed[d]], key=_id_key)
            groups.setdefault(rep, []).append(c)
        reps = sorted(groups, key=_id_key)
        edges = []
        for sub in reps:
            for sup in reps:
                if sup == sub or sup not in subsumed[sub]:
                    continue
                # entailment is transitively closed, so one hop through any
                # intermediate representative witnesses redundancy
                redundant = any(
                    mid not in (sub, sup) and mid in subsumed[sub] and sup in subsumed[mid]
                    for mid in reps
                )
                if not redundant:
                    edges.append((sub, sup))
        edges.sort(key=lambda e: (_id_key(e[0]), _id_key(e[1])))
        equivalences = tuple(
            tuple(sorted(groups[rep], key=_id_key)) for rep in reps
        )
        return Hierarchy(tuple(edges), equivalences)

    def instances_of(self, expr: ClassExpr) -> tuple[str, ...]:
        _, _, individuals = self.kb.signature
        return tuple(
            ind for ind in individuals if self.entails(ClassAssertion(expr, ind))
        )

    def answer(self, query: Query) -> tuple[str, ...]:
        """Certain answers: individuals (or atomic classes for ClassesOf)."""
        classes, _, individuals = self.kb.signature
        if isinstance(query, ClassesOf):
            return tuple(
                c
                for c in sorted(classes, key=_id_key)
                if self.entails(ClassAssertion(Atom(c), query.individual))
            )
        condition = query.condition
        if isinstance(condition, RoleCondition):
            candidates = sorted(
                {
                    pa.subject
                    for pa in self.kb.abox_r
                    if pa.relation == condition.relation and pa.object == condition.target
                },
                key=_id_key,
            )
            if query.restriction is None:
                return tuple(candidates)
            restriction = Atom(query.restriction)
            return tuple(
                x for x in candidates if self.entails(ClassAssertion(restriction, x))
            )
        expr = condition.expr
        if query.restriction is not None:
            expr = And(Atom(query.restriction), expr)
        return self.instances_of(expr)


def _id_key(entity_id: str) -> tuple:
    return (0, int(entity_id)) if entity_id.isdigit() else (1, entity_id)


def entails(kb: KnowledgeBase, goal: Axiom, node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    return Reasoner(kb, node_budget).entails(goal)


def classify(kb: KnowledgeBase, node_budget: int = DEFAULT_NODE_BUDGET) -> Hierarchy:
    return Reasoner(kb, node_budget).classify()


def instances_of(
    kb: KnowledgeBase, expr: ClassExpr, node_budget: int = DEFAULT_NODE_BUDGET
) -> tuple[str, ...]:
    return Reasoner(kb, node_budget).instances_of(expr)


def answer(kb: KnowledgeBase, query: Query, node_budget: int = DEFAULT_NODE_BUDGET):
    return Reasoner(kb, node_budget).answer(query)
