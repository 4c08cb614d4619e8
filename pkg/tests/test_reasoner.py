import itertools
import random

import pytest

from cnlwiki import semantics as s
from cnlwiki.errors import ResourceLimitError
from cnlwiki.reasoner import (
    KnowledgeBase,
    Model,
    Reasoner,
    check_model,
    classify,
    entails,
    enumerate_models,
    exists_model,
    instances_of,
    is_consistent,
)

from oracle_utils import random_kb

A, B, C = s.Atom("101"), s.Atom("102"), s.Atom("103")
R, S2 = "201", "202"
P, Q = "301", "302"


def kb(*axioms):
    return KnowledgeBase.from_axioms(axioms)


# ---------------------------------------------------------------------------
# consistency


def test_direct_clash_inconsistent():
    base = kb(s.SubClassOf(A, s.Not(B)), s.ClassAssertion(A, P), s.ClassAssertion(B, P))
    consistent, model = is_consistent(base)
    assert not consistent and model is None
    assert exists_model(base, 4) is None


def test_empty_kb_consistent_with_one_element_model():
    consistent, model = is_consistent(kb())
    assert consistent
    assert len(model.domain) == 1
    assert check_model(model, kb())


def test_blocking_terminates_cyclic_existential():
    base = kb(s.SubClassOf(A, s.Exists(R, A)), s.ClassAssertion(A, P))
    consistent, model = is_consistent(base)
    assert consistent
    assert check_model(model, base)
    # oracle: a one-element model with a reflexive edge exists
    found = exists_model(base, 1)
    assert found is not None and check_model(found, base)


def test_witness_satisfies_every_axiom(geo):
    base = kb(
        s.SubClassOf(A, s.Exists(R, s.And(B, s.Exists(S2, C)))),
        s.SubClassOf(B, s.Or(A, C)),
        s.ClassAssertion(A, P),
        s.ClassAssertion(s.Not(C), P),
        s.PropertyAssertion(R, P, Q),
    )
    consistent, model = is_consistent(base)
    assert consistent
    assert check_model(model, base)


def test_unsatisfiable_tbox_with_member():
    base = kb(s.SubClassOf(A, s.Not(A)), s.ClassAssertion(A, P))
    assert not is_consistent(base)[0]
    assert list(enumerate_models(base, 3)) == []


def test_unsatisfiable_class_without_member_is_fine():
    base = kb(s.SubClassOf(A, s.Not(A)))
    consistent, model = is_consistent(base)
    assert consistent
    assert check_model(model, base)


# ---------------------------------------------------------------------------
# entailment


def test_entails_modus_ponens_shape():
    base = kb(s.SubClassOf(A, B), s.ClassAssertion(A, P))
    assert entails(base, s.ClassAssertion(B, P))
    assert not entails(base, s.ClassAssertion(C, P))


def test_entails_subclass_chain_through_existential():
    base = kb(s.SubClassOf(A, s.Exists(R, B)), s.SubClassOf(B, C))
    goal = s.SubClassOf(A, s.Exists(R, C))
    # oracle: no model of the premises plus a counterexample individual
    counter = base.with_axioms((s.ClassAssertion(s.And(A, s.Not(s.Exists(R, C))), P),))
    assert exists_model(counter, 4) is None
    assert entails(base, goal)


def test_entails_nothing_from_empty():
    assert not entails(kb(), s.SubClassOf(A, B))
    # two-element countermodel exists
    counter = kb(s.ClassAssertion(s.And(A, s.Not(B)), P))
    assert exists_model(counter, 2) is not None


def test_role_entailment_is_assertion_lookup():
    base = kb(s.PropertyAssertion(R, P, Q))
    assert entails(base, s.PropertyAssertion(R, P, Q))
    assert not entails(base, s.PropertyAssertion(R, Q, P))
    assert not entails(base, s.PropertyAssertion(S2, P, Q))


def test_entails_monotone_under_growth():
    rng = random.Random(23)
    checked = 0
    for _ in range(40):
        small = random_kb(rng, max_axioms=3)
        big = small.with_axioms(random_kb(rng, max_axioms=3).axioms)
        if not is_consistent(big)[0]:
            continue
        classes, _, individuals = small.signature
        for cls in classes:
            for ind in individuals:
                goal = s.ClassAssertion(s.Atom(cls), ind)
                if entails(small, goal):
                    assert entails(big, goal)
                    checked += 1
    assert checked


# ---------------------------------------------------------------------------
# classification


def test_classify_with_reduction():
    base = kb(s.SubClassOf(A, B), s.SubClassOf(B, C), s.SubClassOf(A, C))
    hierarchy = classify(base)
    assert hierarchy.edges == (("101", "102"), ("102", "103"))
    assert hierarchy.equivalences == (("101",), ("102",), ("103",))


def test_classify_equivalence_folding():
    base = kb(s.SubClassOf(A, B), s.SubClassOf(B, A))
    hierarchy = classify(base)
    assert hierarchy.edges == ()
    assert hierarchy.equivalences == (("101", "102"),)


def test_classify_empty_relations():
    base = kb(s.ClassAssertion(A, P), s.ClassAssertion(B, Q))
    hierarchy = classify(base)
    assert hierarchy.edges == ()
    assert hierarchy.equivalences == (("101",), ("102",))


def test_classify_agrees_with_entailment():
    rng = random.Random(31)
    for _ in range(25):
        base = random_kb(rng, max_axioms=4)
        if not is_consistent(base)[0]:
            continue
        reasoner = Reasoner(base)
        hierarchy = reasoner.classify()
        classes, _, _ = base.signature
        reachable = {c: {c} for c in classes}
        rep_of = {}
        for group in hierarchy.equivalences:
            for member in group:
                rep_of[member] = group[0]
        closure = {rep: {rep} for rep in {g[0] for g in hierarchy.equivalences}}
        changed = True
        while changed:
            changed = False
            for sub, sup in hierarchy.edges:
                for already in list(closure.get(sub, ())):
                    pass
                if sup not in closure[sub]:
                    closure[sub].add(sup)
                    changed = True
                for other, reach in closure.items():
                    if sub in reach and sup not in reach:
                        reach.add(sup)
                        changed = True
        for sub, sup in itertools.permutations(classes, 2):
            expected = reasoner.entails(s.SubClassOf(s.Atom(sub), s.Atom(sup)))
            derived = rep_of[sup] in closure[rep_of[sub]] or rep_of[sub] == rep_of[sup]
            assert derived == expected, (sub, sup, hierarchy)


# ---------------------------------------------------------------------------
# instances and answers


def test_instances_of_inferred():
    base = kb(s.ClassAssertion(A, P), s.SubClassOf(A, B))
    assert instances_of(base, B) == (P,)


def test_instances_of_open_world():
    base = kb(s.ClassAssertion(A, P), s.SubClassOf(A, B))
    # not entailed that P is a non-C: a model makes P a C
    assert instances_of(base, s.Not(C)) == ()
    witness = exists_model(
        base.with_axioms((s.ClassAssertion(C, P),)), 2
    )
    assert witness is not None


def test_instances_of_empty_kb():
    assert instances_of(kb(), A) == ()


def test_answer_classes_of():
    base = kb(s.ClassAssertion(A, P), s.SubClassOf(A, B))
    reasoner = Reasoner(base)
    assert reasoner.answer(s.ClassesOf(P)) == ("101", "102")
    assert reasoner.answer(s.ClassesOf(Q)) == ()


def test_answer_role_condition_with_restriction():
    base = kb(
        s.ClassAssertion(A, P),
        s.PropertyAssertion(R, P, Q),
        s.PropertyAssertion(R, Q, Q),
    )
    reasoner = Reasoner(base)
    assert reasoner.answer(s.SubjectsSuchThat("101", s.RoleCondition(R, Q))) == (P,)
    assert reasoner.answer(s.SubjectsSuchThat(None, s.RoleCondition(R, Q))) == (P, Q)


def test_answer_class_condition():
    base = kb(
        s.ClassAssertion(s.Exists(R, A), P),
        s.ClassAssertion(B, P),
    )
    reasoner = Reasoner(base)
    assert reasoner.answer(
        s.SubjectsSuchThat("102", s.ClassCondition(s.Exists(R, A)))
    ) == (P,)
    assert reasoner.answer(s.SubjectsSuchThat(None, s.ClassCondition(C))) == ()


def test_answer_on_empty_kb():
    reasoner = Reasoner(kb())
    assert reasoner.answer(s.ClassesOf(P)) == ()
    assert reasoner.answer(s.SubjectsSuchThat(None, s.RoleCondition(R, Q))) == ()


# ---------------------------------------------------------------------------
# model oracle machinery


def test_check_model_examples():
    empty = kb()
    one = Model(("e0",), {}, {}, {})
    assert check_model(one, empty)
    asserted = kb(s.PropertyAssertion(R, P, Q))
    bad = Model(("e0", "e1"), {}, {R: frozenset()}, {P: "e0", Q: "e1"})
    assert not check_model(bad, asserted)
    good = Model(("e0", "e1"), {}, {R: frozenset({("e0", "e1")})}, {P: "e0", Q: "e1"})
    assert check_model(good, asserted)


def test_check_model_unique_name_assumption():
    base = kb(s.ClassAssertion(A, P), s.ClassAssertion(s.Not(A), Q))
    merged = Model(("e0",), {"101": frozenset({"e0"})}, {}, {P: "e0", Q: "e0"})
    assert not check_model(merged, base)


def test_enumerate_models_counts_tiny_space():
    # one class, no relations, one individual, domain 1: A(p) or not
    base = kb(s.ClassAssertion(A, P))
    models = list(enumerate_models(base, 1))
    assert len(models) == 1
    assert models[0].class_ext["101"] == frozenset({"e0"})


def test_enumerate_models_empty_for_unsat():
    base = kb(s.SubClassOf(A, s.Not(A)), s.ClassAssertion(A, P))
    assert list(enumerate_models(base, 3)) == []


def test_exists_model_agrees_with_raw_enumeration():
    rng = random.Random(5)
    for _ in range(60):
        base = random_kb(rng, max_axioms=4)
        classes, relations, individuals = base.signature
        if len(relations) > 1 or len(classes) > 2:
            continue  # keep raw enumeration affordable
        raw = next(iter(enumerate_models(base, 2)), None)
        fast = exists_model(base, 2)
        assert (raw is None) == (fast is None)
        if fast is not None:
            assert check_model(fast, base)


def test_tableau_agrees_with_oracle_randomized_unit_scale():
    rng = random.Random(97)
    disagreements = []
    for index in range(150):
        base = random_kb(rng)
        consistent, witness = is_consistent(base)
        if consistent:
            if not check_model(witness, base):
                disagreements.append((index, base, "bad witness"))
        else:
            if exists_model(base, 4) is not None:
                disagreements.append((index, base, "oracle found a model"))
    assert not disagreements, disagreements[:3]


def test_universal_propagates_over_asserted_edges():
    # A is subclass of (no r-successor in B); edge r(p,q) with B(q) clashes
    base = kb(
        s.SubClassOf(A, s.Not(s.Exists(R, B))),
        s.ClassAssertion(A, P),
        s.PropertyAssertion(R, P, Q),
        s.ClassAssertion(B, Q),
    )
    assert not is_consistent(base)[0]
    assert exists_model(base, 4) is None
    without_membership = kb(
        s.SubClassOf(A, s.Not(s.Exists(R, B))),
        s.ClassAssertion(A, P),
        s.PropertyAssertion(R, P, Q),
    )
    consistent, witness = is_consistent(without_membership)
    assert consistent and check_model(witness, without_membership)


def test_mutual_existential_cycle_blocks_and_folds():
    base = kb(s.SubClassOf(A, s.Exists(R, B)), s.SubClassOf(B, s.Exists(R, A)),
              s.ClassAssertion(A, P))
    consistent, witness = is_consistent(base)
    assert consistent
    assert check_model(witness, base)


def test_guaranteed_inconsistent_kbs_agree_with_oracle():
    from oracle_utils import random_expr

    rng = random.Random(61)
    for _ in range(150):
        base = random_kb(rng, max_axioms=3)
        expr = random_expr(rng, 1)
        base = base.with_axioms(
            (s.ClassAssertion(expr, P), s.ClassAssertion(s.Not(expr), P))
        )
        assert not is_consistent(base)[0]
        assert exists_model(base, 4) is None


def test_budget_exceeded_raises():
    base = kb(
        s.SubClassOf(A, s.And(s.Exists(R, A), s.Exists(S2, A))),
        s.ClassAssertion(A, P),
    )
    with pytest.raises(ResourceLimitError):
        is_consistent(base, node_budget=10)


def test_budget_never_fires_at_test_sizes():
    rng = random.Random(41)
    for _ in range(100):
        base = random_kb(rng)
        is_consistent(base)  # must not raise ResourceLimitError
