import pytest
from hypothesis import given, settings

from ontology.models import (
    AtomicName, Not, And, Or, ForAll, Exists, TOP, BOTTOM,
    Subsumption, ClassAssertion, RoleAssertion, Ontology,
    nnf, is_nnf, complement, concept_size, concept_subconcepts, subconcepts,
    ontology_size, axiom_size, conjunction, disjunction, is_el_concept, render_concept,
)
from tests.strategies import concepts, ontologies

A, B, C = AtomicName('A'), AtomicName('B'), AtomicName('C')


# ==================== CONCEPTS ====================

def test_structurally_equal_concepts_are_interned():
    assert And(A, Exists('r', B)) is And(AtomicName('A'), Exists('r', AtomicName('B')))
    assert And(A, B) is not And(B, A)


def test_concepts_are_immutable():
    with pytest.raises(AttributeError):
        And(A, B).left = C


def test_concept_constructors_reject_non_concepts():
    with pytest.raises(TypeError):
        And(A, 'B')


@pytest.mark.parametrize('concept, expected', [
    (Not(And(A, B)), Or(Not(A), Not(B))),
    (Not(Exists('r', A)), ForAll('r', Not(A))),
    (Not(TOP), BOTTOM),
    (Not(BOTTOM), TOP),
    (Not(Not(A)), A),
    (Not(ForAll('r', Or(A, Not(B)))), Exists('r', And(Not(A), B))),
])
def test_nnf(concept, expected):
    assert nnf(concept) == expected


def test_nnf_keeps_top_conjuncts():
    assert nnf(And(TOP, A)) == And(TOP, A)


def test_complement():
    assert complement(Exists('r', Not(A))) == ForAll('r', A)


@given(concepts(max_leaves=8, max_depth=6))
@settings(max_examples=200)
def test_nnf_is_idempotent_and_normal(c):
    assert nnf(nnf(c)) == nnf(c)
    assert is_nnf(nnf(c))


@pytest.mark.parametrize('concept, size', [
    (A, 1),
    (TOP, 1),
    (Not(A), 2),
    (Exists('r', And(A, B)), 4),
])
def test_concept_size(concept, size):
    assert concept_size(concept) == size


@given(concepts(max_leaves=12, max_depth=6))
@settings(max_examples=200)
def test_subconcept_count_bounded_by_size(c):
    assert len(concept_subconcepts(c)) <= concept_size(c)


def test_nary_helpers_associate_left():
    assert conjunction([A, B, C]) == And(And(A, B), C)
    assert disjunction([A, B, C]) == Or(Or(A, B), C)
    assert conjunction([]) is TOP
    assert disjunction([]) is BOTTOM


def test_el_fragment():
    assert is_el_concept(And(A, Exists('r', TOP)))
    assert not is_el_concept(ForAll('r', A))
    assert not is_el_concept(Not(A))


def test_render_concept():
    assert render_concept(And(A, Exists('r', Not(B)))) == 'And(A Some(r Not(B)))'


# ==================== AXIOMS & ONTOLOGIES ====================

@pytest.mark.parametrize('ontology, expected', [
    (Ontology.of(Subsumption(A, B)), {TOP, BOTTOM, A, B}),
    (Ontology.of(Subsumption(A, Exists('r', A))), {TOP, BOTTOM, A, Exists('r', A)}),
    (Ontology(), {TOP, BOTTOM}),
])
def test_subconcepts(ontology, expected):
    assert subconcepts(ontology) == expected


def test_assertions_contribute_subconcepts():
    o = Ontology.of(ClassAssertion(Exists('r', A), 'x'), RoleAssertion('r', 'x', 'y'))
    assert subconcepts(o) == {TOP, BOTTOM, A, Exists('r', A)}


@pytest.mark.parametrize('ontology, size', [
    (Ontology.of(Subsumption(A, B)), 2),
    (Ontology.of(Subsumption(A, Exists('r', A))), 3),
    (Ontology(), 0),
])
def test_ontology_size(ontology, size):
    assert ontology_size(ontology) == size


def test_role_assertions_have_no_size():
    assert axiom_size(RoleAssertion('r', 'a', 'b')) == 0
    assert axiom_size(ClassAssertion(Not(A), 'a')) == 2


@given(ontologies(max_axioms=8))
@settings(max_examples=200)
def test_subconcept_count_bounded_by_ontology_size(o):
    assert len(subconcepts(o)) <= ontology_size(o) + 2


def test_duplicates_collapse_to_first_occurrence():
    o = Ontology.of(Subsumption(A, B), ClassAssertion(A, 'x'), Subsumption(A, B))
    assert o.axioms == (Subsumption(A, B), ClassAssertion(A, 'x'))


def test_ontology_signature():
    o = Ontology.of(
        Subsumption(A, ForAll('s', B)),
        ClassAssertion(C, 'x'),
        RoleAssertion('r', 'x', 'y'),
    )
    assert o.concept_names == {'A', 'B', 'C'}
    assert o.role_names == {'r', 's'}
    assert o.individuals == {'x', 'y'}
    assert o.tbox == (Subsumption(A, ForAll('s', B)),)
    assert len(o.abox) == 2


def test_ontology_updates_return_new_ontologies():
    o = Ontology.of(Subsumption(A, B), ClassAssertion(A, 'x'))
    replaced = o.replace(Subsumption(A, B), Subsumption(A, TOP))

    assert o.axioms == (Subsumption(A, B), ClassAssertion(A, 'x'))
    assert replaced.axioms == (Subsumption(A, TOP), ClassAssertion(A, 'x'))
    assert o.remove(ClassAssertion(A, 'x')).axioms == (Subsumption(A, B),)
    assert o.restrict([ClassAssertion(A, 'x')]).axioms == (ClassAssertion(A, 'x'),)
    assert len(o.add(Subsumption(A, B))) == 2


def test_ontology_rejects_non_axioms():
    with pytest.raises(TypeError):
        Ontology((A,))
