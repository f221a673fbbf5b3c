import pytest
from hypothesis import given, settings

from ontology.models import (
    AtomicName, Not, And, Or, ForAll, Exists, TOP, BOTTOM,
    Subsumption, ClassAssertion, RoleAssertion, Ontology,
)
from ontology.syntax import (
    OntologySyntaxError, UnknownConstructError,
    parse_ontology, parse_axiom, parse_concept, serialize_ontology, load_ontology, save_ontology,
)
from tests.strategies import ontologies

A, B, C = AtomicName('A'), AtomicName('B'), AtomicName('C')


# ==================== PARSING ====================

def test_parse_subsumption():
    assert parse_ontology("SubClassOf(A B)") == Ontology.of(Subsumption(A, B))


def test_parse_class_assertion():
    assert parse_ontology("ClassAssertion(Some(r A) x)") == Ontology.of(ClassAssertion(Exists('r', A), 'x'))


def test_parse_every_construct():
    o = parse_ontology("""
        # a comment line
        SubClassOf(Not(A) Or(B All(r Bottom)))   # trailing comment
        SubClassOf(Top And(A Some(s Top)))
        PropertyAssertion(r x y)
    """)
    assert o.axioms == (
        Subsumption(Not(A), Or(B, ForAll('r', BOTTOM))),
        Subsumption(TOP, And(A, Exists('s', TOP))),
        RoleAssertion('r', 'x', 'y'),
    )


def test_nary_forms_desugar_left_associatively():
    assert parse_concept("And(A B C)") == And(And(A, B), C)
    assert parse_concept("Or(A B C)") == Or(Or(A, B), C)
    assert parse_concept("And(A)") == A


def test_whitespace_is_insignificant():
    assert parse_axiom("SubClassOf(\n  A\tB )") == Subsumption(A, B)


def test_empty_document():
    assert parse_ontology("  # nothing here\n") == Ontology()


def test_duplicates_are_dropped():
    assert len(parse_ontology("SubClassOf(A B)\nSubClassOf(A B)\n")) == 1


def test_unbalanced_input_is_a_syntax_error():
    with pytest.raises(OntologySyntaxError):
        parse_ontology("SubClassOf(A")


def test_syntax_error_reports_position():
    with pytest.raises(OntologySyntaxError) as excinfo:
        parse_ontology("SubClassOf(A B)\nSubClassOf(A B C)\n")
    assert excinfo.value.line == 2
    assert excinfo.value.column is not None


def test_unknown_construct():
    with pytest.raises(UnknownConstructError) as excinfo:
        parse_ontology("SubClassOf(A Min(r A))")
    assert 'Min' in str(excinfo.value)


def test_reserved_words_are_not_names():
    with pytest.raises(OntologySyntaxError):
        parse_concept("Some(And A)")


def test_fresh_prefix_is_reserved():
    with pytest.raises(OntologySyntaxError):
        parse_axiom("ClassAssertion(A __fresh_0)")


def test_invalid_identifier():
    with pytest.raises(OntologySyntaxError):
        parse_axiom("SubClassOf(1A B)")


# ==================== SERIALIZATION ====================

@pytest.mark.parametrize('ontology, text', [
    (Ontology.of(Subsumption(A, B)), "SubClassOf(A B)\n"),
    (Ontology(), ""),
    (Ontology.of(ClassAssertion(Exists('r', A), 'x')), "ClassAssertion(Some(r A) x)\n"),
    (Ontology.of(RoleAssertion('r', 'x', 'y')), "PropertyAssertion(r x y)\n"),
])
def test_serialize(ontology, text):
    assert serialize_ontology(ontology) == text


def test_serialize_emits_binary_forms():
    assert serialize_ontology(parse_ontology("SubClassOf(And(A B C) B)")) == "SubClassOf(And(And(A B) C) B)\n"


@given(ontologies(max_axioms=6, max_leaves=6))
@settings(max_examples=100)
def test_parse_inverts_serialize(o):
    assert parse_ontology(serialize_ontology(o)) == o


def test_save_and_load(tmp_path):
    o = Ontology.of(Subsumption(A, Not(B)), ClassAssertion(A, 'x'))
    path = tmp_path / 'saved.onto'
    save_ontology(o, path)
    assert load_ontology(path) == o


def test_bundled_corpus_parses(corpus_dir):
    paths = sorted(corpus_dir.glob('*.onto'))
    assert len(paths) == 5
    for path in paths:
        o = load_ontology(path)
        assert 30 <= len(o) <= 100
        assert serialize_ontology(parse_ontology(serialize_ontology(o))) == serialize_ontology(o)
