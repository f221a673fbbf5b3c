"""
Ontology Syntax - Parser and serializer for the functional-style text format

    Statement := SubClassOf(C D) | ClassAssertion(C a) | PropertyAssertion(R a b)
    Concept   := Name | Top | Bottom | Not(C) | And(C+) | Or(C+) | All(R C) | Some(R C)

Whitespace-insensitive, '#' starts a comment running to end of line.
"""

from functools import lru_cache
from pathlib import Path

import pyparsing as pp

from ontology.models import (
    OntologyRepairError, Ontology, AtomicName, Not, ForAll, Exists,
    Subsumption, ClassAssertion, RoleAssertion, TOP, BOTTOM,
    conjunction, disjunction,
)
from utils.validators import RESERVED_WORDS, validate_name
from utils.logger import get_logger

logger = get_logger(__name__)


class OntologySyntaxError(OntologyRepairError):
    """Malformed text, with the 1-based position of the problem"""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnknownConstructError(OntologySyntaxError):
    """A call-shaped construct whose name is not part of the grammar"""


# ==================== GRAMMAR ====================

def _checked_name(s, loc, toks):
    problem = validate_name(toks[0])
    if problem:
        raise OntologySyntaxError(problem, pp.lineno(loc, s), pp.col(loc, s))
    return toks[0]


def _unknown_construct(s, loc, toks):
    raise UnknownConstructError(f"unknown construct '{toks[0]}'", pp.lineno(loc, s), pp.col(loc, s))


@lru_cache(maxsize=None)
def _grammar():
    LPAR, RPAR = map(pp.Suppress, "()")
    identifier = pp.Word(pp.alphas + '_', pp.alphanums + '_')
    keyword = pp.MatchFirst([pp.Keyword(word) for word in sorted(RESERVED_WORDS)])

    name = (~keyword + identifier).set_parse_action(_checked_name)
    unknown = (~keyword + identifier + pp.FollowedBy('(')).set_parse_action(_unknown_construct)

    def kw(word):
        return pp.Suppress(pp.Keyword(word))

    concept = pp.Forward()
    top = pp.Keyword('Top').set_parse_action(lambda: TOP)
    bottom = pp.Keyword('Bottom').set_parse_action(lambda: BOTTOM)
    negation = (kw('Not') + LPAR + concept + RPAR).set_parse_action(lambda t: Not(t[0]))
    conj = (kw('And') + LPAR + pp.Group(pp.OneOrMore(concept)) + RPAR).set_parse_action(
        lambda t: conjunction(list(t[0])))
    disj = (kw('Or') + LPAR + pp.Group(pp.OneOrMore(concept)) + RPAR).set_parse_action(
        lambda t: disjunction(list(t[0])))
    universal = (kw('All') + LPAR + name + concept + RPAR).set_parse_action(
        lambda t: ForAll(t[0], t[1]))
    existential = (kw('Some') + LPAR + name + concept + RPAR).set_parse_action(
        lambda t: Exists(t[0], t[1]))
    atomic = name.copy().add_parse_action(lambda t: AtomicName(t[0]))

    concept <<= (top | bottom | negation | conj | disj | universal | existential | unknown | atomic)

    subsumption = (kw('SubClassOf') + LPAR + concept + concept + RPAR).set_parse_action(
        lambda t: Subsumption(t[0], t[1]))
    class_assertion = (kw('ClassAssertion') + LPAR + concept + name + RPAR).set_parse_action(
        lambda t: ClassAssertion(t[0], t[1]))
    role_assertion = (kw('PropertyAssertion') + LPAR + name + name + name + RPAR).set_parse_action(
        lambda t: RoleAssertion(t[0], t[1], t[2]))

    statement = subsumption | class_assertion | role_assertion | unknown
    document = pp.ZeroOrMore(statement)

    comment = pp.Regex(r'#[^\n]*')
    for element in (document, statement, concept):
        element.ignore(comment)

    return document, statement, concept


def _run(element, text):
    try:
        return list(element.parse_string(text, parse_all=True))
    except pp.ParseBaseException as e:
        raise OntologySyntaxError(f"syntax error: {e.msg}", e.lineno, e.col) from None


# ==================== PARSING ====================

def parse_ontology(text):
    """
    Parse an ontology document

    Args:
        text: Document text

    Returns:
        Ontology with axioms in file order; duplicates are dropped with a warning
    """
    document, _, _ = _grammar()
    axioms = _run(document, text)

    seen = set()
    for ax in axioms:
        if ax in seen:
            logger.warning(f"Duplicate axiom dropped: {ax}")
        seen.add(ax)

    return Ontology(tuple(axioms))


def parse_axiom(text):
    """Parse a single statement"""
    _, statement, _ = _grammar()
    return _run(statement, text)[0]


def parse_concept(text):
    """Parse a single concept expression"""
    _, _, concept = _grammar()
    return _run(concept, text)[0]


def load_ontology(path):
    """Read and parse a UTF-8 ontology file"""
    text = Path(path).read_text(encoding='utf-8')
    logger.debug(f"Loaded {path} ({len(text)} characters)")
    return parse_ontology(text)


# ==================== SERIALIZATION ====================

def serialize_ontology(o):
    """Canonical text form: one statement per line, binary And/Or"""
    return "".join(ax.to_text() + "\n" for ax in o.axioms)


def save_ontology(o, path):
    Path(path).write_text(serialize_ontology(o), encoding='utf-8')
