"""
Ontology Models - Concept/axiom data model for ALC ontologies
Concepts are interned: structurally equal concepts are the same object,
so equality is identity and hashing is O(1).
"""

import weakref
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import ClassVar, Iterable, Iterator


class OntologyRepairError(Exception):
    """Base class for every error raised by this project"""


# ==================== CONCEPTS ====================

class Concept:
    """
    Immutable, interned concept expression

    Subclasses declare their constructor arguments in ``_fields``; calling
    ``Cls(*args)`` returns the unique instance for those arguments.
    """

    __slots__ = ('_hash', '__weakref__')
    _fields: ClassVar[tuple] = ()
    _interned: ClassVar[weakref.WeakValueDictionary] = weakref.WeakValueDictionary()

    def __new__(cls, *args):
        if len(args) != len(cls._fields):
            raise TypeError(f"{cls.__name__} expects {len(cls._fields)} argument(s), got {len(args)}")
        cls._check(args)
        key = (cls, *args)
        existing = Concept._interned.get(key)
        if existing is not None:
            return existing
        instance = object.__new__(cls)
        for name, value in zip(cls._fields, args):
            object.__setattr__(instance, name, value)
        object.__setattr__(instance, '_hash', hash(key))
        Concept._interned[key] = instance
        return instance

    @classmethod
    def _check(cls, args):
        pass

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (type(self), tuple(getattr(self, name) for name in self._fields))

    def __repr__(self):
        return f"<{type(self).__name__} {render_concept(self)}>"

    def __str__(self):
        return render_concept(self)

    def children(self):
        """Direct concept arguments"""
        return ()


def _require_concept(value, where):
    if not isinstance(value, Concept):
        raise TypeError(f"{where} expects a Concept, got {type(value).__name__}")


def _require_name(value, where):
    if not isinstance(value, str) or not value:
        raise TypeError(f"{where} expects a non-empty name, got {value!r}")


class AtomicName(Concept):
    __slots__ = ('name',)
    _fields = ('name',)

    @classmethod
    def _check(cls, args):
        _require_name(args[0], 'AtomicName')


class Top(Concept):
    __slots__ = ()


class Bottom(Concept):
    __slots__ = ()


class Not(Concept):
    __slots__ = ('arg',)
    _fields = ('arg',)

    @classmethod
    def _check(cls, args):
        _require_concept(args[0], 'Not')

    def children(self):
        return (self.arg,)


class And(Concept):
    __slots__ = ('left', 'right')
    _fields = ('left', 'right')

    @classmethod
    def _check(cls, args):
        _require_concept(args[0], 'And')
        _require_concept(args[1], 'And')

    def children(self):
        return (self.left, self.right)


class Or(Concept):
    __slots__ = ('left', 'right')
    _fields = ('left', 'right')

    @classmethod
    def _check(cls, args):
        _require_concept(args[0], 'Or')
        _require_concept(args[1], 'Or')

    def children(self):
        return (self.left, self.right)


class ForAll(Concept):
    __slots__ = ('role', 'arg')
    _fields = ('role', 'arg')

    @classmethod
    def _check(cls, args):
        _require_name(args[0], 'ForAll')
        _require_concept(args[1], 'ForAll')

    def children(self):
        return (self.arg,)


class Exists(Concept):
    __slots__ = ('role', 'arg')
    _fields = ('role', 'arg')

    @classmethod
    def _check(cls, args):
        _require_name(args[0], 'Exists')
        _require_concept(args[1], 'Exists')

    def children(self):
        return (self.arg,)


TOP = Top()
BOTTOM = Bottom()


@lru_cache(maxsize=1 << 16)
def render_concept(c):
    """Render a concept in the text format (binary And/Or)"""
    if isinstance(c, AtomicName):
        return c.name
    if isinstance(c, Top):
        return 'Top'
    if isinstance(c, Bottom):
        return 'Bottom'
    if isinstance(c, Not):
        return f"Not({render_concept(c.arg)})"
    if isinstance(c, And):
        return f"And({render_concept(c.left)} {render_concept(c.right)})"
    if isinstance(c, Or):
        return f"Or({render_concept(c.left)} {render_concept(c.right)})"
    if isinstance(c, ForAll):
        return f"All({c.role} {render_concept(c.arg)})"
    if isinstance(c, Exists):
        return f"Some({c.role} {render_concept(c.arg)})"
    raise TypeError(f"Not a concept: {c!r}")


def sort_key(item):
    """Deterministic ordering key for concepts and axioms"""
    return str(item)


def sorted_concepts(concepts):
    return sorted(concepts, key=sort_key)


def conjunction(concepts):
    """Left-associative binary conjunction; empty input gives Top"""
    concepts = list(concepts)
    if not concepts:
        return TOP
    result = concepts[0]
    for c in concepts[1:]:
        result = And(result, c)
    return result


def disjunction(concepts):
    """Left-associative binary disjunction; empty input gives Bottom"""
    concepts = list(concepts)
    if not concepts:
        return BOTTOM
    result = concepts[0]
    for c in concepts[1:]:
        result = Or(result, c)
    return result


# ==================== CONCEPT OPERATIONS ====================

@lru_cache(maxsize=1 << 16)
def nnf(c):
    """
    Negation normal form

    Negations end up directly on atomic names; ¬⊤ and ¬⊥ become ⊥ and ⊤.
    No other simplification is applied, so ⊤ ⊓ A stays as written.
    """
    if isinstance(c, (AtomicName, Top, Bottom)):
        return c
    if isinstance(c, And):
        return And(nnf(c.left), nnf(c.right))
    if isinstance(c, Or):
        return Or(nnf(c.left), nnf(c.right))
    if isinstance(c, ForAll):
        return ForAll(c.role, nnf(c.arg))
    if isinstance(c, Exists):
        return Exists(c.role, nnf(c.arg))

    inner = c.arg
    if isinstance(inner, AtomicName):
        return c
    if isinstance(inner, Top):
        return BOTTOM
    if isinstance(inner, Bottom):
        return TOP
    if isinstance(inner, Not):
        return nnf(inner.arg)
    if isinstance(inner, And):
        return Or(nnf(Not(inner.left)), nnf(Not(inner.right)))
    if isinstance(inner, Or):
        return And(nnf(Not(inner.left)), nnf(Not(inner.right)))
    if isinstance(inner, ForAll):
        return Exists(inner.role, nnf(Not(inner.arg)))
    if isinstance(inner, Exists):
        return ForAll(inner.role, nnf(Not(inner.arg)))
    raise TypeError(f"Not a concept: {inner!r}")


def complement(c):
    """nnf(¬c)"""
    return nnf(Not(c))


def is_nnf(c):
    if isinstance(c, Not):
        return isinstance(c.arg, AtomicName)
    return all(is_nnf(child) for child in c.children())


def concept_subconcepts(c):
    """sub(C): C together with all of its syntactic subterms"""
    result = set()
    stack = [c]
    while stack:
        current = stack.pop()
        if current in result:
            continue
        result.add(current)
        stack.extend(current.children())
    return result


def concept_size(c):
    """|C|: 1 for names, ⊤, ⊥; 1 + sizes of the arguments otherwise"""
    return 1 + sum(concept_size(child) for child in c.children())


def concept_depth(c):
    if not c.children():
        return 0
    return 1 + max(concept_depth(child) for child in c.children())


def concept_names_of(c):
    return {sub.name for sub in concept_subconcepts(c) if isinstance(sub, AtomicName)}


def role_names_of(c):
    return {sub.role for sub in concept_subconcepts(c) if isinstance(sub, (ForAll, Exists))}


def is_el_concept(c):
    """EL: names, ⊤, conjunction and existential restriction only"""
    if isinstance(c, (AtomicName, Top)):
        return True
    if isinstance(c, (And, Exists)):
        return all(is_el_concept(child) for child in c.children())
    return False


# ==================== AXIOMS ====================

class Axiom:
    """Base class of the three axiom shapes"""

    def concepts(self):
        return ()

    def to_text(self):
        raise NotImplementedError

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class Subsumption(Axiom):
    """GCI lhs ⊑ rhs"""
    lhs: Concept
    rhs: Concept

    def __post_init__(self):
        _require_concept(self.lhs, 'Subsumption')
        _require_concept(self.rhs, 'Subsumption')

    def concepts(self):
        return (self.lhs, self.rhs)

    def to_text(self):
        return f"SubClassOf({render_concept(self.lhs)} {render_concept(self.rhs)})"


@dataclass(frozen=True)
class ClassAssertion(Axiom):
    """Assertion concept(individual)"""
    concept: Concept
    individual: str

    def __post_init__(self):
        _require_concept(self.concept, 'ClassAssertion')
        _require_name(self.individual, 'ClassAssertion')

    def concepts(self):
        return (self.concept,)

    def to_text(self):
        return f"ClassAssertion({render_concept(self.concept)} {self.individual})"


@dataclass(frozen=True)
class RoleAssertion(Axiom):
    """Assertion role(subject, target)"""
    role: str
    subject: str
    target: str

    def __post_init__(self):
        _require_name(self.role, 'RoleAssertion')
        _require_name(self.subject, 'RoleAssertion')
        _require_name(self.target, 'RoleAssertion')

    def to_text(self):
        return f"PropertyAssertion({self.role} {self.subject} {self.target})"


def axiom_size(ax):
    """GCIs count |C| + |D|, class assertions |C|, role assertions 0"""
    return sum(concept_size(c) for c in ax.concepts())


def is_el_axiom(ax):
    return all(is_el_concept(c) for c in ax.concepts())


# ==================== ONTOLOGY ====================

def _dedupe(axioms):
    seen = set()
    unique = []
    for ax in axioms:
        if not isinstance(ax, Axiom):
            raise TypeError(f"Ontology expects axioms, got {type(ax).__name__}")
        if ax not in seen:
            seen.add(ax)
            unique.append(ax)
    return tuple(unique)


@dataclass(frozen=True)
class Ontology:
    """
    Ordered, duplicate-free, immutable collection of axioms

    The signature is derived from the axioms; every operation that
    "changes" an ontology returns a new one.
    """
    axioms: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'axioms', _dedupe(self.axioms))

    @classmethod
    def of(cls, *axioms):
        return cls(tuple(axioms))

    def __len__(self):
        return len(self.axioms)

    def __iter__(self) -> Iterator[Axiom]:
        return iter(self.axioms)

    def __contains__(self, ax):
        return ax in self.axiom_set

    @cached_property
    def axiom_set(self):
        return frozenset(self.axioms)

    @cached_property
    def concept_names(self):
        names = set()
        for ax in self.axioms:
            for c in ax.concepts():
                names |= concept_names_of(c)
        return frozenset(names)

    @cached_property
    def role_names(self):
        roles = set()
        for ax in self.axioms:
            if isinstance(ax, RoleAssertion):
                roles.add(ax.role)
            for c in ax.concepts():
                roles |= role_names_of(c)
        return frozenset(roles)

    @cached_property
    def individuals(self):
        inds = set()
        for ax in self.axioms:
            if isinstance(ax, ClassAssertion):
                inds.add(ax.individual)
            elif isinstance(ax, RoleAssertion):
                inds.update((ax.subject, ax.target))
        return frozenset(inds)

    @property
    def tbox(self):
        return tuple(ax for ax in self.axioms if isinstance(ax, Subsumption))

    @property
    def abox(self):
        return tuple(ax for ax in self.axioms if not isinstance(ax, Subsumption))

    def add(self, *axioms):
        return Ontology(self.axioms + tuple(axioms))

    def union(self, other: Iterable[Axiom]):
        return Ontology(self.axioms + tuple(other))

    def remove(self, ax):
        return Ontology(tuple(a for a in self.axioms if a != ax))

    def without(self, axioms):
        drop = set(axioms)
        return Ontology(tuple(a for a in self.axioms if a not in drop))

    def replace(self, old, new):
        """Put new at the position of old (dropped if new is already present)"""
        return Ontology(tuple(new if a == old else a for a in self.axioms))

    def restrict(self, keep):
        """Sub-ontology of the axioms in keep, in this ontology's order"""
        keep = set(keep)
        return Ontology(tuple(a for a in self.axioms if a in keep))

    def is_el(self):
        return all(is_el_axiom(ax) for ax in self.axioms if not isinstance(ax, RoleAssertion))

    def __str__(self):
        return "".join(ax.to_text() + "\n" for ax in self.axioms)


# ==================== SUBCONCEPTS & SIZE ====================

def subconcepts(o):
    """
    sub(O): ⊤, ⊥ and every subterm of every concept in O

    GCIs contribute sub(C) ∪ sub(D); class assertions C(a) contribute sub(C).
    """
    result = {TOP, BOTTOM}
    for ax in o.axioms:
        for c in ax.concepts():
            result |= concept_subconcepts(c)
    return frozenset(result)


def ontology_size(o):
    """|O| as the sum of axiom sizes"""
    return sum(axiom_size(ax) for ax in o.axioms)
