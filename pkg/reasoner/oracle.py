"""
Brute-Force Oracle - Exhaustive finite-model search for tiny ontologies

Enumerates every interpretation with at most max_domain elements and
evaluates all of them at once with numpy: for domain size n, concept-name
assignments form the first axis and role assignments the second.
Individuals are mapped in a Python loop over canonical maps only
(restricted-growth strings), since all extensions are enumerated and
domain elements are therefore interchangeable.

Answers are sound only up to the domain bound: "no model found" is not a
proof of inconsistency. Used as a cross-check of the tableau.
"""

from dataclasses import dataclass, field

import numpy as np

from ontology.models import (
    OntologyRepairError, AtomicName, Top, Bottom, Not, And, Or, Exists,
    Subsumption, ClassAssertion, RoleAssertion, concept_names_of, role_names_of,
)
from config.settings import config
from utils.logger import get_logger

logger = get_logger(__name__)


class OracleBoundError(OntologyRepairError):
    """The signature or the interpretation grid is too large to enumerate"""


@dataclass(frozen=True)
class FiniteInterpretation:
    """A finite interpretation I = (Δ, ·^I)"""
    domain: tuple
    concepts: dict = field(default_factory=dict)
    roles: dict = field(default_factory=dict)
    individuals: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain:
            raise ValueError("interpretation domain must be non-empty")

    def extension(self, c):
        """C^I as a set of elements"""
        if isinstance(c, AtomicName):
            return set(self.concepts.get(c.name, ()))
        if isinstance(c, Top):
            return set(self.domain)
        if isinstance(c, Bottom):
            return set()
        if isinstance(c, Not):
            return set(self.domain) - self.extension(c.arg)
        if isinstance(c, And):
            return self.extension(c.left) & self.extension(c.right)
        if isinstance(c, Or):
            return self.extension(c.left) | self.extension(c.right)
        pairs = self.roles.get(c.role, ())
        inner = self.extension(c.arg)
        if isinstance(c, Exists):
            return {x for x in self.domain if any(a == x and b in inner for a, b in pairs)}
        return {x for x in self.domain if all(b in inner for a, b in pairs if a == x)}

    def satisfies(self, ax):
        if isinstance(ax, Subsumption):
            return self.extension(ax.lhs) <= self.extension(ax.rhs)
        if isinstance(ax, ClassAssertion):
            return self.individuals[ax.individual] in self.extension(ax.concept)
        pair = (self.individuals[ax.subject], self.individuals[ax.target])
        return pair in self.roles.get(ax.role, ())

    def is_model_of(self, ontology):
        return all(self.satisfies(ax) for ax in ontology.axioms)


# ==================== SIGNATURE ====================

def _signature(axioms):
    names, roles, individuals = set(), set(), []
    for ax in axioms:
        for c in ax.concepts():
            names |= concept_names_of(c)
            roles |= role_names_of(c)
        if isinstance(ax, ClassAssertion):
            individuals.append(ax.individual)
        elif isinstance(ax, RoleAssertion):
            roles.add(ax.role)
            individuals.extend((ax.subject, ax.target))
    return sorted(names), sorted(roles), list(dict.fromkeys(individuals))


def _canonical_maps(count, n):
    """Individual -> element maps up to renaming of elements"""
    def extend(prefix, used):
        if len(prefix) == count:
            yield tuple(prefix)
            return
        for element in range(min(used + 1, n)):
            yield from extend(prefix + [element], max(used, element + 1))
    yield from extend([], 0)


# ==================== VECTORISED EVALUATION ====================

class _Grid:
    """All interpretations over a fixed domain size, evaluated in bulk"""

    def __init__(self, names, roles, n):
        self.n = n
        name_count = 1 << (len(names) * n)
        role_count = 1 << (n * n)
        total_roles = role_count ** len(roles)

        idx = np.arange(name_count, dtype=np.int64)[:, None]
        bits = ((idx >> np.arange(len(names) * n)) & 1).astype(bool)
        self.names = {
            name: bits[:, i * n:(i + 1) * n][:, None, :]
            for i, name in enumerate(names)
        }

        ridx = np.arange(total_roles, dtype=np.int64)
        self.roles = {}
        for j, role in enumerate(roles):
            digit = (ridx // (role_count ** j)) % role_count
            rbits = ((digit[:, None] >> np.arange(n * n)) & 1).astype(bool)
            self.roles[role] = rbits.reshape(total_roles, n, n)[None]

        self.shape = (name_count, total_roles)
        self._memo = {}

    def extension(self, c):
        """Boolean array broadcastable to (assignments, role assignments, n)"""
        cached = self._memo.get(c)
        if cached is not None:
            return cached
        if isinstance(c, AtomicName):
            result = self.names[c.name]
        elif isinstance(c, Top):
            result = np.ones((1, 1, self.n), dtype=bool)
        elif isinstance(c, Bottom):
            result = np.zeros((1, 1, self.n), dtype=bool)
        elif isinstance(c, Not):
            result = ~self.extension(c.arg)
        elif isinstance(c, And):
            result = self.extension(c.left) & self.extension(c.right)
        elif isinstance(c, Or):
            result = self.extension(c.left) | self.extension(c.right)
        elif isinstance(c, Exists):
            inner = self.extension(c.arg)[:, :, None, :]
            result = np.any(self.roles[c.role] & inner, axis=3)
        else:
            inner = self.extension(c.arg)[:, :, None, :]
            result = np.all(~self.roles[c.role] | inner, axis=3)
        self._memo[c] = result
        return result

    def holds(self, ax, element_of):
        """Boolean array broadcastable to (assignments, role assignments)"""
        if isinstance(ax, Subsumption):
            return np.all(~self.extension(ax.lhs) | self.extension(ax.rhs), axis=2)
        if isinstance(ax, ClassAssertion):
            return self.extension(ax.concept)[:, :, element_of[ax.individual]]
        return self.roles[ax.role][:, :, element_of[ax.subject], element_of[ax.target]]

    def decode(self, index, names, roles, element_of):
        p, q = index
        n = self.n
        concepts = {
            name: frozenset(x for x in range(n) if self.names[name][p, 0, x])
            for name in names
        }
        role_ext = {
            role: frozenset((x, y) for x in range(n) for y in range(n) if self.roles[role][0, q, x, y])
            for role in roles
        }
        return FiniteInterpretation(tuple(range(n)), concepts, role_ext, dict(element_of))


def _check_bounds(names, roles, individuals, max_domain):
    signature_load = len(names) * len(roles) * max_domain ** 2
    if signature_load > config.ORACLE_SIGNATURE_BOUND:
        raise OracleBoundError(
            f"signature too large for enumeration: {len(names)} names x {len(roles)} roles "
            f"x {max_domain}^2 = {signature_load} > {config.ORACLE_SIGNATURE_BOUND}"
        )
    grid = (1 << (len(names) * max_domain)) * (1 << (max_domain ** 2)) ** len(roles)
    if grid > config.ORACLE_MAX_INTERPRETATIONS:
        raise OracleBoundError(
            f"{grid} interpretations per individual map exceed {config.ORACLE_MAX_INTERPRETATIONS}"
        )


def _search(axioms, query, max_domain):
    """
    First interpretation (≤ max_domain elements) satisfying all axioms and,
    if given, violating query
    """
    if max_domain < 1:
        raise ValueError("max_domain must be at least 1")
    everything = list(axioms) + ([query] if query is not None else [])
    names, roles, individuals = _signature(everything)
    _check_bounds(names, roles, individuals, max_domain)

    for n in range(1, max_domain + 1):
        grid = _Grid(names, roles, n)
        for mapping in _canonical_maps(len(individuals), n):
            element_of = dict(zip(individuals, mapping))
            mask = np.ones(grid.shape, dtype=bool)
            for ax in axioms:
                mask &= grid.holds(ax, element_of)
                if not mask.any():
                    break
            if query is not None and mask.any():
                mask &= ~grid.holds(query, element_of)
            hits = np.argwhere(mask)
            if len(hits):
                return grid.decode(tuple(hits[0]), names, roles, element_of)
    return None


# ==================== PUBLIC API ====================

def oracle_find_model(ontology, max_domain=3):
    """A model of the ontology with at most max_domain elements, or None"""
    return _search(ontology.axioms, None, max_domain)


def oracle_is_consistent(ontology, max_domain=3):
    """True iff a model with at most max_domain elements exists"""
    return oracle_find_model(ontology, max_domain) is not None


def oracle_entails(ontology, ax, max_domain=3):
    """
    True iff every model with at most max_domain elements satisfies ax

    Args:
        ontology: Ontology whose models are enumerated
        ax: Axiom to check
        max_domain: Largest domain size enumerated

    Returns:
        Entailment verdict, sound only up to the domain bound
    """
    counter_model = _search(ontology.axioms, ax, max_domain)
    if counter_model is not None:
        logger.debug(f"Oracle counter-model for {ax}: {counter_model}")
    return counter_model is None
