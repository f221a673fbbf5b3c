"""
Reasoner Session - Consistency, subsumption and entailment over one ontology
Holds the absorbed TBox, a subsumption cache and the call counters
"""

from ontology.models import (
    Subsumption, ClassAssertion, RoleAssertion, AtomicName,
    And, Top, Bottom, nnf, complement,
)
from reasoner.tableau import Tableau, absorb
from config.settings import config
from utils.logger import get_logger

logger = get_logger(__name__)


class ReasonerSession:
    """
    Single-threaded reasoning session over an immutable ontology

    Every top-level decision (is_consistent, is_subsumed, entails)
    increments call_count, cached or not; cache hits are counted
    separately in cache_hits.
    """

    def __init__(self, ontology, node_budget=None):
        self.ontology = ontology
        self.node_budget = node_budget or config.REASONER_NODE_BUDGET
        self.tbox = absorb(ontology.tbox)
        self.concept_assertions = [
            (ax.individual, nnf(ax.concept))
            for ax in ontology.axioms if isinstance(ax, ClassAssertion)
        ]
        self.role_assertions = [
            (ax.role, ax.subject, ax.target)
            for ax in ontology.axioms if isinstance(ax, RoleAssertion)
        ]
        self._subsumption_cache = {}
        self._consistent = None
        self._fresh_counter = 0
        self.call_count = 0
        self.cache_hits = 0
        self.tableau_runs = 0

    def __repr__(self):
        return f"<ReasonerSession axioms={len(self.ontology)} calls={self.call_count}>"

    # ==================== INTERNAL DECISIONS ====================

    def _fresh_individual(self):
        name = f"{config.FRESH_INDIVIDUAL_PREFIX}{self._fresh_counter}"
        self._fresh_counter += 1
        return name

    def _run(self, concept_assertions, role_assertions):
        self.tableau_runs += 1
        return Tableau(self.tbox, self.node_budget).run(concept_assertions, role_assertions)

    def _ontology_consistent(self):
        if self._consistent is None:
            self._consistent = self._run(self.concept_assertions, self.role_assertions)
            logger.debug(f"Consistency of {len(self.ontology)} axioms: {self._consistent}")
        return self._consistent

    def _concept_satisfiable(self, concept):
        """
        Satisfiability of a concept w.r.t. the whole ontology

        The ontology is consistent here and ALC models are closed under
        disjoint union, so a fresh individual never interacts with the ABox
        and only the TBox has to be taken into account.
        """
        return self._run([(self._fresh_individual(), concept)], [])

    # ==================== DECISIONS ====================

    def is_consistent(self):
        """True iff the ontology has a model"""
        self.call_count += 1
        return self._ontology_consistent()

    def is_subsumed(self, c, d):
        """
        C ⊑_O D: C ⊓ nnf(¬D) has no instance in any model of the ontology

        Args:
            c: Sub-concept candidate
            d: Super-concept candidate

        Returns:
            True iff C^I ⊆ D^I in every model
        """
        self.call_count += 1
        key = (nnf(c), nnf(d))
        cached = self._subsumption_cache.get(key)
        if cached is not None:
            self.cache_hits += 1
            return cached

        sub, sup = key
        if sub == sup or isinstance(sub, Bottom) or isinstance(sup, Top):
            result = True
        elif not self._ontology_consistent():
            result = True
        else:
            result = not self._concept_satisfiable(And(sub, complement(sup)))

        self._subsumption_cache[key] = result
        return result

    def strictly_subsumed(self, c, d):
        """C ⊏_O D; always issues both subsumption decisions"""
        forward = self.is_subsumed(c, d)
        backward = self.is_subsumed(d, c)
        return forward and not backward

    def equivalent(self, c, d):
        """C ≡_O D"""
        forward = self.is_subsumed(c, d)
        backward = self.is_subsumed(d, c)
        return forward and backward

    def entails(self, ax):
        """
        O ⊨ ax

        GCIs reduce to subsumption, class assertions to inconsistency of
        O ∪ {nnf(¬C)(a)}; role assertions are entailed only when asserted
        (or when O is inconsistent).
        """
        if isinstance(ax, Subsumption):
            return self.is_subsumed(ax.lhs, ax.rhs)

        self.call_count += 1
        if not self._ontology_consistent():
            return True
        if isinstance(ax, RoleAssertion):
            return ax in self.ontology
        if isinstance(ax, ClassAssertion):
            extra = [(ax.individual, complement(ax.concept))]
            return not self._run(self.concept_assertions + extra, self.role_assertions)
        raise TypeError(f"Not an axiom: {ax!r}")

    # ==================== CLASSIFICATION ====================

    def classify(self, names):
        """
        Inferred hierarchy over a set of concept names

        Pairs already implied by transitivity of earlier answers are not
        sent to the tableau.

        Args:
            names: Concept names

        Returns:
            frozenset of (A, B) with O ⊨ A ⊑ B, reflexive pairs included
        """
        names = sorted(names)
        subsumers = {a: {a} for a in names}

        for a in names:
            for b in names:
                if b in subsumers[a]:
                    continue
                if self.is_subsumed(AtomicName(a), AtomicName(b)):
                    subsumers[a].add(b)
                    subsumers[a] |= subsumers[b]

        return frozenset((a, b) for a in names for b in subsumers[a])

    # ==================== COUNTERS ====================

    def reset_counter(self):
        self.call_count = 0
        self.cache_hits = 0

    def read_counter(self):
        return self.call_count


# ==================== MODULE-LEVEL HELPERS ====================

def is_consistent(ontology, node_budget=None):
    """Consistency of an ontology with a throwaway session"""
    return ReasonerSession(ontology, node_budget).is_consistent()
