"""
Evaluation Service - Inferred hierarchies, IIC and inconsistency injection
"""

from dataclasses import dataclass
from fractions import Fraction

from ontology.models import OntologyRepairError
from ontology.sample_data import random_gci
from reasoner.session import ReasonerSession
from services.refinement import InconsistentReferenceError
from config.settings import config
from utils.logger import get_logger

logger = get_logger(__name__)


class InjectionError(OntologyRepairError):
    """No inconsistency was reached within the attempt budget"""


@dataclass
class InjectionConfig:
    """Random-GCI generator parameters for inconsistency injection"""
    max_depth: int = config.INJECTION_MAX_DEPTH
    allow_negation: bool = True
    max_attempts: int = config.INJECTION_MAX_ATTEMPTS
    seed: int = 0

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError(f"max_attempts must be at least 1: {self.max_attempts}")
        if self.max_depth < 0:
            raise ValueError(f"max_depth must be non-negative: {self.max_depth}")


@dataclass(frozen=True)
class IICBreakdown:
    """IIC value together with the two set differences it is computed from"""
    value: Fraction
    only_first: frozenset
    only_second: frozenset

    def __float__(self):
        return float(self.value)


# ==================== INFERRED HIERARCHY ====================

def inferred_hierarchy(o, signature=None, session=None):
    """
    Inf(O): entailed subsumptions between concept names

    Args:
        o: Consistent ontology
        signature: Concept names to classify (defaults to o's concept names)
        session: ReasonerSession over o to reuse

    Returns:
        frozenset of (A, B) with O ⊨ A ⊑ B, reflexive pairs included
    """
    session = session or ReasonerSession(o)
    if not session.is_consistent():
        raise InconsistentReferenceError("the inferred hierarchy of an inconsistent ontology is degenerate")
    names = o.concept_names if signature is None else signature
    return session.classify(names)


def iic_breakdown(o1, o2):
    """
    Inferable information content of o1 relative to o2, with its parts

    Both hierarchies are taken over the union of the two signatures.
    """
    signature = o1.concept_names | o2.concept_names
    inf1 = inferred_hierarchy(o1, signature)
    inf2 = inferred_hierarchy(o2, signature)
    only_first = inf1 - inf2
    only_second = inf2 - inf1

    total = len(only_first) + len(only_second)
    value = Fraction(1, 2) if total == 0 else Fraction(len(only_first), total)
    return IICBreakdown(value, frozenset(only_first), frozenset(only_second))


def iic(o1, o2):
    """IIC(o1, o2) as an exact rational in [0, 1]; 1/2 when Inf(o1) = Inf(o2)"""
    return iic_breakdown(o1, o2).value


# ==================== INCONSISTENCY INJECTION ====================

def inject_inconsistency(o, cfg, rng, checker=None):
    """
    Append random GCIs over o's signature until o becomes inconsistent

    Args:
        o: Consistent ontology
        cfg: InjectionConfig
        rng: numpy Generator
        checker: Callable returning the consistency of an ontology

    Returns:
        (inconsistent Ontology, list of injected axioms in insertion order)
    """
    checker = checker or (lambda ontology: ReasonerSession(ontology).is_consistent())
    if not checker(o):
        raise InconsistentReferenceError("inconsistency injection needs a consistent ontology")

    names = sorted(o.concept_names)
    roles = sorted(o.role_names)
    if not names:
        raise InjectionError("ontology has no concept names to build axioms from")

    current = o
    injected = []
    for attempt in range(cfg.max_attempts):
        gci = random_gci(rng, names, roles, cfg.max_depth, cfg.allow_negation)
        if gci in current:
            continue
        current = current.add(gci)
        injected.append(gci)
        if not checker(current):
            logger.debug(f"Inconsistent after {attempt + 1} attempts ({len(injected)} axioms injected)")
            return current, injected

    raise InjectionError(f"ontology still consistent after {cfg.max_attempts} attempts")
