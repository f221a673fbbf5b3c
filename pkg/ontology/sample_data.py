"""
Sample Data Generator - Random concepts and GCIs for inconsistency injection
"""

import numpy as np

from ontology.models import AtomicName, Not, And, Or, ForAll, Exists, Subsumption
from config.settings import config


def _pick(rng, items):
    return items[int(rng.integers(len(items)))]


def random_concept(rng, names, roles, max_depth=None, allow_negation=True, weights=None):
    """
    Sample a concept by recursive descent

    Args:
        rng: numpy Generator
        names: Concept names to draw atoms from (sorted for reproducibility)
        roles: Role names; ∃/∀ are never drawn when empty
        max_depth: Nesting bound; atoms are forced at the bound
        allow_negation: Whether ¬ may be drawn
        weights: constructor -> probability, defaults to CONSTRUCTOR_WEIGHTS

    Returns:
        Concept
    """
    if max_depth is None:
        max_depth = config.INJECTION_MAX_DEPTH
    weights = dict(weights or config.CONSTRUCTOR_WEIGHTS)
    if not allow_negation:
        weights.pop('not', None)
    if not roles:
        weights.pop('some', None)
        weights.pop('all', None)

    constructors = sorted(weights)
    probabilities = np.array([weights[k] for k in constructors], dtype=float)
    probabilities /= probabilities.sum()

    def draw(depth):
        kind = 'atomic' if depth >= max_depth else constructors[rng.choice(len(constructors), p=probabilities)]
        if kind == 'atomic':
            return AtomicName(_pick(rng, names))
        if kind == 'not':
            return Not(draw(depth + 1))
        if kind == 'and':
            return And(draw(depth + 1), draw(depth + 1))
        if kind == 'or':
            return Or(draw(depth + 1), draw(depth + 1))
        if kind == 'some':
            return Exists(_pick(rng, roles), draw(depth + 1))
        return ForAll(_pick(rng, roles), draw(depth + 1))

    return draw(0)


def random_gci(rng, names, roles, max_depth=None, allow_negation=True):
    """Random GCI C ⊑ D with independently sampled sides"""
    lhs = random_concept(rng, names, roles, max_depth, allow_negation)
    rhs = random_concept(rng, names, roles, max_depth, allow_negation)
    return Subsumption(lhs, rhs)
