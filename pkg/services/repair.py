"""
Repair Service - Regain consistency by weakening or removing axioms

Both algorithms loop "pick a bad axiom, fix it" until the ontology is
consistent. Weakening replaces the bad axiom with a random member of its
weakening set, computed against a consistent reference ontology; removal
deletes it. Every choice is drawn from one seeded generator and recorded
in a RepairTrace.
"""

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ontology.models import (
    OntologyRepairError, Ontology, Subsumption, ClassAssertion, RoleAssertion, sort_key,
)
from ontology.syntax import parse_axiom
from reasoner.session import ReasonerSession
from services.refinement import RefinementContext, generalize, specialize
from config.settings import config
from utils.logger import get_logger, log_repair_step

logger = get_logger(__name__)


class UnsupportedAxiomError(OntologyRepairError):
    """Weakening is not defined for this axiom shape"""


class ConsistentInputError(OntologyRepairError):
    """A procedure that needs an inconsistent ontology received a consistent one"""


class EmptyOntologyError(OntologyRepairError):
    """A procedure that picks an axiom received an empty ontology"""


class SubsetCapExceededError(OntologyRepairError):
    """More maximal consistent subsets than the configured cap"""

    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"more than {cap} maximal consistent subsets")


class Method(str, Enum):
    WEAKEN = 'weaken'
    REMOVE = 'remove'


class BadAxiomStrategy(str, Enum):
    MIS = 'mis'
    RAND = 'rand'


class ReferenceMode(str, Enum):
    BRAVE = 'brave'
    CAUTIOUS = 'cautious'
    EXPLICIT = 'explicit'


REPAIRED = 'repaired'
STEP_LIMIT = 'step-limit'


# ==================== CONFIGURATION ====================

@dataclass
class RepairConfig:
    """
    Settings of one repair run

    mis_samples is a positive int or 'auto' (one tenth of the axiom count,
    at least 1). reference_ontology is required with the explicit
    reference mode. max_steps=None means STEP_LIMIT_FACTOR × axiom count.
    """
    method: Method = Method.WEAKEN
    bad_axiom: BadAxiomStrategy = BadAxiomStrategy.MIS
    mis_samples: object = 'auto'
    reference: ReferenceMode = ReferenceMode.BRAVE
    reference_ontology: Ontology = None
    seed: int = 0
    max_steps: int = None
    exclude_identity_weakening: bool = True
    subset_cap: int = field(default_factory=lambda: config.CAUTIOUS_SUBSET_CAP)

    def __post_init__(self):
        self.method = Method(self.method)
        self.bad_axiom = BadAxiomStrategy(self.bad_axiom)
        self.reference = ReferenceMode(self.reference)

        errors = []
        if self.mis_samples != 'auto' and (not isinstance(self.mis_samples, int) or self.mis_samples < 1):
            errors.append(f"mis_samples must be 'auto' or a positive integer: {self.mis_samples!r}")
        if self.max_steps is not None and self.max_steps < 1:
            errors.append(f"max_steps must be at least 1: {self.max_steps}")
        if not 0 <= self.seed < 2 ** 64:
            errors.append(f"seed must be a 64-bit unsigned integer: {self.seed}")
        if self.reference is ReferenceMode.EXPLICIT and self.reference_ontology is None:
            errors.append("explicit reference mode needs reference_ontology")
        if errors:
            raise ValueError("Invalid repair configuration:\n" + "\n".join(errors))

    def resolve_mis_samples(self, o):
        if self.mis_samples == 'auto':
            return max(1, len(o) // 10)
        return self.mis_samples

    def resolve_max_steps(self, o):
        if self.max_steps is not None:
            return self.max_steps
        return max(1, config.STEP_LIMIT_FACTOR * len(o))


# ==================== TRACE ====================

@dataclass
class RepairStep:
    index: int
    action: str
    bad_axiom: object
    candidates: int = 0
    replacement: object = None
    consistent_after: bool = False

    def to_dict(self):
        return {
            'index': self.index,
            'action': self.action,
            'bad_axiom': self.bad_axiom.to_text(),
            'candidates': self.candidates,
            'replacement': self.replacement.to_text() if self.replacement is not None else None,
            'consistent_after': self.consistent_after,
        }

    @classmethod
    def from_dict(cls, data):
        replacement = data.get('replacement')
        return cls(
            index=data['index'],
            action=data['action'],
            bad_axiom=parse_axiom(data['bad_axiom']),
            candidates=data.get('candidates', 0),
            replacement=parse_axiom(replacement) if replacement else None,
            consistent_after=data.get('consistent_after', False),
        )


@dataclass
class RepairTrace:
    """
    Seeded record of a repair run

    JSON form:
        {"seed": int, "method": "weaken"|"remove", "bad_axiom": "mis"|"rand",
         "reference": [statement, ...], "outcome": "repaired"|"step-limit",
         "steps": [{"index", "action", "bad_axiom", "candidates",
                    "replacement", "consistent_after"}, ...]}
    """
    seed: int
    method: str
    bad_axiom_strategy: str
    reference: Ontology = field(default_factory=Ontology)
    steps: list = field(default_factory=list)
    outcome: str = REPAIRED

    def __len__(self):
        return len(self.steps)

    def to_dict(self):
        return {
            'seed': self.seed,
            'method': self.method,
            'bad_axiom': self.bad_axiom_strategy,
            'reference': [ax.to_text() for ax in self.reference],
            'outcome': self.outcome,
            'steps': [step.to_dict() for step in self.steps],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data):
        return cls(
            seed=data['seed'],
            method=data['method'],
            bad_axiom_strategy=data['bad_axiom'],
            reference=Ontology(tuple(parse_axiom(text) for text in data.get('reference', []))),
            steps=[RepairStep.from_dict(step) for step in data.get('steps', [])],
            outcome=data.get('outcome', REPAIRED),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def replay_trace(o, trace):
    """Apply the recorded steps of a trace to o"""
    for step in trace.steps:
        if step.action == Method.WEAKEN.value:
            o = o.replace(step.bad_axiom, step.replacement)
        else:
            o = o.remove(step.bad_axiom)
    return o


# ==================== CONSISTENCY CACHE ====================

class ConsistencyChecker:
    """Memoised consistency of axiom subsets, keyed by the set of axioms"""

    def __init__(self, node_budget=None):
        self.node_budget = node_budget
        self._cache = {}
        self.checks = 0

    def __call__(self, axioms):
        key = frozenset(axioms)
        cached = self._cache.get(key)
        if cached is None:
            self.checks += 1
            ordered = axioms.axioms if isinstance(axioms, Ontology) else tuple(axioms)
            cached = ReasonerSession(Ontology(ordered), self.node_budget).is_consistent()
            self._cache[key] = cached
        return cached


# ==================== WEAKENING ====================

def weakenings(ctx, ax):
    """
    g(ax): the weakenings of an axiom w.r.t. the context's reference

    Args:
        ctx: RefinementContext over the reference ontology
        ax: Subsumption or ClassAssertion

    Returns:
        frozenset of axioms; C ⊑ D gives C' ⊑ D' for C' ∈ ρ(C), D' ∈ γ(D),
        C(a) gives C'(a) for C' ∈ γ(C)
    """
    if isinstance(ax, Subsumption):
        lhs = specialize(ctx, ax.lhs)
        rhs = generalize(ctx, ax.rhs)
        return frozenset(Subsumption(c, d) for c in lhs for d in rhs)
    if isinstance(ax, ClassAssertion):
        return frozenset(ClassAssertion(c, ax.individual) for c in generalize(ctx, ax.concept))
    raise UnsupportedAxiomError(f"cannot weaken {ax}")


# ==================== BAD AXIOM SELECTION ====================

def _ordered(o, axioms):
    position = {ax: i for i, ax in enumerate(o.axioms)}
    return sorted(axioms, key=position.__getitem__)


def sample_minimal_inconsistent_subset(o, rng, checker=None):
    """
    One minimally inconsistent subset of o

    The axioms are shuffled, cut to the shortest inconsistent prefix, then
    deletion-minimised: each axiom is dropped if the rest stays inconsistent.

    Returns:
        tuple of axioms in o's order
    """
    checker = checker or ConsistencyChecker()
    if checker(o):
        raise ConsistentInputError("ontology is consistent; it has no minimally inconsistent subset")
    axioms = [o.axioms[i] for i in rng.permutation(len(o))]

    # Inconsistency is monotone, so the shortest inconsistent prefix is found by bisection
    low, high = 1, len(axioms)
    while low < high:
        middle = (low + high) // 2
        if checker(axioms[:middle]):
            low = middle + 1
        else:
            high = middle
    current = axioms[:high]

    i = 0
    while i < len(current):
        candidate = current[:i] + current[i + 1:]
        if not checker(candidate):
            current = candidate
        else:
            i += 1
    return tuple(_ordered(o, current))


def find_bad_axiom_mis(o, k, rng, checker=None):
    """
    Axiom occurring in the most of k sampled minimally inconsistent subsets

    Args:
        o: Inconsistent ontology
        k: Number of samples (≥ 1)
        rng: numpy Generator
        checker: Shared ConsistencyChecker

    Returns:
        Axiom, ties broken uniformly at random
    """
    if k < 1:
        raise ValueError(f"k must be at least 1: {k}")
    checker = checker or ConsistencyChecker()
    if checker(o):
        raise ConsistentInputError("ontology is consistent; it has no minimally inconsistent subset")

    counts = Counter()
    for _ in range(k):
        counts.update(sample_minimal_inconsistent_subset(o, rng, checker))

    best = max(counts.values())
    ties = _ordered(o, [ax for ax, count in counts.items() if count == best])
    return ties[int(rng.integers(len(ties)))]


def find_bad_axiom_rand(o, rng):
    """Uniformly random axiom of o"""
    if not len(o):
        raise EmptyOntologyError("cannot pick an axiom from an empty ontology")
    return o.axioms[int(rng.integers(len(o)))]


def find_bad_axiom(o, cfg, k, rng, checker):
    if cfg.bad_axiom is BadAxiomStrategy.MIS:
        return find_bad_axiom_mis(o, k, rng, checker)
    return find_bad_axiom_rand(o, rng)


# ==================== REFERENCE ONTOLOGIES ====================

def maximal_consistent_subset(o, rng, checker=None):
    """Brave reference: add axioms in random order while consistency holds"""
    checker = checker or ConsistencyChecker()
    kept = []
    for i in rng.permutation(len(o)):
        ax = o.axioms[i]
        if checker(kept + [ax]):
            kept.append(ax)
    return o.restrict(kept)


def _grow(seed, axioms, checker):
    current = list(seed)
    members = set(seed)
    for ax in axioms:
        if ax not in members and checker(current + [ax]):
            current.append(ax)
            members.add(ax)
    return frozenset(members)


def _hitting_seed(found, axioms, checker):
    """A consistent set meeting the complement of every found subset, or None"""
    def search(i, seed):
        if not checker(seed):
            return None
        if i == len(found):
            return seed
        if any(ax not in found[i] for ax in seed):
            return search(i + 1, seed)
        for ax in axioms:
            if ax not in found[i]:
                result = search(i + 1, seed + (ax,))
                if result is not None:
                    return result
        return None
    return search(0, ())


def maximal_consistent_subsets(o, subset_cap=None, checker=None):
    """
    All maximal consistent subsets of o

    Each new subset is grown from a consistent seed that contains, for every
    subset found so far, an axiom outside it; the search ends when no such
    seed exists.

    Raises:
        SubsetCapExceededError: more than subset_cap subsets exist
    """
    subset_cap = config.CAUTIOUS_SUBSET_CAP if subset_cap is None else subset_cap
    checker = checker or ConsistencyChecker()
    axioms = o.axioms

    found = []
    while True:
        seed = _hitting_seed(found, axioms, checker)
        if seed is None:
            break
        if len(found) >= subset_cap:
            raise SubsetCapExceededError(subset_cap)
        found.append(_grow(seed, axioms, checker))
    return [o.restrict(subset) for subset in found]


def cautious_reference(o, subset_cap=None, checker=None):
    """Cautious reference: intersection of all maximal consistent subsets"""
    subsets = maximal_consistent_subsets(o, subset_cap, checker)
    common = frozenset(o.axioms)
    for subset in subsets:
        common &= subset.axiom_set
    logger.debug(f"Cautious reference from {len(subsets)} maximal consistent subsets")
    return o.restrict(common)


def build_reference(o, cfg, rng, checker):
    if cfg.reference is ReferenceMode.EXPLICIT:
        return cfg.reference_ontology
    if cfg.reference is ReferenceMode.CAUTIOUS:
        return cautious_reference(o, cfg.subset_cap, checker)
    return maximal_consistent_subset(o, rng, checker)


# ==================== REPAIR ALGORITHMS ====================

def _remove_step(current, bad, index, checker, trace):
    current = current.remove(bad)
    step = RepairStep(index, Method.REMOVE.value, bad, consistent_after=checker(current))
    trace.steps.append(step)
    log_repair_step(trace.seed, index, step.action, bad.to_text())
    return current


def repair_weaken(o, cfg, context=None, checker=None):
    """
    Weakening repair

    Args:
        o: Ontology to repair
        cfg: RepairConfig (method is ignored)
        context: RefinementContext to reuse; its reference replaces the one cfg would build
        checker: Shared ConsistencyChecker

    Returns:
        (repaired Ontology, RepairTrace)
    """
    checker = checker or ConsistencyChecker()
    rng = np.random.default_rng(cfg.seed)
    trace = RepairTrace(cfg.seed, Method.WEAKEN.value, cfg.bad_axiom.value)
    if checker(o):
        return o, trace

    if context is None:
        context = RefinementContext(build_reference(o, cfg, rng, checker))
    trace.reference = context.reference
    k = cfg.resolve_mis_samples(o)
    max_steps = cfg.resolve_max_steps(o)
    logger.info(f"Weakening repair of {len(o)} axioms (seed {cfg.seed}, reference {len(context.reference)} axioms)")

    current = o
    index = 0
    while not checker(current):
        bad = find_bad_axiom(current, cfg, k, rng, checker)

        if index >= max_steps:
            if trace.outcome != STEP_LIMIT:
                logger.warning(f"Step limit {max_steps} reached; removing bad axioms from here on")
                trace.outcome = STEP_LIMIT
            current = _remove_step(current, bad, index, checker, trace)
        elif isinstance(bad, RoleAssertion):
            logger.debug(f"Role assertion {bad} cannot be weakened; removing it")
            current = _remove_step(current, bad, index, checker, trace)
        else:
            candidates = sorted(weakenings(context, bad), key=sort_key)
            if cfg.exclude_identity_weakening and len(candidates) > 1:
                candidates = [ax for ax in candidates if ax != bad]
            replacement = candidates[int(rng.integers(len(candidates)))]
            current = current.replace(bad, replacement)
            step = RepairStep(index, Method.WEAKEN.value, bad, len(candidates), replacement, checker(current))
            trace.steps.append(step)
            log_repair_step(cfg.seed, index, step.action, bad.to_text(), replacement.to_text(), len(candidates))
        index += 1

    logger.info(f"Weakening repair finished after {index} steps ({trace.outcome})")
    return current, trace


def repair_remove(o, cfg, checker=None):
    """
    Removal repair: delete bad axioms until consistent

    Terminates within len(o) steps because every step shrinks the ontology.
    """
    checker = checker or ConsistencyChecker()
    rng = np.random.default_rng(cfg.seed)
    trace = RepairTrace(cfg.seed, Method.REMOVE.value, cfg.bad_axiom.value)
    k = cfg.resolve_mis_samples(o)

    current = o
    index = 0
    while not checker(current):
        bad = find_bad_axiom(current, cfg, k, rng, checker)
        current = _remove_step(current, bad, index, checker, trace)
        index += 1

    if index:
        logger.info(f"Removal repair finished after {index} steps")
    return current, trace


def repair(o, cfg, context=None, checker=None):
    """Run the repair method named in cfg"""
    if cfg.method is Method.WEAKEN:
        return repair_weaken(o, cfg, context, checker)
    return repair_remove(o, cfg, checker)
