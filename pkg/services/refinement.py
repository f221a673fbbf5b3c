"""
Refinement Service - Covers and refinement operators over a reference ontology

upcov/downcov pick the closest super/sub-concepts among sub(O^ref);
zeta rebuilds a concept with one refined part at a time; generalize and
specialize instantiate zeta with the covers in either order.
"""

from collections import deque

from ontology.models import (
    OntologyRepairError, AtomicName, Top, Bottom, Not, And, Or,
    nnf, complement, concept_size, subconcepts, sorted_concepts,
)
from reasoner.session import ReasonerSession
from config.settings import config
from utils.logger import get_logger

logger = get_logger(__name__)

UP = 'up'
DOWN = 'down'


class InconsistentReferenceError(OntologyRepairError):
    """An operation that needs a consistent ontology received an inconsistent one"""


class RefinementContext:
    """
    Reference ontology, its reasoner session and the cached sub(O^ref)

    Covers and refinements are memoised per context; the reference never
    changes, so cached sets stay valid for the lifetime of the context.
    """

    def __init__(self, reference, session=None, allow_inconsistent=False):
        """
        Args:
            reference: Reference ontology
            session: ReasonerSession over reference (created if None)
            allow_inconsistent: Skip the consistency requirement; every
                subsumption then holds and both covers return all of sub(O^ref)
        """
        self.reference = reference
        self.session = session or ReasonerSession(reference)
        if not allow_inconsistent and not self.session.is_consistent():
            raise InconsistentReferenceError("reference ontology is inconsistent")
        self.sub = tuple(sorted_concepts(subconcepts(reference)))
        self.sub_set = frozenset(self.sub)
        self._covers = {UP: {}, DOWN: {}}
        self._refinements = {UP: {}, DOWN: {}}

    def __repr__(self):
        return f"<RefinementContext axioms={len(self.reference)} sub={len(self.sub)}>"

    def subsumed(self, c, d):
        return self.session.is_subsumed(c, d)


# ==================== COVERS ====================

def upcov(ctx, c):
    """
    Upward cover of c in sub(O^ref)

    Returns:
        frozenset of D ∈ sub(T) with C ⊑ D and no D' ∈ sub(T) such that C ⊏ D' ⊏ D
    """
    key = nnf(c)
    cached = ctx._covers[UP].get(key)
    if cached is not None:
        return cached

    supers = [d for d in ctx.sub if ctx.subsumed(c, d)]
    strict = [d for d in supers if not ctx.subsumed(d, c)]
    result = frozenset(
        d for d in supers
        if not any(
            ctx.subsumed(between, d) and not ctx.subsumed(d, between)
            for between in strict if between is not d
        )
    )

    ctx._covers[UP][key] = result
    return result


def downcov(ctx, c):
    """
    Downward cover of c in sub(O^ref)

    Returns:
        frozenset of D ∈ sub(T) with D ⊑ C and no D' ∈ sub(T) such that D ⊏ D' ⊏ C
    """
    key = nnf(c)
    cached = ctx._covers[DOWN].get(key)
    if cached is not None:
        return cached

    subs = [d for d in ctx.sub if ctx.subsumed(d, c)]
    strict = [d for d in subs if not ctx.subsumed(c, d)]
    result = frozenset(
        d for d in subs
        if not any(
            ctx.subsumed(d, between) and not ctx.subsumed(between, d)
            for between in strict if between is not d
        )
    )

    ctx._covers[DOWN][key] = result
    return result


_COVERS = {UP: upcov, DOWN: downcov}
_OPPOSITE = {UP: DOWN, DOWN: UP}


def _direction(operator):
    if operator not in _COVERS:
        raise ValueError(f"operator must be '{UP}' or '{DOWN}', got {operator!r}")
    return operator


# ==================== ABSTRACT OPERATOR ====================

def zeta(ctx, up, down, c):
    """
    Abstract refinement operator

    Args:
        ctx: RefinementContext
        up: Cover function (ctx, concept) -> set used on the concept itself
        down: Cover function used under negation
        c: Concept (normalised to NNF first)

    Returns:
        frozenset of refinements
    """
    c = nnf(c)

    def refine(x):
        if isinstance(x, (AtomicName, Top, Bottom)):
            return set(up(ctx, x))
        if isinstance(x, Not):
            result = {complement(y) for y in down(ctx, x.arg)}
        elif isinstance(x, (And, Or)):
            cls = type(x)
            result = {cls(y, x.right) for y in refine(x.left)}
            result |= {cls(x.left, y) for y in refine(x.right)}
        else:
            cls = type(x)
            result = {cls(x.role, y) for y in refine(x.arg)}
        return result | up(ctx, x)

    return frozenset(refine(c))


def _refinement(ctx, operator, c):
    key = nnf(c)
    cache = ctx._refinements[operator]
    cached = cache.get(key)
    if cached is None:
        up = _COVERS[operator]
        down = _COVERS[_OPPOSITE[operator]]
        cached = zeta(ctx, up, down, key)
        cache[key] = cached
    return cached


def _drop_equivalent(ctx, c, refinements):
    return frozenset(x for x in refinements if not ctx.session.equivalent(x, c))


def generalize(ctx, c, strict=False):
    """
    γ(C): zeta with (upcov, downcov)

    Args:
        ctx: RefinementContext
        c: Concept
        strict: Drop members equivalent to c w.r.t. the reference

    Returns:
        frozenset of generalisations
    """
    result = _refinement(ctx, UP, c)
    return _drop_equivalent(ctx, c, result) if strict else result


def specialize(ctx, c, strict=False):
    """ρ(C): zeta with (downcov, upcov)"""
    result = _refinement(ctx, DOWN, c)
    return _drop_equivalent(ctx, c, result) if strict else result


def refine(ctx, c, operator, strict=False):
    _direction(operator)
    return generalize(ctx, c, strict) if operator == UP else specialize(ctx, c, strict)


def refine_iter(ctx, c, operator, depth, size_cap=None):
    """
    Iterated refinement: depth rounds of γ (operator 'up') or ρ ('down')

    Members larger than size_cap stay in the result but are not refined again.

    Args:
        ctx: RefinementContext
        c: Starting concept
        operator: 'up' or 'down'
        depth: Number of rounds (0 returns {c})
        size_cap: Size above which members are not expanded

    Returns:
        frozenset of concepts reached after exactly depth rounds
    """
    _direction(operator)
    if depth < 0:
        raise ValueError(f"depth must be non-negative, got {depth}")
    size_cap = config.REFINE_SIZE_CAP if size_cap is None else size_cap

    current = {c}
    for round_index in range(depth):
        following = set()
        for x in current:
            if concept_size(x) > size_cap:
                following.add(x)
            else:
                following |= refine(ctx, x, operator)
        current = following
        logger.debug(f"Refinement round {round_index + 1}: {len(current)} concepts")
    return frozenset(current)


# ==================== MEMBERSHIP ====================

def upcov_membership(ctx, c, d):
    """
    Decide d ∈ upcov(c) by a single scan over sub(T)

    Issues at most 1 + 4·card(sub(T)) subsumption decisions.
    """
    if d not in ctx.sub_set:
        return False
    if not ctx.subsumed(c, d):
        return False
    for e in ctx.sub:
        if (ctx.subsumed(c, e) and ctx.subsumed(e, d)
                and not ctx.subsumed(e, c) and not ctx.subsumed(d, e)):
            return False
    return True


def downcov_membership(ctx, c, d):
    """Decide d ∈ downcov(c); same call bound as upcov_membership"""
    if d not in ctx.sub_set:
        return False
    if not ctx.subsumed(d, c):
        return False
    for e in ctx.sub:
        if (ctx.subsumed(e, c) and ctx.subsumed(d, e)
                and not ctx.subsumed(c, e) and not ctx.subsumed(e, d)):
            return False
    return True


_MEMBERSHIP = {UP: upcov_membership, DOWN: downcov_membership}


def _zeta_membership(ctx, operator, c, d):
    cover_member = _MEMBERSHIP[operator]
    if cover_member(ctx, c, d):
        return True
    if isinstance(c, (AtomicName, Top, Bottom)):
        return False
    if isinstance(c, Not):
        other = _COVERS[_OPPOSITE[operator]]
        return any(complement(y) == d for y in other(ctx, c.arg))
    if type(d) is not type(c):
        return False
    if isinstance(c, (And, Or)):
        return ((d.right == c.right and _zeta_membership(ctx, operator, c.left, d.left))
                or (d.left == c.left and _zeta_membership(ctx, operator, c.right, d.right)))
    return d.role == c.role and _zeta_membership(ctx, operator, c.arg, d.arg)


def gamma_membership(ctx, c, d):
    """d ∈ γ(c), following the structure of c instead of building γ(c)"""
    return _zeta_membership(ctx, UP, nnf(c), d)


def rho_membership(ctx, c, d):
    """d ∈ ρ(c)"""
    return _zeta_membership(ctx, DOWN, nnf(c), d)


# ==================== REACHABILITY ====================

def _reaches(ctx, cover, c, d, max_depth):
    max_depth = len(ctx.sub) + 1 if max_depth is None else max_depth
    seen = {c}
    queue = deque([(c, 0)])
    while queue:
        x, level = queue.popleft()
        if x == d:
            return True
        if level >= max_depth:
            continue
        for y in sorted_concepts(cover(ctx, x)):
            if y not in seen:
                seen.add(y)
                queue.append((y, level + 1))
    return False


def generalisation_reaches(ctx, c, d, max_depth=None):
    """
    True if d is reachable from c through upward-cover edges

    Every cover edge is a γ step, so a positive answer means d is in the
    iterated generalisation of c. The walk stays inside sub(O) ∪ {c}.
    """
    return _reaches(ctx, upcov, c, d, max_depth)


def specialisation_reaches(ctx, c, d, max_depth=None):
    """True if d is reachable from c through downward-cover edges (ρ steps)"""
    return _reaches(ctx, downcov, c, d, max_depth)
