"""
Tableau - ALC satisfiability for a TBox plus an ABox

Completion graph over ABox individuals (roots) and anonymous tree nodes.
GCIs whose left side is guarded by concept names are absorbed into lazy
unfolding rules; the rest are internalized into concepts added to every
node. Disjunctions are expanded with semantic branching and undone through
a trail. Every label entry carries a dependency bitmask of the branching
choices it rests on, so a clash jumps straight back to the latest choice
that caused it. Subset blocking against ancestors keeps the graph finite.
"""

from ontology.models import (
    OntologyRepairError, AtomicName, Not, And, Or, ForAll, Exists, Top, Bottom,
    BOTTOM, complement, concept_size, disjunction, nnf,
)
from config.settings import config

_PROGRESS = 'progress'
_DONE = 'done'


class ReasonerResourceError(OntologyRepairError):
    """The node budget ran out before the run reached an answer"""

    def __init__(self, budget):
        self.budget = budget
        super().__init__(f"tableau node budget of {budget} exceeded")


# ==================== ABSORPTION ====================

class TBoxRules:
    """
    Preprocessed TBox

    unfoldings maps a concept name A to rules (premises, concept): once every
    name in premises (A among them) is in a label, concept is added too.
    universal holds the internalized concepts that go into every label.
    """

    def __init__(self, unfoldings, universal):
        self.unfoldings = unfoldings
        self.universal = universal

    def __repr__(self):
        rules = sum(len(r) for r in self.unfoldings.values())
        return f"<TBoxRules unfoldings={rules} universal={len(self.universal)}>"


def _split(lhs, rhs):
    if isinstance(lhs, Or):
        return _split(lhs.left, rhs) + _split(lhs.right, rhs)
    if isinstance(rhs, And):
        return _split(lhs, rhs.left) + _split(lhs, rhs.right)
    return [(lhs, rhs)]


def _conjuncts(c):
    if isinstance(c, And):
        return _conjuncts(c.left) + _conjuncts(c.right)
    return [] if isinstance(c, Top) else [c]


def _absorption(lhs, rhs):
    """Rule for lhs ⊑ rhs guarded by the concept names conjoined in lhs, or None"""
    parts = _conjuncts(lhs)
    premises = frozenset(p for p in parts if isinstance(p, AtomicName))
    if not premises:
        return None
    rest = [complement(p) for p in parts if not isinstance(p, AtomicName)]
    if not isinstance(rhs, Bottom):
        rest.append(rhs)
    return premises, disjunction(rest)


def absorb(gcis):
    """
    Turn GCIs into unfolding rules where possible, internalize the rest

    Disjunctive left sides and conjunctive right sides are split first.
    Each part C ⊑ D is absorbed as written or as ¬D ⊑ ¬C, whichever leaves
    the smaller rule; parts with no concept name to guard them become the
    universal conjunct ¬C ⊔ D. Trivial parts (⊥ ⊑ D, C ⊑ ⊤) contribute nothing.

    Args:
        gcis: Subsumption axioms

    Returns:
        TBoxRules
    """
    unfoldings = {}
    universal = []
    seen = set()

    for gci in gcis:
        for lhs, rhs in _split(nnf(gci.lhs), nnf(gci.rhs)):
            parts = _conjuncts(lhs)
            if lhs == rhs or isinstance(rhs, Top) or any(isinstance(p, Bottom) for p in parts):
                continue
            if not parts:
                entry = (None, rhs)
            else:
                candidates = [
                    rule for rule in (_absorption(lhs, rhs), _absorption(complement(rhs), complement(lhs)))
                    if rule is not None
                ]
                if candidates:
                    entry = min(candidates, key=lambda rule: concept_size(rule[1]))
                elif isinstance(rhs, Bottom):
                    entry = (None, complement(lhs))
                else:
                    entry = (None, Or(complement(lhs), rhs))

            if entry in seen:
                continue
            seen.add(entry)
            premises, concept = entry
            if premises is None:
                universal.append(concept)
            else:
                for name in sorted(premises, key=lambda a: a.name):
                    unfoldings.setdefault(name, []).append(entry)

    return TBoxRules({name: tuple(rules) for name, rules in unfoldings.items()}, tuple(universal))


class _Choice:
    __slots__ = ('trail_len', 'ors_len', 'cursor', 'node', 'disjunction', 'dep')

    def __init__(self, trail_len, ors_len, cursor, node, disjunction, dep):
        self.trail_len = trail_len
        self.ors_len = ors_len
        self.cursor = cursor
        self.node = node
        self.disjunction = disjunction
        self.dep = dep


class Tableau:
    """
    One satisfiability run

    A Tableau is used once: build it, call run(), discard it.
    """

    def __init__(self, tbox, node_budget=None):
        self.tbox = tbox
        self.node_budget = node_budget or config.REASONER_NODE_BUDGET
        self.labels = []      # node -> {concept: dependency mask}
        self.succ = []        # node -> [(role, child, dependency mask)]
        self.parent = []      # node -> parent node, -1 for roots
        self.is_root = []
        self.trail = []
        self.agenda = []
        self.open_ors = []
        self.cursor = 0
        self.choices = []
        self.nodes_created = 0

    # ==================== GRAPH OPERATIONS ====================

    def _new_node(self, parent, is_root):
        if self.nodes_created >= self.node_budget:
            raise ReasonerResourceError(self.node_budget)
        self.nodes_created += 1
        self.labels.append({})
        self.succ.append([])
        self.parent.append(parent)
        self.is_root.append(is_root)
        self.trail.append(('node',))
        return len(self.labels) - 1

    def _add_edge(self, node, role, child, dep):
        self.succ[node].append((role, child, dep))
        self.trail.append(('edge', node))
        for c, c_dep in list(self.labels[node].items()):
            if isinstance(c, ForAll) and c.role == role:
                clash = self._add(child, c.arg, c_dep | dep)
                if clash is not None:
                    return clash
        return None

    def _add(self, node, c, dep):
        """Add c to a label; returns None, or the dependency mask of a clash"""
        label = self.labels[node]
        if c in label:
            return None
        if c is BOTTOM:
            return dep
        if isinstance(c, AtomicName):
            other = label.get(Not(c))
            if other is not None:
                return dep | other
        elif isinstance(c, Not):
            other = label.get(c.arg)
            if other is not None:
                return dep | other
        label[c] = dep
        self.trail.append(('label', node, c))
        self.agenda.append((node, c))
        return None

    def _undo(self, length):
        trail = self.trail
        while len(trail) > length:
            entry = trail.pop()
            kind = entry[0]
            if kind == 'label':
                del self.labels[entry[1]][entry[2]]
            elif kind == 'edge':
                self.succ[entry[1]].pop()
            else:
                self.labels.pop()
                self.succ.pop()
                self.parent.pop()
                self.is_root.pop()

    # ==================== EXPANSION RULES ====================

    def _unfold(self, node, name, dep):
        label = self.labels[node]
        for premises, concept in self.tbox.unfoldings.get(name, ()):
            rule_dep = dep
            for premise in premises:
                if premise is name:
                    continue
                premise_dep = label.get(premise)
                if premise_dep is None:
                    break
                rule_dep |= premise_dep
            else:
                clash = self._add(node, concept, rule_dep)
                if clash is not None:
                    return clash
        return None

    def _propagate(self):
        """Apply ⊓, ∀ and unfolding until the agenda is empty; queue disjunctions"""
        while self.agenda:
            node, c = self.agenda.pop()
            dep = self.labels[node].get(c)
            if dep is None:
                continue
            if isinstance(c, AtomicName):
                clash = self._unfold(node, c, dep)
                if clash is not None:
                    return clash
            elif isinstance(c, And):
                clash = self._add(node, c.left, dep)
                if clash is None:
                    clash = self._add(node, c.right, dep)
                if clash is not None:
                    return clash
            elif isinstance(c, ForAll):
                for role, child, edge_dep in self.succ[node]:
                    if role == c.role:
                        clash = self._add(child, c.arg, dep | edge_dep)
                        if clash is not None:
                            return clash
            elif isinstance(c, Or):
                self.open_ors.append((node, c))
        return None

    def _decide(self):
        """Resolve the next open disjunction, deterministically when possible"""
        while self.cursor < len(self.open_ors):
            node, c = self.open_ors[self.cursor]
            label = self.labels[node]
            if c.left in label or c.right in label:
                self.cursor += 1
                continue
            dep = label[c]
            neg_left = complement(c.left)
            if neg_left in label:
                return _PROGRESS, self._add(node, c.right, dep | label[neg_left])
            neg_right = complement(c.right)
            if neg_right in label:
                return _PROGRESS, self._add(node, c.left, dep | label[neg_right])
            level = len(self.choices)
            self.choices.append(_Choice(len(self.trail), len(self.open_ors), self.cursor, node, c, dep))
            return _PROGRESS, self._add(node, c.left, dep | (1 << level))
        return _DONE, None

    def _blocked(self, node):
        label = self.labels[node].keys()
        ancestor = self.parent[node]
        while ancestor != -1:
            if label <= self.labels[ancestor].keys():
                return True
            ancestor = self.parent[ancestor]
        return False

    def _has_witness(self, node, c):
        return any(
            role == c.role and c.arg in self.labels[child]
            for role, child, _ in self.succ[node]
        )

    def _expand_exists(self):
        """
        One sweep over the current nodes, parents before children

        Every unblocked node gets a successor for each ∃ still lacking a
        witness. Descendants of a blocked node are blocked too.
        """
        count = len(self.labels)
        blocked = [False] * count
        progress = False
        for node in range(count):
            if not self.is_root[node] and (blocked[self.parent[node]] or self._blocked(node)):
                blocked[node] = True
                continue
            for c, dep in list(self.labels[node].items()):
                if isinstance(c, Exists) and not self._has_witness(node, c):
                    progress = True
                    clash = self._generate(node, c, dep)
                    if clash is not None:
                        return _PROGRESS, clash
        return (_PROGRESS if progress else _DONE), None

    def _generate(self, node, c, dep):
        child = self._new_node(node, False)
        clash = self._add_edge(node, c.role, child, dep)
        if clash is None:
            clash = self._add(child, c.arg, dep)
        for t in self.tbox.universal:
            if clash is not None:
                break
            clash = self._add(child, t, 0)
        return clash

    def _backjump(self, clash):
        """Return to the latest choice in the clash set and take its other branch"""
        while True:
            if clash == 0:
                return False
            level = clash.bit_length() - 1
            del self.choices[level + 1:]
            choice = self.choices.pop()
            self._undo(choice.trail_len)
            del self.open_ors[choice.ors_len:]
            self.cursor = choice.cursor
            self.agenda.clear()

            dep = choice.dep | (clash & ~(1 << level))
            clash = self._add(choice.node, complement(choice.disjunction.left), dep)
            if clash is None:
                clash = self._add(choice.node, choice.disjunction.right, dep)
            if clash is None:
                return True

    # ==================== ENTRY POINT ====================

    def run(self, concept_assertions, role_assertions):
        """
        Decide whether the assertions have a model w.r.t. the TBox

        Args:
            concept_assertions: [(individual, concept)] (concepts in NNF)
            role_assertions: [(role, subject, target)]

        Returns:
            True if satisfiable, False otherwise
        """
        roots = {}
        for individual, _ in concept_assertions:
            roots.setdefault(individual, None)
        for _, subject, target in role_assertions:
            roots.setdefault(subject, None)
            roots.setdefault(target, None)
        if not roots:
            roots[None] = None
        for individual in roots:
            roots[individual] = self._new_node(-1, True)

        for role, subject, target in role_assertions:
            self.succ[roots[subject]].append((role, roots[target], 0))

        for node in roots.values():
            for t in self.tbox.universal:
                if self._add(node, t, 0) is not None:
                    return False
        for individual, concept in concept_assertions:
            if self._add(roots[individual], concept, 0) is not None:
                return False

        clash = None
        while True:
            if clash is None:
                clash = self._propagate()
            if clash is not None:
                if not self._backjump(clash):
                    return False
                clash = None
                continue
            status, clash = self._decide()
            if status is _PROGRESS:
                continue
            status, clash = self._expand_exists()
            if status is _DONE:
                return True
