"""Hash-consed AND/OR/literal formula DAG used to hold interpolants.

Nodes are interned: building a structurally identical node twice returns
the same object, so identity comparison (``is``) is structural equality.
All traversals are iterative since interpolant DAGs get deep.
"""
from __future__ import annotations

import threading
import weakref
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

TRUE_KIND = "TRUE"
FALSE_KIND = "FALSE"
LIT_KIND = "LIT"
AND_KIND = "AND"
OR_KIND = "OR"


class IncompleteAssignmentError(KeyError):
    pass


class Formula:
    __slots__ = ("kind", "lit", "children", "__weakref__")

    def __init__(self, kind: str, lit: int = 0, children: tuple = ()):
        self.kind = kind
        self.lit = lit
        self.children = children

    @property
    def is_const(self) -> bool:
        return self.kind == TRUE_KIND or self.kind == FALSE_KIND

    def __repr__(self):
        if self.kind == LIT_KIND:
            return f"LIT({self.lit})"
        if self.is_const:
            return self.kind
        return f"{self.kind}({', '.join(map(repr, self.children))})"

    def __and__(self, other):
        return mk_and([self, other])

    def __or__(self, other):
        return mk_or([self, other])


_table: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()
_lock = threading.Lock()

TRUE = Formula(TRUE_KIND)
FALSE = Formula(FALSE_KIND)


def _intern(kind: str, lit: int, children: tuple) -> Formula:
    key = (kind, lit, children)
    with _lock:
        node = _table.get(key)
        if node is None:
            node = Formula(kind, lit, children)
            _table[key] = node
    return node


def mk_lit(lit: int) -> Formula:
    if lit == 0:
        raise ValueError("literal 0")
    return _intern(LIT_KIND, lit, ())


def _mk_nary(kind: str, children: Iterable[Formula]) -> Formula:
    absorbing, identity = (FALSE, TRUE) if kind == AND_KIND else (TRUE, FALSE)
    kept: List[Formula] = []
    seen = set()
    for ch in children:
        if ch is absorbing:
            return absorbing
        if ch is identity or id(ch) in seen:
            continue
        seen.add(id(ch))
        kept.append(ch)
    if not kept:
        return identity
    if len(kept) == 1:
        return kept[0]
    return _intern(kind, 0, tuple(kept))


def mk_and(children: Iterable[Formula]) -> Formula:
    return _mk_nary(AND_KIND, children)


def mk_or(children: Iterable[Formula]) -> Formula:
    return _mk_nary(OR_KIND, children)


def postorder(roots: Sequence[Formula]) -> List[Formula]:
    """Distinct nodes reachable from ``roots``, children before parents."""
    order: List[Formula] = []
    done = set()
    for root in roots:
        if id(root) in done:
            continue
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in done:
                continue
            if expanded:
                done.add(id(node))
                order.append(node)
                continue
            stack.append((node, True))
            for ch in reversed(node.children):
                if id(ch) not in done:
                    stack.append((ch, False))
    return order


def node_count(roots: Sequence[Formula]) -> int:
    return len(postorder(roots))


def variables(f: Formula) -> set:
    return {abs(n.lit) for n in postorder([f]) if n.kind == LIT_KIND}


def eval_formula(f: Formula, assignment: Mapping[int, bool],
                 memo: Optional[Dict[int, bool]] = None) -> bool:
    """Evaluate under a total assignment (variable -> bool)."""
    if memo is None:
        memo = {}
    for node in postorder([f]):
        if id(node) in memo:
            continue
        kind = node.kind
        if kind == TRUE_KIND:
            val = True
        elif kind == FALSE_KIND:
            val = False
        elif kind == LIT_KIND:
            v = abs(node.lit)
            if v not in assignment:
                raise IncompleteAssignmentError(f"variable {v} unassigned")
            val = assignment[v] == (node.lit > 0)
        elif kind == AND_KIND:
            val = all(memo[id(c)] for c in node.children)
        else:
            val = any(memo[id(c)] for c in node.children)
        memo[id(node)] = val
    return memo[id(f)]


def simplify(roots: Sequence[Formula]) -> List[Formula]:
    """Structural post-pass: flatten nested same-kind children.

    Constant folding and dedupe already happen at construction; this only
    merges e.g. AND(AND(a, b), c) into AND(a, b, c).
    """
    out: Dict[int, Formula] = {}
    for node in postorder(roots):
        if node.kind in (AND_KIND, OR_KIND):
            flat: List[Formula] = []
            for ch in node.children:
                new = out[id(ch)]
                if new.kind == node.kind:
                    flat.extend(new.children)
                else:
                    flat.append(new)
            out[id(node)] = _mk_nary(node.kind, flat)
        else:
            out[id(node)] = node
    return [out[id(r)] for r in roots]

