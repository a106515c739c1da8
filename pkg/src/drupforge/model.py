"""Domain types shared across the toolkit.

Literals are plain signed integers (DIMACS convention): variable ``v`` is
``v`` or ``-v`` and negation is unary minus.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class MalformedLiteralError(ValueError):
    pass


class _TautologyType:
    """Marker returned by :func:`normalize_clause` for tautological input."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Tautology"

    def __bool__(self):
        return False


Tautology = _TautologyType()


def negate(lit: int) -> int:
    return -lit


def variable(lit: int) -> int:
    return lit if lit > 0 else -lit


def normalize_clause(lits: Iterable[int]):
    """Dedupe and sort literals by (variable, sign).

    Returns a tuple of literals, or ``Tautology`` if a complementary pair
    is present.
    """
    seen = set()
    for lit in lits:
        if not isinstance(lit, int) or lit == 0:
            raise MalformedLiteralError(f"malformed literal {lit!r}")
        if -lit in seen:
            return Tautology
        seen.add(lit)
    return tuple(sorted(seen, key=lambda l: (abs(l), l < 0)))


@dataclass(frozen=True)
class Range:
    kmin: int
    kmax: int

    def __post_init__(self):
        if self.kmin < 1 or self.kmax < self.kmin:
            raise ValueError(f"invalid range ({self.kmin}, {self.kmax})")

    def join(self, other: "Range") -> "Range":
        return range_join(self, other)

    def __iter__(self):
        yield self.kmin
        yield self.kmax


def range_join(a: Range, b: Range) -> Range:
    if a.kmin <= b.kmin and a.kmax >= b.kmax:
        return a
    if b.kmin <= a.kmin and b.kmax >= a.kmax:
        return b
    return Range(min(a.kmin, b.kmin), max(a.kmax, b.kmax))


_SINGLETONS: Dict[int, Range] = {}


def singleton_range(k: int) -> Range:
    r = _SINGLETONS.get(k)
    if r is None:
        r = _SINGLETONS[k] = Range(k, k)
    return r


class Clause:
    """A clause in a proof-tracking clause database.

    ``lits`` is the normalized literal tuple and never changes. ``w`` is a
    private working copy whose first two entries are the watched literals of
    whichever propagation context currently holds the clause.
    """

    __slots__ = ("lits", "id", "range", "original", "garbage", "core", "w")

    def __init__(self, id: int, lits: Sequence[int], original: bool = False,
                 range: Optional[Range] = None):
        self.id = id
        self.lits = tuple(lits)
        self.original = original
        self.range = range
        self.garbage = False
        self.core = False
        self.w = list(self.lits)

    def __len__(self):
        return len(self.lits)

    def __repr__(self):
        flags = "".join(f for f, on in (("o", self.original), ("g", self.garbage),
                                         ("c", self.core)) if on)
        return f"Clause({self.id}, {list(self.lits)}{', ' + flags if flags else ''})"


@dataclass
class ColoredCnf:
    """Clause list with a color per clause and derived per-variable ranges."""

    clauses: List[Tuple[Tuple[int, ...], int]] = field(default_factory=list)
    num_vars: int = 0
    num_colors: int = 1

    def __post_init__(self):
        self.clauses = [(tuple(lits), int(color)) for lits, color in self.clauses]
        for lits, color in self.clauses:
            if color < 1:
                raise ValueError(f"clause color {color} < 1")
            self.num_colors = max(self.num_colors, color)
            for lit in lits:
                self.num_vars = max(self.num_vars, abs(lit))
        self._var_range: Optional[Dict[int, Range]] = None

    def add(self, lits: Sequence[int], color: int = 1) -> None:
        self.clauses.append((tuple(lits), color))
        self.num_colors = max(self.num_colors, color)
        for lit in lits:
            self.num_vars = max(self.num_vars, abs(lit))
        self._var_range = None

    @property
    def var_range(self) -> Dict[int, Range]:
        if self._var_range is None:
            self._var_range = compute_var_ranges(self.clauses)
        return self._var_range

    def partition(self, color: int) -> List[Tuple[int, ...]]:
        return [lits for lits, c in self.clauses if c == color]

    def is_striped(self) -> Optional[int]:
        """Return ``None`` if striped, else the first offending variable."""
        for v in sorted(self.var_range):
            r = self.var_range[v]
            if r.kmax - r.kmin > 1:
                return v
        return None

    def __len__(self):
        return len(self.clauses)


def compute_var_ranges(clauses: Iterable[Tuple[Sequence[int], int]]) -> Dict[int, Range]:
    lo: Dict[int, int] = {}
    hi: Dict[int, int] = {}
    for lits, color in clauses:
        for lit in lits:
            v = abs(lit)
            if v not in lo:
                lo[v] = hi[v] = color
            elif color < lo[v]:
                lo[v] = color
            elif color > hi[v]:
                hi[v] = color
    return {v: Range(lo[v], hi[v]) for v in lo}


ADD = "add"
DELETE = "delete"


@dataclass(frozen=True)
class ProofEvent:
    kind: str
    clause_id: Optional[int]
    lits: Tuple[int, ...] = ()
    original: bool = False

    @property
    def is_add(self) -> bool:
        return self.kind == ADD

    def key(self):
        """Identity as seen by the text format (ids are not serialized)."""
        return (self.kind, self.lits)


def evaluate_clause(lits: Iterable[int], assignment: Dict[int, bool]) -> bool:
    for lit in lits:
        val = assignment.get(abs(lit))
        if val is not None and val == (lit > 0):
            return True
    return False
