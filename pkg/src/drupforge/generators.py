"""Seeded instance generators: random k-CNF, pigeonhole, random striped
colored CNF and BMC unrollings of a small counter circuit."""
from __future__ import annotations

import random
from typing import List, Optional, Sequence, Tuple

from .model import ColoredCnf

Clauses = List[Tuple[int, ...]]


def random_kcnf(num_vars: int, num_clauses: int, rng: random.Random, k: int = 3) -> Clauses:
    out = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), k)
        out.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return out


def random_3cnf_suite(count: int, seed: int, vars_lo: int = 20, vars_hi: int = 60,
                      ratio_lo: float = 3.5, ratio_hi: float = 4.6):
    """Yield ``(num_vars, clauses)`` pairs."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(vars_lo, vars_hi)
        m = round(n * rng.uniform(ratio_lo, ratio_hi))
        yield n, random_kcnf(n, m, rng)


def pigeonhole(holes: int) -> ColoredCnf:
    """PHP(holes+1, holes): at-least-one clauses in color 1, at-most-one
    clauses in color 2."""
    pigeons = holes + 1

    def x(p, h):
        return (p - 1) * holes + h

    cnf = ColoredCnf(num_vars=pigeons * holes)
    for p in range(1, pigeons + 1):
        cnf.add(tuple(x(p, h) for h in range(1, holes + 1)), 1)
    for h in range(1, holes + 1):
        for p in range(1, pigeons + 1):
            for q in range(p + 1, pigeons + 1):
                cnf.add((-x(p, h), -x(q, h)), 2)
    return cnf


def random_striped(num_vars: int, num_clauses: int, num_colors: int,
                   rng: random.Random, k: int = 3) -> ColoredCnf:
    """Each variable gets a home color h and only occurs in colors h-1 and
    h, so every variable range spans at most two adjacent colors."""
    home = {v: rng.randint(1, num_colors) for v in range(1, num_vars + 1)}
    by_color = {c: [v for v in home if home[v] in (c, c + 1)]
                for c in range(1, num_colors + 1)}
    cnf = ColoredCnf(num_colors=num_colors)
    tries = 0
    while len(cnf) < num_clauses and tries < 10 * num_clauses:
        tries += 1
        c = rng.randint(1, num_colors)
        pool = by_color[c]
        if len(pool) < k:
            continue
        vs = rng.sample(pool, k)
        cnf.add(tuple(sorted((v if rng.random() < 0.5 else -v for v in vs),
                             key=abs)), c)
    cnf.num_vars = max(cnf.num_vars, num_vars)
    return cnf


class CounterCircuit:
    """A 4-bit counter modulo ``modulus`` with per-step enable and reset
    inputs, starting at 0. ``target`` is the value the bad state checks for.

    Variables are allocated on demand; clause emitters return plain clause
    lists so callers can color them as they like.
    """

    BITS = 4

    def __init__(self, modulus: int = 10, target: int = 15, seed: int = 0):
        if not 2 <= modulus <= 1 << self.BITS:
            raise ValueError("modulus out of range")
        self.modulus = modulus
        self.target = target
        self.rng = random.Random(seed)
        self.next_var = 1
        self.state: List[List[int]] = [self.fresh(self.BITS)]

    @classmethod
    def seeded(cls, seed: int) -> "CounterCircuit":
        """Seed-derived modulus and an unreachable target (always safe)."""
        rng = random.Random(seed)
        modulus = rng.randint(5, 14)
        return cls(modulus, rng.randint(modulus, 15), seed)

    def fresh(self, n: int = 1) -> List[int]:
        out = list(range(self.next_var, self.next_var + n))
        self.next_var += n
        return out

    @property
    def num_vars(self) -> int:
        return self.next_var - 1

    def reachable(self, bound: int) -> bool:
        return self.target < self.modulus and self.target <= bound

    def init(self) -> Clauses:
        return [(-b,) for b in self.state[0]]

    def _gate_and(self, out: int, ins: Sequence[int], cls: Clauses) -> None:
        for i in ins:
            cls.append((-out, i))
        cls.append((out,) + tuple(-i for i in ins))

    def _gate_xor(self, out: int, a: int, b: int, cls: Clauses) -> None:
        cls.extend([(-out, a, b), (-out, -a, -b), (out, -a, b), (out, a, -b)])

    def _equals(self, bits: Sequence[int], value: int) -> List[int]:
        return [b if value >> i & 1 else -b for i, b in enumerate(bits)]

    def transition(self) -> Clauses:
        """Clauses for the step from the last state to a new one."""
        cur = self.state[-1]
        enable, reset = self.fresh(2)
        carry = self.fresh(self.BITS - 1)
        summ = self.fresh(self.BITS)
        wrap = self.fresh(1)[0]
        nxt = self.fresh(self.BITS)
        cls: Clauses = []
        carries = [enable] + carry
        for i in range(self.BITS):
            self._gate_xor(summ[i], cur[i], carries[i], cls)
            if i + 1 < self.BITS:
                self._gate_and(carries[i + 1], [cur[i], carries[i]], cls)
        self._gate_and(wrap, [enable] + self._equals(cur, self.modulus - 1), cls)
        for i in range(self.BITS):
            # nxt_i <-> ~reset & ~wrap & sum_i
            self._gate_and(nxt[i], [-reset, -wrap, summ[i]], cls)
        self.rng.shuffle(cls)
        self.state.append(nxt)
        return cls

    def bad(self, step: int, activation: Optional[int] = None) -> Clauses:
        """``bad`` is a fresh variable equivalent to state ``step`` equalling
        the target; it is asserted outright, or under ``activation``."""
        flag = self.fresh(1)[0]
        cls: Clauses = []
        self._gate_and(flag, self._equals(self.state[step], self.target), cls)
        cls.append((flag,) if activation is None else (-activation, flag))
        return cls


def counter_bmc(bound: int, num_colors: int, seed: int, target: Optional[int] = None) -> ColoredCnf:
    """Unroll to ``bound`` steps and split the steps into ``num_colors``
    contiguous groups; init joins the first group and bad the last."""
    if bound < num_colors:
        raise ValueError("bound must be at least the number of colors")
    circ = CounterCircuit.seeded(seed)
    if target is not None:
        circ.target = target
    cnf = ColoredCnf(num_colors=num_colors)
    for cl in circ.init():
        cnf.add(cl, 1)
    for t in range(1, bound + 1):
        color = 1 + (t - 1) * num_colors // bound
        for cl in circ.transition():
            cnf.add(cl, color)
    for cl in circ.bad(bound):
        cnf.add(cl, num_colors)
    cnf.num_vars = circ.num_vars
    return cnf
