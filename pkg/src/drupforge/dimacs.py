"""Text formats: colored DIMACS, DRUP proofs, model lines, interpolant DAGs."""
from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .formula import (AND_KIND, FALSE, FALSE_KIND, LIT_KIND, OR_KIND, TRUE, TRUE_KIND,
                      Formula, mk_and, mk_lit, mk_or, postorder)
from .model import ADD, DELETE, ColoredCnf, ProofEvent, Tautology, normalize_clause

log = logging.getLogger(__name__)

Text = Union[str, bytes]


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.message = message
        self.line = line
        super().__init__(message if line is None else f"{message} (line {line})")


def _decode(text: Text) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as e:
            line = text[:e.start].count(b"\n") + 1
            raise ParseError("invalid UTF-8 byte", line) from None
    return text


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"non-integer token {tok!r}", lineno) from None


# ------------------------------------------------------------------ DIMACS
def parse_colored_dimacs(text: Text) -> ColoredCnf:
    """Parse DIMACS CNF where ``c color <k>`` lines set the color of the
    clauses that follow (default 1). Clauses may span lines."""
    src = _decode(text)
    cnf = ColoredCnf()
    num_vars = None
    color = 1
    pending: List[int] = []
    pending_line = 0
    for lineno, raw in enumerate(src.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 2 and parts[0] == "c" and parts[1] == "color":
                if len(parts) != 3:
                    raise ParseError("malformed color directive", lineno)
                k = _int(parts[2], lineno)
                if k < 1:
                    raise ParseError(f"color {k} < 1", lineno)
                color = k
                cnf.num_colors = max(cnf.num_colors, k)
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("malformed header, expected 'p cnf V C'", lineno)
            num_vars = _int(parts[2], lineno)
            _int(parts[3], lineno)
            if num_vars < 0:
                raise ParseError("negative variable count", lineno)
            cnf.num_vars = num_vars
            continue
        if num_vars is None:
            raise ParseError("missing header 'p cnf V C'", lineno)
        for tok in line.split():
            lit = _int(tok, lineno)
            if lit == 0:
                norm = normalize_clause(pending)
                if norm is Tautology:
                    log.warning("dropping tautological clause %s (line %d)", pending, lineno)
                else:
                    cnf.add(norm, color)
                pending = []
                continue
            if abs(lit) > num_vars:
                raise ParseError(f"variable {abs(lit)} exceeds header bound {num_vars}", lineno)
            if not pending:
                pending_line = lineno
            pending.append(lit)
    if num_vars is None:
        raise ParseError("missing header 'p cnf V C'", 1)
    if pending:
        raise ParseError("missing terminating 0", pending_line)
    return cnf


def write_colored_dimacs(clauses: Iterable[Tuple[Sequence[int], int]], num_vars: int) -> str:
    """DIMACS text with a color directive wherever the color changes."""
    clauses = list(clauses)
    out = [f"p cnf {num_vars} {len(clauses)}"]
    current = None
    for lits, color in clauses:
        if color != current:
            out.append(f"c color {color}")
            current = color
        out.append(" ".join([str(l) for l in lits] + ["0"]))
    return "\n".join(out) + "\n"


def write_core_cnf(core, num_vars: int) -> str:
    """``core`` holds ``Clause`` objects or ``(lits, color)`` pairs."""
    pairs = []
    for c in core:
        if isinstance(c, tuple):
            pairs.append(c)
        else:
            pairs.append((c.lits, c.range.kmin))
    return write_colored_dimacs(pairs, num_vars)


# -------------------------------------------------------------------- DRUP
def _proof_lits(lits: Iterable[int]) -> Tuple[int, ...]:
    # like normalize_clause but keeps tautologies, which are trivially RUP
    return tuple(sorted(set(lits), key=lambda l: (abs(l), l < 0)))


def parse_drup(text: Text, first_id: int = 1) -> List[ProofEvent]:
    """One event per line. Additions get ids ``first_id, first_id+1, ...``;
    deletions carry no id and are matched by literal set downstream."""
    src = _decode(text)
    events: List[ProofEvent] = []
    next_id = first_id
    for lineno, raw in enumerate(src.splitlines(), 1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        delete = toks[0] == "d"
        if delete:
            toks = toks[1:]
        nums = [_int(t, lineno) for t in toks]
        if not nums or nums[-1] != 0:
            raise ParseError("missing terminating 0", lineno)
        if 0 in nums[:-1]:
            raise ParseError("literal 0 inside a clause", lineno)
        lits = _proof_lits(nums[:-1])
        if delete:
            if not lits:
                raise ParseError("deletion of the empty clause", lineno)
            events.append(ProofEvent(DELETE, None, lits))
        else:
            events.append(ProofEvent(ADD, next_id, lits))
            next_id += 1
    return events


def write_drup(events: Iterable[ProofEvent]) -> str:
    out = []
    for ev in events:
        body = " ".join([str(l) for l in ev.lits] + ["0"])
        out.append(body if ev.kind == ADD else "d " + body)
    return "".join(line + "\n" for line in out)


# ------------------------------------------------------------------- model
def write_model(model: Mapping[int, bool], per_line: int = 10) -> str:
    lits = [v if model[v] else -v for v in sorted(model)] + [0]
    lines = ["s SATISFIABLE"]
    for i in range(0, len(lits), per_line):
        lines.append("v " + " ".join(str(l) for l in lits[i:i + per_line]))
    return "\n".join(lines) + "\n"


def parse_model(text: Text) -> Dict[int, bool]:
    model: Dict[int, bool] = {}
    for lineno, raw in enumerate(_decode(text).splitlines(), 1):
        if raw.startswith("v"):
            for tok in raw.split()[1:]:
                lit = _int(tok, lineno)
                if lit:
                    model[abs(lit)] = lit > 0
    return model


# ------------------------------------------------------------- interpolant
def write_interpolant(seq: Sequence[Formula]) -> str:
    """Line-based DAG: nodes children-first with dense ids, then roots."""
    ids: Dict[int, int] = {}
    out = [f"itp {len(seq)}"]
    for node in postorder(seq):
        nid = len(ids) + 1
        ids[id(node)] = nid
        if node.kind == LIT_KIND:
            out.append(f"n {nid} LIT {node.lit}")
        elif node.kind in (TRUE_KIND, FALSE_KIND):
            out.append(f"n {nid} {node.kind}")
        else:
            kids = " ".join(str(ids[id(c)]) for c in node.children)
            out.append(f"n {nid} {node.kind} {kids}")
    for i, root in enumerate(seq, 1):
        out.append(f"root {i} {ids[id(root)]}")
    return "\n".join(out) + "\n"


def parse_interpolant(text: Text) -> List[Formula]:
    nodes: Dict[int, Formula] = {}
    roots: Dict[int, Formula] = {}
    count = None
    for lineno, raw in enumerate(_decode(text).splitlines(), 1):
        toks = raw.split()
        if not toks:
            continue
        head = toks[0]
        if head == "itp" and len(toks) == 2:
            count = _int(toks[1], lineno)
        elif head == "n" and len(toks) >= 3:
            nid = _int(toks[1], lineno)
            kind = toks[2]
            args = [_int(t, lineno) for t in toks[3:]]
            if kind == LIT_KIND and len(args) == 1:
                nodes[nid] = mk_lit(args[0])
            elif kind == TRUE_KIND and not args:
                nodes[nid] = TRUE
            elif kind == FALSE_KIND and not args:
                nodes[nid] = FALSE
            elif kind in (AND_KIND, OR_KIND):
                try:
                    kids = [nodes[a] for a in args]
                except KeyError as e:
                    raise ParseError(f"unknown child node {e.args[0]}", lineno) from None
                nodes[nid] = mk_and(kids) if kind == AND_KIND else mk_or(kids)
            else:
                raise ParseError("malformed node line", lineno)
        elif head == "root" and len(toks) == 3:
            nid = _int(toks[2], lineno)
            if nid not in nodes:
                raise ParseError(f"unknown root node {nid}", lineno)
            roots[_int(toks[1], lineno)] = nodes[nid]
        else:
            raise ParseError("unrecognized line", lineno)
    if count is None:
        raise ParseError("missing 'itp' header", 1)
    if sorted(roots) != list(range(1, count + 1)):
        raise ParseError("root indices do not match the header count")
    return [roots[i] for i in range(1, count + 1)]
