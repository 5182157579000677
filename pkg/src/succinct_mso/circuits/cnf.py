"""CNF instances, DIMACS text and brute-force satisfiability."""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class CnfError(ValueError):
    pass


@dataclass(frozen=True)
class CnfInstance:
    n: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.n < 0:
            raise CnfError("negative variable count")
        for c in clauses:
            for l in c:
                if l == 0 or abs(l) > self.n:
                    raise CnfError(f"literal {l} outside variables 1..{self.n}")

    def holds(self, assignment: int) -> bool:
        """Variable x_j takes bit j-1 of ``assignment``."""
        return all(any((assignment >> (abs(l) - 1) & 1) == (l > 0) for l in c)
                   for c in self.clauses)

    def satisfying(self) -> list[int]:
        if self.n > 20:
            raise CnfError("brute-force satisfiability is limited to 20 variables")
        return [a for a in range(1 << self.n) if self.holds(a)]

    def satisfiable(self) -> bool:
        if self.n > 20:
            raise CnfError("brute-force satisfiability is limited to 20 variables")
        return any(self.holds(a) for a in range(1 << self.n))


def parse_dimacs(text: str) -> CnfInstance:
    n, declared, clauses, current = None, None, [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"bad problem line {line!r}")
            n, declared = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise CnfError("clause before the 'p cnf' line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if n is None:
        raise CnfError("missing 'p cnf <vars> <clauses>' line")
    if current:
        clauses.append(tuple(current))
    if declared is not None and declared != len(clauses):
        raise CnfError(f"declared {declared} clauses, found {len(clauses)}")
    return CnfInstance(n, tuple(clauses))


def dump_dimacs(cnf: CnfInstance) -> str:
    lines = [f"p cnf {cnf.n} {len(cnf.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def all_clauses(n: int, tautologies: bool = True) -> list[tuple]:
    """Every non-empty clause over x_1..x_n (as a set of literals)."""
    lits = [v for i in range(1, n + 1) for v in (i, -i)]
    out = []
    for r in range(1, len(lits) + 1):
        for c in itertools.combinations(lits, r):
            if not tautologies and any(-l in c for l in c):
                continue
            out.append(c)
    return out


def all_cnfs(n: int, max_clauses: int, tautologies: bool = True):
    """Every CNF with up to ``max_clauses`` distinct clauses."""
    clauses = all_clauses(n, tautologies)
    for r in range(max_clauses + 1):
        for combo in itertools.combinations(clauses, r):
            yield CnfInstance(n, combo)
