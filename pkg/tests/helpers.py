"""Shared programs and independent brute-force oracles for the test suite."""

from __future__ import annotations

import random

from dccasp.syntax import Literal, Program, Rule

ODD_LOOPS = """\
p :- q.
q :- not r, not p.
r :- not p.
:- q, r.
"""

CHOICE = """\
a :- b.
b :- not c.
c :- not b.

p :- a.
q :- b.
:- p, q.
"""

NO_MODELS = """\
:- p, q.
q :- not r, not q.
"""

EVEN_LOOP = "p :- not q.\nq :- not p.\n"


def random_program(rng: random.Random, max_atoms: int = 8, max_rules: int = 12, neg: float = 0.5,
                   p_constraint: float = 0.15, max_body: int = 3, prefix: str = "a") -> Program:
    n = rng.randint(1, max_atoms)
    atoms = tuple(f"{prefix}{i}" for i in range(n))
    rules = []
    for i in range(rng.randint(0, max_rules)):
        body = tuple(Literal(rng.randrange(n), rng.random() >= neg) for _ in range(rng.randint(0, max_body)))
        head = None if (body and rng.random() < p_constraint) else rng.randrange(n)
        rules.append(Rule(i, head, body))
    return Program(atoms, tuple(rules))


def signed_edges(program: Program) -> set[tuple[int, int, int]]:
    return {(r.head, l.atom, 0 if l.positive else 1) for r in program.rules if r.head is not None for l in r.body}


def walks_reach(program: Program, src: int, dst: int, parity: int, max_len: int) -> bool:
    """Is there a walk of at most ``max_len`` edges with the given parity?"""
    edges = signed_edges(program)
    frontier = {(src, 0)}
    if (dst, parity) in frontier:
        return True
    for _ in range(max_len):
        frontier = {(v, p ^ s) for (u, p) in frontier for (h, v, s) in edges if h == u}
        if (dst, parity) in frontier:
            return True
    return False


def simple_cycle_olon(program: Program) -> set[int]:
    """Rules lying on a simple cycle through their own body edge with an odd
    number of negations, found by enumerating every simple path."""
    edges = signed_edges(program)
    out = set()

    def paths(u, dst, visited):
        # yields the negation count of every simple path u ~> dst avoiding visited
        if u == dst:
            yield 0
            return
        for (h, v, s) in edges:
            if h == u and v not in visited:
                for k in paths(v, dst, visited | {v}):
                    yield k + s

    for r in program.rules:
        if r.head is None:
            out.add(r.id)
            continue
        for l in r.body:
            sign = 0 if l.positive else 1
            if any((sign + k) % 2 == 1 for k in paths(l.atom, r.head, {l.atom})):
                out.add(r.id)
                break
    return out


def lit(program: Program, text: str) -> Literal:
    if text.startswith("not "):
        return Literal(program.atom_id(text[4:]), False)
    return Literal(program.atom_id(text), True)


def fits_some(ans, models) -> bool:
    """Positives inside and negatives outside at least one oracle model."""
    return any(ans.positives <= m.names and not (ans.negatives & m.names) for m in models)
