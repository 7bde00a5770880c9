"""Static analysis: dependency graph, OLON rules, NMR sub-checks and the
splitting-set partition used to select checks dynamically."""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .syntax import Literal, Program, Rule

EVEN, ODD = 0, 1


@dataclass(frozen=True)
class DependencyGraph:
    n_atoms: int
    # (head, body_atom, sign) with sign 1 for a negative body literal
    edges: tuple[tuple[int, int, int], ...]

    def successors(self) -> list[list[tuple[int, int]]]:
        succ: list[list[tuple[int, int]]] = [[] for _ in range(self.n_atoms)]
        for h, a, s in self.edges:
            succ[h].append((a, s))
        return succ


def build_dependency_graph(program: Program) -> DependencyGraph:
    seen = set()
    edges = []
    for rule in program.rules:
        if rule.head is None:
            continue
        for lit in rule.body:
            e = (rule.head, lit.atom, 0 if lit.positive else 1)
            if e not in seen:
                seen.add(e)
                edges.append(e)
    return DependencyGraph(len(program.atoms), tuple(edges))


@dataclass(frozen=True)
class ParityReachability:
    """Walk reachability over (atom, parity) states.

    ``reach[a]`` is a pair of frozensets: atoms reachable from ``a`` by a walk
    crossing an even / odd number of negative edges.
    """

    reach: tuple[tuple[frozenset, frozenset], ...]

    def __call__(self, src: int, dst: int, parity: int) -> bool:
        return dst in self.reach[src][parity]


def parity_reachability(graph: DependencyGraph) -> ParityReachability:
    succ = graph.successors()
    out = []
    for a in range(graph.n_atoms):
        seen = {(a, EVEN)}
        todo = deque(seen)
        while todo:
            u, p = todo.popleft()
            for v, s in succ[u]:
                st = (v, p ^ s)
                if st not in seen:
                    seen.add(st)
                    todo.append(st)
        even = frozenset(v for v, p in seen if p == EVEN)
        odd = frozenset(v for v, p in seen if p == ODD)
        out.append((even, odd))
    return ParityReachability(tuple(out))


def _sccs(n: int, succ: list[list[tuple[int, int]]]) -> list[int]:
    """Tarjan, iterative. Returns the component index of every node."""
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i][0]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


class _CyclePaths:
    """Answers "is there a simple path src ~> dst of a given parity" within
    strongly connected components.

    Components whose edges admit a consistent 0/1 labelling (every edge's
    sign equals the xor of its endpoint labels) have a single parity per
    node pair; other components fall back to an exhaustive simple-path DFS.
    """

    def __init__(self, graph: DependencyGraph):
        self.succ = graph.successors()
        self.comp = _sccs(graph.n_atoms, self.succ)
        self.label: dict[int, Optional[dict[int, int]]] = {}

    def _labelling(self, c: int) -> Optional[dict[int, int]]:
        if c in self.label:
            return self.label[c]
        members = [v for v, k in enumerate(self.comp) if k == c]
        lab = {members[0]: 0}
        todo = [members[0]]
        ok = True
        adj = defaultdict(list)
        for u in members:
            for v, s in self.succ[u]:
                if self.comp[v] == c:
                    adj[u].append((v, s))
                    adj[v].append((u, s))
        while todo and ok:
            u = todo.pop()
            for v, s in adj[u]:
                want = lab[u] ^ s
                if v not in lab:
                    lab[v] = want
                    todo.append(v)
                elif lab[v] != want:
                    ok = False
                    break
        self.label[c] = lab if ok else None
        return self.label[c]

    def exists(self, src: int, dst: int, parity: int) -> bool:
        """Simple path src ~> dst (dst not revisited) with the given parity."""
        if src == dst:
            return parity == EVEN
        c = self.comp[dst]
        if self.comp[src] != c:
            return False
        lab = self._labelling(c)
        if lab is not None:
            return (lab[src] ^ lab[dst]) == parity
        return self._dfs(src, dst, parity, c)

    def _dfs(self, src: int, dst: int, parity: int, c: int) -> bool:
        comp, succ = self.comp, self.succ
        on_path = {src}
        stack = [(src, EVEN, iter(succ[src]))]
        while stack:
            u, p, it = stack[-1]
            for v, s in it:
                if comp[v] != c:
                    continue
                q = p ^ s
                if v == dst:
                    if q == parity:
                        return True
                    continue
                if v not in on_path:
                    on_path.add(v)
                    stack.append((v, q, iter(succ[v])))
                    break
            else:
                stack.pop()
                on_path.discard(u)
        return False


def detect_olon_rules(program: Program, reach: Optional[ParityReachability] = None) -> frozenset[int]:
    """Ids of rules that lie on an odd loop over negation.

    A headed rule ``h :- ..., l, ...`` is an OLON rule when some simple cycle
    h -> atom(l) ~> h crosses an odd number of negations, counting the sign
    of ``l`` itself. Headless rules always qualify.
    """
    graph = build_dependency_graph(program)
    paths = _CyclePaths(graph)
    out = set()
    for rule in program.rules:
        if rule.head is None:
            out.add(rule.id)
            continue
        for lit in rule.body:
            need = EVEN if not lit.positive else ODD
            if reach is not None and not reach(lit.atom, rule.head, need):
                continue
            if paths.exists(lit.atom, rule.head, need):
                out.add(rule.id)
                break
    return frozenset(out)


@dataclass(frozen=True)
class SubCheck:
    index: int  # position in CheckProgram.subchecks
    source_rule: int
    name: str
    clauses: tuple[Literal, ...]


def build_subcheck(rule: Rule, index: int = 0) -> SubCheck:
    body = list(rule.body)
    if rule.head is not None:
        neg_head = Literal(rule.head, False)
        if neg_head not in body:
            body.append(neg_head)
    clauses = [l.complement() for l in body]
    # positive clauses are tried first; stable within each polarity
    clauses.sort(key=lambda l: not l.positive)
    return SubCheck(index, rule.id, f"chk_{rule.id + 1}", tuple(clauses))


def compile_duals(program: Program) -> tuple[tuple[tuple[Literal, ...], ...], ...]:
    """For each atom, one tuple of refutation options per defining rule.

    ``not a`` holds when every defining rule is refuted by establishing one
    of its options (the complement of one body literal). An atom without
    rules maps to an empty tuple: its negation holds unconditionally.
    """
    duals: list[list[tuple[Literal, ...]]] = [[] for _ in program.atoms]
    for rule in program.rules:
        if rule.head is not None:
            duals[rule.head].append(tuple(l.complement() for l in rule.body))
    return tuple(tuple(d) for d in duals)


@dataclass(frozen=True)
class CheckProgram:
    base: Program
    subchecks: tuple[SubCheck, ...]
    dual_index: tuple[tuple[tuple[Literal, ...], ...], ...]
    olon_rules: frozenset[int] = field(default=frozenset())

    def render_checks(self) -> str:
        p = self.base
        lines = []
        for c in self.subchecks:
            for l in c.clauses:
                lines.append(f"{c.name} :- {p.literal_str(l)}.")
        if self.subchecks:
            lines.append("nmr_check :- " + ", ".join(c.name for c in self.subchecks) + ".")
        else:
            lines.append("nmr_check.")
        return "\n".join(lines) + "\n"

    def render_duals(self) -> str:
        p = self.base
        lines = []
        for atom, options in enumerate(self.dual_index):
            name = p.atoms[atom]
            if not options:
                lines.append(f"not {name}.")
            elif len(options) == 1:
                for l in options[0]:
                    lines.append(f"not {name} :- {p.literal_str(l)}.")
            else:
                lines.append(f"not {name} :- " + ", ".join(f"not {name}_{k + 1}" for k in range(len(options))) + ".")
                for k, opts in enumerate(options):
                    for l in opts:
                        lines.append(f"not {name}_{k + 1} :- {p.literal_str(l)}.")
        return "\n".join(lines) + ("\n" if lines else "")


def build_check_program(program: Program) -> CheckProgram:
    olon = detect_olon_rules(program)
    checks = []
    for rule in program.rules:
        if rule.id in olon:
            checks.append(build_subcheck(rule, len(checks)))
    return CheckProgram(program, tuple(checks), compile_duals(program), olon)


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> int:
        i, j = self.find(i), self.find(j)
        if i != j:
            lo, hi = min(i, j), max(i, j)
            self.parent[hi] = lo
        return min(i, j)


@dataclass(frozen=True)
class SplittingPartition:
    sets: tuple[frozenset[int], ...]
    atom_to_set: dict = field(repr=False)
    set_to_checks: tuple[tuple[int, ...], ...]  # indices into CheckProgram.subchecks

    def set_of(self, atom: int) -> Optional[int]:
        return self.atom_to_set.get(atom)

    def relevant(self, atom: int) -> tuple[int, ...]:
        k = self.atom_to_set.get(atom)
        return () if k is None else self.set_to_checks[k]


def build_splitting_partition(cp: CheckProgram) -> SplittingPartition:
    """Depth-first collection from each sub-check, merging on contact."""
    program = cp.base
    bodies: list[list[int]] = [[] for _ in program.atoms]
    for rule in program.rules:
        if rule.head is not None:
            bodies[rule.head].extend(l.atom for l in rule.body)
    uf = _UnionFind()
    owner: dict[int, int] = {}
    check_set: list[int] = []
    for check in cp.subchecks:
        current = uf.make()
        check_set.append(current)
        stack = [l.atom for l in check.clauses]
        while stack:
            a = stack.pop()
            o = owner.get(a)
            if o is None:
                owner[a] = current
                stack.extend(bodies[a])
            else:
                current = uf.union(o, current)
    roots: dict[int, int] = {}
    members: list[set[int]] = []
    for a in sorted(owner):
        r = uf.find(owner[a])
        if r not in roots:
            roots[r] = len(members)
            members.append(set())
        members[roots[r]].add(a)
    checks: list[list[int]] = [[] for _ in members]
    for check, s in zip(cp.subchecks, check_set):
        checks[roots[uf.find(s)]].append(check.index)
    atom_to_set = {a: roots[uf.find(o)] for a, o in owner.items()}
    return SplittingPartition(
        tuple(frozenset(m) for m in members),
        atom_to_set,
        tuple(tuple(c) for c in checks),
    )


def dcc_relevant_checks(part: SplittingPartition, cp: CheckProgram, lit: Literal) -> tuple[SubCheck, ...]:
    return tuple(cp.subchecks[i] for i in part.relevant(lit.atom))


# -- reporting -------------------------------------------------------------


def analysis_report(cp: CheckProgram, part: SplittingPartition) -> dict:
    p = cp.base
    return {
        "atoms": len(p.atoms),
        "rules": len(p.rules),
        "olon_rules": sorted(cp.olon_rules),
        "subchecks": [
            {"name": c.name, "rule": c.source_rule, "clauses": [p.literal_str(l) for l in c.clauses]}
            for c in cp.subchecks
        ],
        "nmr_check": [c.name for c in cp.subchecks],
        "splitting_sets": [
            {
                "atoms": sorted(p.atoms[a] for a in s),
                "checks": [cp.subchecks[i].name for i in part.set_to_checks[k]],
            }
            for k, s in enumerate(part.sets)
        ],
    }


def format_report(cp: CheckProgram, part: SplittingPartition, fmt: str = "text") -> str:
    report = analysis_report(cp, part)
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    lines = [
        f"% atoms: {report['atoms']}  rules: {report['rules']}",
        "% OLON rules: " + (" ".join(str(r) for r in report["olon_rules"]) or "none"),
        "",
    ]
    lines.append(cp.render_checks().rstrip("\n"))
    lines.append("")
    lines.append(f"% splitting sets: {len(part.sets)}")
    for k, s in enumerate(report["splitting_sets"]):
        lines.append(f"% U{k + 1} ({len(s['checks'])} checks): {{ {', '.join(s['atoms'])} }}")
    return "\n".join(lines) + "\n"


def analyze(program: Program) -> tuple[CheckProgram, SplittingPartition]:
    cp = build_check_program(program)
    return cp, build_splitting_partition(cp)


def covered_atoms(part: SplittingPartition) -> frozenset[int]:
    return frozenset(part.atom_to_set)


def atoms_of(rules: Iterable[Rule]) -> set[int]:
    out = set()
    for r in rules:
        if r.head is not None:
            out.add(r.head)
        out.update(l.atom for l in r.body)
    return out
