"""Goal-directed execution by co-SLD resolution with NMR checking.

The solver is an explicit machine: an immutable continuation (linked list of
goals), a stack of choice points and a trail of undo records. Backtracking
pops a choice point, unwinds the trail to the mark it recorded and resumes
with the next alternative, so every piece of mutable state (CHS entries,
completion marks, the dynamic check queue) is restored exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .analysis import CheckProgram, SplittingPartition
from .syntax import Query


class Mode(str, enum.Enum):
    FULL = "full"
    DCC = "dcc"


class StepLimitExceeded(RuntimeError):
    """Raised when a solve exceeds its resolution-step budget."""


@dataclass(frozen=True)
class SolveConfig:
    mode: Mode = Mode.DCC
    step_limit: Optional[int] = None
    enumerate: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.step_limit is not None and self.step_limit < 1:
            raise ValueError("step_limit must be >= 1")
        if self.enumerate < 1:
            raise ValueError("enumerate must be >= 1")


@dataclass(frozen=True)
class PartialAnswerSet:
    positives: frozenset[str]
    negatives: frozenset[str]
    raw_chs: tuple[str, ...] = field(default=(), compare=False)

    def literals(self) -> list[str]:
        return sorted(self.positives) + [f"not {a}" for a in sorted(self.negatives)]

    def __str__(self) -> str:
        lits = self.literals()
        return "{ " + ", ".join(lits) + " }" if lits else "{ }"

    def to_json(self) -> dict:
        return {"positives": sorted(self.positives), "negatives": sorted(self.negatives)}


@dataclass
class SolveStats:
    resolution_steps: int = 0
    subcheck_invocations: int = 0
    activations: int = 0
    backtracks: int = 0
    answers: int = 0


# Event vocabulary passed to the hook as hook(event, detail):
#   "call"     detail = literal text, every literal call
#   "exit"     detail = literal text, a literal's derivation completed
#   "fail"     detail = description of the goal whose failure forced backtracking
#   "activate" detail = check name, enqueued by dynamic consistency checking
#   "check"    detail = check name, a sub-check proof started
#   "answer"   detail = PartialAnswerSet
EVENTS = ("call", "exit", "fail", "activate", "check", "answer")
Hook = Callable[[str, object], None]

# goal tags
_CALL, _EXIT, _REFUTE, _CHECK, _CHECK_DONE, _DRAIN = range(6)
# trail tags
_T_ADD, _T_COMPLETE, _T_ENQ, _T_DEQ, _T_DONE, _T_EDGE = range(6)
# choice point kinds
_CP_RULES, _CP_REFUTE, _CP_CHECK = range(3)


class Solver:
    """Reusable solver over one CheckProgram and its partition."""

    def __init__(self, cp: CheckProgram, part: Optional[SplittingPartition] = None):
        self.cp = cp
        self.part = part
        prog = cp.base
        self.names = prog.atoms
        n = len(prog.atoms)
        rules: list[list[tuple[tuple[int, bool], ...]]] = [[] for _ in range(n)]
        for r in prog.rules:
            if r.head is not None:
                rules[r.head].append(tuple((l.atom, l.positive) for l in r.body))
        self.rules = [tuple(r) for r in rules]
        self.checks = [tuple((l.atom, l.positive) for l in c.clauses) for c in cp.subchecks]
        self.check_names = [c.name for c in cp.subchecks]
        if part is not None and part.sets:
            self.relevant = [part.relevant(a) for a in range(n)]
        else:
            self.relevant = None

    def solve(self, query: Query, cfg: SolveConfig = SolveConfig(), hook: Optional[Hook] = None,
              stats: Optional[SolveStats] = None) -> list[PartialAnswerSet]:
        out = []
        seen = set()
        for ans in self.iter_solve(query, cfg, hook, stats):
            key = (ans.positives, ans.negatives)
            if key in seen:
                continue
            seen.add(key)
            out.append(ans)
            if len(out) >= cfg.enumerate:
                break
        return out

    def iter_solve(self, query: Query, cfg: SolveConfig = SolveConfig(), hook: Optional[Hook] = None,
                   stats: Optional[SolveStats] = None, debug: bool = False) -> Iterator[PartialAnswerSet]:
        """Yield the partial answer set of every successful derivation.

        With ``debug`` the solver snapshots its state at every choice point
        and asserts that unwinding the trail restores it exactly.
        """
        for lit in query.goals:
            if lit.atom >= len(self.names):
                raise ValueError(f"query atom id {lit.atom} is not in the program")
        stats = stats if stats is not None else SolveStats()
        mode = cfg.mode
        dcc = mode is Mode.DCC
        relevant = self.relevant if dcc else None
        limit = cfg.step_limit
        rules = self.rules
        checks = self.checks
        names = self.names
        check_names = self.check_names

        chs: dict[int, list] = {}  # atom -> [positive, completed, neg_depth]
        # positive support edges: head atom -> positive body atoms of its chosen rule
        support: dict[int, list[int]] = {}
        trail: list[tuple] = []
        cps: list[list] = []
        queue: list[int] = []
        qhead = 0
        activated: set[int] = set()
        done: set[int] = set()

        def lit_str(atom: int, pos: bool) -> str:
            return names[atom] if pos else "not " + names[atom]

        # initial continuation
        cont = None
        if dcc:
            cont = ((_DRAIN,), cont)
        else:
            for i in reversed(range(len(checks))):
                cont = ((_CHECK, i), cont)
        for lit in reversed(query.goals):
            cont = ((_CALL, lit.atom, lit.positive, 0 if lit.positive else 1, -1), cont)

        def undo(mark: int) -> None:
            nonlocal qhead
            while len(trail) > mark:
                t = trail.pop()
                tag = t[0]
                if tag == _T_ADD:
                    del chs[t[1]]
                elif tag == _T_COMPLETE:
                    chs[t[1]][1] = False
                elif tag == _T_ENQ:
                    queue.pop()
                    activated.discard(t[1])
                elif tag == _T_DEQ:
                    qhead -= 1
                elif tag == _T_EDGE:
                    support[t[1]].pop()
                else:
                    done.discard(t[1])

        def supports(src: int, dst: int) -> bool:
            if src == dst:
                return True
            seen = {src}
            stack = [src]
            while stack:
                for b in support.get(stack.pop(), ()):
                    if b == dst:
                        return True
                    if b not in seen:
                        seen.add(b)
                        stack.append(b)
            return False

        def add_edge(head: int, body: int) -> None:
            edges = support.get(head)
            if edges is None:
                support[head] = [body]
            else:
                edges.append(body)
            trail.append((_T_EDGE, head))

        def resume(cp: list):
            """Take the next alternative of choice point ``cp``."""
            kind, k, alts, rest = cp[1], cp[2], cp[3], cp[4]
            if k + 1 >= len(alts):
                cps.pop()
            else:
                cp[2] = k + 1
            if kind == _CP_RULES:
                depth, head = cp[5], cp[6]
                c = rest
                for a, p in reversed(alts[k]):
                    c = ((_CALL, a, p, depth, head) if p else (_CALL, a, p, depth + 1, -1), c)
                return c
            if kind == _CP_REFUTE:
                a, p = alts[k]
                # a positive literal inside a dual crosses a polarity boundary
                return ((_CALL, a, p, cp[5] + 1 if p else cp[5], -1), rest)
            a, p = alts[k]
            return ((_CALL, a, p, 0 if p else 1, -1), rest)

        snaps: dict[int, tuple] = {}

        def snapshot() -> tuple:
            return (
                {a: tuple(e) for a, e in chs.items()},
                {h: tuple(v) for h, v in support.items() if v},
                tuple(queue), qhead, frozenset(activated), frozenset(done),
            )

        def push(cp: list) -> None:
            cps.append(cp)
            if debug:
                snaps[id(cp)] = snapshot()

        def backtrack(why):
            stats.backtracks += 1
            if hook is not None:
                hook("fail", why)
            if not cps:
                undo(0)
                if debug:
                    assert not trail and not chs and qhead == 0 and not queue, "state leaked past exhaustion"
                return None
            cp = cps[-1]
            undo(cp[0])
            if debug:
                assert snaps[id(cp)] == snapshot(), "trail did not restore the choice point state"
            return resume(cp)

        steps = 0
        while True:
            if cont is None:
                pos = frozenset(names[a] for a, e in chs.items() if e[0])
                neg = frozenset(names[a] for a, e in chs.items() if not e[0])
                raw = tuple(sorted(lit_str(a, e[0]) for a, e in chs.items())) + tuple(
                    sorted(check_names[i] for i in done))
                ans = PartialAnswerSet(pos, neg, raw)
                stats.answers += 1
                if hook is not None:
                    hook("answer", ans)
                yield ans
                cont = backtrack("answer")
                if cont is None:
                    return
                continue

            goal, cont = cont
            tag = goal[0]

            if tag == _CALL:
                _, atom, positive, depth, parent = goal
                steps += 1
                stats.resolution_steps += 1
                if limit is not None and steps > limit:
                    raise StepLimitExceeded(f"step limit {limit} exceeded")
                if hook is not None:
                    hook("call", lit_str(atom, positive))
                e = chs.get(atom)
                if e is not None:
                    if e[0] != positive:
                        ok = False
                    elif e[1]:
                        ok = True
                    else:
                        d = depth - e[2]
                        ok = d % 2 == 0 and (d > 0 or not positive)
                    if ok and parent >= 0:
                        # reusing a positive literal must not close a support cycle
                        if supports(atom, parent):
                            ok = False
                        else:
                            add_edge(parent, atom)
                    if not ok:
                        cont = backtrack(lit_str(atom, positive))
                        if cont is None:
                            return
                    continue
                chs[atom] = [positive, False, depth]
                trail.append((_T_ADD, atom))
                if parent >= 0:
                    add_edge(parent, atom)
                if relevant is not None:
                    for i in relevant[atom]:
                        if i not in activated:
                            activated.add(i)
                            queue.append(i)
                            trail.append((_T_ENQ, i))
                            stats.activations += 1
                            if hook is not None:
                                hook("activate", check_names[i])
                bodies = rules[atom]
                rest = ((_EXIT, atom), cont)
                if positive:
                    if not bodies:
                        cont = backtrack(lit_str(atom, positive))
                        if cont is None:
                            return
                        continue
                    cp = [len(trail), _CP_RULES, 0, bodies, rest, depth, atom]
                    push(cp)
                    cont = resume(cp)
                else:
                    c = rest
                    for ri in reversed(range(len(bodies))):
                        c = ((_REFUTE, atom, ri, depth), c)
                    cont = c

            elif tag == _EXIT:
                atom = goal[1]
                e = chs[atom]
                e[1] = True
                trail.append((_T_COMPLETE, atom))
                if hook is not None:
                    hook("exit", lit_str(atom, e[0]))

            elif tag == _REFUTE:
                _, atom, ri, depth = goal
                body = rules[atom][ri]
                if not body:
                    cont = backtrack(f"not {names[atom]}")
                    if cont is None:
                        return
                    continue
                alts = tuple((a, not p) for a, p in body)
                cp = [len(trail), _CP_REFUTE, 0, alts, cont, depth]
                push(cp)
                cont = resume(cp)

            elif tag == _CHECK:
                i = goal[1]
                stats.subcheck_invocations += 1
                if hook is not None:
                    hook("check", check_names[i])
                clauses = checks[i]
                rest = ((_CHECK_DONE, i), cont)
                if not clauses:
                    cont = backtrack(check_names[i])
                    if cont is None:
                        return
                    continue
                cp = [len(trail), _CP_CHECK, 0, clauses, rest]
                push(cp)
                cont = resume(cp)

            elif tag == _CHECK_DONE:
                i = goal[1]
                done.add(i)
                trail.append((_T_DONE, i))

            else:  # _DRAIN
                if qhead < len(queue):
                    i = queue[qhead]
                    qhead += 1
                    trail.append((_T_DEQ,))
                    cont = ((_CHECK, i), ((_DRAIN,), cont))


def solve(cp: CheckProgram, part: Optional[SplittingPartition], query: Query,
          cfg: SolveConfig = SolveConfig(), hook: Optional[Hook] = None,
          stats: Optional[SolveStats] = None) -> list[PartialAnswerSet]:
    return Solver(cp, part).solve(query, cfg, hook, stats)
