"""Backtracking search for graph homomorphisms between matrix graphs.

Variables are source matrices, values are target matrices.  Domains are
bitsets over target encodings; assigning ``A -> Y`` intersects the domain
of every unassigned neighbour of ``A`` with the neighbourhood of ``Y``
(forward checking).  Only adjacency constraints are propagated.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Callable, Iterator
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import config
from .errors import InvalidProblem, MalformedTable, MatGeomError
from .fields import FieldSpec
from .maptable import MapTable, parse_header, parse_matrix
from .matrices import Mat, check_cap, encode, rank
from .space import space

FLAGS = ("fix_zero_to_zero", "require_distance2_image_pair", "require_degenerate_witness", "symmetry", "mrv")


@dataclass(frozen=True)
class SearchProblem:
    src: FieldSpec
    m: int
    n: int
    dst: FieldSpec
    dm: int
    dn: int
    pins: tuple[tuple[Mat, Mat], ...] = ()
    fix_zero_to_zero: bool = False
    require_distance2_image_pair: bool = False
    require_degenerate_witness: bool = False
    symmetry: bool = False
    mrv: bool = False
    reference: tuple[int, ...] | None = None
    budget: int | None = None
    seed: int | None = None

    def __post_init__(self):
        seen: dict[Mat, Mat] = {}
        for A, Y in self.pins:
            if A.field != self.src or A.shape != (self.m, self.n):
                raise InvalidProblem(f"pin source {A!r} is outside the source space")
            if Y.field != self.dst or Y.shape != (self.dm, self.dn):
                raise InvalidProblem(f"pin image {Y!r} is outside the target space")
            if seen.get(A, Y) != Y:
                raise InvalidProblem(f"{A.to_csv()} is pinned twice")
            seen[A] = Y
        for (A, Y), (B, Z) in ((p, r) for i, p in enumerate(self.pins) for r in self.pins[i + 1:]):
            if A != B and rank(A - B) == 1 and rank(Y - Z) != 1:
                raise InvalidProblem(f"pins {A.to_csv()} and {B.to_csv()} are adjacent but their images are not")
        if self.fix_zero_to_zero:
            Z0 = Mat.zeros(self.src, self.m, self.n)
            if seen.get(Z0, Mat.zeros(self.dst, self.dm, self.dn)) != Mat.zeros(self.dst, self.dm, self.dn):
                raise InvalidProblem("0 is pinned to a nonzero matrix")
        if self.symmetry and not self._symmetry_allowed():
            raise InvalidProblem("symmetry reduction needs 0 -> 0 as the only pin")
        if self.budget is not None and self.budget < 1:
            raise InvalidProblem("budget must be positive")

    def _symmetry_allowed(self) -> bool:
        Zs, Zd = Mat.zeros(self.src, self.m, self.n), Mat.zeros(self.dst, self.dm, self.dn)
        return self.fix_zero_to_zero and all(p == (Zs, Zd) for p in self.pins)

    def all_pins(self) -> dict[int, int]:
        out = {encode(A): encode(Y) for A, Y in self.pins}
        if self.fix_zero_to_zero:
            out[0] = 0
        return out

    def with_seed(self, seed: int | None) -> SearchProblem:
        return replace(self, seed=seed)

    def dumps(self) -> str:
        lines = ["problem v1", f"src {self.src.to_text()}", f"src shape {self.m} {self.n}",
                 f"dst {self.dst.to_text()}", f"dst shape {self.dm} {self.dn}"]
        lines += [f"pin {A.to_csv()} => {Y.to_csv()}" for A, Y in self.pins]
        lines += [f"constraint {f}" for f in FLAGS if getattr(self, f)]
        if self.budget is not None:
            lines.append(f"budget {self.budget}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> SearchProblem:
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines or lines[0] != "problem v1":
            raise MalformedTable("missing 'problem v1' header")
        (src, m, n, dst, dm, dn), rest = parse_header(lines[1:])
        pins, flags, budget = [], {}, None
        for ln in rest:
            key, _, val = ln.partition(" ")
            if key == "pin" and "=>" in val:
                lhs, rhs = (s.strip() for s in val.split("=>", 1))
                pins.append((parse_matrix(src, m, n, lhs), parse_matrix(dst, dm, dn, rhs)))
            elif key == "constraint" and val.strip() in FLAGS:
                flags[val.strip()] = True
            elif key == "budget" and val.strip().isdigit():
                budget = int(val)
            else:
                raise MalformedTable(f"unexpected problem line {ln!r}")
        return cls(src, m, n, dst, dm, dn, tuple(pins), budget=budget, **flags)

    @classmethod
    def load(cls, path: str | Path) -> SearchProblem:
        return cls.loads(Path(path).read_text())


@dataclass
class SearchStats:
    nodes: int = 0
    backtracks: int = 0
    max_depth: int = 0

    def render(self) -> str:
        return f"nodes={self.nodes} backtracks={self.backtracks} max_depth={self.max_depth}"


@dataclass
class Found:
    table: MapTable
    stats: SearchStats


@dataclass
class Unsat:
    stats: SearchStats


@dataclass
class BudgetExceeded:
    stats: SearchStats


class SearchBudgetExceeded(MatGeomError):
    def __init__(self, stats: SearchStats):
        super().__init__(f"node budget exhausted ({stats.render()})")
        self.stats = stats


def variable_order(p: SearchProblem) -> list[int]:
    """Pinned vertices, then BFS layers from them (from 0 if nothing is pinned), ties by encoding."""
    sp = space(p.src, p.m, p.n)
    pins = p.all_pins()
    roots = sorted(pins) or [0]
    dist = np.full(sp.size, -1, dtype=np.int64)
    dist[roots] = 0
    queue = deque(roots)
    while queue:
        u = queue.popleft()
        for v in sp.neighbors(u):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(int(v))
    rest = sorted((int(dist[v]), v) for v in range(sp.size) if v not in pins)
    return sorted(pins) + [v for _, v in rest]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _select(order: list[int], depth: int, domain: list[int], assign: list[int]) -> None:
    """Move the unassigned variable with the smallest domain to position ``depth``."""
    best, best_size = depth, None
    for i in range(depth, len(order)):
        size = domain[order[i]].bit_count()
        if best_size is None or size < best_size:
            best, best_size = i, size
            if size <= 1:
                break
    order[depth], order[best] = order[best], order[depth]


def _accept(p: SearchProblem, table: MapTable) -> bool:
    if p.require_distance2_image_pair:
        dsp = table.dst_space
        u = np.unique(table.code_array)
        if not np.any(dsp.ranks(dsp.diff_codes(u[:, None], u[None, :])) == 2):
            return False
    if p.require_degenerate_witness:
        from .classify import is_degenerate

        if is_degenerate(table) is None:
            return False
    return True


def _dfs(p: SearchProblem, stats: SearchStats) -> Iterator[MapTable]:
    sp, dsp = space(p.src, p.m, p.n), space(p.dst, p.dm, p.dn)
    check_cap(sp.size, what="search variables")
    check_cap(dsp.size, what="search values")
    budget = p.budget if p.budget is not None else config.get().search_budget
    rng = random.Random(p.seed) if p.seed is not None else None
    nb_mask = []
    for y in range(dsp.size):
        mask = 0
        for z in dsp.neighbors(y):
            mask |= 1 << int(z)
        nb_mask.append(mask)
    src_nb = [[int(w) for w in sp.neighbors(v)] for v in range(sp.size)]
    order = variable_order(p)
    S = sp.size
    domain = [(1 << dsp.size) - 1] * S
    for v, y in p.all_pins().items():
        domain[v] = 1 << y
    if p.symmetry:
        first = next(v for v in order if v not in p.all_pins())
        e11 = encode(Mat.unit(p.dst, p.dm, p.dn, 0, 0))
        domain[first] &= 1 << e11
    assign = [-1] * S
    # frame: [candidates, next index, trail]
    frames: list[list] = []
    depth = 0
    while True:
        if depth == S:
            table = MapTable(p.src, p.m, p.n, p.dst, p.dm, p.dn, tuple(assign))
            if _accept(p, table):
                yield table
            depth -= 1
            if depth < 0:
                return
            continue
        if len(frames) == depth:
            if p.mrv:
                _select(order, depth, domain, assign)
            cands = _bits(domain[order[depth]])
            if rng is not None:
                rng.shuffle(cands)
            if p.reference is not None:
                ref = p.reference[order[depth]]
                cands.sort(key=lambda y: y != ref)
            frames.append([cands, 0, []])
        frame = frames[depth]
        v = order[depth]
        for w, old in reversed(frame[2]):
            domain[w] = old
        frame[2] = []
        assign[v] = -1
        if frame[1] == len(frame[0]):
            frames.pop()
            stats.backtracks += 1
            depth -= 1
            if depth < 0:
                return
            continue
        y = frame[0][frame[1]]
        frame[1] += 1
        if stats.nodes >= budget:
            raise SearchBudgetExceeded(stats)
        stats.nodes += 1
        assign[v] = y
        mask = nb_mask[y]
        trail = frame[2]
        ok = True
        for w in src_nb[v]:
            if assign[w] < 0:
                nd = domain[w] & mask
                if nd != domain[w]:
                    trail.append((w, domain[w]))
                    domain[w] = nd
                if not nd:
                    ok = False
                    break
        if ok:
            depth += 1
            stats.max_depth = max(stats.max_depth, depth)


def search_hom(p: SearchProblem) -> Found | Unsat | BudgetExceeded:
    stats = SearchStats()
    try:
        for table in _dfs(p, stats):
            return Found(table, stats)
    except SearchBudgetExceeded:
        return BudgetExceeded(stats)
    return Unsat(stats)


def enumerate_homs(p: SearchProblem, limit: int) -> Iterator[MapTable]:
    """Up to ``limit`` homomorphisms in search order; raises SearchBudgetExceeded on exhaustion."""
    if limit <= 0:
        return
    stats = SearchStats()
    for k, table in enumerate(_dfs(p, stats), 1):
        yield table
        if k == limit:
            return


def sample_homs(p: SearchProblem, count: int, seed: int, max_restarts: int | None = None,
                guide: Callable[[random.Random], MapTable] | None = None,
                distinct: bool = True) -> list[MapTable]:
    """Up to ``count`` homomorphisms (distinct unless ``distinct`` is False) from randomized restarts.

    Restart ``i`` uses the ``i``-th seed drawn from ``Random(seed)``; a
    restart that proves unsatisfiability ends the sampling.  An optional
    ``guide`` draws a reference map per restart whose value is tried first
    at every variable (the remaining values keep their random order).
    """
    rng = random.Random(seed)
    max_restarts = 20 * count if max_restarts is None else max_restarts
    seen: set[tuple[int, ...]] = set()
    out: list[MapTable] = []
    for _ in range(max_restarts):
        if len(out) >= count:
            break
        sub = rng.getrandbits(63)
        q = p.with_seed(sub)
        if guide is not None:
            q = replace(q, reference=guide(random.Random(sub)).codes)
        res = search_hom(q)
        if isinstance(res, Unsat):
            break
        if isinstance(res, Found) and (not distinct or res.table.codes not in seen):
            seen.add(res.table.codes)
            out.append(res.table)
    return out
