"""
Todd-Coxeter coset enumeration (HLT with lookahead), coset tables,
permutation representations and Reidemeister-Schreier rewriting.

The enumeration loop is compiled with numba; everything around it is plain
Python.  Table columns are ``2*g`` for generator g and ``2*g+1`` for its
inverse, cosets are numbered from 0 (coset 0 is the subgroup itself) in
order of first definition.
"""

from __future__ import annotations

import os
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .presentations import Presentation, Word

DEFAULT_MAX_COSETS = 2_000_000
DEFAULT_MAX_TIME = 120.0

_DONE, _PAUSED, _OVERFLOW = 0, 1, 2
# state slots
_NEXT, _CUR, _PHASE, _LIVE, _DEFINED, _PEAK, _MERGES = range(7)


class BudgetExceeded(RuntimeError):
    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


@dataclass(frozen=True)
class EnumerationBudget:
    max_cosets: int = DEFAULT_MAX_COSETS
    max_time: float = DEFAULT_MAX_TIME

    def __post_init__(self):
        if self.max_cosets < 1:
            raise ValueError("max_cosets must be >= 1")

    @classmethod
    def default(cls) -> "EnumerationBudget":
        env = os.environ.get("TSL_BUDGET_COSETS")
        return cls(max_cosets=int(env)) if env else cls()


@njit(cache=True)
def _rep(parent, c):
    r = c
    while parent[r] != r:
        r = parent[r]
    while parent[c] != r:
        nxt = parent[c]
        parent[c] = r
        c = nxt
    return r


@njit(cache=True)
def _merge(parent, queue, qlen, a, b, state):
    a = _rep(parent, a)
    b = _rep(parent, b)
    if a != b:
        if a > b:
            a, b = b, a
        parent[b] = a
        queue[qlen] = b
        qlen += 1
        state[_LIVE] -= 1
        state[_MERGES] += 1
    return qlen


@njit(cache=True)
def _coincidence(table, parent, queue, a, b, state):
    ncols = table.shape[1]
    qlen = _merge(parent, queue, 0, a, b, state)
    i = 0
    while i < qlen:
        g = queue[i]
        i += 1
        for x in range(ncols):
            d = table[g, x]
            if d >= 0:
                xi = x ^ 1
                table[d, xi] = -1
                mu = _rep(parent, g)
                nu = _rep(parent, d)
                if table[mu, x] >= 0:
                    qlen = _merge(parent, queue, qlen, nu, table[mu, x], state)
                elif table[nu, xi] >= 0:
                    qlen = _merge(parent, queue, qlen, mu, table[nu, xi], state)
                else:
                    table[mu, x] = nu
                    table[nu, xi] = mu


@njit(cache=True)
def _define(table, parent, state, f, x):
    n = state[_NEXT]
    if n >= table.shape[0]:
        return -1
    state[_NEXT] = n + 1
    parent[n] = n
    for y in range(table.shape[1]):
        table[n, y] = -1
    table[f, x] = n
    table[n, x ^ 1] = f
    state[_LIVE] += 1
    state[_DEFINED] += 1
    if state[_LIVE] > state[_PEAK]:
        state[_PEAK] = state[_LIVE]
    return n


@njit(cache=True)
def _scan(table, parent, queue, flat, start, end, a, state, fill):
    # Returns 1 when a definition was needed but the table is full.
    f = a
    i = start
    b = a
    j = end - 1
    while True:
        while i < end and table[f, flat[i]] >= 0:
            f = table[f, flat[i]]
            i += 1
        if i >= end:
            if f != a:
                _coincidence(table, parent, queue, f, a, state)
            return 0
        while j >= i and table[b, flat[j] ^ 1] >= 0:
            b = table[b, flat[j] ^ 1]
            j -= 1
        if j < i:
            _coincidence(table, parent, queue, f, b, state)
            return 0
        if i == j:
            table[f, flat[i]] = b
            table[b, flat[i] ^ 1] = f
            return 0
        if not fill:
            return 0
        if _define(table, parent, state, f, flat[i]) < 0:
            return 1


@njit(cache=True)
def _hlt(table, parent, queue, rel_flat, rel_off, sub_flat, sub_off, state, chunk):
    ncols = table.shape[1]
    if state[_PHASE] == 0:
        for k in range(sub_off.shape[0] - 1):
            if _scan(table, parent, queue, sub_flat, sub_off[k], sub_off[k + 1], 0, state, True):
                return _OVERFLOW
        state[_PHASE] = 1
        state[_CUR] = 0
    cur = state[_CUR]
    done = 0
    while cur < state[_NEXT]:
        if parent[cur] == cur:
            for k in range(rel_off.shape[0] - 1):
                if _scan(table, parent, queue, rel_flat, rel_off[k], rel_off[k + 1], cur, state, True):
                    state[_CUR] = cur
                    return _OVERFLOW
                if parent[cur] != cur:
                    break
            if parent[cur] == cur:
                for x in range(ncols):
                    if table[cur, x] < 0:
                        if _define(table, parent, state, cur, x) < 0:
                            state[_CUR] = cur
                            return _OVERFLOW
        cur += 1
        done += 1
        if done >= chunk:
            state[_CUR] = cur
            return _PAUSED
    state[_CUR] = cur
    return _DONE


@njit(cache=True)
def _lookahead(table, parent, queue, rel_flat, rel_off, state):
    for c in range(state[_NEXT]):
        if parent[c] != c:
            continue
        for k in range(rel_off.shape[0] - 1):
            _scan(table, parent, queue, rel_flat, rel_off[k], rel_off[k + 1], c, state, False)
            if parent[c] != c:
                break


@njit(cache=True)
def _compact(table, parent, state):
    n = state[_NEXT]
    ncols = table.shape[1]
    newidx = np.full(n, -1, dtype=np.int64)
    k = 0
    newcur = 0
    for c in range(n):
        if parent[c] == c:
            newidx[c] = k
            k += 1
            if c < state[_CUR]:
                newcur += 1
    for c in range(n):
        if parent[c] == c:
            r = newidx[c]
            for x in range(ncols):
                d = table[c, x]
                table[r, x] = newidx[_rep(parent, d)] if d >= 0 else -1
    for c in range(k):
        parent[c] = c
    state[_NEXT] = k
    state[_LIVE] = k
    state[_CUR] = newcur


def _flatten(words):
    flat, off = [], [0]
    for w in words:
        flat.extend(w.flat())
        off.append(len(flat))
    return np.array(flat, dtype=np.int32), np.array(off, dtype=np.int64)


@dataclass
class CosetTable:
    """A complete coset table.  ``table[c, 2*g]`` is ``c . g``."""

    presentation: Presentation
    subgroup_gens: tuple
    table: np.ndarray
    stats: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.table.shape[0]

    def act(self, c: int, w: Word) -> int:
        t = self.table
        for x in w.flat():
            c = t[c, x]
        return int(c)

    def column_perm(self, col: int) -> np.ndarray:
        return self.table[:, col].astype(np.int64)

    def word_perm(self, w: Word) -> np.ndarray:
        """Permutation of all cosets induced by right multiplication with w."""
        perm = np.arange(self.n, dtype=np.int64)
        for x in w.flat():
            perm = self.table[perm, x]
        return perm.astype(np.int64)

    def transversal(self) -> list[Word]:
        """Prefix-closed representatives (BFS), ``act(0, rep[c]) == c``."""
        reps: list = [None] * self.n
        reps[0] = Word()
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for x in range(self.table.shape[1]):
                d = int(self.table[c, x])
                if reps[d] is None:
                    g, e = divmod(x, 2)
                    reps[d] = reps[c] * Word.gen(g, -1 if e else 1)
                    queue.append(d)
        return reps

    def check(self) -> None:
        """Assert the coset table invariants; raises AssertionError."""
        t = self.table
        n, ncols = t.shape
        assert (t >= 0).all() and (t < n).all(), "incomplete table"
        for x in range(0, ncols, 2):
            fwd, back = t[:, x], t[:, x + 1]
            assert (back[fwd] == np.arange(n)).all(), "generator column is not a permutation"
        for r in self.presentation.relators:
            assert (self.word_perm(r) == np.arange(n)).all(), "relator acts nontrivially"
        for h in self.subgroup_gens:
            assert self.act(0, h) == 0, "subgroup generator moves coset 0"
        assert all(r is not None for r in self.transversal()), "action not transitive"


def todd_coxeter(p: Presentation, h_gens=(), budget: EnumerationBudget | None = None,
                 chunk: int = 4096) -> CosetTable:
    """Enumerate the cosets of <h_gens> in the group presented by p.

    Raises BudgetExceeded rather than returning a partial table.
    """
    budget = budget or EnumerationBudget.default()
    h_gens = tuple(Word(h) for h in h_gens)
    k = p.ngens
    if k == 0:
        return CosetTable(p, h_gens, np.zeros((1, 0), dtype=np.int32), {"index": 1})
    for h in h_gens:
        if any(g >= k for g, _ in h):
            raise ValueError("subgroup generator uses an unknown generator")
    ncols = 2 * k
    rel_flat, rel_off = _flatten([r for r in p.relators if r])
    sub_flat, sub_off = _flatten([h for h in h_gens if h])

    cap = min(budget.max_cosets, 1024)
    table = np.full((cap, ncols), -1, dtype=np.int32)
    parent = np.arange(cap, dtype=np.int32)
    queue = np.zeros(cap, dtype=np.int32)
    state = np.zeros(8, dtype=np.int64)
    state[_NEXT] = state[_LIVE] = state[_PEAK] = 1
    start = time.monotonic()

    def stats():
        return {
            "defined": int(state[_DEFINED]) + 1,
            "peak_live": int(state[_PEAK]),
            "coincidences": int(state[_MERGES]),
        }

    while True:
        status = _hlt(table, parent, queue, rel_flat, rel_off, sub_flat, sub_off, state, chunk)
        if time.monotonic() - start > budget.max_time:
            raise BudgetExceeded(
                f"coset enumeration exceeded {budget.max_time}s", stats()
            )
        if status == _DONE:
            break
        if status == _PAUSED:
            continue
        if cap < budget.max_cosets:
            new_cap = min(budget.max_cosets, 2 * cap)
            table = np.concatenate([table, np.full((new_cap - cap, ncols), -1, dtype=np.int32)])
            parent = np.concatenate([parent, np.arange(cap, new_cap, dtype=np.int32)])
            queue = np.zeros(new_cap, dtype=np.int32)
            cap = new_cap
            continue
        before = int(state[_NEXT])
        _lookahead(table, parent, queue, rel_flat, rel_off, state)
        _compact(table, parent, state)
        if state[_NEXT] >= before or state[_NEXT] >= cap:
            raise BudgetExceeded(
                f"coset enumeration needs more than {budget.max_cosets} cosets", stats()
            )
    _compact(table, parent, state)
    n = int(state[_NEXT])
    out = CosetTable(p, h_gens, table[:n].copy(), stats())
    out.stats["index"] = n
    return out


def group_order(p: Presentation, budget: EnumerationBudget | None = None) -> int:
    return todd_coxeter(p, (), budget).n


def perm_rep(t: CosetTable) -> list[tuple[int, ...]]:
    """One permutation of {0..n-1} per generator (right action on cosets)."""
    return [tuple(int(x) for x in t.table[:, 2 * g]) for g in range(t.presentation.ngens)]


def _tree_edges(t, reps):
    tree = set()
    for c, w in enumerate(reps):
        if w:
            # the last letter of a prefix-closed rep is the tree edge into c
            g, e = w[-1]
            prev = t.act(0, w * Word.gen(g, -1 if e > 0 else 1))
            tree.add((prev, g) if e > 0 else (c, g))
    return tree


def reidemeister_schreier(p: Presentation, t: CosetTable, name=None) -> Presentation:
    """Presentation of the subgroup H of a complete table on Schreier generators.

    Generators are the non-tree edges ``s_c_g = rep(c) g rep(c.g)^-1`` of the
    BFS transversal; relators rewrite ``rep(c) r rep(c)^-1`` for every coset
    c and relator r.
    """
    reps = t.transversal()
    tree = _tree_edges(t, reps)
    index = {}
    names = []
    for c in range(t.n):
        for g in range(p.ngens):
            if (c, g) not in tree:
                index[(c, g)] = len(names)
                names.append(f"s{c}_{p.gens[g]}")

    def rewrite(c, w):
        letters = []
        for col in w.flat():
            g, inv = divmod(col, 2)
            if not inv:
                key = (c, g)
                c = int(t.table[c, col])
                if key in index:
                    letters.append((index[key], 1))
            else:
                c = int(t.table[c, col])
                key = (c, g)
                if key in index:
                    letters.append((index[key], -1))
        return Word(letters), c

    rels = []
    seen = set()
    for c in range(t.n):
        for r in p.relators:
            w, end = rewrite(c, r)
            assert end == c
            if w and w not in seen:
                seen.add(w)
                rels.append(w)
    return Presentation(tuple(names), tuple(rels), name or f"{p.name}_sub")


def subgroup_generator_words(p: Presentation, t: CosetTable) -> list[Word]:
    """The Schreier generators of reidemeister_schreier as words in p."""
    reps = t.transversal()
    tree = _tree_edges(t, reps)
    out = []
    for c in range(t.n):
        for g in range(p.ngens):
            if (c, g) not in tree:
                d = int(t.table[c, 2 * g])
                out.append(reps[c] * Word.gen(g) * reps[d].inverse())
    return out
