"""
Permutation groups: deterministic Schreier-Sims, normal closures,
verified homomorphisms, kernels and abelian invariants.

Permutations are numpy integer arrays on {0, ..., n-1} acting on the right:
``(p * q)[i] == q[p[i]]``.  Cycle strings such as ``"(1 2 3)(4 5)"`` are
accepted wherever a permutation is expected; those are 1-based.
"""

from __future__ import annotations

import re
import threading
from typing import Sequence

import numpy as np

from .lattice import AbelianGroup, IntMatrix, abelian_from_matrix
from .presentations import Presentation, Word


class NotAHomomorphism(ValueError):
    pass


class NotAbelian(ValueError):
    pass


def as_perm(p, degree: int | None = None) -> np.ndarray:
    if isinstance(p, str):
        cycles = [list(map(int, c.replace(",", " ").split())) for c in re.findall(r"\(([^)]*)\)", p)]
        n = max([x for c in cycles for x in c], default=0)
        n = max(n, degree or 0)
        out = np.arange(n, dtype=np.int64)
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                out[a - 1] = b - 1
        return out
    out = np.asarray(p, dtype=np.int64)
    if degree is not None and len(out) < degree:
        out = np.concatenate([out, np.arange(len(out), degree)])
    return out


def mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return q[p]


def inv(p: np.ndarray) -> np.ndarray:
    out = np.empty_like(p)
    out[p] = np.arange(len(p))
    return out


def is_identity(p: np.ndarray) -> bool:
    return bool((p == np.arange(len(p))).all())


def cycle_string(p) -> str:
    """1-based cycle notation, ``"()"`` for the identity."""
    p = np.asarray(p)
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        j = int(p[i])
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = int(p[j])
        out.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(out) or "()"


class PermGroup:
    """Group generated by permutations of {0..degree-1}.

    The stabilizer chain is built on first use with the smallest moved
    point as each new base point, so results are reproducible.
    """

    def __init__(self, generators: Sequence, degree: int | None = None, base_prefix=()):
        gens = [as_perm(g) for g in generators]
        if degree is None:
            degree = max((len(g) for g in gens), default=1)
        self.degree = degree
        self.generators = [as_perm(g, degree) for g in gens]
        for g in self.generators:
            if sorted(g.tolist()) != list(range(degree)):
                raise ValueError("generator is not a permutation")
        self._base_prefix = list(base_prefix)
        self._chain = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @property
    def identity(self) -> np.ndarray:
        return np.arange(self.degree, dtype=np.int64)

    # -- stabilizer chain -------------------------------------------------

    def _build(self):
        with self._lock:
            if self._chain is None:
                self._chain = _schreier_sims(self.generators, self.degree, self._base_prefix)
        return self._chain

    @property
    def base(self) -> list[int]:
        return list(self._build()[0])

    def strong_generators(self, level: int = 0) -> list[np.ndarray]:
        base, strong, _ = self._build()
        return [s for s in strong if all(s[b] == b for b in base[:level])]

    def order(self) -> int:
        _, _, trans = self._build()
        n = 1
        for t in trans:
            n *= len(t)
        return n

    def __contains__(self, g) -> bool:
        g = as_perm(g, self.degree)
        base, _, trans = self._build()
        y, j = _strip(g, base, trans, 0)
        return j == len(base) and is_identity(y)

    def orbit(self, point: int) -> list[int]:
        seen = {point: None}
        todo = [point]
        for x in todo:
            for g in self.generators:
                y = int(g[x])
                if y not in seen:
                    seen[y] = None
                    todo.append(y)
        return list(seen)

    def elements(self) -> list[np.ndarray]:
        """All elements, by multiplying out the transversals (small groups only)."""
        _, _, trans = self._build()
        out = [self.identity]
        for t in reversed(trans):
            out = [mul(x, u) for u in t.values() for x in out]
        return out

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(
            np.array_equal(mul(a, b), mul(b, a)) for i, a in enumerate(gs) for b in gs[i + 1:]
        )

    def is_normal_in(self, other: "PermGroup") -> bool:
        return all(
            mul(mul(inv(x), s), x) in self for x in other.generators for s in self.generators
        )


def _orbit_transversal(point, gens, degree):
    trans = {point: np.arange(degree, dtype=np.int64)}
    todo = [point]
    for x in todo:
        for s in gens:
            y = int(s[x])
            if y not in trans:
                trans[y] = mul(trans[x], s)
                todo.append(y)
    return trans


def _strip(g, base, trans, start):
    for level in range(start, len(base)):
        b = int(g[base[level]])
        if b not in trans[level]:
            return g, level
        g = mul(g, inv(trans[level][b]))
    return g, len(base)


def _first_moved(g):
    moved = np.nonzero(g != np.arange(len(g)))[0]
    return int(moved[0])


def _schreier_sims(generators, degree, base_prefix=()):
    strong = [g for g in generators if not is_identity(g)]
    base = list(base_prefix)
    for g in strong:
        if all(g[b] == b for b in base):
            base.append(_first_moved(g))

    def level_gens(i):
        return [s for s in strong if all(s[b] == b for b in base[:i])]

    trans = [_orbit_transversal(base[i], level_gens(i), degree) for i in range(len(base))]
    i = len(base) - 1
    while i >= 0:
        restart = False
        gens_i = level_gens(i)
        for beta, u in list(trans[i].items()):
            for s in gens_i:
                us = mul(u, s)
                h = mul(us, inv(trans[i][int(us[base[i]])]))
                if is_identity(h):
                    continue
                y, j = _strip(h, base, trans, i + 1)
                if j < len(base) or not is_identity(y):
                    if j == len(base):
                        base.append(_first_moved(y))
                        trans.append(None)
                    strong.append(y)
                    for lvl in range(i + 1, j + 1):
                        trans[lvl] = _orbit_transversal(base[lvl], level_gens(lvl), degree)
                    i = j
                    restart = True
                    break
            if restart:
                break
        if not restart:
            i -= 1
    return base, strong, trans


def order(g: PermGroup) -> int:
    return g.order()


def normal_closure(g: PermGroup, s: Sequence) -> PermGroup:
    """Smallest normal subgroup of g containing the elements s."""
    gens = [as_perm(x, g.degree) for x in s]
    gens = [x for x in gens if not is_identity(x)]
    n = PermGroup(gens, g.degree)
    todo = list(gens)
    while todo:
        x = todo.pop(0)
        for c in g.generators:
            y = mul(mul(inv(c), x), c)
            if y not in n:
                gens.append(y)
                todo.append(y)
                n = PermGroup(gens, g.degree)
    return n


def derived_subgroup(g: PermGroup) -> PermGroup:
    gs = g.generators
    comms = [mul(mul(a, b), mul(inv(a), inv(b))) for i, a in enumerate(gs) for b in gs[i + 1:]]
    return normal_closure(g, comms)


def evaluate_word(w: Word, images: Sequence[np.ndarray], degree: int) -> np.ndarray:
    out = np.arange(degree, dtype=np.int64)
    invs = {}
    for g, e in w:
        if e > 0:
            x = images[g]
        else:
            x = invs.setdefault(g, inv(images[g]))
        for _ in range(abs(e)):
            out = mul(out, x)
    return out


class GroupHom:
    """Homomorphism given by generator images, verified on construction.

    ``source`` is a Presentation (every relator must map to the identity)
    or a PermGroup (the graph subgroup must have the source's order).
    """

    def __init__(self, source, target: PermGroup, images: Sequence):
        self.source = source
        self.target = target
        self.images = [as_perm(x, target.degree) for x in images]
        ngens = source.ngens if isinstance(source, Presentation) else len(source.generators)
        if len(self.images) != ngens:
            raise ValueError("need one image per source generator")
        if isinstance(source, Presentation):
            for r in source.relators:
                if not is_identity(evaluate_word(r, self.images, target.degree)):
                    raise NotAHomomorphism(f"relator {r} does not map to the identity")
        else:
            if self._graph().order() != source.order():
                raise NotAHomomorphism("generator images do not extend to a homomorphism")

    def _graph(self, base_prefix=()):
        n = self.source.degree
        gens = [
            np.concatenate([a, b + n]) for a, b in zip(self.source.generators, self.images)
        ]
        return PermGroup(gens, n + self.target.degree, base_prefix)

    def image(self) -> PermGroup:
        return PermGroup(self.images, self.target.degree)

    def __call__(self, x):
        """Image of a source element (PermGroup source only)."""
        x = as_perm(x, self.source.degree)
        n = self.source.degree
        if getattr(self, "_src_graph", None) is None:
            # a base of the source is a base of the graph subgroup
            self._src_graph = self._graph(base_prefix=self.source.base)
        base, _, trans = self._src_graph._build()
        y = np.concatenate([x, np.arange(n, n + self.target.degree)])
        acc = np.arange(len(y))
        for level in range(len(base)):
            if base[level] >= n:
                break
            b = int(y[base[level]])
            if b not in trans[level]:
                raise ValueError("element is not in the source group")
            u = trans[level][b]
            y = mul(y, inv(u))
            acc = mul(u, acc)
        if not is_identity(y[:n]):
            raise ValueError("element is not in the source group")
        return acc[n:] - n

    def kernel(self) -> PermGroup:
        """Kernel on a PermGroup source: the pointwise stabilizer of the
        target points in the graph subgroup."""
        if isinstance(self.source, Presentation):
            raise TypeError("kernel needs a permutation group source")
        n = self.source.degree
        tbase = [n + b for b in self.image().base] if self.images else []
        graph = self._graph(base_prefix=tbase)
        gens = graph.strong_generators(level=len(tbase))
        return PermGroup([g[:n] for g in gens], n)


def hom_from_generator_images(src, tgt: PermGroup, imgs) -> GroupHom:
    return GroupHom(src, tgt, imgs)


def kernel(h: GroupHom, subgroup: PermGroup | None = None) -> PermGroup:
    """Kernel of h, optionally restricted to a subgroup of its source."""
    if subgroup is not None:
        imgs = [h(x) for x in subgroup.generators]
        h = GroupHom(subgroup, h.target, imgs)
    return h.kernel()


def _relation_rows(gens, key, mul_, one):
    """Relation lattice of an abelian group from generators.

    Adds generators one at a time; the smallest power of g_i landing in the
    span of the earlier ones gives a triangular relation row.
    """
    k = len(gens)
    span = {key(one): (one, (0,) * k)}
    rows = []
    for i, g in enumerate(gens):
        power, m = g, 1
        while key(power) not in span:
            power = mul_(power, g)
            m += 1
        row = [-c for c in span[key(power)][1]]
        row[i] += m
        rows.append(row)
        new = {}
        gj = one
        for j in range(1, m):
            gj = mul_(gj, g)
            for h, vec in span.values():
                x = mul_(h, gj)
                v = list(vec)
                v[i] += j
                new[key(x)] = (x, tuple(v))
        span.update(new)
    return rows


def abelian_invariants(g: PermGroup, modulo: PermGroup | None = None) -> AbelianGroup:
    """Invariant factors of an abelian permutation group (or of g/modulo)."""
    if not g.is_abelian():
        raise NotAbelian("group is not abelian")
    killed = list(modulo.generators) if modulo is not None else []
    gens = killed + list(g.generators)
    rows = _relation_rows(gens, lambda p: p.tobytes(), mul, g.identity)
    k = len(gens)
    rows += [[int(i == j) for j in range(k)] for i in range(len(killed))]
    return abelian_from_matrix(IntMatrix.from_rows(rows, k))


def regular_group(table) -> PermGroup:
    """Right regular representation of a group given by coset-table columns."""
    from .cosets import CosetTable

    if isinstance(table, CosetTable):
        return PermGroup(
            [table.column_perm(2 * i) for i in range(table.presentation.ngens)], table.n
        )
    raise TypeError("expected a CosetTable")
