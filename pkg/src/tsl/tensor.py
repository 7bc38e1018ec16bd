"""
Nonabelian tensor squares G (x) G of finite groups, with the surrounding
invariants: J_2(G) = ker(kappa), Nabla(G), the exterior square G ^ G and
the Schur multiplier M(G) = J_2(G) / Nabla(G).

Three routes:

* ``tensor_square_nu``: coset enumeration of nu(G) over the copy of G.
  The tensor square is T = [G, G^phi] inside nu(G); T meets G trivially,
  so it acts regularly on its orbit of the trivial coset and we read off
  a regular permutation representation of G (x) G.
* ``tensor_square_definitional``: enumerate the group given by generators
  x (x) y and the two defining tensor relations (small groups only).
* ``abelian_tensor_shortcut``: for abelian G everything is a cokernel of
  an integer matrix, so infinite groups are fine too.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .cosets import BudgetExceeded, EnumerationBudget, todd_coxeter
from .lattice import (
    INFINITE,
    AbelianGroup,
    abelian_from_matrix,
    cokernel,
    gamma_whitehead,
    has_two_torsion,
    subgroup_of_cokernel,
)
from .perms import (
    GroupHom,
    PermGroup,
    abelian_invariants,
    derived_subgroup,
    is_identity,
    mul,
    regular_group,
)
from .presentations import Presentation, Word, abelianized_relation_matrix, comm, conj


class Method(str, enum.Enum):
    NU = "nu"
    DEFINITIONAL = "definitional"
    SHORTCUT = "abelian"


class NotFinite(BudgetExceeded):
    """The group itself could not be enumerated within budget."""


class InvariantViolation(AssertionError):
    pass


DEFINITIONAL_MAX_ORDER = 16


@dataclass(frozen=True)
class MulTable:
    """Multiplication table of a finite group; element 0 is the identity."""

    table: tuple
    words: tuple = ()

    @classmethod
    def from_presentation(cls, p: Presentation, budget=None) -> "MulTable":
        ct = _enumerate_group(p, budget)
        reps = ct.transversal()
        rows = tuple(tuple(ct.act(a, reps[b]) for b in range(ct.n)) for a in range(ct.n))
        return cls(rows, tuple(reps))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.table[a].index(0)

    def conj(self, x: int, y: int) -> int:
        """x y x^-1."""
        return self.mul(self.mul(x, y), self.inv(x))

    def comm(self, x: int, y: int) -> int:
        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))

    def check(self) -> None:
        n = self.order
        rng = list(range(n))
        assert all(self.table[0][a] == a == self.table[a][0] for a in rng), "bad identity"
        for row in self.table:
            assert sorted(row) == rng, "not a latin square"
        for a in rng:
            for b in rng:
                ab = self.table[a][b]
                for c in rng:
                    assert self.table[ab][c] == self.table[a][self.table[b][c]], "not associative"


def _enumerate_group(p: Presentation, budget=None):
    try:
        return todd_coxeter(p, (), budget)
    except BudgetExceeded as e:
        raise NotFinite(f"{p.name}: {e}", e.stats) from None


def nu_presentation(p: Presentation) -> Presentation:
    """nu(G): two copies of G (generators g and g_phi) tied by
    x [g, h^phi] x^-1 = [x g x^-1, (x h x^-1)^phi] and the same with x^phi
    on the left, for all generators x, g, h."""
    k = p.ngens
    names = list(p.gens)
    taken = set(names)
    for g in p.gens:
        nm = f"{g}_phi"
        while nm in taken:
            nm += "_"
        taken.add(nm)
        names.append(nm)
    phi = [k + i for i in range(k)]
    rels = list(p.relators) + [r.rename(phi) for r in p.relators]
    for x in range(k):
        X, Xp = Word.gen(x), Word.gen(k + x)
        for g in range(k):
            G = Word.gen(g)
            for h in range(k):
                H = Word.gen(h)
                target = comm(conj(X, G), conj(X, H).rename(phi))
                c = comm(G, H.rename(phi))
                rels.append(conj(X, c) * target.inverse())
                rels.append(conj(Xp, c) * target.inverse())
    return Presentation(tuple(names), tuple(rels), f"nu({p.name})")


def _collapse_phi(w: Word, k: int) -> Word:
    """The map nu(G) -> G sending g and g^phi to g."""
    return w.rename([i % k for i in range(2 * k)])


@dataclass
class TensorSquareData:
    """Everything computed about G (x) G.  Orders may be INFINITE."""

    group: str
    method: Method
    tensor_order: object
    tensor: AbelianGroup | None
    j2: AbelianGroup | None
    nabla: AbelianGroup
    exterior_order: object
    schur: AbelianGroup
    derived_order: object
    group_order: object
    abelianization: AbelianGroup
    stats: dict = field(default_factory=dict)
    tensor_group: PermGroup | None = None
    j2_group: PermGroup | None = None
    nabla_group: PermGroup | None = None
    g_group: PermGroup | None = None

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "method": self.method.value,
            "tensor_order": _order_json(self.tensor_order),
            "tensor": self.tensor.to_json() if self.tensor is not None else None,
            "j2": self.j2.to_json() if self.j2 is not None else None,
            "nabla": self.nabla.to_json(),
            "exterior_order": _order_json(self.exterior_order),
            "schur": self.schur.to_json(),
            "derived_order": _order_json(self.derived_order),
            "group_order": _order_json(self.group_order),
            "abelianization": self.abelianization.to_json(),
        }


def _order_json(n):
    return "INFINITE" if n == INFINITE else int(n)


def _restrict(perm: np.ndarray, orbit: np.ndarray, pos: np.ndarray) -> np.ndarray:
    return pos[perm[orbit]]


def _finish(group, method, T, kappa_images, nabla_perms, g_reg, ab, stats):
    kappa = GroupHom(T, g_reg, kappa_images)
    j2 = kappa.kernel()
    nabla = PermGroup(nabla_perms, T.degree)
    for x in nabla.generators:
        if x not in T or x not in j2:
            raise InvariantViolation("a generator of Nabla is not in J_2")
    if not j2.is_abelian():
        raise InvariantViolation("J_2 is not abelian")
    image = kappa.image()
    t_order = T.order()
    return TensorSquareData(
        group=group,
        method=method,
        tensor_order=t_order,
        tensor=abelian_invariants(T) if T.is_abelian() else None,
        j2=abelian_invariants(j2),
        nabla=abelian_invariants(nabla),
        exterior_order=t_order // nabla.order(),
        schur=abelian_invariants(j2, modulo=nabla),
        derived_order=image.order(),
        group_order=g_reg.degree,
        abelianization=ab,
        stats=stats,
        tensor_group=T,
        j2_group=j2,
        nabla_group=nabla,
        g_group=g_reg,
    )


def tensor_square_nu(p: Presentation, budget: EnumerationBudget | None = None) -> TensorSquareData:
    """G (x) G through the regular action of [G, G^phi] on cosets of G in nu(G)."""
    ab = abelian_from_matrix(abelianized_relation_matrix(p))
    gt = _enumerate_group(p, budget)
    g_reg = regular_group(gt)
    k = p.ngens
    nu = nu_presentation(p)
    ct = todd_coxeter(nu, [Word.gen(i) for i in range(k)], budget)
    n_g = gt.n
    if ct.n % n_g:
        raise InvariantViolation(f"[nu(G):G] = {ct.n} is not a multiple of |G| = {n_g}")
    t_order = ct.n // n_g
    stats = {"group_order": n_g, "nu_index": ct.n, **{f"nu_{a}": b for a, b in ct.stats.items()}}

    # normal closure of the [g_i, g_j^phi] in nu(G), keeping words
    words = [comm(Word.gen(i), Word.gen(k + j)) for i in range(k) for j in range(k)]
    perms = [ct.word_perm(w) for w in words]
    keep = [i for i, x in enumerate(perms) if not is_identity(x)]
    words = [words[i] for i in keep]
    perms = [perms[i] for i in keep]
    closure = PermGroup(perms, ct.n)
    todo = list(range(len(words)))
    while todo:
        i = todo.pop(0)
        for c in range(2 * k):
            cw = Word.gen(c)
            w = cw.inverse() * words[i] * cw
            x = ct.word_perm(w)
            if x not in closure:
                words.append(w)
                perms.append(x)
                todo.append(len(words) - 1)
                closure = PermGroup(perms, ct.n)

    orbit = np.array(closure.orbit(0) if perms else [0], dtype=np.int64)
    if len(orbit) != t_order:
        raise InvariantViolation(
            f"orbit of [G, G^phi] has {len(orbit)} points, expected {t_order}"
        )
    pos = np.full(ct.n, -1, dtype=np.int64)
    pos[orbit] = np.arange(len(orbit))
    t_perms = [_restrict(x, orbit, pos) for x in perms]
    T = PermGroup(t_perms, t_order)
    kappa_images = [gt.word_perm(_collapse_phi(w, k)) for w in words]

    nabla_perms = []
    for w in gt.transversal():
        x = ct.word_perm(comm(w, w.rename(list(range(k, 2 * k)))))
        if not is_identity(x):
            nabla_perms.append(_restrict(x, orbit, pos))
    return _finish(p.name, Method.NU, T, kappa_images, nabla_perms, g_reg, ab, stats)


def tensor_order_nu(p: Presentation, budget: EnumerationBudget | None = None) -> int:
    """|G (x) G| = [nu(G) : G] / |G|, without building the group."""
    n_g = _enumerate_group(p, budget).n
    idx = todd_coxeter(nu_presentation(p), [Word.gen(i) for i in range(p.ngens)], budget).n
    if idx % n_g:
        raise InvariantViolation(f"[nu(G):G] = {idx} is not a multiple of |G| = {n_g}")
    return idx // n_g


def definitional_presentation(t: MulTable) -> Presentation:
    """Generators x (x) y for all x, y in G with the two tensor relations."""
    n = t.order

    def s(x, y):
        return Word.gen(x * n + y)

    rels = set()
    for x in range(n):
        for y in range(n):
            for z in range(n):
                # (xy) (x) z = (x y x^-1 (x) x z x^-1)(x (x) z)
                rels.add(s(t.conj(x, y), t.conj(x, z)) * s(x, z) * s(t.mul(x, y), z).inverse())
                # x (x) (zt) = (x (x) z)(z x z^-1 (x) z t z^-1), here with t = y
                rels.add(s(x, z) * s(t.conj(z, x), t.conj(z, y)) * s(x, t.mul(z, y)).inverse())
    rels.discard(Word())
    names = tuple(f"t{x}_{y}" for x in range(n) for y in range(n))
    return Presentation(names, tuple(sorted(rels)), "tensor")


def tensor_square_definitional(p: Presentation, budget: EnumerationBudget | None = None,
                               max_order: int = DEFINITIONAL_MAX_ORDER) -> TensorSquareData:
    """G (x) G straight from its defining presentation (|G| <= max_order)."""
    ab = abelian_from_matrix(abelianized_relation_matrix(p))
    gt = _enumerate_group(p, budget)
    if gt.n > max_order:
        raise ValueError(f"definitional method is limited to |G| <= {max_order}, got {gt.n}")
    table = MulTable.from_presentation(p, budget)
    n = table.order
    pres = definitional_presentation(table)
    ct = todd_coxeter(pres, (), budget)
    T = PermGroup([ct.column_perm(2 * i) for i in range(pres.ngens)], ct.n)
    # regular representation in MulTable numbering: right multiplication by g
    g_reg = PermGroup(
        [np.array([table.mul(a, g) for a in range(n)]) for g in range(1, n)] or
        [np.arange(1)], n,
    )
    elt = [np.array([table.mul(a, g) for a in range(n)], dtype=np.int64) for g in range(n)]
    kappa_images = [elt[table.comm(x, y)] for x in range(n) for y in range(n)]
    nabla_perms = [ct.column_perm(2 * (x * n + x)) for x in range(n)]
    nabla_perms = [x for x in nabla_perms if not is_identity(x)]
    stats = {"group_order": n, "definitional_index": ct.n, "symbols": n * n}
    return _finish(p.name, Method.DEFINITIONAL, T, kappa_images, nabla_perms, g_reg, ab, stats)


def abelian_tensor_shortcut(a: AbelianGroup, name="A") -> TensorSquareData:
    """A (x) A for f.g. abelian A as the cokernel on basis e_ij = a_i (x) a_j."""
    d = list(a.invariants)
    k = len(d)

    def e(i, j):
        return i * k + j

    ncols = k * k
    rels = []
    for i in range(k):
        for j in range(k):
            for mod in (d[i], d[j]):
                if mod:
                    row = [0] * ncols
                    row[e(i, j)] = mod
                    rels.append(row)
    nabla_gens = []
    for i in range(k):
        for j in range(i, k):
            row = [0] * ncols
            row[e(i, j)] += 1
            row[e(j, i)] += 1 if i != j else 0
            nabla_gens.append(row)
    tensor = cokernel(rels, ncols)
    nabla = subgroup_of_cokernel(rels, nabla_gens, ncols)
    exterior = cokernel(rels + nabla_gens, ncols)
    return TensorSquareData(
        group=name,
        method=Method.SHORTCUT,
        tensor_order=tensor.order,
        tensor=tensor,
        j2=tensor,
        nabla=nabla,
        exterior_order=exterior.order,
        schur=exterior,
        derived_order=1,
        group_order=a.order,
        abelianization=a,
        stats={},
    )


def tensor_square(p: Presentation, method: Method | str = Method.NU,
                  budget: EnumerationBudget | None = None) -> TensorSquareData:
    method = Method(method)
    if method is Method.NU:
        return tensor_square_nu(p, budget)
    if method is Method.DEFINITIONAL:
        return tensor_square_definitional(p, budget)
    return abelian_tensor_shortcut(abelian_from_matrix(abelianized_relation_matrix(p)), p.name)


@dataclass
class DiagramReport:
    group: str
    data: TensorSquareData
    checks: list

    @property
    def ok(self) -> bool:
        return all(status != "FAIL" for _, status, _ in self.checks)

    def to_json(self) -> dict:
        out = self.data.to_json()
        out["checks"] = [
            {"name": n, "status": s, "detail": d} for n, s, d in self.checks
        ]
        out["ok"] = self.ok
        return out


def _check(cond, detail=""):
    return ("PASS" if cond else "FAIL", detail)


def diagram_report(d: TensorSquareData) -> DiagramReport:
    """Verify the commutative-diagram identities relating G (x) G, J_2,
    Nabla, G ^ G, M(G) and [G, G]."""
    checks = []

    def add(name, cond, detail=""):
        checks.append((name, *_check(cond, detail)))

    nab = d.nabla.order
    sch = d.schur.order
    j2 = d.j2.order if d.j2 is not None else None
    add("tensor_eq_nabla_times_exterior", d.tensor_order == nab * d.exterior_order,
        f"{d.tensor_order} = {nab} * {d.exterior_order}")
    add("exterior_eq_schur_times_derived", d.exterior_order == sch * d.derived_order,
        f"{d.exterior_order} = {sch} * {d.derived_order}")
    if j2 is not None:
        add("tensor_eq_j2_times_derived", d.tensor_order == j2 * d.derived_order,
            f"{d.tensor_order} = {j2} * {d.derived_order}")
    if d.g_group is not None:
        derived = derived_subgroup(d.g_group).order()
        add("kappa_onto_derived", derived == d.derived_order,
            f"|[G,G]| = {derived}, |im kappa| = {d.derived_order}")
    else:
        add("kappa_onto_derived", d.derived_order == 1, "G abelian")
    if d.tensor_group is not None:
        T, J, N = d.tensor_group, d.j2_group, d.nabla_group
        add("nabla_in_j2", all(x in J for x in N.generators))
        add("j2_central", all(
            np.array_equal(mul(a, b), mul(b, a)) for a in J.generators for b in T.generators
        ))
        add("nabla_central", all(
            np.array_equal(mul(a, b), mul(b, a)) for a in N.generators for b in T.generators
        ))
        add("schur_abelian", J.is_abelian())
    else:
        add("nabla_in_j2", True, "abelian: J_2 = G (x) G")
        add("j2_central", True, "abelian: G (x) G is abelian")
        add("nabla_central", True, "abelian: G (x) G is abelian")
        add("schur_abelian", True, "cokernel")
    ab = d.abelianization
    if not has_two_torsion(ab) and j2 is not None:
        gam = gamma_whitehead(ab)
        add("j2_eq_gamma_times_schur", j2 == gam.order * sch,
            f"|J_2| = {j2}, |Gamma(G^ab)| = {gam.order}, |M| = {sch}")
        nab_ab = abelian_tensor_shortcut(ab).nabla
        add("nabla_eq_nabla_of_abelianization", d.nabla == nab_ab,
            f"{d.nabla} vs {nab_ab}")
    return DiagramReport(d.group, d, checks)
