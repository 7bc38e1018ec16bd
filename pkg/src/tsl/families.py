"""
Group families: the crystallographic groups G_n, the pro-p groups K_s of
finite coclass (through finite quotients), the Bieberbach groups B_1(n),
the extension-presentation builder, and the closed-form tensor-square
structures claimed for these families.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .lattice import AbelianGroup, IntMatrix
from .presentations import Presentation, Word, comm, direct_product, free_abelian


class Family(str, enum.Enum):
    GN = "GN"
    KS = "KS"
    B1 = "B1"
    FREE_SOLVABLE = "FREE_SOLVABLE"
    FREE_NILPOTENT = "FREE_NILPOTENT"


class BadPrime(ValueError):
    pass


class BadParams(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class UnsupportedFamily(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    params: dict
    presentation: Presentation | None
    h_claimed: int
    abelianization_claimed: AbelianGroup | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExtensionData:
    """Data for presenting an extension of a f.g. abelian A by a finite Q.

    A has generators alpha_1..alpha_{m+k}; the first m have the finite
    orders in ``torsion`` (ascending), the last ``rank`` are free.
    ``action[i][j]`` is the word u_ij with gamma_i alpha_j gamma_i^-1 = u_ij,
    ``lifts[i]`` the word w_i with r_i(gamma) = w_i(alpha).
    """

    q: Presentation
    rank: int
    torsion: tuple[int, ...]
    action: tuple[tuple[Word, ...], ...]
    lifts: tuple[Word, ...]

    @property
    def a_gens(self) -> int:
        return self.rank + len(self.torsion)

    def validate(self):
        na = self.a_gens
        if list(self.torsion) != sorted(self.torsion) or any(n < 1 for n in self.torsion):
            raise ValueError("torsion orders must be positive and ascending")
        if len(self.action) != self.q.ngens or any(len(row) != na for row in self.action):
            raise IndexError("need one action word per (Q-generator, A-generator) pair")
        if len(self.lifts) != len(self.q.relators):
            raise IndexError("need one lifting word per Q-relator")
        for w in [u for row in self.action for u in row] + list(self.lifts):
            for g, _ in Word(w):
                if not 0 <= g < na:
                    raise IndexError(f"word uses A-generator index {g} outside 0..{na - 1}")


def extension_presentation(e: ExtensionData, name="Gamma") -> Presentation:
    """Presentation on alpha_1..alpha_{k+m}, gamma_1..gamma_l with relators
    r_i(gamma) w_i(alpha)^-1, [alpha_i, alpha_j], alpha_j^{n_j} and
    gamma_i alpha_j gamma_i^-1 u_ij^-1."""
    e.validate()
    na = e.a_gens
    names = tuple(f"alpha{i + 1}" for i in range(na)) + tuple(
        f"gamma{i + 1}" for i in range(e.q.ngens)
    )
    shift = [na + i for i in range(e.q.ngens)]
    rels = []
    for r, w in zip(e.q.relators, e.lifts):
        rels.append(r.rename(shift) * Word(w).inverse())
    for i in range(na):
        for j in range(i + 1, na):
            rels.append(comm(Word.gen(i), Word.gen(j)))
    for j, n in enumerate(e.torsion):
        if n > 1:
            rels.append(Word.gen(j, n))
        else:
            rels.append(Word.gen(j))
    for i in range(e.q.ngens):
        g = Word.gen(na + i)
        for j in range(na):
            rels.append(g * Word.gen(j) * g.inverse() * Word(e.action[i][j]).inverse())
    return Presentation(names, tuple(rels), name)


def semidirect_action_words(matrices: Sequence[IntMatrix], rank: int, torsion=()) -> tuple:
    """Action words read off matrix rows: u_ij = prod_l alpha_l^{M[j, l]}."""
    na = rank + len(torsion)
    out = []
    for m in matrices:
        if m.rows != na or m.cols != na:
            raise DimensionMismatch(f"expected a {na}x{na} matrix, got {m.rows}x{m.cols}")
        out.append(tuple(Word((l, m[j, l]) for l in range(na)) for j in range(na)))
    return tuple(out)


def companion_action(n: int) -> IntMatrix:
    """The C_n action on Z^{n-1}: a_i -> a_{i+1}, a_{n-1} -> (a_1...a_{n-1})^-1."""
    rows = [[int(j == i + 1) for j in range(n - 1)] for i in range(n - 2)]
    rows.append([-1] * (n - 1))
    return IntMatrix.from_rows(rows, n - 1)


def _gn_presentation(n: int) -> Presentation:
    a = [Word.gen(i) for i in range(n - 1)]
    t = Word.gen(n - 1)
    ti = t.inverse()
    rels = [t ** n]
    for i in range(n - 2):
        rels.append(ti * a[i] * t * a[i + 1].inverse())
    prod = Word()
    for x in a:
        prod = prod * x.inverse()
    rels.append(ti * a[n - 2] * t * prod.inverse())
    for i in range(n - 1):
        for j in range(i):
            rels.append(comm(a[i], a[j]))
    names = tuple(f"a{i + 1}" for i in range(n - 1)) + ("t",)
    return Presentation(names, tuple(rels), f"G{n}")


def crystallographic_gn(n: int) -> FamilySpec:
    if n < 2:
        raise BadParams("G_n needs n >= 2")
    return FamilySpec(
        Family.GN,
        {"n": n},
        _gn_presentation(n),
        h_claimed=n - 1,
        abelianization_claimed=AbelianGroup.from_cyclic([n, n]),
    )


def gn_derived_words(n: int) -> list[Word]:
    """Generators of [G_n, G_n] as words in a_1..a_{n-1}, t."""
    a = [Word.gen(i) for i in range(n - 1)]
    out = [a[i].inverse() * a[i + 1] for i in range(n - 2)]
    last = Word()
    for i in range(n - 2):
        last = last * a[i].inverse()
    out.append(last * a[n - 2] ** -2)
    return out


def gn_derived_description(n: int) -> Presentation:
    """[G_n, G_n] as the free abelian group on its n-1 listed generators."""
    if n < 2:
        raise BadParams("G_n needs n >= 2")
    return free_abelian(n - 1, prefix="b", name=f"G{n}_derived")


def gn_quotient(n: int, m: int) -> Presentation:
    """G_n with a_i^m added; a finite group of order n * m^(n-1)."""
    if n < 2 or m < 2:
        raise BadParams("need n >= 2 and m >= 2")
    p = _gn_presentation(n)
    rels = p.relators + tuple(Word.gen(i, m) for i in range(n - 1))
    return Presentation(p.gens, rels, f"G{n}_mod{m}")


def gn_quotient_order(n: int, m: int) -> int:
    return n * m ** (n - 1)


def e_vector(p: int, s: int) -> list[int]:
    d = p ** (s - 1) * (p - 1)
    step = p ** (s - 1)
    return [1 if (i - 1) % step == 0 else 0 for i in range(1, d + 1)]


def _check_prime(p, s):
    if not is_prime(p):
        raise BadPrime(f"{p} is not prime")
    if p == 2 and s != 1:
        raise BadPrime("p = 2 is only allowed with s = 1")
    if s < 1:
        raise BadParams("s must be >= 1")


def _ks_presentation(p: int, s: int) -> Presentation:
    d = p ** (s - 1) * (p - 1)
    e = e_vector(p, s)
    a = [Word.gen(i) for i in range(d)]
    t = Word.gen(d)
    ti = t.inverse()
    rels = [t ** (p ** s), ti * a[0] * t * a[d - 1]]
    for i in range(1, d):
        rhs = a[i - 1] * a[d - 1] ** (-e[i])
        rels.append(ti * a[i] * t * rhs.inverse())
    for i in range(d):
        for j in range(i):
            rels.append(comm(a[i], a[j]))
    names = tuple(f"a{i + 1}" for i in range(d)) + ("t",)
    return Presentation(names, tuple(rels), f"K{s}_p{p}")


def coclass_ks(p: int, s: int) -> FamilySpec:
    """K_s = C_{p^s} x| Z_p^{d_s}; the a-generators are Z_p-coefficient slots."""
    _check_prime(p, s)
    d = p ** (s - 1) * (p - 1)
    pres = _ks_presentation(p, s)
    schur_rank = 0 if (p == 2 and s == 1) else d // 2
    return FamilySpec(
        Family.KS,
        {"p": p, "s": s},
        pres,
        h_claimed=d,
        abelianization_claimed=AbelianGroup.from_cyclic([p ** s, p ** s]),
        extra={
            "d": d,
            "e_vector": e_vector(p, s),
            "zp_generators": list(pres.gens[:d]),
            "schur_rank_claimed": schur_rank,
            "schur_exception": "M(K_s) = 1 when p = 2 and s = 1",
        },
    )


def ks_quotient(p: int, s: int, k: int) -> Presentation:
    """K_s with Z_p replaced by Z/p^k; order p^(s + k d_s)."""
    _check_prime(p, s)
    if k < 1:
        raise BadParams("k must be >= 1")
    pres = _ks_presentation(p, s)
    d = pres.ngens - 1
    rels = pres.relators + tuple(Word.gen(i, p ** k) for i in range(d))
    return Presentation(pres.gens, rels, f"K{s}_p{p}_mod{p}e{k}")


def ks_quotient_order(p: int, s: int, k: int) -> int:
    d = p ** (s - 1) * (p - 1)
    return p ** (s + k * d)


def _b1_2() -> Presentation:
    a, x, y = (Word.gen(i) for i in range(3))
    rels = (a * a * y.inverse(), a * x * a.inverse() * x, comm(a, y), comm(x, y))
    return Presentation(("a", "x", "y"), rels, "B1_2")


def bieberbach_b1(n: int) -> FamilySpec:
    """B_1(2) for n = 2, otherwise B_1(2) x Z^(n-2)."""
    if n < 2:
        raise BadParams("B_1(n) needs n >= 2")
    pres = _b1_2()
    if n > 2:
        pres = direct_product(pres, free_abelian(n - 2), name=f"B1_{n}")
    return FamilySpec(
        Family.B1,
        {"n": n},
        pres,
        h_claimed=n,
        extra={"h_subtracted_in_claim": n - 2, "schur_rank_claimed": n - 2},
    )


def b1_quotient(n: int, m: int) -> Presentation:
    """B_1(n) with every lattice generator raised to the m-th power; order 2 m^n."""
    pres = bieberbach_b1(n).presentation
    lattice = [i for i, g in enumerate(pres.gens) if g != "a"]
    rels = pres.relators + tuple(Word.gen(i, m) for i in lattice)
    return Presentation(pres.gens, rels, f"B1_{n}_mod{m}")


def b1_quotient_order(n: int, m: int) -> int:
    return 2 * m ** n


# h(G_p (x) G_p) values listed for the crystallographic groups
GN_TENSOR_HIRSCH = {2: 1, 3: 3, 5: 6, 7: 9}


@dataclass(frozen=True)
class PredictedStructure:
    """A claimed tensor-square structure, exactly as stated (no normalization).

    ``torsion`` is None when only ranks are claimed.  ``padic_rank`` counts
    Z_p factors (prime in ``prime``), ``free_rank`` counts Z factors.
    """

    torsion: AbelianGroup | None
    free_rank: int = 0
    padic_rank: int = 0
    prime: int | None = None
    source: str = ""
    f_bound: int | None = None
    f_equality_stated: int | None = None

    @property
    def hirsch(self) -> int:
        return self.free_rank + self.padic_rank

    def __str__(self):
        parts = []
        if self.torsion is not None and self.torsion.invariants:
            parts.append(str(self.torsion))
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        if self.padic_rank:
            parts.append(f"Z_{self.prime}^{self.padic_rank}")
        return " x ".join(parts) or "1"

    def to_json(self) -> dict:
        return {
            "torsion": self.torsion.to_json() if self.torsion is not None else None,
            "free_rank": self.free_rank,
            "padic_rank": self.padic_rank,
            "prime": self.prime,
            "source": self.source,
            "f_bound": self.f_bound,
            "f_equality_stated": self.f_equality_stated,
            "text": str(self),
        }


def predict(family, params: dict) -> PredictedStructure:
    """Evaluate the closed-form tensor-square structure claimed for a family."""
    family = "KS" if family == "KP" else family
    try:
        family = Family(family)
    except ValueError:
        raise UnsupportedFamily(f"no claimed structure for family {family!r}") from None
    if family is Family.KS:
        p, s = params["p"], params.get("s", 1)
        _check_prime(p, s)
        d = p ** (s - 1) * (p - 1)
        if s == 1:
            return PredictedStructure(
                AbelianGroup.from_cyclic([p, p, p * p]),
                padic_rank=(p - 1) + (p - 1) // 2,
                prime=p,
                source="K_p (x) K_p = C_p^2 x C_{p^2} x Z_p^{p-1} x Z_p^{(p-1)/2}",
            )
        return PredictedStructure(
            AbelianGroup.from_cyclic([p ** s, p ** s, p ** (2 * s)]),
            padic_rank=3 * d // 2,
            prime=p,
            source="K_s (x) K_s = C_{p^s}^2 x C_{p^{2s}} x Z_p^{3 d_s / 2}",
        )
    if family is Family.B1:
        n = params["n"]
        if n < 2:
            raise BadParams("B_1(n) needs n >= 2")
        if n == 2:
            return PredictedStructure(
                AbelianGroup.from_cyclic([2, 4]), free_rank=2,
                source="B_1(2) (x) B_1(2) = C_2 x C_4 x Z^2",
            )
        return PredictedStructure(
            AbelianGroup.from_cyclic([2] * (2 * n - 3) + [4]),
            free_rank=(n - 1) ** 2 + 1,
            source="B_1(n) (x) B_1(n) = C_2^{2n-3} x C_4 x Z^{(n-1)^2+1}",
        )
    if family is Family.GN:
        n = params["n"]
        if n not in GN_TENSOR_HIRSCH:
            raise UnsupportedFamily(f"no claimed value of h(G_n (x) G_n) for n = {n}")
        return PredictedStructure(
            None, free_rank=GN_TENSOR_HIRSCH[n], source="listed h(G_n (x) G_n) values"
        )
    r = params["r"]
    if r < 1:
        raise BadParams("rank r must be >= 1")
    pred = PredictedStructure(
        None,
        free_rank=r * (r + 1) // 2,
        f_bound=r * (r - 1) // 2,
        source="G (x) G = Z^{r(r+1)/2} x (periodic part)",
    )
    if family is Family.FREE_NILPOTENT:
        # the nilpotent statement gives r(r+1)/2 as its equality value
        return PredictedStructure(
            None, free_rank=pred.free_rank, f_bound=pred.f_bound,
            f_equality_stated=r * (r + 1) // 2, source=pred.source,
        )
    return PredictedStructure(
        None, free_rank=pred.free_rank, f_bound=pred.f_bound,
        f_equality_stated=r * (r - 1) // 2, source=pred.source,
    )
