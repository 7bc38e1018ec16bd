"""
Exact integer matrices, Smith normal form, and finitely generated abelian
groups in invariant-factor form.

All arithmetic is on Python ints, so there is no overflow anywhere.  An
invariant factor of 0 stands for an infinite cyclic factor Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

INFINITE = math.inf


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must be rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count needed for an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        a, b = self.to_rows(), other.to_rows()
        out = [
            [sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntMatrix.from_rows(out, other.cols)

    def transpose(self) -> "IntMatrix":
        r = self.to_rows()
        return IntMatrix.from_rows([[r[i][j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    def det(self) -> int:
        """Fraction-free (Bareiss) determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]


def smith_normal_form(m: IntMatrix):
    """Return ``(U, S, V)`` with ``U @ m @ V == S``.

    U and V are unimodular, S is diagonal with nonnegative entries
    d1 | d2 | ... and zeros last.
    """
    nr, nc = m.rows, m.cols
    a = m.to_rows()
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        if q:
            ra, rs = a[dst], a[src]
            for k in range(nc):
                ra[k] += q * rs[k]
            ua, us = u[dst], u[src]
            for k in range(nr):
                ua[k] += q * us[k]

    def add_col(dst, src, q):
        if q:
            for row in a:
                row[dst] += q * row[src]
            for row in v:
                row[dst] += q * row[src]

    for t in range(min(nr, nc)):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        clean = False
            if not clean:
                best = (abs(p), t, t)
                for i in range(t + 1, nr):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, nc):
                    if a[t][j] and abs(a[t][j]) < best[0]:
                        best = (abs(a[t][j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return (
        IntMatrix.from_rows(u, nr),
        IntMatrix.from_rows(a, nc),
        IntMatrix.from_rows(v, nc),
    )


@dataclass(frozen=True, order=True)
class AbelianGroup:
    """Invariant factors d1 | d2 | ... | dk, each >= 2 or 0 (= Z)."""

    invariants: tuple[int, ...] = ()

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants)
        object.__setattr__(self, "invariants", inv)
        for d in inv:
            if d == 1 or d < 0:
                raise ValueError(f"bad invariant factor {d}")
        for x, y in zip(inv, inv[1:]):
            if y == 0:
                continue
            if x == 0 or y % x:
                raise ValueError(f"invariant factors {inv} do not form a divisibility chain")

    @classmethod
    def from_cyclic(cls, orders: Iterable[int]) -> "AbelianGroup":
        """Normal form of a direct sum of cyclic groups C_n (n=0 for Z)."""
        orders = [abs(int(n)) for n in orders if abs(int(n)) != 1]
        return abelian_from_matrix(IntMatrix.diag(orders)) if orders else cls()

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """Inverse of ``str``: ``"C2 x C4 x Z^3"``, ``"Z"``, ``"1"``."""
        text = text.strip()
        if text in ("1", ""):
            return cls()
        orders = []
        for part in text.split("x"):
            part = part.strip()
            base, _, power = part.partition("^")
            reps = int(power) if power else 1
            n = 0 if base == "Z" else int(base[1:])
            orders += [n] * reps
        return cls.from_cyclic(orders)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariants if d == 0)

    @property
    def order(self):
        return order_ab(self)

    def __str__(self):
        parts = [f"C{d}" for d in self.torsion]
        r = self.rank
        if r == 1:
            parts.append("Z")
        elif r > 1:
            parts.append(f"Z^{r}")
        return " x ".join(parts) if parts else "1"

    def to_json(self) -> dict:
        return {"torsion": list(self.torsion), "rank": self.rank}

    @classmethod
    def from_json(cls, data: dict) -> "AbelianGroup":
        return cls.from_cyclic(list(data["torsion"]) + [0] * data["rank"])


def abelian_from_matrix(m: IntMatrix) -> AbelianGroup:
    """Cokernel of ``m`` (rows are relations on ``m.cols`` generators)."""
    _, s, _ = smith_normal_form(m)
    diag = s.diagonal()
    factors = [d for d in diag if d != 1 and d != 0]
    zeros = sum(1 for d in diag if d == 0) + (m.cols - len(diag))
    return AbelianGroup(tuple(factors) + (0,) * zeros)


def direct_sum(*groups: AbelianGroup) -> AbelianGroup:
    return AbelianGroup.from_cyclic([d for g in groups for d in g.invariants])


def tensor_ab(a: AbelianGroup, b: AbelianGroup) -> AbelianGroup:
    """A (x)_Z B via C_m (x) C_n = C_gcd(m,n); gcd with 0 covers the Z cases."""
    return AbelianGroup.from_cyclic(
        [math.gcd(m, n) for m in a.invariants for n in b.invariants]
    )


def _gamma_cyclic(d: int) -> int:
    if d == 0:
        return 0
    return d if d % 2 else 2 * d


def gamma_whitehead(a: AbelianGroup) -> AbelianGroup:
    """Whitehead's quadratic functor.

    Gamma(Z) = Z, Gamma(C_n) = C_n (n odd) or C_2n (n even), and
    Gamma(A + B) = Gamma(A) + Gamma(B) + A (x) B.
    """
    inv = a.invariants
    orders = [_gamma_cyclic(d) for d in inv]
    orders += [math.gcd(inv[i], inv[j]) for i in range(len(inv)) for j in range(i + 1, len(inv))]
    return AbelianGroup.from_cyclic(orders)


def hirsch(a: AbelianGroup) -> int:
    return a.rank


def order_ab(a: AbelianGroup):
    if a.rank:
        return INFINITE
    return reduce(lambda x, y: x * y, a.invariants, 1)


def has_two_torsion(a: AbelianGroup) -> bool:
    return any(d % 2 == 0 for d in a.torsion)


def p_part(n: int, p: int) -> int:
    """Exponent of the prime p in the positive integer n."""
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _echelon(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Integer row echelon form (a Z-basis of the row lattice)."""
    rows = [list(r) for r in rows if any(r)]
    basis = []
    col = 0
    while rows and col < ncols:
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        rest = [r for r in rows if not r[col]]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = rest
        col += 1
    return basis


def subgroup_of_cokernel(relations, generators, ncols: int) -> AbelianGroup:
    """Structure of the subgroup of Z^n / <relations> generated by ``generators``.

    Computed as (L + N) / L for the lattices L, N spanned by the two row
    sets.
    """
    basis = _echelon(list(relations) + list(generators), ncols)
    pivots = [next(j for j, x in enumerate(b) if x) for b in basis]
    coords = []
    for rel in relations:
        rel = list(rel)
        c = []
        for b, pc in zip(basis, pivots):
            q, r = divmod(rel[pc], b[pc])
            if r:
                raise ArithmeticError("relation outside its own lattice")
            c.append(q)
            rel = [x - q * y for x, y in zip(rel, b)]
        if any(rel):
            raise ArithmeticError("relation outside its own lattice")
        coords.append(c)
    return abelian_from_matrix(IntMatrix.from_rows(coords, len(basis)))


def cokernel(relations, ncols: int) -> AbelianGroup:
    return abelian_from_matrix(IntMatrix.from_rows(list(relations), ncols))
