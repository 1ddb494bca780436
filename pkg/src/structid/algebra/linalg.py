"""Dense linear algebra over a prime field (or the rationals)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .field import P


def rref(rows: Sequence[Sequence[int]], modulus: int | None = P) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns.

    ``modulus=None`` switches to exact rational arithmetic.
    """
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        row = M[r]
        if modulus is None:
            inv = 1 / Fraction(row[c])
            row = [x * inv for x in row]
        else:
            inv = pow(row[c], -1, modulus)
            row = [(x * inv) % modulus for x in row]
        M[r] = row
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                if modulus is None:
                    M[i] = [x - f * y for x, y in zip(M[i], row)]
                else:
                    M[i] = [(x - f * y) % modulus for x, y in zip(M[i], row)]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(M: Sequence[Sequence[int]], modulus: int | None = P) -> int:
    """Rank by forward elimination; ``modulus=None`` means exact rationals."""
    rows = [list(r) for r in M if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        if modulus is None:
            inv = 1 / Fraction(pr[c])
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    f = rows[i][c] * inv
                    rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        else:
            inv = pow(pr[c], -1, modulus)
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    f = (rows[i][c] * inv) % modulus
                    rows[i] = [(x - f * y) % modulus for x, y in zip(rows[i], pr)]
        r += 1
        if r == len(rows):
            break
    return r


def kernel_basis(M: Sequence[Sequence[int]], ncols: int | None = None,
                 modulus: int | None = P) -> list[list]:
    """Basis of ``{v : M v = 0}``, one vector per free column of the RREF."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R, pivots = rref(M, modulus) if M else ([], [])
    one = 1 if modulus is not None else Fraction(1)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[free] = one
        for row, pc in zip(R, pivots):
            v[pc] = (-row[free]) % modulus if modulus is not None else -row[free]
        basis.append(v)
    return basis


def matvec(M: Sequence[Sequence[int]], v: Sequence[int], modulus: int = P) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) % modulus for row in M]


class IncrementalRank:
    """Rank of a growing set of vectors; ``add`` reports whether it grew."""

    def __init__(self, modulus: int = P):
        self.modulus = modulus
        self._rows: dict[int, list[int]] = {}  # pivot column -> normalized row

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence[int]) -> list[int]:
        p = self.modulus
        v = [x % p for x in v]
        for c, row in self._rows.items():
            f = v[c]
            if f:
                v = [(x - f * y) % p for x, y in zip(v, row)]
        return v

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def add(self, v: Sequence[int]) -> bool:
        p = self.modulus
        v = self.reduce(v)
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = pow(v[c], -1, p)
        v = [(x * inv) % p for x in v]
        # keep stored rows reduced against the new pivot
        for k, row in self._rows.items():
            f = row[c]
            if f:
                self._rows[k] = [(x - f * y) % p for x, y in zip(row, v)]
        self._rows[c] = v
        return True
