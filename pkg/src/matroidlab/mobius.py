"""Graded Möbius algebra of a matroid.

Basis ``y_F`` indexed by flats, ``deg y_F = rank F``, and
``y_F * y_G = y_(F v G)`` when the ranks add, zero otherwise.  Coefficients
are exact rationals; flat indices follow the lattice's sorted order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BadRanks, DimensionMismatch, WeightNotPositive
from .exactlin import QQ, ExactMatrix, format_rational, parse_rational
from .matroid import Flat, FlatLattice, Matroid


@dataclass(frozen=True)
class GradedElement:
    degree: int
    coeffs: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "GradedElement") -> "GradedElement":
        if self.degree != other.degree:
            raise DimensionMismatch("adding elements of different degrees")
        return GradedElement(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "GradedElement":
        c = parse_rational(c)
        return GradedElement(self.degree, tuple(c * a for a in self.coeffs))


class OmegaWeights:
    """Positive rational weight per rank-one flat."""

    def __init__(self, weights: Sequence):
        self.c = tuple(parse_rational(w) for w in weights)
        bad = [w for w in self.c if w <= 0]
        if bad:
            raise WeightNotPositive(f"omega weights must be positive, got {format_rational(bad[0])}")

    @classmethod
    def unit(cls, count: int) -> "OmegaWeights":
        return cls([1] * count)

    @property
    def is_unit(self) -> bool:
        return all(w == 1 for w in self.c)

    def __len__(self):
        return len(self.c)


class MobiusAlgebra:
    def __init__(self, matroid: Matroid):
        self.matroid = matroid
        self.lattice: FlatLattice = matroid.flats()
        self.rank = matroid.rank_total
        self._joins: dict[tuple[int, int], Flat] = {}
        self._steps: dict[tuple[int, tuple], ExactMatrix] = {}

    def dims(self) -> list[int]:
        return self.lattice.whitney()

    def dim(self, r: int) -> int:
        return len(self.lattice.flats_by_rank[r]) if 0 <= r <= self.rank else 0

    def flats(self, r: int) -> tuple[Flat, ...]:
        return self.lattice.flats_by_rank[r] if 0 <= r <= self.rank else ()

    def join(self, F: Flat, G: Flat) -> Flat:
        key = (F.members, G.members) if F.members <= G.members else (G.members, F.members)
        J = self._joins.get(key)
        if J is None:
            J = self.matroid.join(F, G)
            self._joins[key] = J
        return J

    def zero(self, degree: int) -> GradedElement:
        return GradedElement(degree, (Fraction(0),) * self.dim(degree))

    def basis_element(self, F: Flat) -> GradedElement:
        coeffs = [Fraction(0)] * self.dim(F.rank)
        coeffs[self.lattice.index(F)] = Fraction(1)
        return GradedElement(F.rank, tuple(coeffs))

    def identity(self) -> GradedElement:
        return self.basis_element(self.flats(0)[0])

    def element(self, degree: int, coeffs: Sequence) -> GradedElement:
        if len(coeffs) != self.dim(degree):
            raise DimensionMismatch(f"degree {degree} needs {self.dim(degree)} coefficients")
        return GradedElement(degree, tuple(parse_rational(c) for c in coeffs))

    def multiply_basis(self, F: Flat, G: Flat) -> GradedElement:
        degree = F.rank + G.rank
        out = self.zero(degree)
        if degree > self.rank:
            return out
        J = self.join(F, G)
        if J.rank != degree:
            return out
        return self.basis_element(J)

    def multiply(self, u: GradedElement, v: GradedElement) -> GradedElement:
        degree = u.degree + v.degree
        acc = [Fraction(0)] * self.dim(degree)
        if degree > self.rank:
            return GradedElement(degree, ())
        Fu, Fv = self.flats(u.degree), self.flats(v.degree)
        for a, cu in zip(Fu, u.coeffs):
            if cu == 0:
                continue
            for b, cv in zip(Fv, v.coeffs):
                if cv == 0:
                    continue
                J = self.join(a, b)
                if J.rank == degree:
                    acc[self.lattice.index(J)] += cu * cv
        return GradedElement(degree, tuple(acc))

    def _weights(self, w: OmegaWeights | None) -> OmegaWeights:
        if w is None:
            return OmegaWeights.unit(self.dim(1))
        if len(w) != self.dim(1):
            raise DimensionMismatch(f"need {self.dim(1)} weights, one per rank-1 flat")
        return w

    def omega(self, w: OmegaWeights | None = None) -> GradedElement:
        w = self._weights(w)
        return GradedElement(1, w.c)

    def omega_step_matrix(self, r: int, w: OmegaWeights | None = None) -> ExactMatrix:
        """Multiplication by omega from degree ``r`` to ``r + 1``.

        Entry (G, F) is the total weight of atoms ``a`` with ``F v a = G``.
        """
        w = self._weights(w)
        key = (r, w.c)
        cached = self._steps.get(key)
        if cached is not None:
            return cached
        src, dst = self.flats(r), self.flats(r + 1)
        rows = [[Fraction(0)] * len(src) for _ in dst]
        for j, F in enumerate(src):
            for a, c in zip(self.flats(1), w.c):
                if a.members & F.members:
                    continue
                G = self.join(F, a)
                rows[self.lattice.index(G)][j] += c
        M = ExactMatrix._trusted(QQ, rows, len(src))
        self._steps[key] = M
        return M

    def omega_power_matrix(self, r: int, r_prime: int, w: OmegaWeights | None = None) -> ExactMatrix:
        """Matrix of omega**(r' - r): degree r -> degree r'; rows index rank-r' flats."""
        if not 0 <= r <= r_prime <= self.rank:
            raise BadRanks(f"need 0 <= r <= r' <= {self.rank}, got r={r}, r'={r_prime}")
        A = ExactMatrix.identity(QQ, self.dim(r))
        for k in range(r, r_prime):
            A = self.omega_step_matrix(k, w) @ A
        return A

    def matrix_dump(self, r: int, r_prime: int, w: OmegaWeights | None = None) -> dict:
        A = self.omega_power_matrix(r, r_prime, w)
        return {
            "r": r,
            "r_prime": r_prime,
            "rows": list(range(self.dim(r_prime))),
            "cols": list(range(self.dim(r))),
            "entries": [[format_rational(x) for x in row] for row in A.rows],
        }


def build(M: Matroid) -> MobiusAlgebra:
    return MobiusAlgebra(M)
