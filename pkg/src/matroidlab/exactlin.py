"""Exact linear algebra over the rationals and prime fields.

Rationals are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator), prime-field elements are plain ``int`` residues in
``[0, p)``.  Nothing in here ever touches floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotSquare, SchemaError, TooLarge, ZeroInverse

__all__ = [
    "FieldSpec",
    "QQ",
    "GF",
    "ExactMatrix",
    "RrefResult",
    "SolutionSet",
    "Permutation",
    "field_inverse",
    "rref",
    "rank",
    "solve",
    "kernel_basis",
    "det_permutation_sum",
    "det_elimination",
    "permutation_sign",
    "parse_rational",
    "format_rational",
]

MAX_PERMUTATION_DET = 10


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _egcd_inverse(a: int, p: int) -> int:
    old_r, r = a, p
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    # old_r == gcd(a, p) == 1 for prime p and a != 0
    return old_s % p


def parse_rational(x) -> Fraction:
    """Parse an int, Fraction or "num/den" string into a Fraction.

    Floats are rejected outright; they cannot represent most rationals.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not field elements")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        try:
            if "/" in s:
                num, den = s.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational: {x!r}") from exc
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(x):
    """JSON form of a rational: an int when integral, else "num/den"."""
    if isinstance(x, int):
        return x
    if x.denominator == 1:
        return x.numerator
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p is None``) or the prime field of order ``p``."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not 2 <= self.p < 2**31 or not _is_prime(self.p):
                raise ValueError(f"field order must be a prime below 2^31, got {self.p!r}")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def __str__(self):
        return "Q" if self.p is None else f"GF({self.p})"

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def coerce(self, x):
        if self.p is None:
            return parse_rational(x)
        if isinstance(x, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(x, int):
            return x % self.p
        q = parse_rational(x)
        den = q.denominator % self.p
        if den == 0:
            raise ZeroInverse(f"denominator of {x!r} vanishes in {self}")
        return (q.numerator * _egcd_inverse(den, self.p)) % self.p

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        return field_inverse(a, self)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def to_json(self):
        return "Q" if self.p is None else {"p": self.p}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if obj == "Q":
            return QQ
        if isinstance(obj, dict) and set(obj) == {"p"}:
            return cls(int(obj["p"]))
        raise SchemaError(f"bad field spec: {obj!r}")


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def field_inverse(a, field: FieldSpec):
    """Multiplicative inverse of ``a`` (extended Euclid in the prime case)."""
    if a == 0:
        raise ZeroInverse(f"0 has no inverse in {field}")
    if field.p is None:
        return 1 / parse_rational(a)
    return _egcd_inverse(a % field.p, field.p)


class ExactMatrix:
    """Dense immutable matrix over a :class:`FieldSpec`.

    Entries are canonicalised on construction, so ``==`` is structural.
    """

    __slots__ = ("field", "nrows", "ncols", "_rows")

    def __init__(self, field: FieldSpec, rows: Iterable[Iterable], ncols: int | None = None):
        coerced = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(coerced[0]) if coerced else 0
        if any(len(r) != ncols for r in coerced):
            raise DimensionMismatch("ragged matrix rows")
        self.field = field
        self.nrows = len(coerced)
        self.ncols = ncols
        self._rows = coerced

    @classmethod
    def _trusted(cls, field, rows, ncols):
        m = object.__new__(cls)
        m.field = field
        m._rows = tuple(tuple(r) for r in rows)
        m.nrows = len(m._rows)
        m.ncols = ncols
        return m

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        z, o = field.zero, field.one
        return cls._trusted(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "ExactMatrix":
        z = field.zero
        return cls._trusted(field, [[z] * ncols for _ in range(nrows)], ncols)

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field, self.ncols, self._rows) == (other.field, other.ncols, other._rows)

    def __hash__(self):
        return hash((self.field, self.ncols, self._rows))

    def __repr__(self):
        body = [[format_rational(x) for x in r] for r in self._rows]
        return f"ExactMatrix({self.field}, {body})"

    def transpose(self) -> "ExactMatrix":
        cols = [tuple(r[j] for r in self._rows) for j in range(self.ncols)]
        return ExactMatrix._trusted(self.field, cols, self.nrows)

    def select_rows(self, indices: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix._trusted(self.field, [self._rows[i] for i in indices], self.ncols)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def apply(self, vector: Sequence) -> tuple:
        """Matrix-vector product."""
        if len(vector) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(vector)} for {self.ncols} columns")
        v = [self.field.coerce(x) for x in vector]
        out = []
        for r in self._rows:
            s = sum(a * b for a, b in zip(r, v) if a and b)
            out.append(self.field.coerce(s) if self.field.p is not None else Fraction(s))
        return tuple(out)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.field != other.field:
            raise DimensionMismatch("matrices over different fields")
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        # sparse-friendly: skip zero entries of the left factor
        ocols = other.ncols
        orows = other._rows
        p = self.field.p
        out = []
        for r in self._rows:
            acc = [0] * ocols
            for k, a in enumerate(r):
                if a:
                    ok = orows[k]
                    for j in range(ocols):
                        b = ok[j]
                        if b:
                            acc[j] += a * b
            if p is None:
                out.append([Fraction(x) for x in acc])
            else:
                out.append([x % p for x in acc])
        return ExactMatrix._trusted(self.field, out, ocols)

    def to_json(self) -> dict:
        obj = {
            "field": self.field.to_json(),
            "rows": [[format_rational(x) for x in r] for r in self._rows],
        }
        if self.nrows == 0:
            obj["cols"] = self.ncols
        return obj

    @classmethod
    def from_json(cls, obj) -> "ExactMatrix":
        if not isinstance(obj, dict) or "field" not in obj or "rows" not in obj:
            raise SchemaError("matrix JSON needs 'field' and 'rows'")
        field = FieldSpec.from_json(obj["field"])
        rows = obj["rows"]
        if field.p is not None:
            for r in rows:
                for x in r:
                    if not isinstance(x, int) or not 0 <= x < field.p:
                        raise SchemaError(f"GF({field.p}) entries must be integers in [0, p), got {x!r}")
        return cls(field, rows, obj.get("cols"))


@dataclass(frozen=True)
class RrefResult:
    reduced: ExactMatrix
    rank: int
    pivot_cols: tuple[int, ...]


@dataclass(frozen=True)
class SolutionSet:
    """One particular solution plus a basis of the kernel."""

    particular: tuple
    kernel: tuple[tuple, ...]


def _gauss_jordan(field: FieldSpec, rows: list[list], ncols: int, pivot_limit: int | None = None):
    """In-place reduction of ``rows``; returns pivot columns.

    Pivots are searched only in columns ``< pivot_limit`` (used for
    augmented systems).
    """
    limit = ncols if pivot_limit is None else pivot_limit
    p = field.p
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(limit):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field_inverse(rows[r][c], field)
        if p is None:
            rows[r] = [x * inv for x in rows[r]]
        else:
            rows[r] = [(x * inv) % p for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    if p is None:
                        rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
                    else:
                        rows[i] = [(x - f * y) % p for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return pivots


def rref(A: ExactMatrix) -> RrefResult:
    """Reduced row-echelon form; first nonzero entry of each column is the pivot."""
    rows = [list(r) for r in A.rows]
    pivots = _gauss_jordan(A.field, rows, A.ncols)
    reduced = ExactMatrix._trusted(A.field, rows, A.ncols)
    return RrefResult(reduced, len(pivots), tuple(pivots))


def _integer_rows(A: ExactMatrix) -> list[list[int]]:
    out = []
    for r in A.rows:
        scale = math.lcm(*(x.denominator for x in r)) if r else 1
        out.append([x.numerator * (scale // x.denominator) for x in r])
    return out


def _rank_integer(rows: list[list[int]], ncols: int) -> int:
    rows = [r for r in rows if any(r)]
    rk = 0
    n = len(rows)
    for c in range(ncols):
        if rk == n:
            break
        piv = next((i for i in range(rk, n) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        pr = rows[rk]
        a = pr[c]
        for i in range(rk + 1, n):
            b = rows[i][c]
            if b:
                new = [a * x - b * y for x, y in zip(rows[i], pr)]
                g = math.gcd(*new)
                if g > 1:
                    new = [x // g for x in new]
                rows[i] = new
        rk += 1
    return rk


def _rank_mod_p(rows: list[list[int]], ncols: int, p: int) -> int:
    rk = 0
    n = len(rows)
    for c in range(ncols):
        if rk == n:
            break
        piv = next((i for i in range(rk, n) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = _egcd_inverse(rows[rk][c], p)
        pr = [(x * inv) % p for x in rows[rk]]
        rows[rk] = pr
        for i in range(rk + 1, n):
            f = rows[i][c]
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], pr)]
        rk += 1
    return rk


def rank(A: ExactMatrix) -> int:
    """Rank of ``A`` (number of RREF pivots), via fraction-free elimination over Q."""
    if A.nrows == 0 or A.ncols == 0:
        return 0
    if A.field.p is None:
        return _rank_integer(_integer_rows(A), A.ncols)
    return _rank_mod_p([list(r) for r in A.rows], A.ncols, A.field.p)


def kernel_basis(A: ExactMatrix) -> list[tuple]:
    """Basis of ``{v : A v = 0}``, one vector per free column of the RREF."""
    res = rref(A)
    field = A.field
    pivset = set(res.pivot_cols)
    basis = []
    for f in range(A.ncols):
        if f in pivset:
            continue
        v = [field.zero] * A.ncols
        v[f] = field.one
        for i, pc in enumerate(res.pivot_cols):
            v[pc] = field.neg(res.reduced[i, f])
        basis.append(tuple(v))
    return basis


def solve(A: ExactMatrix, c: Sequence) -> SolutionSet | None:
    """Solve ``A x = c``; ``None`` when the system is inconsistent."""
    if len(c) != A.nrows:
        raise DimensionMismatch(f"right-hand side of length {len(c)} for {A.nrows} rows")
    field = A.field
    rows = [list(r) + [field.coerce(ci)] for r, ci in zip(A.rows, c)]
    pivots = _gauss_jordan(field, rows, A.ncols + 1, pivot_limit=A.ncols)
    for i in range(len(pivots), A.nrows):
        if rows[i][A.ncols] != 0:
            return None
    x = [field.zero] * A.ncols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][A.ncols]
    return SolutionSet(tuple(x), tuple(kernel_basis(A)))


@dataclass(frozen=True)
class Permutation:
    """``images[i]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: apply ``other`` first."""
        if len(other) != len(self):
            raise DimensionMismatch("permutations of different sizes")
        return Permutation(tuple(self.images[j] for j in other.images))

    def inversions(self) -> int:
        s = self.images
        return sum(1 for i, j in itertools.combinations(range(len(s)), 2) if s[i] > s[j])


def permutation_sign(sigma) -> int:
    if not isinstance(sigma, Permutation):
        sigma = Permutation(tuple(sigma))
    return -1 if sigma.inversions() % 2 else 1


def _require_square(A: ExactMatrix):
    if A.nrows != A.ncols:
        raise NotSquare(f"determinant of a {A.nrows}x{A.ncols} matrix")


def det_permutation_sum(A: ExactMatrix):
    """Leibniz expansion: sum over all permutations of signed diagonal products."""
    _require_square(A)
    n = A.nrows
    if n > MAX_PERMUTATION_DET:
        raise TooLarge(f"permutation-sum determinant limited to N <= {MAX_PERMUTATION_DET}")
    rows = A.rows
    total = 0
    for images in itertools.permutations(range(n)):
        prod = 1
        for i, j in enumerate(images):
            a = rows[i][j]
            if a == 0:
                prod = 0
                break
            prod *= a
        if prod:
            total += permutation_sign(images) * prod
    return A.field.coerce(total) if A.field.p is not None else Fraction(total)


def _bareiss(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        mkk = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * mkk - mik * row_k[j]) // prev
        prev = mkk
    return sign * M[n - 1][n - 1]


def det_elimination(A: ExactMatrix):
    """Determinant by elimination (Bareiss over Q, Gaussian over GF(p))."""
    _require_square(A)
    n = A.nrows
    if A.field.p is None:
        scales = 1
        rows = []
        for r in A.rows:
            s = math.lcm(*(x.denominator for x in r)) if r else 1
            scales *= s
            rows.append([x.numerator * (s // x.denominator) for x in r])
        return Fraction(_bareiss(rows), scales)
    p = A.field.p
    M = [list(r) for r in A.rows]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        det = (det * M[k][k]) % p
        inv = _egcd_inverse(M[k][k], p)
        for i in range(k + 1, n):
            f = (M[i][k] * inv) % p
            if f:
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[k])]
    return det % p
