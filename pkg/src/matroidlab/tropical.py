"""Max-plus evaluation and tropical linear spaces of matroids.

Finite tropical values are exact :class:`~fractions.Fraction` objects and
minus infinity is the singleton :data:`NEG_INF`, so ties are decided
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionMismatch, SchemaError
from .exactlin import format_rational, parse_rational
from .matroid import Matroid, elements_of, to_mask


class _NegInf:
    """Minus infinity: below every rational, absorbing under tropical products."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()


def trop_value(x):
    """Coerce "-inf", a "num/den" string, an int or a Fraction."""
    if x is NEG_INF:
        return x
    if isinstance(x, str) and x.strip().lower() in ("-inf", "-infinity"):
        return NEG_INF
    return parse_rational(x)


def format_trop(x):
    return "-inf" if x is NEG_INF else format_rational(x)


def _tmul(a, b):
    """Tropical product = ordinary sum, with -inf absorbing."""
    if a is NEG_INF or b is NEG_INF:
        return NEG_INF
    return a + b


@dataclass(frozen=True)
class TropPolynomial:
    n: int
    terms: Mapping[tuple[int, ...], object]

    def __post_init__(self):
        terms = {}
        for beta, val in dict(self.terms).items():
            beta = tuple(int(b) for b in beta)
            if len(beta) != self.n:
                raise DimensionMismatch(f"exponent {beta} has length != {self.n}")
            if beta in terms:
                raise SchemaError(f"repeated exponent {beta}")
            terms[beta] = trop_value(val)
        if not terms:
            raise SchemaError("a tropical polynomial needs at least one term")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def hyperplane(cls, n: int, support: Sequence[int], with_constant: bool = False) -> "TropPolynomial":
        """max over xi_i for i in ``support`` (plus the constant 0 if asked)."""
        terms = {}
        if with_constant:
            terms[(0,) * n] = Fraction(0)
        for i in support:
            terms[tuple(1 if k == i else 0 for k in range(n))] = Fraction(0)
        return cls(n, terms)

    @classmethod
    def from_json(cls, obj) -> "TropPolynomial":
        try:
            n = int(obj["n"])
            terms = {}
            for t in obj["terms"]:
                beta = tuple(t["beta"])
                if beta in terms:
                    raise SchemaError(f"repeated exponent {list(beta)}")
                terms[beta] = t["val"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad polynomial JSON: {exc}") from exc
        return cls(n, terms)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"beta": list(b), "val": format_trop(v)} for b, v in self.terms.items()],
        }


def parse_point(obj) -> tuple:
    coords = obj["coords"] if isinstance(obj, dict) else obj
    return tuple(trop_value(c) for c in coords)


def _term_value(beta, val, xi):
    total = val
    for b, x in zip(beta, xi):
        if b == 0:
            continue
        if x is NEG_INF:
            if b < 0:
                raise ValueError("negative exponent at a -inf coordinate is undefined")
            return NEG_INF
        total = _tmul(total, b * x)
    return total


def trop_eval(p: TropPolynomial, xi: Sequence) -> tuple[object, int]:
    """Return (max_beta <beta, xi> + val_beta, number of terms attaining it).

    Terms evaluating to -inf only count as attaining when every term does.
    """
    xi = tuple(trop_value(x) for x in xi)
    if len(xi) != p.n:
        raise DimensionMismatch(f"point of dimension {len(xi)} for a polynomial in {p.n} variables")
    values = [_term_value(beta, val, xi) for beta, val in p.terms.items()]
    best = max(values)
    return best, sum(1 for v in values if v == best)


def vanishes(p: TropPolynomial, xi: Sequence) -> bool:
    """True when the max is attained at least twice, or every term is -inf."""
    value, count = trop_eval(p, xi)
    return count >= 2 or value is NEG_INF


@dataclass(frozen=True)
class TropLinearSpace:
    n: int
    circuits: tuple[int, ...]

    def __post_init__(self):
        circuits = tuple(self.circuits)
        object.__setattr__(self, "circuits", circuits)
        for a in circuits:
            if a >> self.n:
                raise DimensionMismatch(f"circuit {elements_of(a)} leaves 0..{self.n - 1}")
            for b in circuits:
                if a != b and a & b == a:
                    raise SchemaError(f"circuit {elements_of(a)} is contained in {elements_of(b)}")

    @classmethod
    def from_lists(cls, n: int, circuits) -> "TropLinearSpace":
        return cls(n, tuple(to_mask(c) for c in circuits))

    def to_json(self) -> dict:
        return {"n": self.n, "circuits": [elements_of(c) for c in self.circuits]}

    def circuit_polynomial(self, circuit: int) -> TropPolynomial:
        return TropPolynomial.hyperplane(self.n, elements_of(circuit))


def tropical_linear_space(M: Matroid) -> TropLinearSpace:
    return TropLinearSpace(M.n, tuple(M.circuits()))


def member(T: TropLinearSpace, xi: Sequence) -> bool:
    """On every circuit the coordinate max is attained twice (or is -inf)."""
    xi = tuple(trop_value(x) for x in xi)
    if len(xi) != T.n:
        raise DimensionMismatch(f"point of dimension {len(xi)} in a space of dimension {T.n}")
    for c in T.circuits:
        vals = [xi[i] for i in elements_of(c)]
        best = max(vals)
        if best is NEG_INF:
            continue
        if sum(1 for v in vals if v == best) < 2:
            return False
    return True
