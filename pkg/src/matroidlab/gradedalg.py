"""Monomial quotient algebras Q[x_1..x_N] / (x_i^(m_i + 1)).

Graded dimensions count bounded "coin" decompositions of each degree.
With all generator degrees equal to one, the module also builds the
matrices of multiplication by ``omega = x_1 + ... + x_N`` and checks the
hard Lefschetz property degree by degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BadParams, TooLarge, WeightedDegrees
from .exactlin import QQ, ExactMatrix, rank

MAX_TOPDEG = 10**6
MAX_HLP_TOPDEG = 24
MAX_HLP_BASIS = 10**5


@dataclass(frozen=True)
class MonomialAlgebraSpec:
    caps: tuple[int, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "caps", tuple(int(m) for m in self.caps))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if len(self.caps) != len(self.degrees):
            raise BadParams("caps and degrees must have the same length")
        if any(m < 0 for m in self.caps):
            raise BadParams("caps must be nonnegative")
        if any(d < 1 for d in self.degrees):
            raise BadParams("generator degrees must be positive")

    @classmethod
    def standard(cls, caps) -> "MonomialAlgebraSpec":
        """All generators in degree one."""
        caps = tuple(caps)
        return cls(caps, (1,) * len(caps))

    @classmethod
    def from_json(cls, obj) -> "MonomialAlgebraSpec":
        caps = obj["caps"]
        return cls(caps, obj.get("degrees", [1] * len(caps)))

    def to_json(self) -> dict:
        return {"caps": list(self.caps), "degrees": list(self.degrees)}

    @property
    def topdeg(self) -> int:
        return sum(m * d for m, d in zip(self.caps, self.degrees))

    @property
    def standard_grading(self) -> bool:
        return all(d == 1 for d in self.degrees)


def graded_dims(spec: MonomialAlgebraSpec) -> list[int]:
    """``dims[k]`` = number of exponent vectors 0 <= e <= caps of weighted degree k."""
    top = spec.topdeg
    if top > MAX_TOPDEG:
        raise TooLarge(f"topdeg {top} exceeds {MAX_TOPDEG}")
    dims = [0] * (top + 1)
    dims[0] = 1
    reach = 0
    for m, d in zip(spec.caps, spec.degrees):
        reach += m * d
        new = [0] * (top + 1)
        # bounded convolution: new[k] = sum_{c=0..m} dims[k - c*d], kept as a running
        # window per residue class mod d
        for k in range(reach + 1):
            v = dims[k] + (new[k - d] if k >= d else 0)
            if k >= (m + 1) * d:
                v -= dims[k - (m + 1) * d]
            new[k] = v
        dims = new
    return dims


def palindrome_check(spec_or_dims) -> bool:
    dims = graded_dims(spec_or_dims) if isinstance(spec_or_dims, MonomialAlgebraSpec) else list(spec_or_dims)
    return dims == dims[::-1]


def unimodal_check(dims) -> bool:
    """Weakly increasing up to a peak, weakly decreasing after it."""
    dims = list(dims)
    k = 0
    while k + 1 < len(dims) and dims[k] <= dims[k + 1]:
        k += 1
    while k + 1 < len(dims) and dims[k] >= dims[k + 1]:
        k += 1
    return k >= len(dims) - 1


def monomial_basis(spec: MonomialAlgebraSpec, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of weighted degree ``k``, in lexicographic order."""
    if k < 0 or k > spec.topdeg:
        return []
    out = []

    def rec(i, remaining, prefix):
        if i == len(spec.caps):
            if remaining == 0:
                out.append(tuple(prefix))
            return
        d = spec.degrees[i]
        for e in range(min(spec.caps[i], remaining // d) + 1):
            prefix.append(e)
            rec(i + 1, remaining - e * d, prefix)
            prefix.pop()

    rec(0, k, [])
    return out


def _require_standard(spec: MonomialAlgebraSpec):
    if not spec.standard_grading:
        raise WeightedDegrees("omega = sum of generators needs every generator in degree 1")


def omega_matrix(spec: MonomialAlgebraSpec, k: int) -> ExactMatrix:
    """Multiplication by omega from degree ``k`` to degree ``k + 1`` (columns = source)."""
    _require_standard(spec)
    src = monomial_basis(spec, k)
    dst = monomial_basis(spec, k + 1)
    where = {e: i for i, e in enumerate(dst)}
    rows = [[0] * len(src) for _ in dst]
    for j, e in enumerate(src):
        for i, m in enumerate(spec.caps):
            if e[i] < m:
                target = e[:i] + (e[i] + 1,) + e[i + 1 :]
                rows[where[target]][j] += 1
    return ExactMatrix(QQ, rows, len(src))


def omega_power_matrix(spec: MonomialAlgebraSpec, k: int, power: int) -> ExactMatrix:
    """Multiplication by omega**power from degree ``k``, as a product of single steps."""
    _require_standard(spec)
    A = ExactMatrix.identity(QQ, len(monomial_basis(spec, k)))
    for step in range(k, k + power):
        A = omega_matrix(spec, step) @ A
    return A


@dataclass
class HLPReport:
    spec: MonomialAlgebraSpec
    dims: list[int]
    verdicts: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v["isomorphism"] for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "dims": self.dims,
            "topdeg": self.spec.topdeg,
            "hlp": self.verdicts,
            "pass": self.passed,
            "palindromic": palindrome_check(self.dims),
            "unimodal": unimodal_check(self.dims),
        }


def hlp_check(spec: MonomialAlgebraSpec) -> HLPReport:
    """For each i < topdeg/2, is omega**(topdeg - 2i): A_i -> A_(topdeg-i) bijective?"""
    _require_standard(spec)
    top = spec.topdeg
    if top > MAX_HLP_TOPDEG:
        raise TooLarge(f"hlp_check limited to topdeg <= {MAX_HLP_TOPDEG}")
    dims = graded_dims(spec)
    if sum(dims) > MAX_HLP_BASIS:
        raise TooLarge(f"hlp_check limited to {MAX_HLP_BASIS} basis monomials")
    steps = [omega_matrix(spec, k) for k in range(top)]
    report = HLPReport(spec, dims)
    for i in range((top + 1) // 2):
        A = ExactMatrix.identity(QQ, dims[i])
        for k in range(i, top - i):
            A = steps[k] @ A
        square = A.nrows == A.ncols
        rk = rank(A)
        report.verdicts.append(
            {
                "i": i,
                "power": top - 2 * i,
                "shape": [A.nrows, A.ncols],
                "rank": rk,
                "isomorphism": square and rk == A.ncols,
            }
        )
    return report


def all_caps(max_vars: int, max_total: int):
    """Every caps vector with 1..max_vars entries summing to at most max_total."""
    for n in range(1, max_vars + 1):
        for caps in itertools.product(range(max_total + 1), repeat=n):
            if sum(caps) <= max_total:
                yield caps
