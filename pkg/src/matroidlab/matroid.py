"""Matroids given by rank oracles on bitmask subsets.

A subset of the ground set ``{0, ..., n-1}`` is an ``int`` whose bit ``i``
is set when ``i`` belongs to it.  Every constructor rejects loops, so all
matroids here are loopless.
"""

from __future__ import annotations

import itertools
import random
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import (
    AxiomViolation,
    BadParams,
    FullFlat,
    InvalidLines,
    LoopDetected,
    NotAFlat,
    SchemaError,
    TooLarge,
    UnknownName,
)
from .exactlin import GF, ExactMatrix, rank as matrix_rank

MAX_GROUND = 63
MAX_ENUMERATE = 20
MAX_EXHAUSTIVE_AXIOMS = 12

FANO_POINTS = (
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 1, 0),
    (0, 1, 1),
    (1, 0, 1),
    (1, 1, 1),
)

# Pappus configuration with the Pappus line {3, 4, 5} left out.
NON_PAPPUS_LINES = (
    (0, 1, 2),
    (6, 7, 8),
    (0, 4, 6),
    (0, 5, 7),
    (1, 3, 6),
    (1, 5, 8),
    (2, 3, 7),
    (2, 4, 8),
)


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for i in elements:
        mask |= 1 << i
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _as_mask(S) -> int:
    if isinstance(S, Flat):
        return S.members
    if isinstance(S, int):
        return S
    return to_mask(S)


@dataclass(frozen=True, order=True)
class Flat:
    members: int
    rank: int

    def elements(self) -> list[int]:
        return elements_of(self.members)

    def __contains__(self, i: int) -> bool:
        return bool(self.members >> i & 1)

    def issubset(self, other: "Flat") -> bool:
        return self.members & ~other.members == 0


@dataclass(frozen=True)
class FlatLattice:
    rank: int
    flats_by_rank: tuple[tuple[Flat, ...], ...]
    _index: dict = field(repr=False, compare=False)

    @classmethod
    def from_levels(cls, levels: Sequence[Iterable[Flat]]) -> "FlatLattice":
        ordered = tuple(tuple(sorted(level, key=lambda f: f.members)) for level in levels)
        index = {}
        for level in ordered:
            for k, F in enumerate(level):
                index[F.members] = k
        return cls(len(ordered) - 1, ordered, index)

    def index(self, F) -> int:
        """Position of ``F`` inside its rank level."""
        return self._index[_as_mask(F)]

    def __contains__(self, F) -> bool:
        return _as_mask(F) in self._index

    def whitney(self) -> list[int]:
        return [len(level) for level in self.flats_by_rank]

    def all_flats(self) -> list[Flat]:
        return [F for level in self.flats_by_rank for F in level]

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "flats_by_rank": [[F.elements() for F in level] for level in self.flats_by_rank],
        }


@dataclass
class AxiomReport:
    mode: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, axiom: str, *subsets: int, detail: str = ""):
        self.violations.append(
            {"axiom": axiom, "sets": [elements_of(s) for s in subsets], "detail": detail}
        )

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "checked": self.checked,
            "pass": self.passed,
            "violations": self.violations,
        }


class Matroid:
    """Loopless matroid on ``{0..n-1}`` defined by a rank oracle.

    The oracle is memoised; the cache is guarded by a lock so a matroid
    can be shared between threads.
    """

    def __init__(
        self,
        n: int,
        rank_fn: Callable[[int], int],
        kind: str = "Explicit",
        realization: ExactMatrix | None = None,
        name: str | None = None,
        labels: Sequence[int] | None = None,
    ):
        if not 0 <= n <= MAX_GROUND:
            raise BadParams(f"ground set size must lie in [0, {MAX_GROUND}], got {n}")
        self.n = n
        self.kind = kind
        self.realization = realization
        self.name = name
        self.labels = tuple(range(n)) if labels is None else tuple(labels)
        self._rank_fn = rank_fn
        self._cache: dict[int, int] = {}
        self._lock = threading.Lock()
        self._flats: FlatLattice | None = None
        self.full = (1 << n) - 1
        for i in range(n):
            if self.rank(1 << i) == 0:
                raise LoopDetected(f"element {i} is a loop")
        self.rank_total = self.rank(self.full)

    def __repr__(self):
        tag = self.name or self.kind
        return f"<Matroid {tag} n={self.n} rank={self.rank_total}>"

    def rank(self, S) -> int:
        mask = _as_mask(S)
        r = self._cache.get(mask)
        if r is None:
            if mask & ~self.full:
                raise ValueError(f"subset {elements_of(mask)} leaves the ground set")
            r = self._rank_fn(mask)
            with self._lock:
                self._cache[mask] = r
        return r

    def is_independent(self, S) -> bool:
        mask = _as_mask(S)
        return popcount(mask) == self.rank(mask)

    def closure(self, S) -> Flat:
        mask = _as_mask(S)
        r = self.rank(mask)
        closed = mask
        for i in range(self.n):
            bit = 1 << i
            if not mask & bit and self.rank(mask | bit) == r:
                closed |= bit
        return Flat(closed, r)

    def is_flat(self, S) -> bool:
        mask = _as_mask(S)
        return self.closure(mask).members == mask

    def flats(self) -> FlatLattice:
        """All flats, grouped by rank, found breadth-first through covers."""
        if self._flats is not None:
            return self._flats
        if self.n > MAX_ENUMERATE:
            raise TooLarge(f"flat enumeration limited to n <= {MAX_ENUMERATE}")
        levels = [[self.closure(0)]]
        for _ in range(self.rank_total):
            seen = {}
            for F in levels[-1]:
                for i in range(self.n):
                    if not F.members >> i & 1:
                        G = self.closure(F.members | 1 << i)
                        seen.setdefault(G.members, G)
            levels.append(list(seen.values()))
        lattice = FlatLattice.from_levels(levels)
        with self._lock:
            if self._flats is None:
                self._flats = lattice
        return self._flats

    def whitney(self) -> list[int]:
        return self.flats().whitney()

    def join(self, F, G) -> Flat:
        return self.closure(_as_mask(F) | _as_mask(G))

    def _require_flat(self, F) -> int:
        mask = _as_mask(F)
        if mask & ~self.full or not self.is_flat(mask):
            raise NotAFlat(f"{elements_of(mask)} is not a flat")
        return mask

    def restriction(self, F) -> "Matroid":
        """Matroid on the points of ``F``, renumbered 0..|F|-1."""
        mask = self._require_flat(F)
        elems = elements_of(mask)

        def expand(sub: int) -> int:
            return to_mask(elems[k] for k in elements_of(sub))

        realization = self.realization.select_rows(elems) if self.realization is not None else None
        return Matroid(
            len(elems),
            lambda s: self.rank(expand(s)),
            kind="Linear" if realization is not None else "Explicit",
            realization=realization,
            labels=[self.labels[e] for e in elems],
        )

    def contraction(self, F) -> "Matroid":
        """Matroid on the points outside ``F`` with rank(S) = rank(S ∪ F) - rank(F)."""
        mask = self._require_flat(F)
        if mask == self.full:
            raise FullFlat("cannot contract the whole ground set")
        elems = [i for i in range(self.n) if not mask >> i & 1]
        base = self.rank(mask)

        def rank_fn(sub: int) -> int:
            return self.rank(to_mask(elems[k] for k in elements_of(sub)) | mask) - base

        return Matroid(len(elems), rank_fn, kind="Explicit", labels=[self.labels[e] for e in elems])

    def circuits(self) -> list[int]:
        """Minimal dependent sets as bitmasks, by size then bitmask value."""
        if self.n > MAX_ENUMERATE:
            raise TooLarge(f"circuit enumeration limited to n <= {MAX_ENUMERATE}")
        found = []
        for k in range(1, min(self.n, self.rank_total + 1) + 1):
            level = []
            for combo in itertools.combinations(range(self.n), k):
                S = to_mask(combo)
                if self.rank(S) != k - 1:
                    continue
                if all(self.rank(S & ~(1 << i)) == k - 1 for i in combo):
                    level.append(S)
            found.extend(sorted(level))
        return found


def check_axioms(M: Matroid, mode: str = "exhaustive", trials: int = 2000, seed: int = 0) -> AxiomReport:
    """Check normalization, unit increase, monotonicity and submodularity.

    Exhaustive mode walks every (S, i, j) with i, j outside S, which for an
    integer rank function is equivalent to the global axioms.  Randomized
    mode samples the global submodular inequality directly.
    """
    n = M.n
    if mode == "exhaustive":
        if n > MAX_EXHAUSTIVE_AXIOMS:
            raise TooLarge(f"exhaustive axiom check limited to n <= {MAX_EXHAUSTIVE_AXIOMS}")
        report = AxiomReport("exhaustive")
        table = [M.rank(S) for S in range(1 << n)]
        if table[0] != 0:
            report.add("normalization", 0, detail=f"rank(empty) = {table[0]}")
        for i in range(n):
            if table[1 << i] != 1:
                report.add("loopless", 1 << i, detail=f"rank = {table[1 << i]}")
        for S in range(1 << n):
            rS = table[S]
            outside = [i for i in range(n) if not S >> i & 1]
            for i in outside:
                step = table[S | 1 << i] - rS
                report.checked += 1
                if step < 0:
                    report.add("monotonicity", S, S | 1 << i, detail=f"rank drops by {-step}")
                elif step > 1:
                    report.add("unit_increase", S, S | 1 << i, detail=f"rank jumps by {step}")
            for a, b in itertools.combinations(outside, 2):
                report.checked += 1
                lhs = table[S | 1 << a] + table[S | 1 << b]
                rhs = table[S | 1 << a | 1 << b] + rS
                if lhs < rhs:
                    report.add("submodularity", S | 1 << a, S | 1 << b, detail=f"{lhs} < {rhs}")
        return report

    if mode != "randomized":
        raise BadParams(f"unknown axiom-check mode {mode!r}")
    report = AxiomReport(f"randomized({trials})")
    rng = random.Random(seed)
    full = M.full
    if M.rank(0) != 0:
        report.add("normalization", 0, detail=f"rank(empty) = {M.rank(0)}")
    for _ in range(trials):
        A = rng.getrandbits(n) & full if n else 0
        B = rng.getrandbits(n) & full if n else 0
        rA, rB = M.rank(A), M.rank(B)
        report.checked += 1
        if not 0 <= rA <= popcount(A):
            report.add("bounds", A, detail=f"rank = {rA}")
        if M.rank(A | B) + M.rank(A & B) > rA + rB:
            report.add("submodularity", A, B)
        sub = A & (rng.getrandbits(n) if n else 0)
        if M.rank(sub) > rA:
            report.add("monotonicity", sub, A)
    return report


def linear_matroid(P: ExactMatrix) -> Matroid:
    """Matroid of the rows of ``P`` (points in homogeneous coordinates)."""
    if P.ncols < 1:
        raise BadParams("point matrix needs at least one column")
    for i, row in enumerate(P.rows):
        if all(x == 0 for x in row):
            raise LoopDetected(f"row {i} is zero")
    return Matroid(P.nrows, lambda S: matrix_rank(P.select_rows(elements_of(S))), kind="Linear", realization=P)


def uniform(r: int, n: int) -> Matroid:
    if not 1 <= r <= n:
        raise BadParams(f"uniform matroid needs 1 <= r <= n, got r={r}, n={n}")
    return Matroid(n, lambda S: min(popcount(S), r), kind="Uniform", name=f"U({r},{n})")


def _line_rank(line_masks: Sequence[int]):
    def rank_fn(S: int) -> int:
        k = popcount(S)
        if k <= 2:
            return k
        for L in line_masks:
            if S & ~L == 0:
                return 2
        return 3

    return rank_fn


def from_lines(n: int, lines: Sequence[Iterable[int]], name: str | None = None, kind: str = "Lines") -> Matroid:
    """Rank-3 point/line configuration: only the listed lines hold >2 points."""
    if n < 3:
        raise BadParams(f"a line configuration needs n >= 3, got {n}")
    masks = []
    for line in lines:
        pts = sorted(set(line))
        if len(pts) != len(list(line)) or len(pts) < 3:
            raise InvalidLines(f"line {list(line)} must have >= 3 distinct points")
        if pts[0] < 0 or pts[-1] >= n:
            raise InvalidLines(f"line {pts} leaves the ground set 0..{n - 1}")
        masks.append(to_mask(pts))
    for a, b in itertools.combinations(range(len(masks)), 2):
        if popcount(masks[a] & masks[b]) >= 2:
            raise InvalidLines(
                f"lines {elements_of(masks[a])} and {elements_of(masks[b])} share two or more points"
            )
    M = Matroid(n, _line_rank(masks), kind=kind, name=name)
    M.lines = tuple(masks)
    mode = "exhaustive" if n <= MAX_EXHAUSTIVE_AXIOMS else "randomized"
    report = check_axioms(M, mode)
    if not report.passed:
        raise AxiomViolation("line configuration violates the rank axioms", report)
    return M


def explicit(n: int, ranks: Sequence[int]) -> Matroid:
    """Rank function given as a table indexed by bitmask; not validated."""
    if len(ranks) != 1 << n:
        raise BadParams(f"rank table must have 2^{n} entries, got {len(ranks)}")
    table = tuple(int(r) for r in ranks)
    return Matroid(n, table.__getitem__, kind="Explicit")


def named(name: str) -> Matroid:
    if name == "fano":
        M = linear_matroid(ExactMatrix(GF(2), FANO_POINTS))
        M.kind, M.name = "Named", "fano"
        return M
    if name == "non_pappus":
        return from_lines(9, NON_PAPPUS_LINES, name="non_pappus", kind="Named")
    raise UnknownName(name)


NAMED = ("fano", "non_pappus")


def random_line_configuration(n: int, rng: random.Random, attempts: int = 30) -> Matroid:
    """Random rank-3 configuration: greedily accept random 3- or 4-point lines
    that meet every accepted line in at most one point."""
    accepted: list[int] = []
    for _ in range(attempts):
        size = 3 if rng.random() < 0.8 or n < 4 else 4
        cand = to_mask(rng.sample(range(n), size))
        if all(popcount(cand & L) <= 1 for L in accepted):
            accepted.append(cand)
    return from_lines(n, [elements_of(L) for L in accepted])


def matroid_from_json(obj) -> Matroid:
    if not isinstance(obj, dict) or "type" not in obj:
        raise SchemaError("matroid JSON needs a 'type'")
    kind = obj["type"]
    try:
        if kind == "linear":
            return linear_matroid(ExactMatrix.from_json(obj["matrix"]))
        if kind == "lines":
            return from_lines(int(obj["n"]), obj["lines"])
        if kind == "uniform":
            return uniform(int(obj["r"]), int(obj["n"]))
        if kind == "named":
            return named(obj["name"])
        if kind == "explicit":
            return explicit(int(obj["n"]), obj["ranks"])
    except KeyError as exc:
        if isinstance(exc, UnknownName):
            raise
        raise SchemaError(f"matroid JSON of type {kind!r} is missing {exc}") from exc
    raise SchemaError(f"unknown matroid type {kind!r}")
