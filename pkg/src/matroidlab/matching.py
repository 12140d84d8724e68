"""Injectivity of omega-power maps and the flat matchings they certify.

For ``r <= r'`` with ``r + r' <= rank(M)`` the map omega**(r'-r) from degree
r to degree r' of the Möbius algebra is injective, so its support contains
a matching of every rank-r flat into a rank-r' flat containing it.  The
functions here check both facts on concrete matroids and raise
:class:`TheoremAlarm` when either fails inside that range.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .errors import RangeViolation, TheoremAlarm, TooLarge
from .exactlin import rank
from .matroid import Flat, Matroid
from .mobius import MobiusAlgebra, OmegaWeights

MAX_HALL_LEFT = 20


@dataclass(frozen=True)
class ContainmentGraph:
    r: int
    r_prime: int
    left: tuple[Flat, ...]
    right: tuple[Flat, ...]
    adjacency: tuple[tuple[int, ...], ...]

    def edges(self):
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                yield i, j


@dataclass
class MatchingResult:
    r: int
    r_prime: int
    assignment: dict[int, int]
    complete: bool
    pairs: list[tuple[Flat, Flat]] = field(default_factory=list)
    in_theorem_range: bool = True

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "r_prime": self.r_prime,
            "complete": self.complete,
            "pairs": [[F.elements(), G.elements()] for F, G in self.pairs],
        }

    def to_dot(self, graph: ContainmentGraph) -> str:
        def label(F: Flat) -> str:
            return "{" + ",".join(map(str, F.elements())) + "}"

        lines = [
            "graph matching {",
            "  rankdir=LR;",
            f'  subgraph cluster_left {{ label="rank {self.r}";',
        ]
        lines += [f'    L{i} [label="{label(F)}"];' for i, F in enumerate(graph.left)]
        lines.append("  }")
        lines.append(f'  subgraph cluster_right {{ label="rank {self.r_prime}";')
        lines += [f'    R{j} [label="{label(G)}"];' for j, G in enumerate(graph.right)]
        lines.append("  }")
        for i, j in graph.edges():
            if self.assignment.get(i) == j:
                lines.append(f"  L{i} -- R{j} [penwidth=3];")
            else:
                lines.append(f"  L{i} -- R{j} [color=gray];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _check_range(M: Matroid, r: int, r_prime: int, exploratory: bool) -> bool:
    if not 0 <= r <= r_prime <= M.rank_total:
        raise RangeViolation(f"need 0 <= r <= r' <= rank = {M.rank_total}")
    inside = r + r_prime <= M.rank_total
    if not inside and not exploratory:
        raise RangeViolation(
            f"r + r' = {r + r_prime} exceeds rank {M.rank_total}; pass exploratory=True to compute anyway"
        )
    return inside


def _algebra(M: Matroid, algebra: MobiusAlgebra | None) -> MobiusAlgebra:
    return algebra if algebra is not None else MobiusAlgebra(M)


def verify_injectivity(
    M: Matroid,
    r: int,
    r_prime: int,
    w: OmegaWeights | None = None,
    exploratory: bool = False,
    algebra: MobiusAlgebra | None = None,
) -> bool:
    """Is multiplication by omega**(r'-r) injective on degree r?

    With unit weights inside the theorem range a ``False`` answer raises
    :class:`TheoremAlarm`.
    """
    inside = _check_range(M, r, r_prime, exploratory)
    A = _algebra(M, algebra)
    mat = A.omega_power_matrix(r, r_prime, w)
    ok = rank(mat) == A.dim(r)
    if not ok and inside and (w is None or w.is_unit):
        raise TheoremAlarm(
            f"omega^{r_prime - r} is not injective on degree {r} of {M!r}",
            payload={"r": r, "r_prime": r_prime, "rank": rank(mat), "dim": A.dim(r)},
        )
    return ok


def containment_graph(M: Matroid, r: int, r_prime: int) -> ContainmentGraph:
    """Rank-r flats joined to the rank-r' flats that contain them (no algebra involved)."""
    lattice = M.flats()
    left = lattice.flats_by_rank[r]
    right = lattice.flats_by_rank[r_prime]
    adjacency = tuple(tuple(j for j, G in enumerate(right) if F.issubset(G)) for F in left)
    return ContainmentGraph(r, r_prime, left, right, adjacency)


def support_graph(M: Matroid, r: int, r_prime: int, algebra: MobiusAlgebra | None = None) -> ContainmentGraph:
    """Nonzero pattern of the omega-power matrix, read as a bipartite graph."""
    A = _algebra(M, algebra)
    mat = A.omega_power_matrix(r, r_prime)
    left, right = A.flats(r), A.flats(r_prime)
    adjacency = tuple(tuple(j for j in range(len(right)) if mat[j, i] != 0) for i in range(len(left)))
    return ContainmentGraph(r, r_prime, left, right, adjacency)


def hopcroft_karp(adjacency, n_right: int) -> dict[int, int]:
    """Maximum bipartite matching; left vertices and neighbour lists are
    scanned in the given order, so the result is deterministic."""
    n_left = len(adjacency)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    inf = n_left + 1

    while True:
        dist = [inf] * n_left
        queue = deque()
        for u in range(n_left):
            if match_l[u] < 0:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                w = match_r[v]
                if w < 0:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            break

        def augment(u: int) -> bool:
            for v in adjacency[u]:
                w = match_r[v]
                if w < 0 or (dist[w] == dist[u] + 1 and augment(w)):
                    match_l[u] = v
                    match_r[v] = u
                    return True
            dist[u] = inf
            return False

        progressed = False
        for u in range(n_left):
            if match_l[u] < 0 and augment(u):
                progressed = True
        if not progressed:
            break
    return {u: v for u, v in enumerate(match_l) if v >= 0}


def extract_matching(
    M: Matroid,
    r: int,
    r_prime: int,
    exploratory: bool = False,
    algebra: MobiusAlgebra | None = None,
) -> MatchingResult:
    """Injective map from rank-r flats to rank-r' flats with F ⊆ ι(F)."""
    inside = _check_range(M, r, r_prime, exploratory)
    g = support_graph(M, r, r_prime, algebra)
    assignment = hopcroft_karp(g.adjacency, len(g.right))
    pairs = [(g.left[i], g.right[j]) for i, j in sorted(assignment.items())]
    result = MatchingResult(r, r_prime, assignment, len(assignment) == len(g.left), pairs, inside)
    for F, G in pairs:
        if not F.issubset(G):
            raise TheoremAlarm(f"matched {F.elements()} into non-superset {G.elements()}", payload=result)
    if inside and not result.complete:
        raise TheoremAlarm(
            f"no complete matching from rank {r} to rank {r_prime} flats of {M!r}",
            payload=result,
        )
    return result


def brute_force_matching_exists(g: ContainmentGraph) -> bool:
    """Hall's condition checked over every subset of the left side."""
    n = len(g.left)
    if n > MAX_HALL_LEFT:
        raise TooLarge(f"Hall enumeration limited to {MAX_HALL_LEFT} left vertices")
    nbr_masks = [sum(1 << j for j in nbrs) for nbrs in g.adjacency]
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            union = 0
            for i in subset:
                union |= nbr_masks[i]
            if bin(union).count("1") < size:
                return False
    return True


@dataclass
class TopHeavyReport:
    whitney: list[int]
    pairs: list[dict]
    chain: list[dict]

    @property
    def passed(self) -> bool:
        return all(p["holds"] for p in self.pairs) and all(c["holds"] for c in self.chain)

    def to_json(self) -> dict:
        return {"whitney": self.whitney, "pairs": self.pairs, "chain": self.chain, "pass": self.passed}


def top_heavy_report(M: Matroid) -> TopHeavyReport:
    w = M.whitney()
    d = M.rank_total
    pairs = [
        {"r": r, "r_prime": rp, "lower": w[r], "upper": w[rp], "holds": w[r] <= w[rp]}
        for r in range(d + 1)
        for rp in range(r, d + 1)
        if r + rp <= d
    ]
    # |F_0| <= |F_1| <= ... while r + (r+1) <= rank
    chain = [
        {"r": r, "lower": w[r], "upper": w[r + 1], "holds": w[r] <= w[r + 1]}
        for r in range(d)
        if 2 * r + 1 <= d
    ]
    return TopHeavyReport(w, pairs, chain)


def theorem_pairs(M: Matroid):
    """All (r, r') with r <= r' and r + r' <= rank(M)."""
    d = M.rank_total
    return [(r, rp) for r in range(d + 1) for rp in range(r, d + 1) if r + rp <= d]
