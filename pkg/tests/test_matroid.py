import random
from math import comb

import pytest

from matroidlab.errors import (
    AxiomViolation,
    BadParams,
    FullFlat,
    InvalidLines,
    LoopDetected,
    NotAFlat,
    TooLarge,
    UnknownName,
)
from matroidlab.exactlin import GF, QQ, ExactMatrix, det_permutation_sum
from matroidlab.matroid import (
    NON_PAPPUS_LINES,
    check_axioms,
    elements_of,
    explicit,
    from_lines,
    linear_matroid,
    matroid_from_json,
    named,
    random_line_configuration,
    to_mask,
    uniform,
)
from oracles import circuits_by_scan, flats_by_scan, popcount


@pytest.fixture(scope="module")
def fano():
    return named("fano")


@pytest.fixture(scope="module")
def non_pappus():
    return named("non_pappus")


def corpus():
    rng = random.Random(7)
    out = [
        named("fano"),
        named("non_pappus"),
        uniform(3, 7),
        uniform(2, 5),
        uniform(4, 6),
        from_lines(5, [[0, 1, 2, 3]]),
        from_lines(3, []),
        linear_matroid(ExactMatrix(QQ, [[1, t, t * t] for t in range(6)])),
    ]
    out += [random_line_configuration(rng.randint(4, 9), rng) for _ in range(6)]
    return out


CORPUS = corpus()


# ---- constructors

def test_fano_basics(fano):
    assert fano.n == 7 and fano.rank_total == 3
    assert fano.whitney() == [1, 7, 7, 1]
    lines = fano.flats().flats_by_rank[2]
    assert all(len(L.elements()) == 3 for L in lines)


def test_vandermonde_rows_generic():
    ts = [0, 1, 2, 5, -3, 7]
    P = ExactMatrix(QQ, [[1, t, t * t] for t in ts])
    M = linear_matroid(P)
    for S in range(1 << len(ts)):
        if popcount(S) == 3:
            minor = P.select_rows(elements_of(S))
            assert det_permutation_sum(minor) != 0
            assert M.rank(S) == 3
    assert M.whitney() == [1, 6, 15, 1]


def test_single_row():
    M = linear_matroid(ExactMatrix(QQ, [[1]]))
    assert M.n == 1 and M.rank_total == 1


def test_zero_row_is_loop():
    with pytest.raises(LoopDetected):
        linear_matroid(ExactMatrix(QQ, [[1, 0], [0, 0]]))


def test_from_lines_examples():
    M = from_lines(5, [[0, 1, 2, 3]])
    assert M.whitney() == [1, 5, 5, 1]
    rank2 = {tuple(F.elements()) for F in M.flats().flats_by_rank[2]}
    assert rank2 == {(0, 1, 2, 3), (0, 4), (1, 4), (2, 4), (3, 4)}
    U = from_lines(3, [])
    assert U.whitney() == [1, 3, 3, 1]
    NP = named("non_pappus")
    assert NP.n == 9
    three_point = [F for F in NP.flats().flats_by_rank[2] if len(F.elements()) == 3]
    assert len(three_point) == 8
    assert {to_mask(L) for L in NON_PAPPUS_LINES} == {F.members for F in three_point}


@pytest.mark.parametrize(
    "n,lines",
    [
        (5, [[0, 1]]),
        (5, [[0, 1, 1]]),
        (5, [[0, 1, 2], [0, 1, 3]]),
        (5, [[0, 1, 7]]),
    ],
)
def test_from_lines_rejects(n, lines):
    with pytest.raises(InvalidLines):
        from_lines(n, lines)


def test_from_lines_small_n():
    with pytest.raises(BadParams):
        from_lines(2, [])


def test_uniform_examples():
    assert uniform(3, 7).whitney() == [1, 7, 21, 1]
    U = uniform(1, 1)
    assert U.n == 1 and U.rank_total == 1
    assert uniform(6, 10).whitney() == [1, 10, 45, 120, 210, 252, 1]
    with pytest.raises(BadParams):
        uniform(0, 3)
    with pytest.raises(BadParams):
        uniform(4, 3)


def test_named_unknown():
    with pytest.raises(UnknownName):
        named("pappus")


def test_json_constructors():
    assert matroid_from_json({"type": "named", "name": "fano"}).whitney() == [1, 7, 7, 1]
    assert matroid_from_json({"type": "uniform", "r": 2, "n": 4}).whitney() == [1, 4, 1]
    M = matroid_from_json({"type": "lines", "n": 5, "lines": [[0, 1, 2, 3]]})
    assert M.whitney() == [1, 5, 5, 1]
    L = matroid_from_json({"type": "linear", "matrix": {"field": {"p": 2}, "rows": [[1, 0], [0, 1], [1, 1]]}})
    assert L.whitney() == [1, 3, 1]


# ---- axioms

def test_axioms_pass(fano, non_pappus):
    assert check_axioms(fano).passed
    rep = check_axioms(non_pappus)
    assert rep.passed and rep.checked > 0
    assert rep.to_json()["pass"] is True


def test_parity_rank_fails_monotonicity():
    M = explicit(2, [0, 1, 1, 0])
    rep = check_axioms(M)
    assert not rep.passed
    kinds = {v["axiom"] for v in rep.to_json()["violations"]}
    assert "monotonicity" in kinds
    assert not check_axioms(M, "randomized", trials=200).passed


def test_rank_jump_detected():
    # rank(S) = min(|S|, 2) except the full set, which jumps to 4
    n = 3
    ranks = [min(popcount(S), 2) for S in range(1 << n)]
    ranks[7] = 4
    assert not check_axioms(explicit(n, ranks)).passed


def test_randomized_mode_on_corpus():
    for M in CORPUS:
        assert check_axioms(M, "randomized", trials=300, seed=3).passed


def test_exhaustive_guard():
    with pytest.raises(TooLarge):
        check_axioms(uniform(2, 13))
    with pytest.raises(BadParams):
        check_axioms(uniform(2, 3), "sometimes")


def test_axiom_violation_raised_by_builder(monkeypatch):
    import matroidlab.matroid as mm

    monkeypatch.setattr(mm, "_line_rank", lambda masks: (lambda S: popcount(S) % 2 if S else 0))
    with pytest.raises(AxiomViolation):
        mm.from_lines(4, [])


# ---- closure, flats

def test_closure_examples(fano):
    F = fano.closure({0, 1})
    assert F.rank == 2 and len(F.elements()) == 3 and {0, 1} <= set(F.elements())
    # points 0=(1,0,0), 1=(0,1,0) and their sum 3=(1,1,0)
    assert F.elements() == [0, 1, 3]
    assert fano.closure(set()).members == 0
    assert uniform(3, 5).closure({0, 1}).elements() == [0, 1]


@pytest.mark.parametrize("M", CORPUS, ids=repr)
def test_closure_properties(M):
    rng = random.Random(M.n)
    for _ in range(60):
        S = rng.getrandbits(M.n)
        T = S | rng.getrandbits(M.n)
        cS = M.closure(S)
        assert S & ~cS.members == 0
        assert M.closure(cS.members) == cS
        assert cS.members & ~M.closure(T).members == 0
        assert cS.rank == M.rank(S)


@pytest.mark.parametrize("M", CORPUS, ids=repr)
def test_flats_match_brute_force_scan(M):
    expected = flats_by_scan(M.n, M.rank)
    got = [[F.members for F in level] for level in M.flats().flats_by_rank]
    assert got == expected
    lattice = M.flats()
    assert len(lattice.flats_by_rank[0]) == 1 and len(lattice.flats_by_rank[-1]) == 1
    for F in lattice.all_flats():
        for i in range(M.n):
            if i not in F:
                assert M.rank(F.members | 1 << i) == F.rank + 1


def test_flats_guard():
    with pytest.raises(TooLarge):
        uniform(2, 21).flats()


def test_join_examples(fano):
    lattice = fano.flats()
    bottom = lattice.flats_by_rank[0][0]
    for F in lattice.all_flats():
        assert fano.join(F, F) == F
        assert fano.join(bottom, F) == F
    P, Q = lattice.flats_by_rank[1][0], lattice.flats_by_rank[1][1]
    L = fano.join(P, Q)
    assert L.rank == 2 and P.issubset(L) and Q.issubset(L)


@pytest.mark.parametrize("M", CORPUS[:5], ids=repr)
def test_join_commutative_associative(M):
    flats = M.flats().all_flats()
    rng = random.Random(1)
    for _ in range(100):
        A, B, C = (rng.choice(flats) for _ in range(3))
        assert M.join(A, B) == M.join(B, A)
        assert M.join(M.join(A, B), C) == M.join(A, M.join(B, C))


# ---- minors

def test_restriction_examples(fano):
    full = fano.flats().flats_by_rank[3][0]
    R = fano.restriction(full)
    assert R.n == 7 and R.whitney() == fano.whitney()
    line = fano.flats().flats_by_rank[2][0]
    U = fano.restriction(line)
    assert U.n == 3 and U.rank_total == 2 and U.whitney() == [1, 3, 1]
    E = fano.restriction(0)
    assert E.n == 0 and E.rank_total == 0


def test_contraction_examples(fano):
    C = fano.contraction(0)
    assert C.n == 7 and C.whitney() == fano.whitney()
    U = uniform(3, 7).contraction({0})
    assert U.n == 6 and U.rank_total == 2
    assert all(U.rank(S) == min(popcount(S), 2) for S in range(1 << 6))
    P = fano.contraction({0})
    assert P.n == 6 and P.rank_total == 2
    assert P.whitney() == [1, 3, 1]
    assert all(len(F.elements()) == 2 for F in P.flats().flats_by_rank[1])


def test_minor_errors(fano):
    with pytest.raises(NotAFlat):
        fano.restriction({0, 1})
    with pytest.raises(NotAFlat):
        fano.contraction({0, 1})
    with pytest.raises(FullFlat):
        fano.contraction(fano.full)


@pytest.mark.parametrize("M", CORPUS, ids=repr)
def test_minor_flat_correspondence(M):
    lattice = M.flats()
    for F in lattice.all_flats():
        R = M.restriction(F)
        below = [sum(1 for G in lattice.flats_by_rank[r] if G.issubset(F)) for r in range(F.rank + 1)]
        assert R.whitney() == below
        if F.members == M.full:
            continue
        C = M.contraction(F)
        above = [
            sum(1 for G in lattice.flats_by_rank[r + F.rank] if F.issubset(G))
            for r in range(M.rank_total - F.rank + 1)
        ]
        assert C.whitney() == above


# ---- circuits, independence

def test_circuit_examples(fano):
    assert uniform(2, 3).circuits() == [0b111]
    assert uniform(3, 3).circuits() == []
    circ = fano.circuits()
    sizes = sorted(popcount(c) for c in circ)
    assert sizes.count(3) == 7 and sizes.count(4) == 7 and len(circ) == 14


@pytest.mark.parametrize("M", CORPUS, ids=repr)
def test_circuits_match_scan(M):
    got = M.circuits()
    assert sorted(got) == sorted(circuits_by_scan(M.n, M.rank))
    for a in got:
        for b in got:
            assert a == b or a & b != a


def test_independence(fano):
    assert fano.is_independent(0)
    assert all(fano.is_independent(1 << i) for i in range(7))
    assert not fano.is_independent({0, 1, 3})
    assert fano.is_independent({0, 1, 2})


# ---- de Bruijn-Erdos

@pytest.mark.parametrize("M", [m for m in CORPUS if m.rank_total == 3], ids=repr)
def test_de_bruijn_erdos(M):
    w = M.whitney()
    assert w[2] >= w[1]


def test_uniform_binomials():
    for n in range(1, 11):
        for r in range(1, n + 1):
            w = uniform(r, n).whitney()
            assert w[:r] == [comb(n, k) for k in range(r)] and w[r] == 1


def test_linear_over_gf2_random():
    rng = random.Random(5)
    for _ in range(10):
        rows = []
        while len(rows) < 6:
            row = [rng.randrange(2) for _ in range(3)]
            if any(row):
                rows.append(row)
        M = linear_matroid(ExactMatrix(GF(2), rows))
        assert check_axioms(M).passed
        assert [[F.members for F in lv] for lv in M.flats().flats_by_rank] == flats_by_scan(M.n, M.rank)
