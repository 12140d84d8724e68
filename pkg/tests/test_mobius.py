import random
from fractions import Fraction

import pytest

from matroidlab.errors import BadRanks, DimensionMismatch, WeightNotPositive
from matroidlab.exactlin import QQ, ExactMatrix
from matroidlab.matroid import from_lines, named, random_line_configuration, uniform
from matroidlab.mobius import MobiusAlgebra, OmegaWeights, build
from oracles import flag_count


@pytest.fixture(scope="module")
def fano_alg():
    return build(named("fano"))


def small_matroids():
    rng = random.Random(3)
    out = [named("fano"), uniform(3, 6), uniform(2, 4), from_lines(5, [[0, 1, 2, 3]])]
    out += [random_line_configuration(rng.randint(5, 8), rng) for _ in range(4)]
    F = named("fano")
    out.append(F.contraction({0}))  # has parallel elements
    return out


def random_element(A, degree, rng):
    return A.element(degree, [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(A.dim(degree))])


def test_dims():
    assert build(named("fano")).dims() == [1, 7, 7, 1]
    assert build(uniform(3, 7)).dims() == [1, 7, 21, 1]
    assert build(uniform(1, 1)).dims() == [1, 1]


def test_multiply_basis_examples(fano_alg):
    A = fano_alg
    bottom = A.flats(0)[0]
    for F in A.lattice.all_flats():
        assert A.multiply_basis(bottom, F) == A.basis_element(F)
    P, Q = A.flats(1)[0], A.flats(1)[1]
    prod = A.multiply_basis(P, Q)
    L = A.matroid.join(P, Q)
    assert prod == A.basis_element(L)
    L1, L2 = A.flats(2)[0], A.flats(2)[1]
    z = A.multiply_basis(L1, L2)
    assert z.degree == 4 and z.coeffs == ()
    # same point twice: join has rank 1, not 2
    assert A.multiply_basis(P, P).is_zero()


def test_multiply_examples(fano_alg, rng):
    A = fano_alg
    for d in range(4):
        v = random_element(A, d, rng)
        assert A.multiply(A.identity(), v) == v
    w = A.omega()
    for P in A.flats(1):
        out = A.multiply(w, A.basis_element(P))
        for L, c in zip(A.flats(2), out.coeffs):
            assert c == (2 if P.issubset(L) else 0)
    hi = A.multiply(random_element(A, 2, rng), random_element(A, 2, rng))
    assert hi.degree == 4 and hi.is_zero()


@pytest.mark.parametrize("M", [named("fano"), named("non_pappus"), uniform(3, 6)], ids=repr)
def test_commutative_associative(M):
    A = build(M)
    rng = random.Random(M.n)
    for _ in range(40):
        a, b, c = (rng.randint(0, M.rank_total) for _ in range(3))
        u, v, x = random_element(A, a, rng), random_element(A, b, rng), random_element(A, c, rng)
        assert A.multiply(u, v) == A.multiply(v, u)
        assert A.multiply(A.multiply(u, v), x) == A.multiply(u, A.multiply(v, x))


def test_omega_weights(fano_alg):
    assert fano_alg.omega().coeffs == (1,) * 7
    w = OmegaWeights([1, 2, 3, 4, 5, 6, "7/2"])
    assert fano_alg.omega(w).coeffs == (1, 2, 3, 4, 5, 6, Fraction(7, 2))
    for bad in ([0] + [1] * 6, [-1] * 7):
        with pytest.raises(WeightNotPositive):
            OmegaWeights(bad)
    with pytest.raises(DimensionMismatch):
        fano_alg.omega(OmegaWeights([1, 1]))


def test_omega_power_examples(fano_alg):
    A = fano_alg
    for r in range(4):
        assert A.omega_power_matrix(r, r) == ExactMatrix.identity(QQ, A.dim(r))
    assert A.omega_power_matrix(0, 1) == ExactMatrix(QQ, [[1]] * 7)
    M12 = A.omega_power_matrix(1, 2)
    for i, L in enumerate(A.flats(2)):
        for j, P in enumerate(A.flats(1)):
            assert M12[i, j] == (2 if P.issubset(L) else 0)
    with pytest.raises(BadRanks):
        A.omega_power_matrix(2, 1)
    with pytest.raises(BadRanks):
        A.omega_power_matrix(0, 4)


def test_matrix_dump(fano_alg):
    d = fano_alg.matrix_dump(0, 1)
    assert d == {"r": 0, "r_prime": 1, "rows": list(range(7)), "cols": [0], "entries": [[1]] * 7}


@pytest.mark.parametrize("M", small_matroids(), ids=repr)
def test_support_composition_and_flags(M):
    A = build(M)
    d = M.rank_total
    rng = random.Random(M.n * 31 + d)
    w = OmegaWeights([Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(A.dim(1))])
    for r in range(d + 1):
        for rp in range(r, d + 1):
            unit = A.omega_power_matrix(r, rp)
            weighted = A.omega_power_matrix(r, rp, w)
            for i, G in enumerate(A.flats(rp)):
                for j, F in enumerate(A.flats(r)):
                    count = flag_count(M.n, M.rank, F.members, G.members)
                    assert unit[i, j] == count
                    assert weighted[i, j] >= 0
                    assert (weighted[i, j] > 0) == (count > 0) == F.issubset(G)
            for rpp in range(rp, d + 1):
                assert A.omega_power_matrix(r, rpp) == A.omega_power_matrix(rp, rpp) @ unit


def test_weighted_step_entry(fano_alg):
    # entry (G, F) of one step is the sum of weights of the atoms joining F to G
    A = fano_alg
    c = [Fraction(k + 1) for k in range(7)]
    S = A.omega_step_matrix(1, OmegaWeights(c))
    for i, L in enumerate(A.flats(2)):
        for j, P in enumerate(A.flats(1)):
            expected = sum(
                (c[k] for k, a in enumerate(A.flats(1)) if a != P and a.issubset(L)),
                Fraction(0),
            ) if P.issubset(L) else 0
            assert S[i, j] == expected


def test_element_length_checked(fano_alg):
    with pytest.raises(DimensionMismatch):
        fano_alg.element(1, [1, 2])


def test_algebra_is_reusable():
    M = named("fano")
    assert MobiusAlgebra(M).dims() == MobiusAlgebra(M).dims()
