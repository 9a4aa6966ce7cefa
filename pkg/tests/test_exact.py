import random

from k3lat import _exact as ex


def test_hnf_transform_is_unimodular():
    rng = random.Random(7)
    for _ in range(200):
        nr, nc = rng.randint(1, 4), rng.randint(1, 4)
        m = ex.to_mat([[rng.randint(-5, 5) for _ in range(nc)] for _ in range(nr)])
        h, u = ex.row_hnf_transform(m)
        assert ex.mat_mul(u, m) == h
        assert abs(ex.det_int(u)) == 1


def test_hnf_pivots_reduced():
    h = ex.row_hnf(((4, 1), (0, 3), (2, 7)))
    pivots = []
    for row in h:
        c = next(j for j, x in enumerate(row) if x)
        assert row[c] > 0
        for prev in h[: h.index(row)]:
            pc = next(j for j, x in enumerate(prev) if x)
            if pc == c:
                continue
        pivots.append(c)
    assert pivots == sorted(pivots)


def test_snf_divisibility_and_transforms():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(1, 4)
        m = ex.to_mat([[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)])
        d, u, v = ex.snf_transform(m)
        assert ex.mat_mul(ex.mat_mul(u, m), v) == d
        assert abs(ex.det_int(u)) == 1 and abs(ex.det_int(v)) == 1
        diag = [d[i][i] for i in range(n)]
        for a, b in zip(diag, diag[1:]):
            if a and b:
                assert b % a == 0


def test_kernel_is_saturated_and_correct():
    rng = random.Random(13)
    for _ in range(150):
        nr, nc = rng.randint(1, 3), rng.randint(2, 5)
        m = ex.to_mat([[rng.randint(-3, 3) for _ in range(nc)] for _ in range(nr)])
        ker = ex.kernel_int(m)
        for row in ker:
            assert all(x == 0 for x in ex.vec_mat(row, ex.transpose(m)))
        # dimension matches the rational kernel, so the span is saturated
        d, _, _ = ex.snf_transform(m)
        rank = sum(1 for i in range(min(nr, nc)) if d[i][i])
        assert len(ker) == nc - rank


def test_det_and_inverse():
    m = ((2, 1), (1, 2))
    assert ex.det_int(m) == 3
    inv = ex.mat_inv(m)
    prod = ex.mat_mul(m, inv)
    assert prod == ex.to_mat([[1, 0], [0, 1]])


def test_jacobi_and_legendre():
    assert ex.legendre(2, 7) == 1
    assert ex.legendre(3, 7) == -1
    assert ex.legendre(21, 5) == ex.legendre(1, 5) == 1
    assert ex.jacobi(2, 9) == 1
    assert ex.jacobi(2, 15) == 1
    assert ex.jacobi(7, 15) == -1


def test_floor_sqrt_fraction():
    from fractions import Fraction

    assert ex.floor_sqrt_fraction(Fraction(0)) == 0
    assert ex.floor_sqrt_fraction(Fraction(8, 2)) == 2
    assert ex.floor_sqrt_fraction(Fraction(35, 4)) == 2
    assert ex.floor_sqrt_fraction(Fraction(36, 4)) == 3
