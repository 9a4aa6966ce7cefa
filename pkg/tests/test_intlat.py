import random

import pytest

from k3lat import _exact as ex
from k3lat.intlat import (
    DegenerateLatticeError,
    IntegralLattice,
    Sublattice,
    discriminant_group,
    is_primitive,
    leech_lattice,
    membership,
    orthogonal_complement,
    rank_ell_bound,
    roots,
    saturate,
    short_vectors,
)
from k3lat.rootsys import build

from conftest import random_even_gram

U = IntegralLattice(((0, 1), (1, 0)))
A2 = IntegralLattice(((2, -1), (-1, 2)))
E8 = build("E8").lattice()


def test_rank_zero_lattice():
    zero = IntegralLattice(())
    assert zero.rank == 0 and zero.det == 1
    assert zero.signature() == (0, 0)
    assert discriminant_group(zero).cyclic_orders == ()
    assert roots(zero) == []


def test_rejects_degenerate_and_odd():
    with pytest.raises(DegenerateLatticeError):
        IntegralLattice(((2, 2), (2, 2)))
    with pytest.raises(ValueError):
        IntegralLattice(((1,),))
    with pytest.raises(ValueError):
        IntegralLattice(((2, 1), (0, 2)))


def test_discriminant_groups():
    assert discriminant_group(U).cyclic_orders == ()
    assert discriminant_group(A2).cyclic_orders == (3,)
    assert discriminant_group(IntegralLattice(((84,),))).cyclic_orders == (84,)


def test_discriminant_lift_orders():
    rng = random.Random(5)
    for _ in range(100):
        lat = random_even_gram(rng, rng.randint(1, 3))
        disc = discriminant_group(lat)
        prod = 1
        for d, lift in zip(disc.cyclic_orders, disc.generator_lifts):
            prod *= d
            scaled = tuple(d * x for x in lift)
            assert all(v.denominator == 1 for v in scaled)
        assert prod == abs(lat.det)


def test_orthogonal_complement_examples():
    iso = Sublattice(U, ((1, 0),))
    assert orthogonal_complement(U, iso).basis_matrix == ((1, 0),)
    assert orthogonal_complement(A2, Sublattice(A2, ())).basis_matrix == ex.identity(2)
    four = A2.direct_sum(A2)
    first = Sublattice(four, ((1, 0, 0, 0), (0, 1, 0, 0)))
    comp = orthogonal_complement(four, first)
    assert comp.hnf_basis() == ((0, 0, 1, 0), (0, 0, 0, 1))


def test_saturate_examples():
    s3 = Sublattice(A2, ((3, 0), (0, 3)))
    sat, idx = saturate(A2, s3)
    assert idx == 9 and sat.hnf_basis() == ex.identity(2)
    from k3lat.rootsys import t_sublattice

    t = t_sublattice(3)
    sat, idx = saturate(t.ambient, t)
    assert idx == 3 and sat.hnf_basis() == ex.identity(2)
    prim = Sublattice(A2, ((1, 0),))
    sat, idx = saturate(A2, prim)
    assert idx == 1
    sat2, idx2 = saturate(A2, sat)
    assert idx2 == 1 and sat2.hnf_basis() == sat.hnf_basis()


def test_roots_counts():
    assert len(roots(A2)) == 6
    assert len(roots(E8)) == 240
    with pytest.raises(ValueError):
        roots(U)


def test_e8_roots_against_family_oracle():
    """Independent oracle: the two explicit coordinate families."""
    from fractions import Fraction
    from itertools import product

    datum = build("E8")
    ambient = set()
    for i in range(8):
        for j in range(i + 1, 8):
            for si in (1, -1):
                for sj in (1, -1):
                    v = [Fraction(0)] * 8
                    v[i], v[j] = Fraction(si), Fraction(sj)
                    ambient.add(tuple(v))
    for signs in product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            ambient.add(tuple(Fraction(s, 2) for s in signs))
    assert len(ambient) == 240
    enumerated = {tuple(datum.simple_to_ambient(r)) for r in roots(E8)}
    assert enumerated == ambient


def test_leech_is_certified():
    lat = leech_lattice()
    assert lat.rank == 24
    assert lat.det == 1
    assert lat.signature() == (0, 24)
    assert roots(lat) == []


def test_membership():
    s3 = Sublattice(A2, ((3, 0), (0, 3)))
    assert membership(s3, (3, 0))
    assert not membership(s3, (1, 0))
    from k3lat.rootsys import t_sublattice

    t = t_sublattice(3)
    assert membership(t, (1, -1))  # alpha_1 - alpha_2
    assert not membership(t, (1, 0))
    with pytest.raises(ValueError):
        membership(s3, (1, 0, 0))


def test_short_vectors_match_naive():
    rng = random.Random(17)
    for _ in range(40):
        n = rng.randint(1, 3)
        lat = random_even_gram(rng, n)
        if lat.signature() != (n, 0):
            continue
        bound = 8
        got = {v for v, _ in short_vectors(lat, bound)}
        naive = set()
        rng_box = range(-6, 7)
        from itertools import product

        for vec in product(rng_box, repeat=n):
            if any(vec) and 0 < lat.norm(vec) <= bound:
                first = next(x for x in vec if x)
                naive.add(vec if first > 0 else tuple(-x for x in vec))
        assert got == naive


def test_rank_ell_bound():
    four = A2.direct_sum(A2)
    first = Sublattice(four, ((1, 0, 0, 0), (0, 1, 0, 0)))
    assert rank_ell_bound(four, first)
    with pytest.raises(ValueError):
        rank_ell_bound(A2, Sublattice(A2, ((3, 0), (0, 3))))
    rng = random.Random(23)
    for _ in range(60):
        k = rng.randint(1, 4)
        rows = ex.row_hnf(ex.to_mat([[rng.randint(-1, 1) for _ in range(8)]
                                     for _ in range(k)]))
        if not rows:
            continue
        sat, _ = saturate(E8, Sublattice(E8, rows))
        assert rank_ell_bound(E8, sat)


def test_index_and_sublattice_disc_relation(rng):
    for _ in range(150):
        n = rng.randint(1, 3)
        lat = random_even_gram(rng, n)
        while True:
            b = ex.to_mat([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
            if ex.det_int(b) != 0:
                break
        sub = Sublattice(lat, b)
        idx = sub.index()
        assert idx == abs(ex.det_int(b))
        assert abs(ex.det_int(sub.gram())) == idx * idx * abs(lat.det)


def test_complement_is_primitive_and_involutive(rng):
    for _ in range(40):
        k = rng.randint(1, 4)
        rows = ex.row_hnf(ex.to_mat([[rng.randint(-1, 1) for _ in range(8)]
                                     for _ in range(k)]))
        if not rows:
            continue
        sub = Sublattice(E8, rows)
        comp = orthogonal_complement(E8, sub)
        assert is_primitive(E8, comp)
        sat, _ = saturate(E8, sub)
        assert orthogonal_complement(E8, comp).hnf_basis() == sat.hnf_basis()
