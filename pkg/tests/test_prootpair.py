import math
import random
from fractions import Fraction

import pytest

from k3lat import _exact as ex
from k3lat.intlat import Sublattice, is_primitive, roots, saturate
from k3lat.prootpair import (
    IsometryGroup,
    classify,
    disc_action_nontrivial,
    fixed_sublattice,
    p_group_check,
    sharp,
    verdict,
)
from k3lat.rootsys import (
    Isometry,
    acts_trivially_on_disc,
    build,
    named_elements,
    t_sublattice,
    weights,
)


def cycle_isometry(n):
    cols = [tuple(1 if i == j + 1 else 0 for i in range(n)) for j in range(n - 1)]
    cols.append(tuple(-1 for _ in range(n)))
    return Isometry(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))


D4 = build("D4")
NM = named_elements(D4)


class TestSharp:
    def test_trivial_group_gives_p_r(self):
        s = sharp(D4, [], 3)
        assert s.hnf_basis() == tuple(tuple(3 if i == j else 0 for j in range(4))
                                      for i in range(4))

    def test_cycle_gives_t_sublattice(self):
        for p in (3, 5, 7):
            a = build(f"A{p-1}")
            s = sharp(a, [cycle_isometry(p - 1)], p)
            assert s.hnf_basis() == t_sublattice(p).hnf_basis()

    def test_gx_explicit_basis(self):
        s = sharp(D4, [NM["gx"]], 3)
        expected = ex.row_hnf(ex.to_mat(
            [(3, 0, 0, 0), (0, 3, 0, 0), (0, 0, 3, 0), (0, 0, 0, 3),
             (2, 1, 1, 0), (1, 0, 1, 1)]))
        assert s.hnf_basis() == expected

    def test_contains_pr_and_index_divides(self):
        rng = random.Random(3)
        grp = sorted(IsometryGroup(D4, (NM["g"], NM["x"])).closure_perms())
        for p in (3, 5):
            for perm in rng.sample(grp, 5):
                iso = D4.matrix_of_perm(perm)
                s = sharp(D4, [iso], p)
                for i in range(4):
                    v = tuple(p if j == i else 0 for j in range(4))
                    assert ex.in_row_span_int(s.hnf_basis(), v)
                idx = s.index()
                assert p ** 4 % idx == 0


class TestVerdict:
    def test_paper_cases(self):
        v = verdict(D4, [NM["gx"]], 3)
        assert v.is_pseudo and v.is_full and v.fixed_rank == 0
        v = verdict(D4, [NM["g"]], 3)
        assert not v.is_pseudo and v.witness_root is not None
        # alpha_2 itself lies in the sharp lattice of <g>
        assert ex.in_row_span_int(v.sharp_lattice.hnf_basis(), (0, 1, 0, 0))
        v = verdict(D4, [NM["x"]], 3)
        assert v.is_pseudo and not v.is_full and v.fixed_rank == 2
        v = verdict(D4, [NM["gx"]], 5)
        assert not v.is_pseudo

    def test_witness_is_a_root_in_sharp(self):
        v = verdict(D4, [NM["g"]], 3)
        assert v.witness_root in set(D4.roots)
        assert ex.in_row_span_int(v.sharp_lattice.hnf_basis(), v.witness_root)

    def test_transposition_on_a2_is_not_pseudo(self):
        # a reflection generates difference vectors 2*alpha, and 2 is a unit
        # mod p, so the root itself lands in the sharp lattice
        from k3lat.rootsys import reflection

        a2 = build("A2")
        s = reflection(a2, (1, 0))
        v = verdict(a2, [s], 3)
        assert not v.is_pseudo
        assert ex.in_row_span_int(v.sharp_lattice.hnf_basis(), (1, 0))


class TestFixed:
    def test_trivial_group(self):
        assert fixed_sublattice(D4, []).rank == 4

    def test_cycle_on_a2(self):
        assert fixed_sublattice(build("A2"), [cycle_isometry(2)]).rank == 0

    def test_e8_a_element(self):
        e8 = build("E8")
        a = named_elements(e8)["a"]
        assert fixed_sublattice(e8, [a]).rank == 4

    def test_fixed_is_saturated(self):
        f = fixed_sublattice(D4, [NM["x"]])
        assert is_primitive(D4.lattice(), f)


class TestDiscAction:
    def test_t_sublattice_witness(self):
        for p in (3, 5, 7, 11):
            n = p - 1
            g = cycle_isometry(n)
            nontrivial, x, diff = disc_action_nontrivial(t_sublattice(p), g)
            assert nontrivial
            ws = weights(build(f"A{n}"))
            x0 = tuple(sum(Fraction(w[j]) for w in ws) / p for j in range(n))
            d0 = tuple(u - v for u, v in zip(g.apply(x0), x0))
            assert d0 == tuple(-Fraction(v) for v in ws[0])

    def test_identity_trivial(self):
        sub = t_sublattice(3)
        ident = Isometry(ex.identity(2))
        assert disc_action_nontrivial(sub, ident)[0] is False

    def test_weyl_trivial_on_full_lattice(self):
        n = 4
        a = build(f"A{n}")
        g = cycle_isometry(n)
        full = Sublattice.full(a.lattice())
        assert disc_action_nontrivial(full, g)[0] is False

    def test_rejects_non_preserving(self):
        a2 = build("A2")
        line = Sublattice(a2.lattice(), ((1, 0),))
        with pytest.raises(ValueError):
            disc_action_nontrivial(line, cycle_isometry(2))


class TestClassify:
    def test_d4(self):
        for p in (3, 5, 7, 11):
            out = classify("D4", p)
            assert not out.partial
            fulls = out.full_pairs()
            if p == 3:
                assert fulls
                for e in fulls:
                    assert e.verdict.fixed_rank == 0
                    # order-3 elements of a full pair have no fixed vectors,
                    # the signature of the <gx> class
                    for g in e.generators:
                        if g.order() == 3:
                            assert fixed_sublattice(D4, [g]).rank == 0
            else:
                assert not fulls

    def test_d5_shapes(self):
        for p in (3, 5, 7):
            out = classify("D5", p)
            assert not out.full_pairs()
            for e in out.entries:
                assert e.order in (1, 2)
                if e.order == 2:
                    g = next(g for g in e.generators if not g.is_identity())
                    # single sign flip: fixed rank 4, determinant -1
                    assert fixed_sublattice(build("D5"), [g]).rank == 4

    def test_a_sweep_power_rule(self):
        for m in range(1, 8):
            for p in (3, 5, 7):
                out = classify(f"A{m}", p)
                found = bool(out.full_pairs())
                n = m + 1
                while n % p == 0:
                    n //= p
                assert found == (n == 1), (m, p)

    def test_a2_contains_the_cycle_class(self):
        out = classify("A2", 3)
        a2 = build("A2")
        cyc = verdict(a2, [cycle_isometry(2)], 3)
        assert cyc.is_full
        orders = sorted(e.order for e in out.full_pairs())
        assert 3 in orders

    def test_e6_has_no_full_pairs_at_five(self):
        # 5 divides |W(E6)| yet no full pair exists; exhaustive over all
        # 103680 isometries and every subgroup inside the good set
        out = classify("E6", 5)
        assert not out.partial
        assert not out.full_pairs()

    def test_scope_markers(self):
        assert classify("A9", 3).partial
        assert classify("E7", 3).partial
        out = classify("E8", 5)
        assert out.partial and len(out.full_pairs()) > 0
        assert not classify("E8", 3).full_pairs()

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            classify("D4", 4)
        with pytest.raises(ValueError):
            classify("D4", 2)


class TestPaperInvariants:
    def test_intersection_with_weyl_is_p_group(self):
        for label, ps in (("D4", (3, 5, 7, 11)), ("D5", (3, 5, 7)),
                          ("A2", (3,)), ("A3", (3,)), ("A4", (5,)), ("A6", (7,))):
            datum = build(label)
            for p in ps:
                for e in classify(label, p).entries:
                    assert p_group_check(datum, IsometryGroup(datum, e.generators), p)

    def test_type_a_full_pairs(self):
        # (m+1) divides |H ∩ W|, the Weyl part is fixed-point-free on the
        # m+1 permuted vectors, and (H ∩ W, R) is itself a full pair
        for m, p in ((2, 3), (4, 5), (6, 7)):
            datum = build(f"A{m}")
            for e in classify(f"A{m}", p).full_pairs():
                grp = IsometryGroup(datum, e.generators)
                w_part = [perm for perm in grp.closure_perms()
                          if acts_trivially_on_disc(datum, datum.matrix_of_perm(perm))]
                assert len(w_part) % (m + 1) == 0
                gens_w = [datum.matrix_of_perm(perm) for perm in w_part]
                vw = verdict(datum, gens_w, p)
                assert vw.is_pseudo and vw.is_full
                # fixed-point-freeness on the permuted basis: no eigenvalue-1
                # vector may project onto a coordinate vector; equivalent and
                # simpler, each nontrivial Weyl element has zero fixed rank
                # in the reflection representation plus the trivial line.
                for g in gens_w:
                    if not g.is_identity():
                        assert not _weyl_perm_has_fixed_point(datum, g, m)

    def test_coprime_pseudo_pairs_have_rootless_covariant(self):
        for label, p in (("D4", 5), ("D5", 3), ("A3", 3)):
            datum = build(label)
            for e in classify(label, p).entries:
                if math.gcd(e.order, p) != 1 or e.order == 1:
                    continue
                fixed = fixed_sublattice(datum, e.generators)
                from k3lat.intlat import orthogonal_complement

                cov = orthogonal_complement(datum.lattice(), fixed)
                if cov.rank:
                    assert not roots(cov.as_lattice())


def _weyl_perm_has_fixed_point(datum, iso, m):
    """Does the underlying permutation of the m+1 coordinate vectors fix one?"""
    ginv = ex.mat_inv(datum.gram)
    us = []
    for i in range(m + 1):
        pair = tuple((1 if j == i else 0) - (1 if j + 1 == i else 0) for j in range(m))
        us.append(ex.mat_vec(ginv, pair))
    for u in us:
        if iso.apply(u) == u:
            return True
    return False
