"""Shared helpers: random even Gram matrices and a brute-force
finite-quadratic-form isomorphism oracle used to cross-check the fast paths."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest

from k3lat import _exact as ex
from k3lat.intlat import IntegralLattice


def random_even_gram(rng: random.Random, n: int, spread: int = 2) -> IntegralLattice:
    while True:
        c = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        g = [[c[i][j] + c[j][i] for j in range(n)] for i in range(n)]
        gm = ex.to_mat(g)
        if ex.det_int(gm) != 0:
            return IntegralLattice(gm)


def unimodular_conjugate(rng: random.Random, lat: IntegralLattice) -> IntegralLattice:
    """The same lattice in a different basis."""
    n = lat.rank
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            f = rng.randint(-2, 2)
            for k in range(n):
                u[i][k] += f * u[j][k]
    um = ex.to_mat(u)
    return IntegralLattice(ex.mat_mul(ex.mat_mul(um, lat.gram), ex.transpose(um)))


def forms_isomorphic_bruteforce(data1, data2) -> bool:
    """Exact isomorphism test for small finite quadratic forms.

    Each argument is (orders, q_values, b_matrix) on a generating set, as
    produced by fqf.discriminant_form_values.  Exponential; small groups only.
    """
    orders1, q1, b1 = data1
    orders2, q2, b2 = data2
    if sorted(orders1) != sorted(orders2):
        return False
    if not orders1:
        return True
    total = 1
    for d in orders1:
        total *= d
    elems = list(product(*[range(d) for d in orders2]))

    def q_of(vec):
        val = Fraction(0)
        for i, a in enumerate(vec):
            val += a * a * Fraction(q2[i])
            for j in range(i + 1, len(vec)):
                val += 2 * a * vec[j] * Fraction(b2[i][j])
        return val % 2

    def b_of(u, v):
        # b(g, g) = q(g) mod 1 for the bilinear form of a quadratic form
        val = Fraction(0)
        for i, a in enumerate(u):
            for j, c in enumerate(v):
                if i == j:
                    val += a * c * Fraction(q2[i])
                else:
                    val += a * c * Fraction(b2[i][j])
        return val % 1

    def add(u, v):
        return tuple((a + c) % d for a, c, d in zip(u, v, orders2))

    def scale(u, k):
        return tuple((k * a) % d for a, d in zip(u, orders2))

    candidates = []
    for i, d in enumerate(orders1):
        cc = [e for e in elems
              if scale(e, d) == tuple(0 for _ in orders2) and q_of(e) == Fraction(q1[i]) % 2]
        candidates.append(cc)

    def backtrack(i, chosen):
        if i == len(orders1):
            span = {tuple(0 for _ in orders2)}
            for g, d in zip(chosen, orders1):
                layer = list(span)
                for k in range(1, d):
                    step = scale(g, k)
                    span.update(add(e, step) for e in layer)
            return len(span) == total
        for e in candidates[i]:
            ok = True
            for j in range(i):
                if b_of(e, chosen[j]) != Fraction(b1[i][j]) % 1:
                    ok = False
                    break
            if ok and backtrack(i + 1, chosen + [e]):
                return True
        return False

    return backtrack(0, [])


@pytest.fixture
def rng():
    return random.Random(1234)
