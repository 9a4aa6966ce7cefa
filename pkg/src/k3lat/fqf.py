"""Finite quadratic forms as multisets of prime-power Jordan components.

A component at an odd prime p is (p^k)^(eps*r).  A component at p = 2 is
either odd type (2^k)_t^(eps*r) with an oddity t mod 8, or even type
(2^k)_II^(eps*r).  Forms are computed from integer Gram matrices by exact
p-adic Gauss elimination, and compared up to isomorphism with exact
Gauss-sum fingerprints.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import _exact as ex
from .intlat import IntegralLattice, Sublattice, discriminant_group

TWO_EVEN = None  # oddity marker for even-type 2-adic components


@dataclass(frozen=True)
class JordanComponent:
    prime: int
    scale: int
    rank: int
    sign: int
    oddity: int | None = None

    def __post_init__(self):
        if self.scale < 1 or self.rank < 1:
            raise ValueError("scale and rank must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.prime == 2:
            if self.oddity is None:
                if self.rank % 2 != 0:
                    raise ValueError("even-type 2-adic component needs even rank")
            else:
                object.__setattr__(self, "oddity", self.oddity % 8)
                if _two_adic_units(self.rank, self.sign, self.oddity) is None:
                    raise ValueError(
                        f"no odd 2-adic component with rank {self.rank}, "
                        f"sign {self.sign:+d}, oddity {self.oddity}"
                    )
        else:
            if self.oddity is not None:
                raise ValueError("oddity only applies at the prime 2")

    @property
    def is_even_type(self) -> bool:
        return self.prime == 2 and self.oddity is None

    def group_order(self) -> int:
        return self.prime ** (self.scale * self.rank)


class FiniteQuadraticForm:
    """Ordered collection of Jordan components, one per (prime, scale)."""

    __slots__ = ("components",)

    def __init__(self, components=()):
        comps = tuple(sorted(components, key=lambda c: (c.prime, c.scale)))
        keys = [(c.prime, c.scale) for c in comps]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (prime, scale) components; use direct_sum")
        self.components = comps

    def __eq__(self, other):
        return isinstance(other, FiniteQuadraticForm) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"FiniteQuadraticForm({render_symbol(self)!r})"

    def is_trivial(self) -> bool:
        return not self.components

    def primes(self) -> tuple:
        return tuple(sorted({c.prime for c in self.components}))

    def p_part(self, p: int) -> "FiniteQuadraticForm":
        return FiniteQuadraticForm(tuple(c for c in self.components if c.prime == p))

    def away_part(self, p: int) -> "FiniteQuadraticForm":
        return FiniteQuadraticForm(tuple(c for c in self.components if c.prime != p))

    def group_order(self) -> int:
        n = 1
        for c in self.components:
            n *= c.group_order()
        return n

    def ell_p(self, p: int) -> int:
        return sum(c.rank for c in self.components if c.prime == p)

    def ell(self) -> int:
        return max((self.ell_p(p) for p in self.primes()), default=0)


def render_symbol(q: FiniteQuadraticForm) -> str:
    """Render in the symbol grammar; the empty form renders as "1"."""
    if q.is_trivial():
        return "1"
    parts = []
    for c in q.components:
        head = str(c.prime ** c.scale)
        sign = "+" if c.sign == 1 else "-"
        if c.prime == 2:
            t = "II" if c.oddity is None else str(c.oddity)
            parts.append(f"{head}_{t}^{sign}{c.rank}")
        else:
            parts.append(f"{head}^{sign}{c.rank}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# unit realizations


def _two_adic_units(rank: int, sign: int, oddity: int):
    """Odd residues mod 8 with the given count, trace and determinant class.

    Returns None when no such tuple exists (invalid component data).
    """
    if (oddity - rank) % 2 != 0:
        return None
    free = min(rank, 3)
    base = [1] * (rank - free)
    for tail in product((1, 3, 5, 7), repeat=free):
        units = base + list(tail)
        if sum(units) % 8 != oddity % 8:
            continue
        prod = 1
        for u in units:
            prod = prod * u % 8
        if (1 if prod in (1, 7) else -1) == sign:
            return tuple(units)
    return None


def _odd_unit_numerators(p: int, rank: int, sign: int) -> tuple:
    """Even integers c_i, prime to p, with product Legendre class == sign."""
    chi2 = ex.legendre(2, p)
    nonres = next(n for n in range(2, p) if ex.legendre(n, p) == -1)
    cs = [2] * (rank - 1)
    target = sign * chi2 ** (rank - 1)
    if chi2 == target:
        cs.append(2)
    else:
        cs.append(2 * nonres)
    return tuple(cs)


def _two_blocks(comp: JordanComponent):
    """Decompose a 2-adic component into 1-dim unit blocks and U/V blocks."""
    k = comp.scale
    if comp.is_even_type:
        b = 1 if comp.sign == -1 else 0
        a = comp.rank // 2 - b
        return [("U", k)] * a + [("V", k)] * b
    units = _two_adic_units(comp.rank, comp.sign, comp.oddity)
    return [("unit", k, u) for u in units]


def _block_values(block) -> list:
    """q-values (Fractions mod 2) over all elements of one block group."""
    kind = block[0]
    k = block[1]
    m = 1 << k
    if kind == "unit":
        u = block[2]
        return [Fraction(u * x * x, m) % 2 for x in range(m)]
    out = []
    for x in range(m):
        for y in range(m):
            if kind == "U":
                v = Fraction(2 * x * y, m)
            else:
                v = Fraction(2 * x * x + 2 * x * y + 2 * y * y, m)
            out.append(v % 2)
    return out


def _block_torsion_values(block, t: int) -> list:
    """q-values over the 2^t-torsion subgroup of one block group."""
    kind = block[0]
    k = block[1]
    tt = min(t, k)
    step = 1 << (k - tt)
    m = 1 << k
    rng = range(0, m, step)
    if kind == "unit":
        u = block[2]
        return [Fraction(u * x * x, m) % 2 for x in rng]
    out = []
    for x in rng:
        for y in rng:
            if kind == "U":
                v = Fraction(2 * x * y, m)
            else:
                v = Fraction(2 * x * x + 2 * x * y + 2 * y * y, m)
            out.append(v % 2)
    return out


# ---------------------------------------------------------------------------
# symbol computation (p-adic Jordan decomposition by exact elimination)


def _min_valuation_entry(a, idx, p):
    best = None
    where = None
    for pos_i, i in enumerate(idx):
        for j in idx[pos_i:]:
            x = a[i][j]
            if x != 0:
                v = ex.valuation(x, p)
                if best is None or v < best:
                    best, where = v, (i, j)
    return best, where


def _unit_mod8(x: Fraction) -> int:
    num, den = x.numerator, x.denominator
    return num * pow(den, -1, 8) % 8


def _jordan_odd(gram, p: int) -> dict:
    """scale -> list of Legendre classes of the diagonal units."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    idx = list(range(n))
    found: dict[int, list] = {}
    while idx:
        best, where = _min_valuation_entry(a, idx, p)
        i, j = where
        if i != j:
            diag = next(
                (t for t in idx if a[t][t] != 0 and ex.valuation(a[t][t], p) == best),
                None,
            )
            if diag is None:
                for t in idx:
                    a[i][t] += a[j][t]
                for t in idx:
                    a[t][i] += a[t][j]
                k = i
            else:
                k = diag
        else:
            k = i
        piv = a[k][k]
        v = ex.valuation(piv, p)
        u = ex.unit_part(piv, p)
        cls = ex.legendre(u.numerator % p, p) * ex.legendre(u.denominator % p, p)
        found.setdefault(v, []).append(cls)
        rest = [t for t in idx if t != k]
        for r in rest:
            f = a[r][k] / piv
            if f:
                for s in rest:
                    a[r][s] -= f * a[k][s]
        for r in rest:
            a[r][k] = Fraction(0)
            a[k][r] = Fraction(0)
        idx = rest
    return found


def _jordan_two(gram) -> dict:
    """scale -> {"units": [u mod 8, ...], "evens": ["U"|"V", ...]}."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    idx = list(range(n))
    found: dict[int, dict] = {}

    def bucket(v):
        return found.setdefault(v, {"units": [], "evens": []})

    while idx:
        best, where = _min_valuation_entry(a, idx, 2)
        i, j = where
        diag = next(
            (t for t in idx if a[t][t] != 0 and ex.valuation(a[t][t], 2) == best),
            None,
        )
        if diag is not None:
            k = diag
            piv = a[k][k]
            bucket(best)["units"].append(_unit_mod8(ex.unit_part(piv, 2)))
            rest = [t for t in idx if t != k]
            for r in rest:
                f = a[r][k] / piv
                if f:
                    for s in rest:
                        a[r][s] -= f * a[k][s]
            for r in rest:
                a[r][k] = Fraction(0)
                a[k][r] = Fraction(0)
            idx = rest
            continue
        # even 2x2 block on (i, j); here i != j and every diagonal is deeper
        det = a[i][i] * a[j][j] - a[i][j] * a[i][j]
        dcls = _unit_mod8(ex.unit_part(det, 2))
        kind = "U" if dcls == 7 else "V"
        bucket(best)["evens"].append(kind)
        rest = [t for t in idx if t not in (i, j)]
        bi = [[a[j][j] / det, -a[i][j] / det], [-a[i][j] / det, a[i][i] / det]]
        coeffs = {}
        for t in rest:
            lam = bi[0][0] * a[t][i] + bi[0][1] * a[t][j]
            mu = bi[1][0] * a[t][i] + bi[1][1] * a[t][j]
            coeffs[t] = (lam, mu)
        for t in rest:
            lam_t, mu_t = coeffs[t]
            for s in rest:
                a[t][s] -= lam_t * a[i][s] + mu_t * a[j][s]
        for t in rest:
            a[t][i] = a[t][j] = Fraction(0)
            a[i][t] = a[j][t] = Fraction(0)
        idx = rest
    # fuse mixed scales: an even block next to an odd unit diagonalizes
    for v, data in found.items():
        units, evens = data["units"], data["evens"]
        while evens and units:
            kind = evens.pop()
            u = units.pop()
            if kind == "U":
                units.extend([u, (-u) % 8, u])
            else:
                inv_u2 = pow((u + 2) % 8, -1, 8)
                t2 = (2 * u + 3) * inv_u2 % 8
                t3 = 3 * u * pow((2 * u + 3) % 8, -1, 8) % 8
                units.extend([(u + 2) % 8, t2, t3])
    return found


def symbol_of(lat: IntegralLattice) -> FiniteQuadraticForm:
    """Conway-Sloane symbol of an even lattice (empty for unimodular)."""
    det = abs(lat.det) if lat.rank else 1
    comps = []
    for p in sorted(_prime_factors(det)):
        if p == 2:
            for v, data in sorted(_jordan_two(lat.gram).items()):
                if v == 0:
                    continue
                units, evens = data["units"], data["evens"]
                if units:
                    rank = len(units)
                    t = sum(units) % 8
                    prod = 1
                    for u in units:
                        prod = prod * u % 8
                    sign = 1 if prod in (1, 7) else -1
                    comps.append(JordanComponent(2, v, rank, sign, t))
                elif evens:
                    rank = 2 * len(evens)
                    sign = -1 if evens.count("V") % 2 else 1
                    comps.append(JordanComponent(2, v, rank, sign, TWO_EVEN))
        else:
            for v, classes in sorted(_jordan_odd(lat.gram, p).items()):
                if v == 0:
                    continue
                sign = 1
                for c in classes:
                    sign *= c
                comps.append(JordanComponent(p, v, len(classes), sign))
    return FiniteQuadraticForm(comps)


def _prime_factors(n: int) -> set:
    n = abs(n)
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


# ---------------------------------------------------------------------------
# arithmetic on forms


def direct_sum(q1: FiniteQuadraticForm, q2: FiniteQuadraticForm) -> FiniteQuadraticForm:
    merged: dict[tuple, JordanComponent] = {(c.prime, c.scale): c for c in q1.components}
    for c in q2.components:
        key = (c.prime, c.scale)
        if key not in merged:
            merged[key] = c
            continue
        old = merged[key]
        rank = old.rank + c.rank
        sign = old.sign * c.sign
        if c.prime != 2:
            merged[key] = JordanComponent(c.prime, c.scale, rank, sign)
        elif old.oddity is None and c.oddity is None:
            merged[key] = JordanComponent(2, c.scale, rank, sign, TWO_EVEN)
        else:
            t = ((old.oddity or 0) + (c.oddity or 0)) % 8
            merged[key] = JordanComponent(2, c.scale, rank, sign, t)
    return FiniteQuadraticForm(tuple(merged.values()))


def negate(q: FiniteQuadraticForm) -> FiniteQuadraticForm:
    out = []
    for c in q.components:
        if c.prime == 2:
            t = None if c.oddity is None else (-c.oddity) % 8
            out.append(JordanComponent(2, c.scale, c.rank, c.sign, t))
        else:
            sign = c.sign * ex.legendre(-1, c.prime) ** c.rank
            out.append(JordanComponent(c.prime, c.scale, c.rank, sign))
    return FiniteQuadraticForm(tuple(out))


def _tau_odd_rank1(p: int, k: int, cls: int) -> int:
    """Signature mod 8 of a rank-1 component (p^k)^cls at odd p."""
    u = 1 if cls == 1 else next(n for n in range(2, p) if ex.legendre(n, p) == -1)
    pk = p ** k
    a = u * (pk + 1) // 2
    tau = 0 if pk % 4 == 1 else 2
    if k % 2 == 1 and ex.legendre(a, p) == -1:
        tau += 4
    return tau % 8


def signature_mod8(q: FiniteQuadraticForm) -> int:
    """tau(q): the signature of any even lattice with this form, mod 8."""
    total = 0
    for c in q.components:
        if c.prime == 2:
            t = 0 if c.oddity is None else c.oddity
            total += t + (4 if (c.scale % 2 == 1 and c.sign == -1) else 0)
        else:
            plus = _tau_odd_rank1(c.prime, c.scale, 1)
            if c.sign == 1:
                total += c.rank * plus
            else:
                total += (c.rank - 1) * plus + _tau_odd_rank1(c.prime, c.scale, -1)
    return total % 8


def _component_value_table(comp: JordanComponent) -> list:
    """q-values over all elements of the component's group (test-scale only)."""
    p, k, r = comp.prime, comp.scale, comp.rank
    if p == 2:
        tables = [_block_values(b) for b in _two_blocks(comp)]
    else:
        pk = p ** k
        cs = _odd_unit_numerators(p, r, comp.sign)
        tables = [[Fraction(c * x * x, pk) % 2 for x in range(pk)] for c in cs]
    values = [Fraction(0)]
    for t in tables:
        values = [(a + b) % 2 for a in values for b in t]
    return values


def brute_force_tau(q: FiniteQuadraticForm, limit: int = 10 ** 5) -> int:
    """tau(q) via the explicit Gauss sum over all group elements.

    Test oracle: the only floating-point computation in the package.
    """
    order = q.group_order()
    if order > limit:
        raise ValueError(f"group too large for brute force ({order} > {limit})")
    acc = [Fraction(0)]
    for comp in q.components:
        table = _component_value_table(comp)
        acc = [(a + b) % 2 for a in acc for b in table]
    s = sum(cmath.exp(1j * cmath.pi * float(v)) for v in acc)
    root = math.sqrt(order)
    for tau in range(8):
        if abs(s - root * cmath.exp(2j * cmath.pi * tau / 8)) < 1e-6 * root:
            return tau
    raise ArithmeticError("Gauss sum does not line up with any signature class")


# ---------------------------------------------------------------------------
# isomorphism via exact Gauss-sum fingerprints


def _zeta_dim(forms) -> int:
    kmax = 1
    for q in forms:
        for c in q.components:
            if c.prime == 2:
                kmax = max(kmax, c.scale)
    return 1 << (kmax + 1)  # dimension of Z[zeta], zeta of order 2*dim


def _zeta_add(vec, turns: Fraction, count: int = 1):
    dim = len(vec)
    idx = turns * 2 * dim
    if idx.denominator != 1:
        raise ValueError("phase outside the cyclotomic grid")
    idx = int(idx) % (2 * dim)
    if idx >= dim:
        vec[idx - dim] -= count
    else:
        vec[idx] += count


def _zeta_mul(a, b):
    dim = len(a)
    out = [0] * dim
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    k = i + j
                    if k >= dim:
                        out[k - dim] -= x * y
                    else:
                        out[k] += x * y
    return out


def _gauss_vector(values, mult: int, dim: int):
    vec = [0] * dim
    for v in values:
        _zeta_add(vec, (Fraction(mult) * v / 2) % 1)
    return vec


def _two_part_fingerprint(q: FiniteQuadraticForm, dim: int):
    comps = [c for c in q.components if c.prime == 2]
    ranks = tuple(sorted((c.scale, c.rank) for c in comps))
    blocks = [b for c in comps for b in _two_blocks(c)]
    kmax = max((c.scale for c in comps), default=0)
    sums = []
    for j in range(kmax + 2):
        acc = [0] * dim
        acc[0] = 1
        for b in blocks:
            acc = _zeta_mul(acc, _gauss_vector(_block_values(b), 1 << j, dim))
        sums.append(tuple(acc))
    for t in range(1, kmax + 1):
        acc = [0] * dim
        acc[0] = 1
        for b in blocks:
            acc = _zeta_mul(acc, _gauss_vector(_block_torsion_values(b, t), 1, dim))
        sums.append(tuple(acc))
    return ranks, tuple(sums)


def isomorphic(q1: FiniteQuadraticForm, q2: FiniteQuadraticForm) -> bool:
    """Are the two forms isomorphic as finite quadratic forms?"""
    if q1.components == q2.components:
        return True
    odd1 = {(c.prime, c.scale): (c.rank, c.sign) for c in q1.components if c.prime != 2}
    odd2 = {(c.prime, c.scale): (c.rank, c.sign) for c in q2.components if c.prime != 2}
    if odd1 != odd2:
        return False
    two1 = q1.p_part(2)
    two2 = q2.p_part(2)
    if two1.components == two2.components:
        return True
    dim = _zeta_dim((two1, two2))
    return _two_part_fingerprint(two1, dim) == _two_part_fingerprint(two2, dim)


# ---------------------------------------------------------------------------
# lattice realization of p-parts, overlattices


def _realize_p_part(q: FiniteQuadraticForm, p: int):
    """Even diagonal lattice whose symbol has the given odd-p part.

    Returns (lattice, moduli, coeffs): generator i of the discriminant p-part
    has order moduli[i] and q-value coeffs[i]/moduli[i] mod 2.
    """
    if p == 2:
        raise ValueError("only odd p is realized diagonally")
    entries = []
    moduli = []
    coeffs = []
    for c in q.components:
        if c.prime != p:
            continue
        pk = p ** c.scale
        for cu in _odd_unit_numerators(p, c.rank, c.sign):
            entries.append(cu * pk)
            moduli.append(pk)
            coeffs.append(cu)
    gram = tuple(tuple(entries[i] if i == j else 0 for j in range(len(entries)))
                 for i in range(len(entries)))
    return IntegralLattice(gram), tuple(moduli), tuple(coeffs)


def _qvalue(moduli, coeffs, elem) -> Fraction:
    total = Fraction(0)
    for m, c, x in zip(moduli, coeffs, elem):
        total += Fraction(c * x * x, m)
    return total % 2


def _elem_add(moduli, a, b):
    return tuple((x + y) % m for m, x, y in zip(moduli, a, b))


def _elem_scale(moduli, a, k):
    return tuple((k * x) % m for m, x in zip(moduli, a))


def _elem_order(moduli, a) -> int:
    n = 1
    for m, x in zip(moduli, a):
        if x:
            g = math.gcd(x, m)
            n = n * (m // g) // math.gcd(n, m // g)
    return n


def _subgroup_span(moduli, gens):
    """All elements of the subgroup generated by gens (small groups only)."""
    zero = tuple(0 for _ in moduli)
    elems = {zero}
    for g in gens:
        k = _elem_order(moduli, g)
        layer = list(elems)
        for i in range(1, k):
            step = _elem_scale(moduli, g, i)
            elems.update(_elem_add(moduli, e, step) for e in layer)
    return elems


def _elementary_subspace_bases(p: int, n: int, dim: int):
    """Reduced-echelon bases of dim-dimensional subspaces of F_p^n."""
    from itertools import combinations

    for pivots in combinations(range(n), dim):
        slots = []
        for r, piv in enumerate(pivots):
            slots.extend((r, c) for c in range(n)
                         if c > piv and c not in pivots)
        for fill in product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(dim)]
            for r, piv in enumerate(pivots):
                rows[r][piv] = 1
            for (r, c), v in zip(slots, fill):
                rows[r][c] = v
            yield [tuple(r) for r in rows]


class EnumerationCapExceeded(RuntimeError):
    pass


def _subgroups_up_to(moduli, max_order: int, cap: int = 500000):
    """Subgroups of order <= max_order of the finite abelian group with the
    given cyclic moduli, yielded lazily as (frozenset of elements, basis),
    trivial subgroup first, then by increasing dimension."""
    zero = tuple(0 for _ in moduli)
    yield frozenset([zero]), []
    count = 0
    if moduli and all(m == moduli[0] for m in moduli) and _is_prime(moduli[0]):
        # elementary abelian: enumerate subspaces via echelon bases
        p = moduli[0]
        n = len(moduli)
        dim = 1
        while dim <= n and p ** dim <= max_order:
            for basis in _elementary_subspace_bases(p, n, dim):
                elems = _subgroup_span(moduli, basis)
                count += 1
                if count > cap:
                    raise EnumerationCapExceeded("subgroup enumeration cap exceeded")
                yield frozenset(elems), basis
            dim += 1
        return
    all_elems = [e for e in product(*[range(m) for m in moduli])]
    seen = {frozenset([zero])}
    frontier = [(frozenset([zero]), [])]
    while frontier:
        nxt = []
        for elems, gens in frontier:
            for g in all_elems:
                if g in elems:
                    continue
                new = _subgroup_span(moduli, gens + [g])
                if len(new) > max_order:
                    continue
                key = frozenset(new)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((key, gens + [g]))
                count += 1
                if count > cap:
                    raise EnumerationCapExceeded("subgroup enumeration cap exceeded")
                yield key, gens + [g]
        frontier = nxt


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _isotropic_subgroups(moduli, coeffs, max_order, s_coords, d_coords,
                         enforce_s, enforce_d):
    """Isotropic subgroups H; optionally H ∩ (S block) = 0, H ∩ (D block) = 0.

    An element lies in the S block iff its D coordinates all vanish, and vice
    versa.  Yields (order, generator lifts as coefficient tuples).
    """
    for elems, gens in _subgroups_up_to(moduli, max_order):
        ok = True
        for e in elems:
            if any(e):
                if _qvalue(moduli, coeffs, e) != 0:
                    ok = False
                    break
                if enforce_s and all(e[i] == 0 for i in d_coords):
                    ok = False  # nonzero element inside the S block
                    break
                if enforce_d and all(e[i] == 0 for i in s_coords):
                    ok = False
                    break
        if ok:
            yield len(elems), gens


def _bvalue(moduli, coeffs, x, y) -> Fraction:
    total = Fraction(0)
    for m, c, a, b in zip(moduli, coeffs, x, y):
        total += Fraction(c * a * b, m)
    return total % 1


def _graph_isotropic_subgroups(mod_s, coef_s, mod_d, coef_d, max_order,
                               require_d_trivial):
    """Isotropic subgroups H of A_S + A_D with H ∩ A_S = 0.

    Since A_D is elementary abelian, any such H is the graph of a
    homomorphism psi from a subgroup of A_D into the p-torsion of A_S.
    require_d_trivial additionally forces psi injective (H ∩ A_D = 0).
    Yields (order, generator tuples in combined coordinates).
    """
    p = mod_d[0] if mod_d else 2
    # p-torsion elements of A_S, grouped by q-value
    tor = []
    for e in product(*[range(0, m, m // p) if m % p == 0 else (0,)
                       for m in mod_s]):
        tor.append(e)
    by_value: dict = {}
    for s in tor:
        by_value.setdefault(_qvalue(mod_s, coef_s, s) % 2, []).append(s)
    zero_s = tuple(0 for _ in mod_s)

    for elems_d, gens_d in _subgroups_up_to(mod_d, max_order):
        if len(elems_d) == 1:
            yield 1, []
            continue
        targets = [(-_qvalue(mod_d, coef_d, g)) % 2 for g in gens_d]
        if any(t not in by_value for t in targets):
            continue

        def backtrack(i, chosen):
            if i == len(gens_d):
                if require_d_trivial:
                    # psi injective: no nonzero combination maps to zero
                    lam_range = range(p)
                    for lams in product(lam_range, repeat=len(gens_d)):
                        if not any(lams):
                            continue
                        img = zero_s
                        for lam, s in zip(lams, chosen):
                            img = _elem_add(mod_s, img,
                                            _elem_scale(mod_s, s, lam))
                        if img == zero_s:
                            return
                yield [s + d for s, d in zip(chosen, gens_d)]
                return
            for s in by_value[targets[i]]:
                ok = True
                for j in range(i):
                    if (_bvalue(mod_s, coef_s, s, chosen[j])
                            + _bvalue(mod_d, coef_d, gens_d[i], gens_d[j])) % 1 != 0:
                        ok = False
                        break
                if ok:
                    yield from backtrack(i + 1, chosen + [s])

        for combined_gens in backtrack(0, []):
            yield len(elems_d), combined_gens


def overlattice_candidates(q: FiniteQuadraticForm, p: int, max_order: int,
                           s_form: FiniteQuadraticForm | None = None,
                           d_form: FiniteQuadraticForm | None = None,
                           enforce_s: bool = True, enforce_d: bool = True):
    """Forms induced on H-perp/H for isotropic H in the p-part of q.

    When s_form/d_form are given (with direct_sum(s,d) == q at p), subgroups
    meeting an enforced distinguished block are discarded.  Yields (|H|, form).
    """
    if p == 2:
        raise ValueError("only odd p is supported")
    if s_form is not None or d_form is not None:
        sp = (s_form or FiniteQuadraticForm()).p_part(p)
        dp = (d_form or FiniteQuadraticForm()).p_part(p)
        if direct_sum(sp, dp).components != q.p_part(p).components:
            raise ValueError("constraints do not assemble to the p-part of q")
        lat_s, mod_s, coef_s = _realize_p_part(sp, p)
        lat_d, mod_d, coef_d = _realize_p_part(dp, p)
        lat = lat_s.direct_sum(lat_d)
        moduli = mod_s + mod_d
        coeffs = coef_s + coef_d
        s_coords = tuple(range(len(mod_s)))
        d_coords = tuple(range(len(mod_s), len(moduli)))
    else:
        lat, moduli, coeffs = _realize_p_part(q.p_part(p), p)
        s_coords = d_coords = ()
        enforce_s = enforce_d = False
    away = q.away_part(p)
    if not moduli:
        yield 1, q
        return
    if (s_coords or d_coords) and enforce_s:
        # graph parametrization over the (small, elementary) D block
        subgroup_iter = _graph_isotropic_subgroups(
            mod_s, coef_s, mod_d, coef_d, max_order, enforce_d)
    else:
        subgroup_iter = _isotropic_subgroups(
            moduli, coeffs, max_order, s_coords, d_coords,
            enforce_s and bool(s_coords or d_coords),
            enforce_d and bool(s_coords or d_coords))
    for order, gens in subgroup_iter:
        if order == 1:
            yield 1, q
            continue
        lifts = []
        for g in gens:
            lifts.append(tuple(Fraction(x, m) for x, m in zip(g, moduli)))
        scale = 1
        for m in moduli:
            scale = scale * m // math.gcd(scale, m)
        rows = [tuple(scale if i == j else 0 for j in range(len(moduli)))
                for i in range(len(moduli))]
        for lift in lifts:
            rows.append(tuple(int(x * scale) for x in lift))
        basis = ex.row_hnf(ex.to_mat(rows))
        bfrac = tuple(tuple(Fraction(x, scale) for x in row) for row in basis)
        gram = ex.mat_mul(ex.mat_mul(bfrac, lat.gram), ex.transpose(bfrac))
        gint = []
        for row in gram:
            r = []
            for x in row:
                if Fraction(x).denominator != 1:
                    raise ArithmeticError("overlattice Gram not integral")
                r.append(int(x))
            gint.append(tuple(r))
        over = IntegralLattice(ex.to_mat(gint))
        induced = symbol_of(over).p_part(p)
        yield order, direct_sum(away, induced)


def overlattice_forms(q: FiniteQuadraticForm, p: int, max_order: int,
                      s_form: FiniteQuadraticForm | None = None,
                      d_form: FiniteQuadraticForm | None = None,
                      enforce_s: bool = True, enforce_d: bool = True) -> list:
    """Deduplicated forms from overlattice_candidates."""
    out = []
    for _, form in overlattice_candidates(q, p, max_order, s_form, d_form,
                                          enforce_s, enforce_d):
        if not any(isomorphic(form, f) for f in out):
            out.append(form)
    return out


# ---------------------------------------------------------------------------
# Nikulin existence


def _det_unit_class_two(q2: FiniteQuadraticForm) -> int:
    """Determinant unit class mod 8 of the canonical realization of a 2-part."""
    prod = 1
    for c in q2.components:
        for b in _two_blocks(c):
            if b[0] == "unit":
                prod = prod * b[2] % 8
            elif b[0] == "U":
                prod = prod * 7 % 8
            else:
                prod = prod * 3 % 8
    return prod


def _two_reachable_det_classes(q2: FiniteQuadraticForm) -> set:
    """Unit classes mod 8 of dets of minimal-rank 2-adic lattices realizing q2."""
    comps = list(q2.components)
    if not comps:
        return {1}
    dim = _zeta_dim((q2,))
    base_fp = _two_part_fingerprint(q2, dim)
    classes = set()
    for flips in product((0, 1), repeat=len(comps)):
        variant = []
        for c, f in zip(comps, flips):
            if not f:
                variant.append(c)
            elif c.oddity is None:
                variant.append(JordanComponent(2, c.scale, c.rank, -c.sign, TWO_EVEN))
            else:
                variant.append(JordanComponent(2, c.scale, c.rank, -c.sign,
                                               (c.oddity + 4) % 8))
        vform = FiniteQuadraticForm(tuple(variant))
        if _two_part_fingerprint(vform, dim) == base_fp:
            classes.add(_det_unit_class_two(vform))
    return classes


def nikulin_exists(sig_plus: int, sig_minus: int, q: FiniteQuadraticForm) -> bool:
    """Does an even lattice with signature (sig_plus, sig_minus) and form q exist?"""
    if sig_plus < 0 or sig_minus < 0:
        return False
    n = sig_plus + sig_minus
    if n == 0:
        return q.is_trivial()
    if signature_mod8(q) != (sig_plus - sig_minus) % 8:
        return False
    if n < q.ell():
        return False
    order = q.group_order()
    det = (-1) ** sig_minus * order
    for p in q.primes():
        if p == 2:
            continue
        if n == q.ell_p(p):
            w = det
            while w % p == 0:
                w //= p
            target = 1
            for c in q.components:
                if c.prime == p:
                    target *= c.sign
            if ex.legendre(w % p, p) != target:
                return False
    if 2 in q.primes() and n == q.ell_p(2):
        two = q.p_part(2)
        has_scale1_odd = any(c.scale == 1 and c.oddity is not None
                             for c in two.components)
        if not has_scale1_odd:
            w = det
            while w % 2 == 0:
                w //= 2
            if w % 8 not in _two_reachable_det_classes(two):
                return False
    return True


def form_of_sublattice(sub: Sublattice) -> FiniteQuadraticForm:
    return symbol_of(sub.as_lattice())


def discriminant_form_values(lat: IntegralLattice):
    """(orders, q-values, bilinear matrix) of A_L on its SNF generators."""
    disc = discriminant_group(lat)
    lifts = disc.generator_lifts
    g = lat.gram
    qv = []
    bv = []
    for v in lifts:
        gv = ex.mat_vec(g, v)
        qv.append(ex.dot(v, gv) % 2)
    for v in lifts:
        row = []
        gv = ex.mat_vec(g, v)
        for w in lifts:
            row.append(ex.dot(w, gv) % 1)
        bv.append(tuple(row))
    return disc.cyclic_orders, tuple(qv), tuple(bv)
