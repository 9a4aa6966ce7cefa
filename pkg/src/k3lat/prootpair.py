"""(Pseudo) p-root pairs: sharp sublattices, verdicts, and classification.

For a finite group H acting on a root lattice R and an odd prime p, the sharp
sublattice is generated by pR together with all difference vectors g*x - x.
The pair is pseudo when that sublattice is rootless, and full when in
addition the fixed sublattice is zero.  Pseudo-ness is inherited by
subgroups, which is what makes exhaustive subgroup classification feasible:
the search only ever grows subgroups all of whose cyclic pieces are already
pseudo.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from . import _exact as ex
from .intlat import Sublattice
from .rootsys import (
    Isometry,
    IsometryGroup,
    RootDatum,
    acts_trivially_on_disc,
    build,
    named_elements,
    parse_label,
)

FULL_SCOPE_CAP = 110000  # admits Aut(E6), order 103680
SUBGROUP_ELEMENT_CAP = 10 ** 4


class ScopeExceeded(RuntimeError):
    pass


def _is_odd_prime(p: int) -> bool:
    return p >= 3 and all(p % d for d in range(2, int(p ** 0.5) + 1))


# ---------------------------------------------------------------------------
# sharp sublattice and verdicts


def _gen_matrices(group) -> list:
    if isinstance(group, IsometryGroup):
        return [g.matrix for g in group.generators]
    out = []
    for g in group:
        out.append(g.matrix if isinstance(g, Isometry) else ex.to_mat(g))
    return out


def sharp(datum: RootDatum, group, p: int) -> Sublattice:
    """The sublattice generated by pR and all H-difference vectors, in HNF."""
    if not _is_odd_prime(p):
        raise ValueError("p must be an odd prime")
    n = datum.rank
    gens = _gen_matrices(group)
    rows = [tuple(p if j == i else 0 for j in range(n)) for i in range(n)]
    for m in gens:
        mt = ex.transpose(m)
        for j in range(n):
            row = tuple(mt[j][i] - (1 if i == j else 0) for i in range(n))
            rows.append(row)
    basis = ex.row_hnf(ex.to_mat(rows))
    # close under the group action
    while True:
        extra = list(basis)
        for m in gens:
            mt = ex.transpose(m)
            for row in basis:
                extra.append(ex.vec_mat(row, mt))
        new_basis = ex.row_hnf(ex.to_mat(extra))
        if new_basis == basis:
            break
        basis = new_basis
    return Sublattice(datum.lattice(), basis)


def _modp_echelon(rows, p):
    """Row echelon basis mod p; returns list of pivot rows."""
    mat = [list(r % p for r in row) for row in rows]
    basis = []
    pivots = []
    for row in mat:
        row = row[:]
        for prow, pc in zip(basis, pivots):
            if row[pc]:
                f = row[pc] * pow(prow[pc], -1, p) % p
                row = [(a - f * b) % p for a, b in zip(row, prow)]
        nz = next((i for i, a in enumerate(row) if a), None)
        if nz is not None:
            basis.append(row)
            pivots.append(nz)
    return basis, pivots


def _modp_in_span(basis, pivots, vec, p):
    row = [x % p for x in vec]
    for prow, pc in zip(basis, pivots):
        if row[pc]:
            f = row[pc] * pow(prow[pc], -1, p) % p
            row = [(a - f * b) % p for a, b in zip(row, prow)]
    return not any(row)


def _sharp_span_modp(datum: RootDatum, gen_mats, p):
    """Echelonized spanning set of sharp/pR inside R/pR."""
    n = datum.rank
    rows = []
    for m in gen_mats:
        mt = ex.transpose(m)
        for j in range(n):
            rows.append(tuple(mt[j][i] - (1 if i == j else 0) for i in range(n)))
    basis, pivots = _modp_echelon(rows, p)
    if len(gen_mats) <= 1:
        # (g^k - 1)R = (g - 1)(1 + g + ... + g^(k-1))R lies in (g - 1)R,
        # so cyclic groups need no closure pass
        return basis, pivots
    while True:
        extra = [tuple(r) for r in basis]
        for m in gen_mats:
            mt = ex.transpose(m)
            for row in basis:
                extra.append(ex.vec_mat(tuple(row), mt))
        nb, np_ = _modp_echelon(extra, p)
        if len(nb) == len(basis):
            return nb, np_
        basis, pivots = nb, np_


@dataclass(frozen=True)
class ProotVerdict:
    is_pseudo: bool
    is_full: bool
    sharp_lattice: Sublattice
    witness_root: tuple | None
    fixed_rank: int
    sharp_index: int

    def as_dict(self) -> dict:
        return {
            "pseudo": self.is_pseudo,
            "full": self.is_full,
            "sharp_index": self.sharp_index,
            "witness_root": list(self.witness_root) if self.witness_root else None,
            "fixed_rank": self.fixed_rank,
        }


def fixed_sublattice(datum: RootDatum, group) -> Sublattice:
    """Saturated sublattice of vectors fixed by every generator."""
    gens = _gen_matrices(group)
    n = datum.rank
    if not gens:
        return Sublattice.full(datum.lattice())
    stacked = []
    for m in gens:
        for i in range(n):
            stacked.append(tuple(m[i][j] - (1 if i == j else 0) for j in range(n)))
    ker = ex.kernel_int(ex.to_mat(stacked))
    return Sublattice(datum.lattice(), ker)


def verdict(datum: RootDatum, group, p: int) -> ProotVerdict:
    """Full pseudo/full decision with sharp lattice, witness and fixed rank."""
    gens = _gen_matrices(group)
    basis, pivots = _sharp_span_modp(datum, gens, p)
    witness = None
    for r in datum.roots:
        if _modp_in_span(basis, pivots, r, p):
            witness = r
            break
    sharp_lat = sharp(datum, group, p)
    fixed = fixed_sublattice(datum, group)
    is_pseudo = witness is None
    return ProotVerdict(
        is_pseudo=is_pseudo,
        is_full=is_pseudo and fixed.rank == 0,
        sharp_lattice=sharp_lat,
        witness_root=witness,
        fixed_rank=fixed.rank,
        sharp_index=p ** (datum.rank - len(basis)),
    )


def disc_action_nontrivial(sub: Sublattice, iso: Isometry):
    """Does the isometry act nontrivially on the discriminant group of sub?

    Returns (nontrivial, witness_lift, difference) with vectors in ambient
    coordinates; raises if the isometry does not preserve the sublattice.
    """
    amb = sub.ambient
    m = iso.matrix
    for row in sub.basis_matrix:
        img = ex.mat_vec(m, row)
        if not _rational_in_sublattice(sub, img):
            raise ValueError("isometry does not preserve the sublattice")
    lat = sub.as_lattice()
    from .intlat import discriminant_group

    disc = discriminant_group(lat)
    for lift in disc.generator_lifts:
        x = ex.vec_mat(lift, sub.basis_matrix)  # ambient coordinates
        diff = tuple(a - b for a, b in zip(iso.apply(x), x))
        if not _rational_in_sublattice(sub, diff):
            return True, x, diff
    return False, None, None


def _rational_in_sublattice(sub: Sublattice, vec) -> bool:
    """Is a rational ambient vector an integer combination of the basis rows?"""
    b = sub.basis_matrix
    if not b:
        return all(x == 0 for x in vec)
    bt = ex.transpose(b)
    gram = ex.mat_mul(b, bt)
    rhs = tuple(sum(Fraction(x) * Fraction(y) for x, y in zip(vec, col))
                for col in b)
    try:
        coeffs = ex.solve_unique(gram, rhs)
    except ZeroDivisionError:
        return False
    recon = ex.vec_mat(coeffs, b)
    if tuple(recon) != tuple(Fraction(x) for x in vec):
        return False
    return all(c.denominator == 1 for c in coeffs)


def p_group_check(datum: RootDatum, group, p: int,
                  cap: int = SUBGROUP_ELEMENT_CAP) -> bool:
    """Is H intersect W(R) a p-group?  (H given by generators.)"""
    grp = group if isinstance(group, IsometryGroup) else IsometryGroup(datum, group)
    perms = grp.closure_perms(cap)
    w_order = 0
    for perm in perms:
        iso = datum.matrix_of_perm(perm)
        if acts_trivially_on_disc(datum, iso):
            w_order += 1
    while w_order % p == 0:
        w_order //= p
    return w_order == 1


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClassifyEntry:
    generators: tuple  # of Isometry
    order: int
    verdict: ProotVerdict


@dataclass(frozen=True)
class ClassifyResult:
    datum_label: str
    p: int
    entries: tuple  # pseudo pairs up to conjugacy (full pairs flagged in verdict)
    partial: bool
    note: str

    def full_pairs(self):
        return tuple(e for e in self.entries if e.verdict.is_full)


class _PermUniverse:
    """Group elements as root permutations with byte keys (D and E types)."""

    def __init__(self, datum, group: IsometryGroup):
        self.datum = datum
        self.elements = sorted(group.closure_perms())
        self.identity = bytes(range(len(datum.roots)))
        self.conj_gens = [datum.perm_of(g) for g in group.generators]

    def mul(self, a, b):
        return bytes(a[x] for x in b)

    def inv(self, a):
        out = [0] * len(a)
        for i, x in enumerate(a):
            out[x] = i
        return bytes(out)

    def matrix(self, a) -> Isometry:
        return self.datum.matrix_of_perm(a)

    def class_key(self, a):
        return a  # no class shortcut: scan per element


class _SignedSymUniverse:
    """Aut(A_m) = S_{m+1} x {+-1}; elements are (perm tuple, sign)."""

    def __init__(self, datum):
        self.datum = datum
        _, m = parse_label(datum.label)
        self.n = m + 1
        self.identity = (tuple(range(self.n)), 1)
        pts = tuple(range(self.n))
        self.elements = [(w, e) for w in permutations(pts)
                         for e in ((1, -1) if m >= 2 else (1,))]
        gens = [(tuple([1, 0] + list(range(2, self.n))), 1)]
        if self.n > 2:
            gens.append((tuple(list(range(1, self.n)) + [0]), 1))
        if m >= 2:
            gens.append((tuple(range(self.n)), -1))
        self.conj_gens = gens

    def mul(self, a, b):
        wa, ea = a
        wb, eb = b
        return (tuple(wa[x] for x in wb), ea * eb)

    def inv(self, a):
        w, e = a
        out = [0] * self.n
        for i, x in enumerate(w):
            out[x] = i
        return (tuple(out), e)

    def matrix(self, a) -> Isometry:
        w, e = a
        m = self.n - 1
        cols = []
        for j in range(m):
            vec = [0] * m
            x, y = w[j], w[j + 1]
            if x < y:
                for k in range(x, y):
                    vec[k] = e
            else:
                for k in range(y, x):
                    vec[k] = -e
            cols.append(tuple(vec))
        return Isometry(tuple(tuple(cols[j][i] for j in range(m)) for i in range(m)))

    def class_key(self, a):
        w, e = a
        seen = [False] * self.n
        lens = []
        for i in range(self.n):
            if not seen[i]:
                ln = 0
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = w[j]
                    ln += 1
                lens.append(ln)
        return (tuple(sorted(lens)), e)


def _closure(universe, gens, allowed=None, cap=SUBGROUP_ELEMENT_CAP):
    """Subgroup closure from generators; None when leaving the allowed set."""
    seen = {universe.identity}
    frontier = [universe.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = universe.mul(a, g)
                if b not in seen:
                    if allowed is not None and b not in allowed:
                        return None
                    if len(seen) >= cap:
                        raise ScopeExceeded("subgroup closure cap hit")
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(seen)


def classify(datum_or_label, p: int, cap: int = FULL_SCOPE_CAP) -> ClassifyResult:
    """All pseudo p-root pairs (H, R) up to Aut(R)-conjugacy, within scope.

    Full-subgroup scope: A_m (m+1 <= 8), D_4, D_5, E_6.  E_7/E_8 are searched
    only over the named elements and their products, and flagged partial.
    Subgroups of a pseudo pair are pseudo, so growing subgroups inside the set
    of elements with rootless cyclic sharp lattice is exhaustive.
    """
    datum = datum_or_label if isinstance(datum_or_label, RootDatum) else build(datum_or_label)
    if not _is_odd_prime(p):
        raise ValueError("p must be an odd prime")
    kind, m = parse_label(datum.label)
    if datum.label == "E8":
        nm = named_elements(datum)
        grp = IsometryGroup(datum, (nm["a"], nm["b"]))
        uni = _PermUniverse(datum, grp)
        return _classify_universe(
            datum, p, uni, partial=True,
            note="scope restricted to the named order-5 elements and their products",
        )
    if datum.label == "E7":
        return ClassifyResult(datum.label, p, (), True,
                              "no enumerable scope for E7; no named elements")
    from .rootsys import aut_group

    if kind == "A":
        if m + 1 > 8:
            return ClassifyResult(datum.label, p, (), True,
                                  "full search limited to A_m with m+1 <= 8")
        uni = _SignedSymUniverse(datum)
    elif kind == "D":
        if m > 5:
            return ClassifyResult(datum.label, p, (), True,
                                  f"full search limited to D4/D5, got {datum.label}")
        uni = _PermUniverse(datum, aut_group(datum))
    elif datum.label == "E6":
        uni = _PermUniverse(datum, aut_group(datum))
    else:
        raise ValueError(f"unsupported label {datum.label}")
    if len(uni.elements) > cap:
        raise ScopeExceeded(f"|Aut| = {len(uni.elements)} exceeds cap {cap}")
    return _classify_universe(datum, p, uni, partial=False,
                              note="exhaustive over all subgroups")


def _classify_universe(datum, p, uni, partial, note) -> ClassifyResult:
    matrices = {}

    def matrix_of(key):
        if key not in matrices:
            matrices[key] = uni.matrix(key)
        return matrices[key]

    def rootless_span(gen_keys) -> bool:
        gens = [matrix_of(k).matrix for k in gen_keys]
        basis, pivots = _sharp_span_modp(datum, gens, p)
        return not any(_modp_in_span(basis, pivots, r, p) for r in datum.roots)

    # good elements (cyclic sharp rootless), decided once per conjugacy class
    class_good = {}
    good = set()
    for key in uni.elements:
        ck = uni.class_key(key)
        if ck not in class_good:
            class_good[ck] = key == uni.identity or rootless_span([key])
        if class_good[ck]:
            good.add(key)

    # BFS over pseudo subgroups inside the good set
    found = {frozenset([uni.identity]): []}
    frontier = [(frozenset([uni.identity]), [])]
    good_sorted = sorted(good)
    while frontier:
        nxt = []
        for elems, gens in frontier:
            for g in good_sorted:
                if g in elems:
                    continue
                new = _closure(uni, gens + [g], allowed=good)
                if new is None or new in found:
                    continue
                if not rootless_span(gens + [g]):
                    found[new] = None
                    continue
                found[new] = gens + [g]
                nxt.append((new, gens + [g]))
        frontier = nxt
    pseudo_subgroups = {k: v for k, v in found.items() if v is not None}

    # conjugacy orbits via generator conjugation
    conj_pairs = [(c, uni.inv(c)) for c in uni.conj_gens]
    pool = dict(pseudo_subgroups)
    classes = []
    while pool:
        rep = min(pool, key=lambda s: tuple(sorted(s)))
        gens = pool.pop(rep)
        orbit = {rep}
        orb_frontier = [rep]
        while orb_frontier:
            nxt = []
            for sub in orb_frontier:
                for c, cinv in conj_pairs:
                    img = frozenset(uni.mul(uni.mul(c, x), cinv) for x in sub)
                    if img not in orbit:
                        orbit.add(img)
                        nxt.append(img)
                        pool.pop(img, None)
            orb_frontier = nxt
        classes.append((rep, gens))

    entries = []
    for rep, genkeys in sorted(classes, key=lambda rg: (len(rg[0]), tuple(sorted(rg[0])))):
        if not genkeys:
            genkeys = [uni.identity]
        gens = tuple(matrix_of(k) for k in genkeys)
        entries.append(ClassifyEntry(generators=gens, order=len(rep),
                                     verdict=verdict(datum, gens, p)))
    return ClassifyResult(datum.label, p, tuple(entries), partial, note)
