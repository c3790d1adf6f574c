"""Characters of (Z/n)^5 attached to the exponent-n abelian covering
branched on the ten lines.

A character assigns a residue to the local monodromy loop of each line.
Five loops are a basis; the other five values are forced by the loop
relations of the complement.  From the ten values we derive the class of
the character's eigensheaf, the twist used by the vanishing engine, the
set of lines carrying logarithmic poles, and a 17-case classification of
the twist vector.

Everything is exact integer arithmetic; numpy is used only to sweep all
n^5 characters when enumerating symmetry orbits.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .picard import (
    CANONICAL,
    PAIRS,
    PERMS,
    DivisorClass,
    class_of,
    make_pair,
    map_pair,
    overlap_intersection,
    pairing,
    pencil_class,
    rank_of,
)


class InternalInconsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagreed."""


class ClassificationError(RuntimeError):
    """A rank-deficient log-pole set matches none of the known shapes."""


# The five basis loops, in the order matching the residue tuple (a1..a5).
BASIS_PAIRS = ((1, 4), (2, 4), (3, 4), (2, 3), (1, 3))

# Integer linear form (in a1..a5) giving each line's loop value; the five
# non-basis forms follow from the loop relations of the line complement.
LOOP_FORMS = {
    (1, 4): (1, 0, 0, 0, 0),
    (2, 4): (0, 1, 0, 0, 0),
    (3, 4): (0, 0, 1, 0, 0),
    (2, 3): (0, 0, 0, 1, 0),
    (1, 3): (0, 0, 0, 0, 1),
    (1, 2): (-1, -1, -1, -1, -1),
    (4, 5): (-1, -1, -1, 0, 0),
    (1, 5): (0, 1, 1, 1, 0),
    (2, 5): (1, 0, 1, 0, 1),
    (3, 5): (0, 0, -1, -1, -1),
}

QUADRANGLE_PAIRS = tuple(p for p in PAIRS if 5 not in p)
EXCEPTIONAL_PAIRS = tuple(p for p in PAIRS if 5 in p)


@dataclass(frozen=True)
class Character:
    """Residue vector (a1..a5) modulo n; constructor reduces into [0,n)."""

    n: int
    a: tuple

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("modulus must be at least 2")
        if len(self.a) != 5:
            raise ValueError("need exactly five residues")
        object.__setattr__(self, "a", tuple(x % self.n for x in self.a))

    @property
    def a6(self):
        return (-sum(self.a)) % self.n

    @property
    def is_zero(self):
        return all(x == 0 for x in self.a)

    def loop(self, p):
        """Loop value on the line indexed by p, as a residue in [0,n)."""
        form = LOOP_FORMS[make_pair(*p)]
        return sum(c * x for c, x in zip(form, self.a)) % self.n


def loop_value(psi, p):
    return psi.loop(p)


# case id -> (sorted multiset of point excesses / n, exceptional total / n);
# used to cross-check the classification read off the twist vector.
_CASE_PATTERNS = {
    1: ((0, 0, 0, 1), 1),
    2: ((0, 0, 0, 0), 2),
    3: ((0, 0, 0, 2), 2),
    4: ((1, 1, 1, 1), 0),
    5: ((0, 1, 1, 1), 1),
    6: ((0, 0, 1, 1), 2),
    7: ((0, 0, 0, 1), 3),
    8: ((1, 1, 1, 2), 1),
    9: ((0, 1, 1, 2), 2),
    10: ((1, 1, 1, 1), 2),
    11: ((0, 0, 1, 2), 3),
    12: ((0, 1, 1, 1), 3),
    13: ((2, 2, 2, 2), 0),
    14: ((1, 2, 2, 2), 1),
    15: ((1, 1, 2, 2), 2),
    16: ((1, 1, 1, 2), 3),
    17: ((2, 2, 2, 2), 2),
}

# twist vector shape (ell coefficient, sorted exceptional coefficients) -> case
_CASE_BY_TWIST = {
    (-2, (0, 1, 1, 1)): 1,
    (-2, (1, 1, 1, 1)): 2,
    (-1, (-1, 1, 1, 1)): 3,
    (-1, (0, 0, 0, 0)): 4,
    (-1, (0, 0, 0, 1)): 5,
    (-1, (0, 0, 1, 1)): 6,
    (-1, (0, 1, 1, 1)): 7,
    (0, (-1, 0, 0, 0)): 8,
    (0, (-1, 0, 0, 1)): 9,
    (0, (0, 0, 0, 0)): 10,
    (0, (-1, 0, 1, 1)): 11,
    (0, (0, 0, 0, 1)): 12,
    (1, (-1, -1, -1, -1)): 13,
    (1, (-1, -1, -1, 0)): 14,
    (1, (-1, -1, 0, 0)): 15,
    (1, (-1, 0, 0, 0)): 16,
    (2, (-1, -1, -1, -1)): 17,
}

CASE_TRIVIAL = 0


@dataclass(frozen=True)
class CharacterGeometry:
    """Derived data of one character.

    quad_total: sum of the six loop values on the quadrangle lines (the
        L coefficient of n times the eigensheaf class).
    point_excess: per blown-up point, the carry (a multiple of n) in the
        sum of the three loop values of the lines through that point.
    exc_total: sum of the four loop values on the exceptional curves.
    eigenclass: class of the character's eigensheaf.
    twist: canonical class plus eigenclass; the twist of the log sheaf.
    logset: lines whose loop value is not n-1 (logarithmic poles).
    case_id: 0 for the zero character, else 1..17 by twist-vector shape.
    """

    quad_total: int
    point_excess: tuple
    exc_total: int
    eigenclass: DivisorClass
    twist: DivisorClass
    logset: frozenset
    case_id: int


def geometry_of(psi):
    n = psi.n
    loops = {p: psi.loop(p) for p in PAIRS}

    # Route one: the eigensheaf class reconstructed line by line.
    total = DivisorClass(0, (0, 0, 0, 0))
    for p in PAIRS:
        total = total + loops[p] * class_of(p)
    if any(x % n for x in total.as_tuple()):
        raise InternalInconsistencyError(
            f"loop-weighted class sum not divisible by n for {psi}")
    eigenclass = DivisorClass.from_tuple(tuple(x // n for x in total.as_tuple()))

    # Route two: the closed carry formulas, point by point.
    a1, a2, a3, a4, a5 = psi.a
    a6 = psi.a6
    quad_total = a1 + a2 + a3 + a4 + a5 + a6
    sigmas = (a2 + a3 + a4, a1 + a3 + a5, a1 + a2 + a6, a4 + a5 + a6)
    point_excess = tuple(s - s % n for s in sigmas)
    exc_total = sum(loops[p] for p in EXCEPTIONAL_PAIRS)

    if quad_total % n or quad_total != sum(loops[p] for p in QUADRANGLE_PAIRS):
        raise InternalInconsistencyError(f"quadrangle total inconsistent for {psi}")
    if any(l % n or not 0 <= l <= 2 * n for l in point_excess):
        raise InternalInconsistencyError(f"point excess out of pattern for {psi}")
    if sum(point_excess) != 2 * quad_total - exc_total:
        raise InternalInconsistencyError(f"excess sum identity fails for {psi}")
    expected = DivisorClass(quad_total // n, tuple(-l // n for l in point_excess))
    if eigenclass != expected:
        raise InternalInconsistencyError(
            f"eigenclass routes disagree for {psi}: {eigenclass} vs {expected}")

    twist = CANONICAL + eigenclass
    logset = frozenset(p for p in PAIRS if loops[p] != n - 1)

    if psi.is_zero:
        case_id = CASE_TRIVIAL
    else:
        key = (twist.ell, tuple(sorted(twist.e)))
        case_id = _CASE_BY_TWIST.get(key)
        if case_id is None:
            raise InternalInconsistencyError(f"unclassified twist {key} for {psi}")
        pattern = (tuple(sorted(l // n for l in point_excess)), exc_total // n)
        if _CASE_PATTERNS[case_id] != pattern:
            raise InternalInconsistencyError(
                f"case {case_id} pattern mismatch for {psi}: {pattern}")

    return CharacterGeometry(quad_total=quad_total, point_excess=point_excess,
                             exc_total=exc_total, eigenclass=eigenclass,
                             twist=twist, logset=logset, case_id=case_id)


# ---------------------------------------------------------------------------
# Symmetry action and orbit enumeration


@lru_cache(maxsize=None)
def char_matrix(t):
    """Matrix of the pullback action on residue vectors: row k is the loop
    form of the permuted k-th basis pair."""
    return tuple(LOOP_FORMS[map_pair(t, bp)] for bp in BASIS_PAIRS)


def s5_act(t, psi):
    """Pullback of a character along a permutation of the five indices.

    The result's loop value on a pair is the old value on the permuted
    pair, so log-pole sets transport by the inverse permutation.  This is
    a right action: acting by s then t equals acting by t o s.
    """
    m = char_matrix(tuple(t))
    a = tuple(sum(c * x for c, x in zip(row, psi.a)) % psi.n for row in m)
    return Character(psi.n, a)


def _all_char_matrices():
    return np.array([char_matrix(t) for t in PERMS], dtype=np.int64)


def orbit_representatives(n, chunk=200_000):
    """One lexicographically least representative per symmetry orbit.

    Sweeps all n^5 residue vectors with vectorized arithmetic, mapping
    each to the minimum of its 120 images; returns [(Character, orbit
    size)] sorted by representative.  Orbit sizes sum to n^5.
    """
    if n < 2:
        raise ValueError("modulus must be at least 2")
    mats = _all_char_matrices()
    powers = np.array([n ** k for k in range(4, -1, -1)], dtype=np.int64)
    total = n ** 5
    min_codes = np.empty(total, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (codes[:, None] // powers[None, :]) % n
        best = codes.copy()
        for m in mats:
            image = (digits @ m.T) % n
            np.minimum(best, image @ powers, out=best)
        min_codes[start:start + len(codes)] = best
    reps, sizes = np.unique(min_codes, return_counts=True)
    out = []
    for code, size in zip(reps.tolist(), sizes.tolist()):
        a = tuple((code // int(p)) % n for p in powers)
        out.append((Character(n, a), size))
    return out


def orbit_count(n):
    return len(orbit_representatives(n))


# ---------------------------------------------------------------------------
# Rank-deficient log-pole sets


@dataclass(frozen=True)
class RankException:
    """Shape of a rank-deficient log-pole set.

    kind: "claw" (one line meeting three mutually disjoint ones), "star"
        (the four pairs through one index), "fiber5" (five pairs avoiding
        one index), or "triangle" (three pairs inside a 3-element set).
    lines: the log-pole pairs, sorted.
    focus: the distinguished datum of the shape - the central pair for a
        claw, the shared index for a star, the avoided index for fiber5,
        the complementary pair for a triangle.
    predicted_twists: candidate twist classes stated for this shape at
        this modulus, or None where no prediction applies.
    """

    kind: str
    lines: tuple
    focus: object
    predicted_twists: tuple


def rank_exception_classify(psi):
    """Classify the log-pole set when its classes do not span the lattice.

    Returns None for full rank.  For deficient sets returns the matching
    shape descriptor; a deficient set matching no shape is an error.
    """
    if psi.is_zero:
        raise ValueError("zero character carries no classification")
    n = psi.n
    logset = geometry_of(psi).logset
    if rank_of([class_of(p) for p in logset]) == 5:
        return None
    lines = tuple(sorted(logset))

    if len(lines) == 3:
        touched = set()
        for p in lines:
            touched.update(p)
        if len(touched) == 3:
            comp = tuple(sorted(set(range(1, 6)) - touched))
            predicted = (class_of(comp),) if n == 4 else None
            return RankException("triangle", lines, comp, predicted)

    if len(lines) == 4:
        for center in lines:
            rest = [q for q in lines if q != center]
            if (all(overlap_intersection(center, q) == 1 for q in rest)
                    and all(overlap_intersection(q, r) == 0
                            for q, r in combinations(rest, 2))):
                predicted = (class_of(center),) if n >= 5 else None
                return RankException("claw", lines, center, predicted)
        shared = set(lines[0]).intersection(*map(set, lines[1:]))
        if len(shared) == 1:
            index = shared.pop()
            predicted = (pencil_class(index),) if n == 6 else None
            return RankException("star", lines, index, predicted)

    if len(lines) == 5:
        for j in range(1, 6):
            if all(j not in p for p in lines):
                predicted = None
                if n == 4:
                    inside = DivisorClass(0, (0, 0, 0, 0))
                    for p in lines:
                        inside = inside + class_of(p)
                    candidates = []
                    for q in PAIRS:
                        if q in logset:
                            continue
                        cq = class_of(q)
                        if pairing(cq, inside) != 2:
                            continue
                        for b in lines:
                            if overlap_intersection(q, b) == 0:
                                candidates.append(cq - class_of(b))
                    predicted = tuple(candidates)
                return RankException("fiber5", lines, j, predicted)

    raise ClassificationError(
        f"rank-deficient log set {lines} at n={n} matches no known shape")
