from fractions import Fraction
from itertools import combinations

import pytest

from hkrigidity.picard import (
    CANONICAL,
    LINE_CLASSES,
    PAIRS,
    PERMS,
    DivisorClass,
    ZERO,
    class_of,
    compose,
    invert,
    make_pair,
    map_pair,
    overlap_intersection,
    pairing,
    pencil_class,
    pencil_fibers,
    rank_of,
    s5_transform,
    verify_dependencies,
)


def rank_oracle(classes):
    # plain Gaussian elimination over QQ, no sharing with the Bareiss code
    rows = [[Fraction(x) for x in c.as_tuple()] for c in classes]
    rank = 0
    for col in range(5):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def test_pairs_enumeration():
    assert len(PAIRS) == 10
    assert PAIRS[0] == (1, 2) and PAIRS[-1] == (4, 5)
    assert make_pair(5, 2) == (2, 5)
    with pytest.raises(ValueError):
        make_pair(3, 3)


def test_line_classes():
    assert class_of((1, 5)) == DivisorClass(0, (1, 0, 0, 0))
    assert class_of((4, 5)) == DivisorClass(0, (0, 0, 0, 1))
    assert class_of((1, 2)) == DivisorClass(1, (0, 0, -1, -1))
    assert class_of((2, 3)) == DivisorClass(1, (-1, 0, 0, -1))
    assert class_of((3, 4)) == DivisorClass(1, (-1, -1, 0, 0))


def test_lines_are_minus_one_curves():
    for p in PAIRS:
        c = LINE_CLASSES[p]
        assert pairing(c, c) == -1
        assert pairing(c, CANONICAL) == -1


def test_pairing_matches_pair_combinatorics():
    for p in PAIRS:
        for q in PAIRS:
            assert pairing(LINE_CLASSES[p], LINE_CLASSES[q]) == overlap_intersection(p, q)


def test_canonical_class():
    assert pairing(CANONICAL, CANONICAL) == 5
    total = ZERO
    for p in PAIRS:
        total = total + LINE_CLASSES[p]
    assert total == -2 * CANONICAL


def test_pencils():
    for i in range(1, 6):
        f = pencil_class(i)
        assert pairing(f, f) == 0
        assert pairing(f, CANONICAL) == -2
        fibers = pencil_fibers(i)
        assert len(fibers) == 3
        seen = set()
        for a, b in fibers:
            assert i not in a and i not in b
            assert set(a) & set(b) == set()
            assert LINE_CLASSES[a] + LINE_CLASSES[b] == f
            seen.update((a, b))
        assert len(seen) == 6


def test_rank_against_fraction_oracle():
    # every one of the 2^10 subsets of lines
    for size in range(11):
        for subset in combinations(PAIRS, size):
            classes = [LINE_CLASSES[p] for p in subset]
            assert rank_of(classes) == rank_oracle(classes)


def test_rank_mixed_classes():
    assert rank_of([]) == 0
    assert rank_of([ZERO]) == 0
    assert rank_of([CANONICAL, -3 * CANONICAL]) == 1
    fiber = LINE_CLASSES[(1, 2)] + LINE_CLASSES[(3, 4)]
    # one fiber class spans a line, but its two components span a plane
    assert rank_of([fiber]) == 1
    assert rank_of([LINE_CLASSES[(1, 2)], LINE_CLASSES[(3, 4)]]) == 2


def test_permutation_composition():
    s = (2, 3, 1, 4, 5)
    t = (1, 2, 3, 5, 4)
    st = compose(s, t)
    assert st == (1, 2, 3, 5, 4) if s == (1, 2, 3, 4, 5) else True
    for i in range(1, 6):
        assert st[i - 1] == s[t[i - 1] - 1]
    assert compose(s, invert(s)) == (1, 2, 3, 4, 5)
    assert compose(invert(t), t) == (1, 2, 3, 4, 5)


def test_s5_transform_permutes_lines():
    for t in PERMS:
        for p in PAIRS:
            assert s5_transform(t, LINE_CLASSES[p]) == LINE_CLASSES[map_pair(t, p)]


def test_s5_transform_is_isometry_fixing_canonical():
    probes = [CANONICAL, pencil_class(2), LINE_CLASSES[(1, 3)],
              DivisorClass(7, (-2, 3, 0, 5))]
    for t in PERMS:
        assert s5_transform(t, CANONICAL) == CANONICAL
        for a in probes:
            for b in probes:
                assert pairing(s5_transform(t, a), s5_transform(t, b)) == pairing(a, b)


def test_s5_transform_respects_composition():
    import random

    rng = random.Random(20_26)
    for _ in range(200):
        s = tuple(rng.sample(range(1, 6), 5))
        t = tuple(rng.sample(range(1, 6), 5))
        v = DivisorClass(rng.randrange(-9, 10),
                         tuple(rng.randrange(-9, 10) for _ in range(4)))
        assert s5_transform(compose(s, t), v) == s5_transform(s, s5_transform(t, v))


def test_s5_transform_permutes_pencils():
    for t in PERMS:
        for i in range(1, 6):
            assert s5_transform(t, pencil_class(i)) == pencil_class(t[i - 1])


def test_dependency_census():
    report = verify_dependencies()
    assert report.passed, report.counterexamples[:3]
    assert report.checked == 638  # C(10,5)+...+C(10,10)
