import itertools

import numpy as np
import pytest

from margulis_lab import DeformationParams, Word, margulis, phi
from margulis_lab.affine import coboundary
from margulis_lab.proper import ScanVerdict, Status, Witness, canonical, enumerate_words, sign_scan


def brute_force_classes(b, max_len):
    """All cyclically reduced words, modulo rotation and inversion, by exhaustive listing."""
    letters = [i for i in range(-b, b + 1) if i]
    classes = set()
    for n in range(1, max_len + 1):
        for w in itertools.product(letters, repeat=n):
            if any(w[k] == -w[k + 1] for k in range(n - 1)):
                continue
            if n > 1 and w[0] == -w[-1]:
                continue
            orbit = set()
            for v in (w, tuple(-x for x in reversed(w))):
                orbit.update(v[k:] + v[:k] for k in range(n))
            classes.add(frozenset(orbit))
    return classes


@pytest.mark.parametrize("b, max_len, count", [(3, 1, 3), (3, 2, 12), (3, 3, 35), (3, 4, 119), (4, 3, 80)])
def test_enumeration_matches_brute_force(b, max_len, count):
    words = list(enumerate_words(b, max_len))
    oracle = brute_force_classes(b, max_len)
    assert len(words) == len(oracle) == count
    # every class is hit exactly once
    hits = [next(cls for cls in oracle if w.letters in cls) for w in words]
    assert set(hits) == oracle


def test_enumeration_properties():
    words = list(enumerate_words(3, 4))
    assert [str(w) for w in words[:3]] == ["g1", "g2", "g3"]
    for w in words:
        assert len(Word(w.letters)) == len(w.letters)
        assert w.is_cyclically_reduced()
        assert canonical(w) == w
    assert [len(w) for w in words] == sorted(len(w) for w in words)
    with pytest.raises(ValueError):
        list(enumerate_words(3, 0))


def test_canonical_represents_inverse_and_rotations():
    w = Word([2, -1, 3])
    c = canonical(w)
    assert canonical(w.inverse()) == c
    assert canonical(Word([3, 2, -1])) == c
    assert c.letters[0] == 1


def test_crafted_witness(hol3):
    u = phi(hol3, DeformationParams([1.0, -1.0, 1.0, 1.0], [0.3], [0.0]))
    v = sign_scan(hol3, u, 6)
    assert v.status is Status.NOT_PROPER
    assert (v.witness.first, v.witness.second) == (Word([1]), Word([2]))
    assert v.witness.first_alpha == pytest.approx(1.0)
    assert v.witness.second_alpha == pytest.approx(-1.0)


def test_coboundary_is_sign_neutral(hol3):
    v = sign_scan(hol3, coboundary(hol3, [0.3, -0.2, 0.5]), 4)
    assert v.status is Status.SIGN_CONSISTENT and v.witness is None
    assert all(s.positive == 0 and s.negative == 0 and s.zero == s.count for s in v.spectrum)
    assert sum(s.count for s in v.spectrum) == v.scanned


def test_positive_deformation_is_sign_consistent(hol3):
    u = phi(hol3, DeformationParams([1.0, 1.0, 1.0, 1.0], [0.3], [-7.5]))
    v = sign_scan(hol3, u, 6)
    assert v.status is Status.SIGN_CONSISTENT
    assert min(s.min for s in v.spectrum) > 0
    assert v.scanned + v.skipped == len(list(enumerate_words(3, 6)))


def test_scan_is_deterministic(hol3):
    u = phi(hol3, DeformationParams([1.0, 1.0, -0.5, 1.0], [0.3], [0.2]))
    a, b = sign_scan(hol3, u, 5), sign_scan(hol3, u, 5)
    assert a == b and a.records == b.records


def test_scan_records_match_single_word_invariants(hol3):
    u = phi(hol3, DeformationParams([1.0, 0.5, 0.2, 1.0], [0.3], [-3.0]))
    for w, a in sign_scan(hol3, u, 4).records[:60]:
        assert a == pytest.approx(margulis(u, w), abs=1e-12)
        assert margulis(u, w.inverse()) == pytest.approx(a, abs=1e-9)


def test_verdict_requires_witness():
    with pytest.raises(ValueError):
        ScanVerdict(Status.NOT_PROPER, None, (), 0, 0, 1)
    w = Witness(Word([1]), 1.0, Word([2]), 2.0)
    with pytest.raises(ValueError):
        ScanVerdict(Status.NOT_PROPER, w, (), 0, 0, 1)
    assert np.isfinite(w.first_alpha)


def test_length_eight_scan_is_fast(hol3):
    import time

    u = phi(hol3, DeformationParams([1.0, 1.0, 1.0, 1.0], [0.3], [-7.5]))
    start = time.perf_counter()
    v = sign_scan(hol3, u, 8)
    assert time.perf_counter() - start < 10
    assert v.scanned + v.skipped == 31795
