import math

import numpy as np
import pytest

from prism.certify import (
    check_window_property,
    empirical_survival,
    mark_sequence,
    required_phases,
    stuck_phase_bound,
    survival_bound,
)
from prism.numtheory import is_prime, smallest_primitive_root
from prism.params import derive_params

PRIMES_2000 = [n for n in range(3, 2001) if is_prime(n)]


def brute_force_max_hits(marks, W):
    n = len(marks)
    ext = np.concatenate([marks, marks])
    return max(int(ext[s : s + W].sum()) for s in range(n))


def test_mark_sequence_example_p11_q3():
    marks = mark_sequence(11, 3, smallest_primitive_root(11))
    # residues hitting {0, 11 mod 3 = 2} among 1..10: {2,3,5,6,8,9}
    assert int(marks.sum()) == 6
    assert len(marks) == 10


def test_mark_sequence_rejects_q_equal_p():
    with pytest.raises(ValueError):
        mark_sequence(7, 7, 3)


def test_mark_density_approaches_two_over_q():
    for p in (1009, 1999):
        g = smallest_primitive_root(p)
        for q in (3, 7, 13):
            marks = mark_sequence(p, q, g)
            assert abs(marks.mean() - 2 / q) < 0.01


def test_mark_count_matches_residue_enumeration():
    qs = [q for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47) ]
    for p in PRIMES_2000:
        g = smallest_primitive_root(p)
        for q in qs:
            if q == p:
                continue
            marks = mark_sequence(p, q, g)
            expected = sum(1 for x in range(1, p) if x % q in {0, p % q})
            assert int(marks.sum()) == expected, (p, q)


def test_shift_invariance_of_representative():
    # the sequence for representative r = g^s is the cyclic shift by s of
    # the sequence for r = 1
    p, q = 101, 7
    g = smallest_primitive_root(p)
    base = mark_sequence(p, q, g)
    for s in (1, 5, 40):
        r = pow(g, s, p)
        seq = []
        x = r
        for _ in range(p - 1):
            seq.append(x % q in {0, p % q})
            x = x * g % p
        assert np.array_equal(np.array(seq), np.roll(base, -s))


def test_window_whole_cycle_equals_mark_count():
    p, q = 131, 11
    g = smallest_primitive_root(p)
    report = check_window_property(p, q, g, p - 1)
    assert report.max_hits == report.mark_count


def test_window_bounds_validation():
    with pytest.raises(ValueError):
        check_window_property(131, 11, 2, 131)
    with pytest.raises(ValueError):
        check_window_property(131, 11, 2, 0)


def test_window_example_p131():
    W = math.ceil(2 * 11 * math.log(131))
    assert W == 108
    report = check_window_property(131, 11, 2, W)
    marks = mark_sequence(131, 11, 2).astype(np.int64)
    assert report.max_hits == brute_force_max_hits(marks, W)
    assert report.threshold == -(-4 * W // 11)
    assert report.passed == (report.max_hits <= report.threshold)


def test_sliding_window_matches_brute_force_small_primes():
    for p in [x for x in PRIMES_2000 if x <= 250]:
        g = smallest_primitive_root(p)
        for q in (3, 5, 7):
            if q == p:
                continue
            marks = mark_sequence(p, q, g).astype(np.int64)
            for W in {1, 2, (p - 1) // 2, p - 1} - {0}:
                report = check_window_property(p, q, g, W)
                assert report.max_hits == brute_force_max_hits(marks, W), (p, q, W)


@pytest.mark.parametrize("L,q,expected", [
    (5, 10, 0.125),
    (5, 7, 25 / 98),
    (1, 9, 0.5 / 81),
])
def test_survival_bound_examples(L, q, expected):
    assert survival_bound(L, q) == pytest.approx(expected)


def test_survival_bound_caps_at_one():
    assert survival_bound(10, 2) == 1.0


@pytest.mark.parametrize("K,L,q,delta,expected", [
    (1000, 5, 10, 1, 7),   # P = 1/8: 2 ln1000 / ln 8 ~ 6.64 -> 7
    (2, 1, 1, 0, 2),       # P = 1/2: ln2/ln2 = 1, strict -> 2
])
def test_required_phases_examples(K, L, q, delta, expected):
    assert required_phases(K, L, q, delta) == expected


def test_required_phases_rejects_saturated_bound():
    with pytest.raises(ValueError):
        required_phases(100, 10, 2, 1)


def test_required_phases_base_invariance():
    for K in (64, 1000, 4096):
        for q, L in ((10, 5), (13, 5), (7, 3)):
            ps = survival_bound(L, q)
            via_log2 = math.floor(2 * math.log2(K) / math.log2(1 / ps)) + 1
            assert required_phases(K, L, q, 1) == via_log2


def test_stuck_phase_bound_examples():
    r = stuck_phase_bound(131, 7, 2)
    assert r.bound == 6 and r.applicable  # ceil(1 + ln(131/7)/ln 2) = 6
    assert stuck_phase_bound(131, 7, 7).applicable
    r2 = stuck_phase_bound(131, 7, 8)
    assert not r2.applicable and r2.bound >= 1


def test_empirical_survival_impossible_with_one_neighbor():
    params = derive_params(100, 1, 3.0, 1)
    assert empirical_survival(params, 5000, seed=0) == 0.0


def test_empirical_survival_within_bound():
    params = derive_params(1000, 5, 2.2, 1)  # q = 11
    n = 100_000
    est = empirical_survival(params, n, seed=7)
    assert 0.0 <= est <= 1.0
    bound = survival_bound(5, 11)
    se = math.sqrt(est * (1 - est) / n)
    assert est <= bound + 3 * se


def test_empirical_survival_reproducible():
    params = derive_params(500, 4, 2.0, 1)
    assert empirical_survival(params, 10000, seed=3) == empirical_survival(params, 10000, seed=3)
