import math
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st
from scipy import stats

from evoc.operators import OperatorState, change_weights, invent, update_operators

actions = st.tuples(*[st.sampled_from((-1, 0, 1))] * 6)
SYMMETRIC = (1, 1, -1, -1, 1, 0)


def n_changed(a, b):
    return sum(x != y for x, y in zip(a, b))


def test_ema_single_step():
    s = update_operators(OperatorState(), SYMMETRIC)
    assert s.sym_estimate == pytest.approx(0.1)
    assert s.mov_estimate == pytest.approx(0.1 * 5 / 6)


def test_disabled_state_never_moves():
    s = OperatorState(enabled=False)
    assert update_operators(s, SYMMETRIC) is s


def test_disabled_state_must_be_zero():
    with pytest.raises(ValueError):
        OperatorState(sym_estimate=0.3, enabled=False)


def test_ema_converges_to_one():
    s = OperatorState()
    prev = 0.0
    for n in range(1, 101):
        s = update_operators(s, SYMMETRIC)
        assert s.sym_estimate == pytest.approx(1 - 0.9**n, rel=1e-12)
        assert prev < s.sym_estimate <= 1.0
        prev = s.sym_estimate


@given(st.lists(actions, max_size=60), st.floats(0.01, 1.0))
def test_estimates_stay_in_unit_interval(seq, alpha):
    s = OperatorState(learning_rate=alpha)
    for a in seq:
        s = update_operators(s, a)
        assert 0.0 <= s.sym_estimate <= 1.0
        assert 0.0 <= s.mov_estimate <= 1.0


def test_c_zero_is_identity(rng):
    for a in [(0,) * 6, SYMMETRIC, (1, -1, 0, 1, -1, 1)]:
        for _ in range(200):
            assert invent(a, 0.0, OperatorState(), rng) == a


def test_c_one_from_immobile_is_uniform_sign(rng):
    n = 20000
    counts = [Counter() for _ in range(6)]
    for _ in range(n):
        out = invent((0,) * 6, 1.0, OperatorState(enabled=False), rng)
        for p, v in enumerate(out):
            counts[p][v] += 1
    for c in counts:
        assert set(c) == {-1, 1}
        assert abs(c[1] / n - 0.5) < 0.02


def test_mean_changed_parts_at_one_sixth():
    rng = random.Random(2024)
    n = 100_000
    total = sum(n_changed(SYMMETRIC, invent(SYMMETRIC, 1 / 6, OperatorState(), rng)) for _ in range(n))
    assert abs(total / n - 1.0) <= 0.02


@pytest.mark.parametrize("c", [1 / 6, 0.5, 1.0])
def test_changed_count_is_binomial(c):
    rng = random.Random(7)
    n = 20000
    state = OperatorState(sym_estimate=0.4, mov_estimate=0.7)
    counts = Counter(n_changed(SYMMETRIC, invent(SYMMETRIC, c, state, rng)) for _ in range(n))
    pmf = [math.comb(6, k) * c**k * (1 - c) ** (6 - k) for k in range(7)]
    ks = [k for k in range(7) if pmf[k] * n >= 5]
    observed = [counts[k] for k in ks]
    expected = [pmf[k] * n for k in ks]
    scale = sum(observed) / sum(expected)
    assert sum(counts.values()) == n
    if len(ks) > 1:
        assert stats.chisquare(observed, [e * scale for e in expected]).pvalue > 1e-3
    else:
        assert observed[0] == n


def test_movement_bias_weights():
    alts, weights = change_weights((1, 0, 0, 0, 0, 0), 0, OperatorState(mov_estimate=1.0))
    assert dict(zip(alts, weights)) == {-1: 2.0, 0: 1.0}


def test_symmetry_bias_weights():
    # partner (right arm) is +1; left arm at 0 may go to -1 or +1
    alts, weights = change_weights((0, 1, 0, 0, 0, 0), 0, OperatorState(sym_estimate=1.0, mov_estimate=0.5))
    assert dict(zip(alts, weights)) == {-1: 1.5, 1: 3.0}
    # head has no partner
    alts, weights = change_weights((0, 1, 0, 0, 0, 0), 4, OperatorState(sym_estimate=1.0, mov_estimate=0.5))
    assert dict(zip(alts, weights)) == {-1: 1.5, 1: 1.5}


def test_movement_bias_chi_square():
    rng = random.Random(99)
    n = 100_000
    state = OperatorState(sym_estimate=0.0, mov_estimate=1.0)
    counts = Counter(invent((1, 0, 0, 0, 0, 0), 1.0, state, rng)[0] for _ in range(n))
    assert set(counts) == {-1, 0}
    result = stats.chisquare([counts[-1], counts[0]], [n * 2 / 3, n / 3])
    assert result.pvalue > 1e-3


def test_disabled_invention_is_label_invariant():
    # with no bias every part's alternatives are equally likely, whatever the part
    rng = random.Random(5)
    n = 30000
    start = (1, 0, -1, 1, 0, -1)
    counts = [Counter() for _ in range(6)]
    for _ in range(n):
        out = invent(start, 1.0, OperatorState(enabled=False), rng)
        for p, v in enumerate(out):
            counts[p][v] += 1
    for p, c in enumerate(counts):
        assert len(c) == 2 and start[p] not in c
        assert abs(max(c.values()) / n - 0.5) < 0.02


@given(actions, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32))
def test_invent_stays_ternary(a, c, s, m, seed):
    out = invent(a, c, OperatorState(sym_estimate=s, mov_estimate=m), random.Random(seed))
    assert len(out) == 6
    assert all(v in (-1, 0, 1) for v in out)
