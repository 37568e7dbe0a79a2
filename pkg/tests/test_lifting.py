import itertools

import pytest
from hypothesis import given, strategies as st

import oracle
from iwt53 import lifting
from iwt53.lifting import (
    RoundingMode,
    Signal,
    SubbandPair,
    floor_div_pow2,
    forward_1d,
    inverse_1d,
    merge,
    predict_forward,
    predict_inverse,
    split,
    update_forward,
    update_inverse,
)

FLOOR = RoundingMode.FLOOR_SHIFT
HW = RoundingMode.HARDWARE_CORRECTED
MODES = [FLOOR, HW]

samples = st.lists(st.integers(-(2**20), 2**20), min_size=2, max_size=64)


def composed(x, mode):
    even, odd = split(x)
    d = predict_forward(even, odd, mode)
    return update_forward(even, d, mode), d


@pytest.mark.parametrize(
    "x, even, odd",
    [([1, 3, 2, 0], [1, 2], [3, 0]), ([7], [7], []), ([10, 12, 14, 16, 18], [10, 14, 18], [12, 16])],
)
def test_split_examples(x, even, odd):
    assert split(x) == (even, odd)
    assert merge(even, odd) == x


def test_split_empty():
    with pytest.raises(ValueError, match="empty signal"):
        split([])


def test_merge_mismatch():
    with pytest.raises(ValueError, match="parity length mismatch"):
        merge([1], [2, 3])


@pytest.mark.parametrize(
    "v, k, mode, expected",
    [(-1, 2, FLOOR, -1), (-1, 2, HW, 0), (510, 2, FLOOR, 127), (510, 2, HW, 127), (-5, 1, HW, -2), (-5, 1, FLOOR, -3)],
)
def test_floor_div_pow2(v, k, mode, expected):
    assert floor_div_pow2(v, k, mode) == expected


def test_floor_div_rejects_shift():
    with pytest.raises(ValueError):
        floor_div_pow2(8, 3)


@given(st.integers(-(2**40), 2**40), st.sampled_from([1, 2]))
def test_floor_shift_is_arithmetic_shift(v, k):
    assert floor_div_pow2(v, k, FLOOR) == v >> k
    assert floor_div_pow2(v, k, HW) == int(v / 2**k)


def test_predict_examples():
    assert predict_forward([1, 2], [3, 0]) == [2, -2]
    assert predict_forward([10, 14, 18, 22], [12, 16, 20, 24]) == [0, 0, 0, 2]
    assert predict_forward([9] * 4, [9] * 4) == [0] * 4
    assert predict_inverse([1, 2], [2, -2]) == [3, 0]
    assert predict_inverse([4, 4, 4], [0, 0]) == [4, 4]


def test_update_examples():
    assert update_forward([1, 2], [2, -2]) == [2, 2]
    assert update_forward([7, 7, 7], [0, 0]) == [7, 7, 7]
    assert update_forward([10, 14, 18, 22], [0, 0, 0, 2]) == [10, 14, 18, 22]
    assert update_inverse([2, 2], [2, -2]) == [1, 2]
    assert update_inverse([7, 7, 7], [0, 0]) == [7, 7, 7]


@pytest.mark.parametrize("step", [predict_forward, predict_inverse, update_forward, update_inverse])
def test_step_length_mismatch(step):
    with pytest.raises(ValueError, match="parity length mismatch"):
        step([1, 2, 3, 4], [1, 2])


@pytest.mark.parametrize("mode", MODES)
def test_steps_invert_exhaustively(mode):
    for ne, no in [(1, 1), (2, 1), (2, 2), (3, 2)]:
        for e in itertools.product(range(-3, 4), repeat=ne):
            for o in itertools.product(range(-3, 4), repeat=no):
                d = predict_forward(e, o, mode)
                assert predict_inverse(e, d, mode) == list(o)
                assert update_inverse(update_forward(e, o, mode), o, mode) == list(e)


def test_forward_examples():
    assert forward_1d([1, 3, 2, 0]) == SubbandPair([2, 2], [2, -2], 4)
    assert forward_1d([10, 12, 14, 16, 18, 20, 22, 24]) == SubbandPair(
        [10, 14, 18, 22], [0, 0, 0, 2], 8
    )
    assert inverse_1d(SubbandPair([2, 2], [2, -2])) == [1, 3, 2, 0]


@pytest.mark.parametrize("n", [2, 3, 7, 8])
def test_constant_invariance(n):
    sb = forward_1d([42] * n)
    assert sb.approx == [42] * ((n + 1) // 2)
    assert sb.detail == [0] * (n // 2)
    assert inverse_1d(sb) == [42] * n


def test_forward_too_short():
    with pytest.raises(ValueError, match="signal too short to decompose"):
        forward_1d([3])


def test_inverse_inconsistent_lengths():
    sb = SubbandPair([1, 2], [3], 3)
    sb.detail.append(4)
    with pytest.raises(ValueError):
        inverse_1d(sb)
    with pytest.raises(ValueError):
        SubbandPair([1], [2, 3])


def test_signal_validation():
    assert len(Signal([0, 255])) == 2
    with pytest.raises(ValueError):
        Signal([256])
    with pytest.raises(ValueError):
        Signal([-1])
    assert Signal([-128, 127], signed=True).value_range == (-128, 127)
    with pytest.raises(ValueError, match="empty signal"):
        Signal([])
    assert forward_1d(Signal([1, 3, 2, 0])).approx == [2, 2]


@pytest.mark.parametrize("mode", MODES)
def test_exhaustive_small_roundtrip_matches_oracle(mode):
    for n in range(2, 6):
        for x in itertools.product(range(8), repeat=n):
            x = list(x)
            sb = forward_1d(x, mode)
            assert (sb.approx, sb.detail) == oracle.forward(x, mode.corrected)
            assert inverse_1d(sb, mode) == x


@given(samples, st.sampled_from(MODES))
def test_kernel_matches_composition_and_oracle(x, mode):
    sb = forward_1d(x, mode)
    assert (sb.approx, sb.detail) == composed(x, mode)
    assert (sb.approx, sb.detail) == oracle.forward(x, mode.corrected)
    assert inverse_1d(sb, mode) == x
    assert len(sb.approx) + len(sb.detail) == len(x)


@given(st.integers(-100, 100), st.integers(-50, 50).map(lambda a: 2 * a), st.integers(3, 40))
def test_even_slope_ramp_interior_details_vanish(c, a, n):
    sb = forward_1d([a * k + c for k in range(n)])
    # the last detail of an even-length signal uses a mirrored neighbour
    interior = sb.detail[:-1] if n % 2 == 0 else sb.detail
    assert interior == [0] * len(interior)


def test_huge_values_fall_back_to_python():
    x = [2**70, -(2**70), 3, 2**65]
    sb = forward_1d(x)
    assert (sb.approx, sb.detail) == oracle.forward(x)
    assert inverse_1d(sb) == x


def test_unsupported_boundary():
    with pytest.raises(ValueError):
        lifting._check_boundary("periodic")


@pytest.mark.parametrize("bad", [[1.5, 2], ["a", 1], [1, None]])
def test_non_integer_samples_rejected(bad):
    with pytest.raises(TypeError):
        forward_1d(bad)
