import itertools
import random
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from iwt53.datapath import (
    ANALYSIS,
    SYNTHESIS,
    DatapathOverflow,
    InputRangeError,
    MicroOp,
    Op,
    Phase,
    analysis_schedule,
    format_schedule,
    pe_configure,
    pe_flush,
    pe_step,
    range_analysis,
    run_analysis,
    run_synthesis,
    schedule_op_count,
    signed_bits,
    synthesis_schedule,
    validate_schedule,
)
from iwt53.lifting import RoundingMode, SubbandPair, forward_1d

HW = RoundingMode.HARDWARE_CORRECTED


def stream(xs, schedule=ANALYSIS, width=16):
    pe = pe_configure(1, 1, width)
    out = []
    for v in xs:
        _, e = pe_step(pe, schedule, v)
        if e is not None:
            out.append(e)
    return pe, out + pe_flush(pe, schedule)


def test_configure():
    pe = pe_configure(1, 1, 9)
    assert (pe.m, pe.n, pe.reg_width) == (1, 1, 9)
    assert pe.regs == {"R0": 0, "R1": 0, "R2": 0}
    assert (pe.lo, pe.hi) == (-256, 255)
    pe = pe_configure(2, 1, 16)
    assert (len(pe.delays["Dm"]), len(pe.delays["Dn"])) == (2, 1)
    for bad in (3, 33):
        with pytest.raises(ValueError):
            pe_configure(1, 1, bad)


def test_zero_depth_delay_is_a_wire():
    pe = pe_configure(0, 0, 8)
    pe.regs["R1"] = 17
    pe.execute(MicroOp(Op.TAP_DELAY, "R0", "Dm", "R1"), None)
    assert pe.regs["R0"] == 17


def test_unit_delay():
    pe = pe_configure(1, 1, 8)
    seen = []
    for v in (5, 6, 7):
        pe.regs["R1"] = v
        pe.execute(MicroOp(Op.TAP_DELAY, "R0", "Dn", "R1"), None)
        seen.append(pe.regs["R0"])
    assert seen == [0, 5, 6]


def test_stream_hand_example():
    _, out = stream([1, 3, 2, 0])
    assert out == [("D", 2), ("S", 2), ("D", -2), ("S", 2)]


def test_stream_constant_details_zero():
    _, out = stream([77] * 11)
    assert [v for k, v in out if k == "D"] == [0] * 5
    assert [v for k, v in out if k == "S"] == [77] * 6


def test_sub_is_twos_complement_add():
    pe = pe_configure(0, 0, 8)
    pe.regs.update(R0=5, R1=9)
    pe.execute(MicroOp(Op.SUB_2C, "R2", "R0", "R1"), None)
    assert pe.regs["R2"] == -4 and pe.count.adder_uses == 1
    pe.regs.update(R0=-128, R1=1)
    pe.execute(MicroOp(Op.SUB_2C, "R2", "R0", "R1"), None)
    assert pe.overflow_flag and pe.regs["R2"] == 127


def test_add_overflow_wraps_and_flags():
    pe = pe_configure(0, 0, 8)
    pe.regs.update(R0=100, R1=100)
    pe.execute(MicroOp(Op.ADD, "R2", "R0", "R1"), None)
    assert pe.regs["R2"] == 200 - 256
    assert pe.overflow_flag and pe.overflow_cycle == 0


@pytest.mark.parametrize("v", range(-9, 10))
@pytest.mark.parametrize("op, k", [(Op.ASR1, 1), (Op.ASR2, 2)])
def test_shift_and_correction(v, op, k):
    pe = pe_configure(0, 0, 8)
    pe.regs["R0"] = v
    pe.execute(MicroOp(op, "R0"), None)
    assert pe.regs["R0"] == v >> k
    pe.execute(MicroOp(Op.CORRECT_NEG, "R0"), None)
    assert pe.regs["R0"] == int(v / 2**k)
    assert (pe.count.shifter_uses, pe.count.corrections, pe.count.adder_uses) == (1, 1, 0)


def test_input_range():
    pe = pe_configure(1, 1, 8)
    with pytest.raises(InputRangeError, match="input exceeds register width"):
        pe_step(pe, ANALYSIS, 200)


def test_run_analysis_hand_example():
    sb, count = run_analysis([1, 3, 2, 0], reg_width=9)
    assert sb == forward_1d([1, 3, 2, 0], HW)
    assert count.adders_per_pair == 4 and count.shifters_per_pair == 2
    y, inv = run_synthesis(sb, reg_width=9)
    assert y == [1, 3, 2, 0]
    assert (inv.adder_uses, inv.shifter_uses) == (count.adder_uses, count.shifter_uses)


def test_zero_signal_same_counts():
    x = [random.Random(1).randint(0, 255) for _ in range(20)]
    sb0, c0 = run_analysis([0] * 20)
    sb1, c1 = run_analysis(x)
    assert sb0.approx == [0] * 10 and sb0.detail == [0] * 10
    assert c0 == c1
    y, _ = run_synthesis(sb0)
    assert y == [0] * 20


@pytest.mark.parametrize("n", range(2, 40))
def test_counts_per_pair_all_lengths(n):
    rng = random.Random(n)
    x = [rng.randint(0, 255) for _ in range(n)]
    sb, fwd = run_analysis(x)
    _, inv = run_synthesis(sb)
    for c in (fwd, inv):
        assert c.adders_per_pair == 4 and c.shifters_per_pair == 2
        assert c.adder_uses == 2 * n and c.shifter_uses == n
    assert fwd == schedule_op_count(ANALYSIS, n)
    assert inv == schedule_op_count(SYNTHESIS, n)


@pytest.mark.parametrize("mode", list(RoundingMode))
def test_equivalence_exhaustive_small(mode):
    # lengths up to 5 run in the acceptance suite
    for n in range(2, 5):
        for x in itertools.product(range(8), repeat=n):
            x = list(x)
            sb, _ = run_analysis(x, 16, mode)
            assert sb == forward_1d(x, mode)
            assert run_synthesis(sb, 16, mode)[0] == x


@given(st.lists(st.integers(-2000, 2000), min_size=2, max_size=50), st.sampled_from(list(RoundingMode)))
def test_equivalence_signed_inputs(x, mode):
    sb, _ = run_analysis(x, 16, mode)
    assert sb == forward_1d(x, mode)
    assert run_synthesis(sb, 16, mode)[0] == x


def test_overflow_reports_cycle():
    with pytest.raises(DatapathOverflow) as info:
        run_analysis([255, 0, 255, 0], reg_width=9)
    assert info.value.cycle == 5  # the first even-sum ADD of the "even" phase
    with pytest.raises(DatapathOverflow):
        run_analysis([255, 0], reg_width=4)


def test_no_overflow_at_16_bits_for_extreme_8bit_inputs():
    for x in itertools.product([0, 255], repeat=6):
        sb, _ = run_analysis(list(x), 16)
        run_synthesis(sb, 16)


def test_synthesis_rejects_short():
    with pytest.raises(ValueError):
        run_analysis([1])


def test_schedules_validate():
    validate_schedule(ANALYSIS)
    validate_schedule(SYNTHESIS)
    validate_schedule(analysis_schedule(RoundingMode.FLOOR_SHIFT))
    validate_schedule(synthesis_schedule(RoundingMode.FLOOR_SHIFT))
    floor_ops = [u.op for p in analysis_schedule(RoundingMode.FLOOR_SHIFT).phases.values() for u in p.ops]
    assert Op.CORRECT_NEG not in floor_ops


def test_validation_catches_read_before_write():
    bad_phase = Phase("even", (MicroOp(Op.ADD, "R0", "R1", "R2"),), frozenset({"R2"}))
    bad = replace(ANALYSIS, phases={**ANALYSIS.phases, "even": bad_phase})
    with pytest.raises(ValueError, match="read before write"):
        validate_schedule(bad)


def test_validation_catches_double_emit():
    two = Phase("even", (MicroOp(Op.EMIT_D, a="R2"), MicroOp(Op.EMIT_D, a="R2")), frozenset({"R2"}))
    bad = replace(ANALYSIS, phases={**ANALYSIS.phases, "even": two})
    with pytest.raises(ValueError, match="emits"):
        validate_schedule(bad)


def test_format_schedule():
    text = format_schedule(ANALYSIS)
    assert "schedule Analysis" in text
    assert "SUB_2C      R2, R2, R0" in text


def brute_detail_range(bits):
    top = 1 << bits
    ds = [b - ((a + c) >> 1) for a in range(top) for b in range(top) for c in range(top)]
    return min(ds), max(ds)


def brute_approx_range(bits):
    # all 5-sample windows x0..x4: s = x2 + floor((d_left + d_right) / 4)
    top = 1 << bits
    vals = []
    for w in itertools.product(range(top), repeat=5):
        dl = w[1] - ((w[0] + w[2]) >> 1)
        dr = w[3] - ((w[2] + w[4]) >> 1)
        vals.append(w[2] + ((dl + dr) >> 2))
    return min(vals), max(vals)


@pytest.mark.parametrize("bits", [1, 2, 3])
def test_range_analysis_small(bits):
    rep = range_analysis(bits)
    assert (rep.detail_min, rep.detail_max) == brute_detail_range(bits)
    assert (rep.approx_min, rep.approx_max) == brute_approx_range(bits)


def test_range_analysis_one_bit():
    rep = range_analysis(1)
    assert (rep.detail_min, rep.detail_max) == (-1, 1)


def test_range_analysis_eight_bits():
    rep = range_analysis(8)
    assert (rep.detail_min, rep.detail_max, rep.required_signed_bits) == (-255, 255, 9)
    assert (rep.approx_min, rep.approx_max, rep.approx_required_bits) == (-64, 319, 10)
    with pytest.raises(ValueError):
        range_analysis(11)


def test_signed_bits():
    assert signed_bits(-255, 255) == 9
    assert signed_bits(-256, 255) == 9
    assert signed_bits(0, 0) == 1
    assert signed_bits(-1, 0) == 1
    assert signed_bits(0, 1) == 2


def test_run_synthesis_inconsistent():
    with pytest.raises(ValueError):
        run_synthesis(SubbandPair([1], [], 1))
