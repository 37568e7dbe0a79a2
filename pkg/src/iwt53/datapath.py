"""Cycle-accurate model of the shift-add lifting processing element.

The PE holds three two's-complement registers ``R0..R2``, two programmable
delay lines ``Dm`` and ``Dn`` and a single adder. Subtraction goes through the
adder as ``a + ~b + 1``; division by 2 or 4 is an arithmetic shift, optionally
followed by a one-LSB correction for negative operands so the quotient
truncates toward zero.

A :class:`Schedule` is a table of micro-op phases. The controller feeds one
input sample per phase (even/odd samples alternate) and runs two flush phases
after the last sample to produce the mirrored edge coefficients. Every micro-op
takes one cycle. Each phase emits at most one coefficient.

Counting rules: ``ADD``/``SUB_2C`` are adder uses, ``ASR1``/``ASR2`` are shifter
uses, ``CORRECT_NEG`` is a conditional LSB increment tallied separately, and
``LOAD_IN``/``MOV``/``TAP_DELAY`` are register transfers.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from iwt53 import _backend
from iwt53.lifting import RoundingMode, SignalLike, SubbandPair, _samples, merge

__all__ = [
    "Op",
    "MicroOp",
    "Phase",
    "Schedule",
    "OpCount",
    "PeState",
    "DatapathOverflow",
    "InputRangeError",
    "RangeReport",
    "analysis_schedule",
    "synthesis_schedule",
    "ANALYSIS",
    "SYNTHESIS",
    "pe_configure",
    "pe_step",
    "pe_flush",
    "run_analysis",
    "run_synthesis",
    "schedule_op_count",
    "format_schedule",
    "validate_schedule",
    "range_analysis",
    "signed_bits",
]

REGISTERS = ("R0", "R1", "R2")
DELAYS = ("Dm", "Dn")


class Op(enum.Enum):
    LOAD_IN = "LOAD_IN"
    MOV = "MOV"
    ADD = "ADD"
    SUB_2C = "SUB_2C"
    ASR1 = "ASR1"
    ASR2 = "ASR2"
    CORRECT_NEG = "CORRECT_NEG"
    TAP_DELAY = "TAP_DELAY"
    EMIT_S = "EMIT_S"
    EMIT_D = "EMIT_D"
    EMIT_X = "EMIT_X"


ADDER_OPS = frozenset({Op.ADD, Op.SUB_2C})
SHIFT_OPS = {Op.ASR1: 1, Op.ASR2: 2}
TRANSFER_OPS = frozenset({Op.LOAD_IN, Op.MOV, Op.TAP_DELAY})
EMIT_KIND = {Op.EMIT_S: "S", Op.EMIT_D: "D", Op.EMIT_X: "X"}


@dataclass(frozen=True)
class MicroOp:
    """One cycle of work.

    Operand use by opcode::

        LOAD_IN dst            dst <- input sample
        MOV dst, a             dst <- a
        ADD dst, a, b          dst <- a + b
        SUB_2C dst, a, b       dst <- a + ~b + 1
        ASR1/ASR2 dst          dst <- dst >> k   (records sign and sticky bits)
        CORRECT_NEG dst        dst <- dst + 1 if the last shift was negative and inexact
        TAP_DELAY dst, a, b    dst <- oldest entry of delay line a; push b
        EMIT_* a               output a
    """

    op: Op
    dst: Optional[str] = None
    a: Optional[str] = None
    b: Optional[str] = None

    def reads(self) -> tuple:
        if self.op in (Op.ADD, Op.SUB_2C):
            return (self.a, self.b)
        if self.op in (Op.ASR1, Op.ASR2, Op.CORRECT_NEG):
            return (self.dst,)
        if self.op is Op.TAP_DELAY:
            return (self.b,)
        if self.op is Op.LOAD_IN:
            return ()
        return (self.a,)

    def writes(self) -> tuple:
        if self.op in EMIT_KIND or self.dst is None:
            return ()
        return (self.dst,)

    def __str__(self):
        args = [x if x is not None else "_" for x in (self.dst, self.a, self.b)]
        if self.op in EMIT_KIND:
            args = [self.a]
        elif self.op in (Op.LOAD_IN, Op.ASR1, Op.ASR2, Op.CORRECT_NEG):
            args = [self.dst]
        elif self.op is Op.MOV:
            args = args[:2]
        return f"{self.op.value:<12}{', '.join(args)}"


@dataclass(frozen=True)
class Phase:
    name: str
    ops: tuple
    live_in: frozenset = frozenset()


@dataclass(frozen=True)
class Schedule:
    """Named micro-op phases plus the controller that sequences them."""

    name: str
    mode: RoundingMode
    phases: dict

    def input_phase(self, index: int) -> str:
        if self.name == "Analysis":
            if index < 2:
                return ("load_even", "load_odd")[index]
            if index % 2 == 0:
                return "even"
            return "odd_first" if index == 3 else "odd"
        if index == 0:
            return "load_even"
        if index == 1:
            return "odd_first"
        return "even" if index % 2 == 0 else "odd"

    def flush_phases(self, n: int) -> list:
        if n < 2:
            raise ValueError("signal too short to decompose")
        if self.name == "Analysis":
            if n % 2 == 0:
                return ["flush_d", "flush_s_first" if n == 2 else "flush_s"]
            return ["flush_s_first" if n == 3 else "flush_s", "flush_tail"]
        if n % 2 == 0:
            return ["flush_emit", "flush_odd"]
        return ["flush_pair", "flush_emit"]

    def sequence(self, n: int) -> list:
        return [self.input_phase(i) for i in range(n)] + self.flush_phases(n)


def _mk(spec: str) -> MicroOp:
    op, _, rest = spec.partition(" ")
    args = [a.strip() or None for a in rest.split(",")] if rest else []
    args = [None if a == "_" else a for a in args]
    code = Op(op)
    if code in EMIT_KIND:
        return MicroOp(code, a=args[0])
    return MicroOp(code, *args)


def _phase(name, live_in, *specs, corrected):
    ops = []
    for s in specs:
        if s.startswith("CORRECT_NEG") and not corrected:
            continue
        ops.append(_mk(s))
    return Phase(name, tuple(ops), frozenset(live_in))


def analysis_schedule(mode: RoundingMode = RoundingMode.HARDWARE_CORRECTED) -> Schedule:
    """Forward transform. Input order x0, x1, ...; emits d0, s0, d1, s1, ..."""
    c = mode.corrected
    # R1 carries e[n] from the even phase to the odd phase, R2 carries
    # o[n] into the even phase and d[n] into the odd phase.
    s_first = ("MOV R0, R2", "TAP_DELAY _, Dn, R2", "ADD R0, R0, R2")
    s_next = ("TAP_DELAY R0, Dn, R2", "ADD R0, R0, R2")
    s_tail = ("ASR2 R0", "CORRECT_NEG R0", "ADD R0, R1, R0", "EMIT_S R0")
    phases = [
        _phase("load_even", (), "LOAD_IN R0", "TAP_DELAY _, Dm, R0", corrected=c),
        _phase("load_odd", (), "LOAD_IN R2", corrected=c),
        _phase(
            "even", {"R2"},
            "LOAD_IN R0", "TAP_DELAY R1, Dm, R0", "ADD R0, R0, R1",
            "ASR1 R0", "CORRECT_NEG R0", "SUB_2C R2, R2, R0", "EMIT_D R2",
            corrected=c,
        ),
        _phase("odd_first", {"R1", "R2"}, *s_first, *s_tail, "LOAD_IN R2", corrected=c),
        _phase("odd", {"R1", "R2"}, *s_next, *s_tail, "LOAD_IN R2", corrected=c),
        _phase(
            "flush_d", {"R2"},
            "TAP_DELAY R1, Dm, R2", "ADD R0, R1, R1",
            "ASR1 R0", "CORRECT_NEG R0", "SUB_2C R2, R2, R0", "EMIT_D R2",
            corrected=c,
        ),
        _phase("flush_s_first", {"R1", "R2"}, *s_first, *s_tail, corrected=c),
        _phase("flush_s", {"R1", "R2"}, *s_next, *s_tail, corrected=c),
        _phase(
            "flush_tail", {"R2"},
            "TAP_DELAY R1, Dm, R2", "ADD R0, R2, R2", *s_tail,
            corrected=c,
        ),
    ]
    return Schedule("Analysis", mode, {p.name: p for p in phases})


def synthesis_schedule(mode: RoundingMode = RoundingMode.HARDWARE_CORRECTED) -> Schedule:
    """Inverse transform. Input order s0, d0, s1, d1, ...; emits x0, x1, ..."""
    c = mode.corrected
    # R2 holds s[n] until d[n] arrives, then the rebuilt e[n] until it is emitted.
    odd_body = (
        "ASR2 R0", "CORRECT_NEG R0", "SUB_2C R2, R2, R0",
        "TAP_DELAY R0, Dm, R2", "ADD R0, R0, R2",
        "ASR1 R0", "CORRECT_NEG R0", "ADD R0, R1, R0", "EMIT_X R0",
    )
    phases = [
        _phase("load_even", (), "LOAD_IN R2", corrected=c),
        _phase(
            "odd_first", {"R2"},
            "LOAD_IN R0", "MOV R1, R0", "TAP_DELAY _, Dn, R0", "ADD R0, R0, R1",
            "ASR2 R0", "CORRECT_NEG R0", "SUB_2C R2, R2, R0", "TAP_DELAY _, Dm, R2",
            corrected=c,
        ),
        _phase("even", {"R2"}, "EMIT_X R2", "LOAD_IN R2", corrected=c),
        _phase(
            "odd", {"R2"},
            "LOAD_IN R0", "TAP_DELAY R1, Dn, R0", "ADD R0, R0, R1", *odd_body,
            corrected=c,
        ),
        _phase("flush_emit", {"R2"}, "EMIT_X R2", corrected=c),
        _phase(
            "flush_odd", {"R2"},
            "TAP_DELAY R1, Dn, R2", "ADD R0, R2, R2",
            "ASR1 R0", "CORRECT_NEG R0", "ADD R0, R1, R0", "EMIT_X R0",
            corrected=c,
        ),
        _phase(
            "flush_pair", {"R2"},
            "TAP_DELAY R1, Dn, R2", "ADD R0, R1, R1", *odd_body,
            corrected=c,
        ),
    ]
    return Schedule("Synthesis", mode, {p.name: p for p in phases})


def validate_schedule(schedule: Schedule, max_len: int = 9) -> None:
    """Reject reads of undefined registers and phases with several emits.

    Each phase is checked against its declared live-in set, and every phase
    sequence the controller can produce for lengths ``2..max_len`` is checked
    to define those live-ins before use.
    """
    writes = {}
    for name, phase in schedule.phases.items():
        defined = set(phase.live_in)
        emits = 0
        for uop in phase.ops:
            for r in uop.reads():
                if r in REGISTERS and r not in defined:
                    raise ValueError(f"{schedule.name}.{name}: {r} read before write")
                if r is None or r not in REGISTERS + DELAYS:
                    raise ValueError(f"{schedule.name}.{name}: bad operand in {uop}")
            if uop.op is Op.TAP_DELAY and uop.a not in DELAYS:
                raise ValueError(f"{schedule.name}.{name}: {uop.a} is not a delay line")
            for w in uop.writes():
                if w not in REGISTERS:
                    raise ValueError(f"{schedule.name}.{name}: cannot write {w}")
                defined.add(w)
            emits += uop.op in EMIT_KIND
        if emits > 1:
            raise ValueError(f"{schedule.name}.{name}: {emits} emits in one phase")
        writes[name] = defined
    for n in range(2, max_len + 1):
        defined = set()
        for name in schedule.sequence(n):
            missing = schedule.phases[name].live_in - defined
            if missing:
                raise ValueError(
                    f"{schedule.name}: phase {name} needs {sorted(missing)} (length {n})"
                )
            defined |= writes[name]


ANALYSIS = analysis_schedule()
SYNTHESIS = synthesis_schedule()
validate_schedule(ANALYSIS)
validate_schedule(SYNTHESIS)


@dataclass
class OpCount:
    adder_uses: int = 0
    shifter_uses: int = 0
    register_transfers: int = 0
    cycles: int = 0
    corrections: int = 0
    samples: int = 0

    @property
    def pairs(self) -> Fraction:
        """Output coefficient pairs: N coefficients make N/2 pairs."""
        return Fraction(self.samples, 2)

    @property
    def adders_per_pair(self) -> Fraction:
        return Fraction(self.adder_uses) / self.pairs

    @property
    def shifters_per_pair(self) -> Fraction:
        return Fraction(self.shifter_uses) / self.pairs

    @property
    def per_output_pair(self) -> dict:
        return {"adders": self.adders_per_pair, "shifters": self.shifters_per_pair}

    def __add__(self, other: "OpCount") -> "OpCount":
        return OpCount(
            self.adder_uses + other.adder_uses,
            self.shifter_uses + other.shifter_uses,
            self.register_transfers + other.register_transfers,
            self.cycles + other.cycles,
            self.corrections + other.corrections,
            self.samples + other.samples,
        )

    def as_dict(self) -> dict:
        return {
            "adder_uses": self.adder_uses,
            "shifter_uses": self.shifter_uses,
            "register_transfers": self.register_transfers,
            "corrections": self.corrections,
            "cycles": self.cycles,
            "samples": self.samples,
            "adders_per_pair": str(self.adders_per_pair),
            "shifters_per_pair": str(self.shifters_per_pair),
        }


class DatapathOverflow(ArithmeticError):
    """A register wrapped around; ``cycle`` is the cycle that caused it."""

    def __init__(self, message: str, cycle: int):
        super().__init__(f"{message} (cycle {cycle})")
        self.cycle = cycle


class InputRangeError(DatapathOverflow, ValueError):
    pass


@dataclass
class PeState:
    m: int = 1
    n: int = 1
    reg_width: int = 9
    regs: dict = field(default_factory=dict)
    delays: dict = field(default_factory=dict)
    overflow_flag: bool = False
    overflow_cycle: Optional[int] = None
    overflow_events: int = 0
    neg: bool = False
    sticky: bool = False
    samples_in: int = 0
    count: OpCount = field(default_factory=OpCount)

    def __post_init__(self):
        if not self.regs:
            self.regs = {r: 0 for r in REGISTERS}
        if not self.delays:
            self.delays = {"Dm": deque([0] * self.m), "Dn": deque([0] * self.n)}

    @property
    def lo(self) -> int:
        return -(1 << (self.reg_width - 1))

    @property
    def hi(self) -> int:
        return (1 << (self.reg_width - 1)) - 1

    @property
    def mask(self) -> int:
        return (1 << self.reg_width) - 1

    def _signed(self, u: int) -> int:
        return u - (1 << self.reg_width) if u >> (self.reg_width - 1) else u

    def _write(self, reg: str, value: int, overflowed: bool = False) -> None:
        if overflowed or not self.lo <= value <= self.hi:
            self.overflow_events += 1
            if not self.overflow_flag:
                self.overflow_flag = True
                self.overflow_cycle = self.count.cycles
            value = self._signed(value & self.mask)
        self.regs[reg] = value

    def _add(self, a: int, b: int, carry: int) -> tuple[int, bool]:
        r = self._signed(((a & self.mask) + (b & self.mask) + carry) & self.mask)
        # signed overflow: operands agree in sign, result does not
        return r, (a < 0) == (b < 0) and (r < 0) != (a < 0)

    def _tap(self, line: str, value: int) -> int:
        q = self.delays[line]
        if not q:
            return value
        q.append(value)
        return q.popleft()

    def execute(self, uop: MicroOp, sample: Optional[int]):
        regs = self.regs
        out = None
        op = uop.op
        if op is Op.LOAD_IN:
            if sample is None:
                raise RuntimeError("LOAD_IN with no input sample")
            self._write(uop.dst, sample)
        elif op is Op.MOV:
            self._write(uop.dst, regs[uop.a])
        elif op is Op.ADD:
            self._write(uop.dst, *self._add(regs[uop.a], regs[uop.b], 0))
        elif op is Op.SUB_2C:
            b = regs[uop.b]
            r, _ = self._add(regs[uop.a], ~b & self.mask, 1)
            a = regs[uop.a]
            self._write(uop.dst, r, (a < 0) != (b < 0) and (r < 0) != (a < 0))
        elif op in SHIFT_OPS:
            k = SHIFT_OPS[op]
            v = regs[uop.dst]
            self.neg = v < 0
            self.sticky = bool(v & ((1 << k) - 1))
            self._write(uop.dst, v >> k)
        elif op is Op.CORRECT_NEG:
            if self.neg and self.sticky:
                self._write(uop.dst, regs[uop.dst] + 1)
        elif op is Op.TAP_DELAY:
            v = self._tap(uop.a, regs[uop.b])
            if uop.dst is not None:
                self._write(uop.dst, v)
        else:
            out = (EMIT_KIND[op], regs[uop.a])

        c = self.count
        c.cycles += 1
        if op in ADDER_OPS:
            c.adder_uses += 1
        elif op in SHIFT_OPS:
            c.shifter_uses += 1
        elif op is Op.CORRECT_NEG:
            c.corrections += 1
        elif op in TRANSFER_OPS:
            c.register_transfers += 1
        return out

    def run_phase(self, phase: Phase, sample: Optional[int] = None):
        emitted = None
        for uop in phase.ops:
            out = self.execute(uop, sample)
            if out is not None:
                emitted = out
        return emitted


def pe_configure(m: int = 1, n: int = 1, reg_width: int = 9) -> PeState:
    """A fresh PE with zeroed registers and delay lines of depth ``m`` and ``n``.

    A zero-depth delay line passes its input straight through.
    """
    if not 4 <= reg_width <= 32:
        raise ValueError(f"register width {reg_width} outside 4..32")
    if m < 0 or n < 0:
        raise ValueError("delay depths must be non-negative")
    return PeState(m=m, n=n, reg_width=reg_width)


def pe_step(pe: PeState, schedule: Schedule, input_sample: int):
    """Feed one sample through the phase the controller selects for it.

    Returns ``(pe, emitted)`` where ``emitted`` is ``None`` or ``(kind, value)``.
    Overflow sets ``pe.overflow_flag`` rather than raising.
    """
    if not pe.lo <= input_sample <= pe.hi:
        raise InputRangeError("input exceeds register width", pe.count.cycles)
    phase = schedule.phases[schedule.input_phase(pe.samples_in)]
    pe.samples_in += 1
    pe.count.samples += 1
    return pe, pe.run_phase(phase, input_sample)


def pe_flush(pe: PeState, schedule: Schedule) -> list:
    """Run the end-of-stream phases; returns what they emit."""
    out = []
    for name in schedule.flush_phases(pe.samples_in):
        e = pe.run_phase(schedule.phases[name])
        if e is not None:
            out.append(e)
    return out


def _stream(stream: Sequence[int], schedule: Schedule, reg_width: int):
    pe = pe_configure(1, 1, reg_width)
    emitted = []

    def check():
        if pe.overflow_flag:
            raise DatapathOverflow(
                f"{schedule.name}: register overflow at {reg_width} bits",
                pe.overflow_cycle,
            )

    for v in stream:
        _, e = pe_step(pe, schedule, v)
        check()
        if e is not None:
            emitted.append(e)
    emitted.extend(pe_flush(pe, schedule))
    check()
    return emitted, pe.count


def run_analysis(
    x: SignalLike,
    reg_width: int = 16,
    mode: RoundingMode = RoundingMode.HARDWARE_CORRECTED,
) -> tuple[SubbandPair, OpCount]:
    """Stream ``x`` through the analysis schedule.

    Raises :class:`DatapathOverflow` carrying the cycle index if any register
    wraps.
    """
    xs = _samples(x)
    if len(xs) < 2:
        raise ValueError("signal too short to decompose")
    schedule = ANALYSIS if mode is RoundingMode.HARDWARE_CORRECTED else analysis_schedule(mode)
    emitted, count = _stream(xs, schedule, reg_width)
    approx = [v for k, v in emitted if k == "S"]
    detail = [v for k, v in emitted if k == "D"]
    return SubbandPair(approx, detail, len(xs)), count


def run_synthesis(
    sb: SubbandPair,
    reg_width: int = 16,
    mode: RoundingMode = RoundingMode.HARDWARE_CORRECTED,
) -> tuple[list, OpCount]:
    n = sb.original_length
    if n < 2:
        raise ValueError("signal too short to decompose")
    schedule = SYNTHESIS if mode is RoundingMode.HARDWARE_CORRECTED else synthesis_schedule(mode)
    emitted, count = _stream(merge(sb.approx, sb.detail), schedule, reg_width)
    return [v for _, v in emitted], count


def schedule_op_count(schedule: Schedule, n: int) -> OpCount:
    """Op tally for a length-``n`` run, read off the phase tables.

    Counts never depend on sample values, so this matches an executed run.
    """
    c = OpCount(samples=n)
    for name in schedule.sequence(n):
        for uop in schedule.phases[name].ops:
            c.cycles += 1
            if uop.op in ADDER_OPS:
                c.adder_uses += 1
            elif uop.op in SHIFT_OPS:
                c.shifter_uses += 1
            elif uop.op is Op.CORRECT_NEG:
                c.corrections += 1
            elif uop.op in TRANSFER_OPS:
                c.register_transfers += 1
    return c


def format_schedule(schedule: Schedule) -> str:
    lines = [f"schedule {schedule.name} ({schedule.mode.name})"]
    for name, phase in schedule.phases.items():
        live = ", ".join(sorted(phase.live_in)) or "-"
        lines.append(f"  phase {name}  [live-in: {live}]")
        for i, uop in enumerate(phase.ops):
            lines.append(f"    {i:2d}  {uop}")
    return "\n".join(lines)


def signed_bits(lo: int, hi: int) -> int:
    """Smallest two's-complement width holding every value in ``[lo, hi]``."""
    w = 1
    while not (-(1 << (w - 1)) <= lo and hi <= (1 << (w - 1)) - 1):
        w += 1
    return w


@dataclass(frozen=True)
class RangeReport:
    input_bits: int
    detail_min: int
    detail_max: int
    approx_min: int
    approx_max: int
    required_signed_bits: int
    approx_required_bits: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def range_analysis(
    input_bits: int, mode: RoundingMode = RoundingMode.FLOOR_SHIFT
) -> RangeReport:
    """Exact coefficient extrema for unsigned ``input_bits``-wide input.

    Details come from every (even, odd, even) window. Approximations come from
    every even sample combined with the extreme details reachable on either
    side of it. ``required_signed_bits`` covers the detail range.
    """
    if not 1 <= input_bits <= 10:
        raise ValueError("input_bits must be in 1..10 for exhaustive search")
    d_lo, d_hi = _backend.detail_extrema(input_bits, mode.corrected)
    s_lo, s_hi = _backend.approx_extrema(input_bits, mode.corrected)
    return RangeReport(
        input_bits, d_lo, d_hi, s_lo, s_hi, signed_bits(d_lo, d_hi), signed_bits(s_lo, s_hi)
    )
