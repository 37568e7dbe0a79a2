"""``iwt53`` command line.

Exit codes: 0 success, 1 usage or validation error, 2 roundtrip mismatch,
3 datapath overflow.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from iwt53 import _backend
from iwt53.codec import (
    decode_container,
    encode_container,
    generate_test_signal,
    read_container,
    read_pgm,
    read_signal_text,
    write_container,
    write_pgm,
    write_signal_text,
)
from iwt53.datapath import (
    ANALYSIS,
    DatapathOverflow,
    OpCount,
    analysis_schedule,
    format_schedule,
    range_analysis,
    run_analysis,
    run_synthesis,
    schedule_op_count,
    synthesis_schedule,
)
from iwt53.lifting import RoundingMode, forward_1d
from iwt53.multilevel import (
    Decomposition2D,
    Image,
    forward_2d,
    forward_multilevel,
    inverse_2d,
    inverse_multilevel,
)

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_OVERFLOW = 0, 1, 2, 3

MODES = {"floor": RoundingMode.FLOOR_SHIFT, "hw": RoundingMode.HARDWARE_CORRECTED}
MODE_NAMES = {v: k for k, v in MODES.items()}

# Per-pair figures for a conventional (5,3) filter-bank datapath, as published;
# not measured here.
DIRECT_FORM_QUOTED = {"adders": 8, "shifters": 4}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_input(path, fmt):
    """Return a list of samples (1D) or an :class:`Image`."""
    if fmt == "auto":
        fmt = "pgm" if Path(path).suffix.lower() == ".pgm" else "text"
    if fmt == "pgm":
        return read_pgm(path)
    return list(read_signal_text(path).samples)


def _levels(value):
    if value == "max":
        return None
    try:
        j = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid level count {value!r}") from None
    return j


def _forward(data, levels, mode):
    if isinstance(data, Image):
        return forward_2d(data, levels, mode)
    return forward_multilevel(data, levels, mode)


def _inverse(dec):
    if isinstance(dec, Decomposition2D):
        return inverse_2d(dec).pixels
    return inverse_multilevel(dec)


def transform_op_count(dec) -> OpCount:
    """Datapath op tally for every 1D pass the decomposition performed."""
    total = OpCount()
    if isinstance(dec, Decomposition2D):
        for h, w in dec.level_shapes:
            for _ in range(h):
                total = total + schedule_op_count(ANALYSIS, w)
            for _ in range(w):
                total = total + schedule_op_count(ANALYSIS, h)
    else:
        for a_len, d_len in dec.level_lengths:
            total = total + schedule_op_count(ANALYSIS, a_len + d_len)
    return total


def _detail_energy(dec) -> int:
    if isinstance(dec, Decomposition2D):
        if not dec.levels:
            return 0
        ll = dec.subbands(dec.levels)["LL"]
        return sum(v * v for v in dec.coeffs) - sum(v * v for r in ll for v in r)
    k = len(dec.approx)
    return sum(v * v for v in dec.coeffs[k:])


def _emit(args, report, text):
    if getattr(args, "json", False):
        print(json.dumps(report, sort_keys=True))
    else:
        print(text)


def cmd_forward(args):
    data = _load_input(args.input, args.format)
    mode = MODES[args.mode]
    dec = _forward(data, args.levels, mode)
    nbytes = None
    if args.out:
        nbytes = write_container(dec, args.out)
    ops = transform_op_count(dec)
    n = len(dec.coeffs)
    report = {
        "samples": n,
        "levels": dec.levels,
        "mode": args.mode,
        "detail_energy": _detail_energy(dec),
        "ops": ops.as_dict(),
        "bytes": nbytes,
        "coeffs": dec.coeffs if not args.out else None,
    }
    text = (
        f"N={n} J={dec.levels} mode={args.mode} adders={ops.adder_uses} "
        f"shifters={ops.shifter_uses} detail_energy={report['detail_energy']}"
    )
    if args.out:
        text += f" wrote {nbytes} bytes to {args.out}"
    else:
        text += "\n" + " ".join(str(v) for v in dec.coeffs)
    _emit(args, report, text)
    return EXIT_OK


def cmd_inverse(args):
    dec = read_container(args.container)
    if isinstance(dec, Decomposition2D):
        img = inverse_2d(dec)
        fmt = args.format or "pgm"
        if fmt == "pgm":
            if not args.out:
                raise UsageError("2D output needs --out")
            write_pgm(img, args.out)
        else:
            _write_text(img.pixels, args.out)
    else:
        if args.format == "pgm":
            raise UsageError("a 1D container cannot be written as PGM")
        _write_text(inverse_multilevel(dec), args.out)
    return EXIT_OK


def _write_text(samples, out):
    write_signal_text(samples, out if out else sys.stdout)


def cmd_roundtrip(args):
    data = _load_input(args.input, args.format)
    original = data.pixels if isinstance(data, Image) else data
    if args.container:
        dec = read_container(args.container)
    else:
        dec = decode_container(encode_container(_forward(data, args.levels, MODES[args.mode])))
    rebuilt = _inverse(dec)
    if rebuilt == original:
        print(f"LOSSLESS N={len(original)} J={dec.levels} mode={MODE_NAMES[dec.mode]}")
        return EXIT_OK
    idx = next(
        (i for i, (a, b) in enumerate(zip(original, rebuilt)) if a != b),
        min(len(original), len(rebuilt)),
    )
    print(f"MISMATCH at index {idx}")
    return EXIT_MISMATCH


def _flatten(data):
    return data.pixels if isinstance(data, Image) else data


def cmd_ops(args):
    xs = _flatten(_load_input(args.input, args.format))
    if len(xs) < 2:
        raise UsageError("signal too short to decompose")
    width = max(16, max(abs(v) for v in xs).bit_length() + 4)
    if width > 32:
        raise UsageError("sample values too large for the datapath model")
    sb, fwd = run_analysis(xs, width)
    _, inv = run_synthesis(sb, width)
    report = {
        "samples": len(xs),
        "lifting": {"analysis": fwd.as_dict(), "synthesis": inv.as_dict()},
        "direct_form_quoted": DIRECT_FORM_QUOTED,
    }
    lines = [
        f"samples={len(xs)}",
        f"lifting analysis:  adders={fwd.adders_per_pair} shifters={fwd.shifters_per_pair} per pair"
        f" (total adders={fwd.adder_uses} shifters={fwd.shifter_uses} cycles={fwd.cycles})",
        f"lifting synthesis: adders={inv.adders_per_pair} shifters={inv.shifters_per_pair} per pair"
        f" (total adders={inv.adder_uses} shifters={inv.shifter_uses}"
        f" cycles={inv.cycles})",
        f"direct form (quoted, not measured): adders={DIRECT_FORM_QUOTED['adders']}"
        f" shifters={DIRECT_FORM_QUOTED['shifters']} per pair",
    ]
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def cmd_simulate(args):
    xs = _flatten(_load_input(args.input, args.format))
    if len(xs) < 2:
        raise UsageError("signal too short to decompose")
    mode = MODES[args.mode]
    try:
        sb, fwd = run_analysis(xs, args.reg_width, mode)
        rebuilt, inv = run_synthesis(sb, args.reg_width, mode)
    except DatapathOverflow as exc:
        report = {"verdict": "OVERFLOW", "cycle": exc.cycle, "reg_width": args.reg_width}
        _emit(args, report, f"OVERFLOW at cycle {exc.cycle} (reg_width={args.reg_width})")
        return EXIT_OVERFLOW
    ref = forward_1d(xs, mode)
    ok = sb == ref and rebuilt == xs
    verdict = "EQUIVALENT" if ok else "MISMATCH"
    report = {
        "verdict": verdict,
        "reg_width": args.reg_width,
        "mode": args.mode,
        "analysis_cycles": fwd.cycles,
        "synthesis_cycles": inv.cycles,
        "overflows": 0,
        "approx": sb.approx,
        "detail": sb.detail,
    }
    text = (
        f"{verdict} reg_width={args.reg_width} mode={args.mode} "
        f"cycles={fwd.cycles}+{inv.cycles} overflows=0\n"
        f"s: {' '.join(map(str, sb.approx))}\nd: {' '.join(map(str, sb.detail))}"
    )
    _emit(args, report, text)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_gen(args):
    sig = generate_test_signal(args.count, args.seed)
    _write_text(sig.samples, args.out)
    return EXIT_OK


def cmd_schedule(args):
    mode = MODES[args.mode]
    build = analysis_schedule if args.name == "analysis" else synthesis_schedule
    print(format_schedule(build(mode)))
    return EXIT_OK


def cmd_range(args):
    rep = range_analysis(args.bits, MODES[args.mode])
    text = (
        f"input_bits={rep.input_bits} backend={_backend.NAME}\n"
        f"detail in [{rep.detail_min}, {rep.detail_max}] -> {rep.required_signed_bits} signed bits\n"
        f"approx in [{rep.approx_min}, {rep.approx_max}] -> {rep.approx_required_bits} signed bits"
    )
    _emit(args, rep.as_dict(), text)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="iwt53", description="Integer (5,3) lifting wavelet toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, levels=False, mode="floor"):
        sp.add_argument("--format", choices=["auto", "text", "pgm"], default="auto")
        sp.add_argument("--mode", choices=sorted(MODES), default=mode)
        if levels:
            sp.add_argument("--levels", "-J", type=_levels, default=1,
                            help="decomposition levels, or 'max'")

    sp = sub.add_parser("forward", help="forward transform to an IWT1 container")
    sp.add_argument("input")
    sp.add_argument("--out", "-o")
    sp.add_argument("--json", action="store_true")
    common(sp, levels=True)
    sp.set_defaults(func=cmd_forward)

    sp = sub.add_parser("inverse", help="reconstruct from an IWT1 container")
    sp.add_argument("container")
    sp.add_argument("--out", "-o")
    sp.add_argument("--format", choices=["text", "pgm"])
    sp.set_defaults(func=cmd_inverse)

    sp = sub.add_parser("roundtrip", help="check inverse(forward(x)) == x")
    sp.add_argument("input")
    sp.add_argument("--container", help="compare against this container instead")
    common(sp, levels=True)
    sp.set_defaults(func=cmd_roundtrip)

    sp = sub.add_parser("ops", help="adder/shifter counts per output pair")
    sp.add_argument("input")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--format", choices=["auto", "text", "pgm"], default="auto")
    sp.set_defaults(func=cmd_ops)

    sp = sub.add_parser("simulate", help="run the shift-add datapath model")
    sp.add_argument("input")
    sp.add_argument("--reg-width", "-W", type=int, default=16)
    sp.add_argument("--json", action="store_true")
    common(sp, mode="hw")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("gen", help="seeded clamped-normal test signal")
    sp.add_argument("--count", "-n", type=int, default=64)
    sp.add_argument("--seed", "-s", type=int, default=1)
    sp.add_argument("--out", "-o")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("schedule", help="dump datapath micro-op tables")
    sp.add_argument("name", choices=["analysis", "synthesis"])
    sp.add_argument("--mode", choices=sorted(MODES), default="hw")
    sp.set_defaults(func=cmd_schedule)

    sp = sub.add_parser("range", help="exhaustive coefficient range search")
    sp.add_argument("--bits", type=int, default=8)
    sp.add_argument("--mode", choices=sorted(MODES), default="floor")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_range)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"iwt53 {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
