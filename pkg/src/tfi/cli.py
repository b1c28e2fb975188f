"""Command-line interface.

Subcommands: sweep, trial, replay, calibrate-detector.
Exit codes: 0 success, 1 argument error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _csv_list(conv):
    def parse(text):
        return tuple(conv(v) for v in text.split(",") if v)
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tfi", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a Monte Carlo sweep", parents=[])
    sw.add_argument("--snr-min", type=float, default=9.0)
    sw.add_argument("--snr-max", type=float, default=35.0)
    sw.add_argument("--snr-step", type=float, default=2.0)
    sw.add_argument("--g", type=_csv_list(int), default=(1, 2, 4, 8),
                    help="comma-separated overclock factors")
    sw.add_argument("--scheme", type=_csv_list(str),
                    default=("bpsk", "qpsk", "qam16", "qam64"),
                    help="comma-separated modulation schemes")
    sw.add_argument("--noise-model", choices=("wideband", "brickwall"),
                    default="wideband")
    sw.add_argument("--taps", default="flat")
    sw.add_argument("--packets", type=int, default=3000)
    sw.add_argument("--payload-symbols", type=int, default=20)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--out", required=True)
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    sw.add_argument("--timing", action="store_true",
                    help="record wall time per point (breaks byte-identical reruns)")

    tr = sub.add_parser("trial", help="run one paired trial verbosely")
    tr.add_argument("--g", type=int, default=8)
    tr.add_argument("--scheme", default="qam16")
    tr.add_argument("--snr", type=float, default=12.0)
    tr.add_argument("--noise-model", choices=("wideband", "brickwall"),
                    default="wideband")
    tr.add_argument("--taps", default="flat")
    tr.add_argument("--payload-symbols", type=int, default=20)
    tr.add_argument("--cfo", type=float, default=None,
                    help="fixed CFO in Hz (default: random within +-1 kHz)")
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--dump-iq", default=None, metavar="PATH")

    rp = sub.add_parser("replay", help="run both receivers on an IQ capture")
    rp.add_argument("--iq", required=True)
    rp.add_argument("--g", type=int, default=None,
                    help="override the capture's overclock factor")
    rp.add_argument("--scheme", required=True)
    rp.add_argument("--payload-symbols", type=int, default=20)

    cal = sub.add_parser("calibrate-detector",
                         help="regenerate the false-alarm energy threshold")
    cal.add_argument("--fa-rate", type=float, default=0.01)
    cal.add_argument("--samples", type=int, default=2_000_000)
    cal.add_argument("--seed", type=int, default=2024)
    return p


def _cmd_sweep(args) -> int:
    from .harness import SweepSpec, run_sweep
    from .results import emit_results

    snrs = tuple(np.arange(args.snr_min, args.snr_max + 1e-9, args.snr_step))
    spec = SweepSpec(snr_grid_db=tuple(float(s) for s in snrs),
                     g_grid=args.g, schemes=args.scheme,
                     noise_model=args.noise_model, taps=args.taps,
                     packets_per_point=args.packets,
                     payload_symbols=args.payload_symbols,
                     base_seed=args.seed, timing=args.timing)
    rows = run_sweep(spec)
    emit_results(rows, args.format, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _print_diag(tag, d):
    print(f"[{tag}] detected={d.detected} missed={d.missed} "
          f"detect_index={d.detect_index} sync_index={d.sync_index} "
          f"sync_error={d.sync_error} cfo_coarse={d.cfo_coarse_hz} "
          f"cfo_fine={d.cfo_fine_hz} ber={d.ber:.6g} "
          f"errors={d.n_bit_errors}/{d.n_bits}"
          + (f" error={d.error}" if d.error else ""))
    if d.per_copy_evm is not None:
        evm = ", ".join(f"{v:.4f}" for v in d.per_copy_evm)
        print(f"[{tag}] per-copy EVM: {evm}")


def _cmd_trial(args) -> int:
    from .harness import make_trial, run_trial, trial_seed
    from .iqfile import IqMeta, write_iq_capture

    seed = trial_seed(args.seed, args.scheme, args.g, args.snr,
                      args.noise_model, 0)
    blueprint, scenario = make_trial(
        args.scheme, args.g, args.snr, args.noise_model, args.taps,
        args.payload_symbols, seed,
        cfo_max_hz=0.0 if args.cfo is not None else 1000.0)
    if args.cfo is not None:
        scenario = replace(scenario, cfo_hz=args.cfo)
    rec = run_trial(blueprint, scenario, checksum=True)
    print(f"capture checksum: {rec.capture_checksum}")
    print(f"true cfo: {scenario.cfo_hz:.3f} Hz, lead-in: {scenario.timing_offset} "
          f"(+{scenario.timing_frac:.3f}) oversamples")
    _print_diag("tfi", rec.tfi)
    _print_diag("baseline", rec.baseline)
    if args.dump_iq:
        from .channel import apply_scenario
        capture = apply_scenario(blueprint, scenario)
        meta = IqMeta(sample_rate=blueprint.cfg.base_rate * args.g,
                      overclock=args.g)
        write_iq_capture(capture, meta, args.dump_iq)
        print(f"wrote {capture.size} samples to {args.dump_iq}")
    return 0


def _cmd_replay(args) -> int:
    from .config import OfdmConfig
    from .iqfile import read_iq_capture
    from .receiver import receive_frame, receive_frame_baseline

    stream, meta = read_iq_capture(args.iq)
    g = args.g or meta.overclock
    cfg = OfdmConfig(overclock=g)
    print(f"capture: {stream.size} samples at {meta.sample_rate:.0f} Hz, G={g}")
    tfi = receive_frame(stream.astype(complex), cfg, args.scheme,
                        args.payload_symbols)
    base = receive_frame_baseline(stream.astype(complex), cfg, args.scheme,
                                  args.payload_symbols)
    _print_diag("tfi", tfi)
    _print_diag("baseline", base)
    print(f"tfi decoded bits: {tfi.decoded_bits.size}, "
          f"baseline decoded bits: {base.decoded_bits.size}")
    return 0


def _cmd_calibrate(args) -> int:
    from .detect import DEFAULT_ENERGY_THRESHOLD, calibrate_energy_threshold

    thr = calibrate_energy_threshold(args.fa_rate, args.samples, seed=args.seed)
    print(f"energy threshold for {args.fa_rate:.2%} false alarm "
          f"(unit-variance noise, 16-sample window): {thr:.4f}")
    print(f"shipped constant DEFAULT_ENERGY_THRESHOLD = {DEFAULT_ENERGY_THRESHOLD}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"sweep": _cmd_sweep, "trial": _cmd_trial,
                "replay": _cmd_replay, "calibrate-detector": _cmd_calibrate}
    try:
        return handlers[args.command](args)
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
