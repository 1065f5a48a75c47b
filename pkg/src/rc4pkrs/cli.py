"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 runtime error, 3 statistical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path
from typing import BinaryIO, Sequence

from . import cycle_model
from .core_rc4 import KeyMaterial
from .designs import get_design
from .engine import KeystreamEngine, generate
from .errors import ConfigError, RC4Error
from .netchannel import DEFAULT_DISCARD, DEFAULT_FIFO, ChannelConfig, connect, serve_once, xor_bytes
from .nist_sts import DEFAULT_BITS, BitSequence, TestParams, render_csv, render_text, run_suite

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_STAT_FAIL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _design(text: str):
    try:
        return get_design(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _address(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise argparse.ArgumentTypeError(f"expected HOST:PORT, got {text!r}")
    return host or "127.0.0.1", int(port)


def _add_key(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--key", help="key as UTF-8 text")
    g.add_argument("--key-hex", help="key as hex digits")


def _common(p: argparse.ArgumentParser, key_required: bool = True) -> None:
    p.add_argument("--design", type=_design, default=get_design(1), help="d1..d7 (default d1)")
    _add_key(p, key_required)


def _key(args: argparse.Namespace) -> KeyMaterial:
    if args.key_hex is not None:
        return KeyMaterial.from_hex(args.key_hex)
    return KeyMaterial.from_text(args.key)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rc4pkrs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write raw keystream bytes")
    _common(p, key_required=False)
    p.add_argument("--nbytes", type=int, default=DEFAULT_BITS // 8,
                   help="bytes per output file (default 167800 = 1,342,400 bits)")
    p.add_argument("--files", type=int, help="write this many files, one per key in --keyfile")
    p.add_argument("--keyfile", type=Path, help="one key per line (hex if --keyfile-hex)")
    p.add_argument("--keyfile-hex", action="store_true")
    p.add_argument("--out", type=Path, required=True, help="output file, or directory with --files")

    for name, verb in (("encrypt", "encrypt"), ("decrypt", "decrypt")):
        p = sub.add_parser(name, help=f"{verb} a file by XOR with the keystream")
        _common(p)
        p.add_argument("--in", dest="inp", type=Path, help="input file (default stdin)")
        p.add_argument("--out", type=Path, help="output file (default stdout)")
        p.add_argument("--skip", type=int, default=0, help="keystream bytes to discard first")

    p = sub.add_parser("bench", help="clock model and software throughput")
    p.add_argument("--design", type=_design, default=get_design(1))
    p.add_argument("--n", type=int, default=256, help="keystream bytes for the clock model")
    p.add_argument("--frequency-mhz", type=float, help="override the design's clock frequency")
    p.add_argument("--measure-bytes", type=int, default=1 << 20,
                   help="bytes to generate for the software timing (0 skips it)")
    p.add_argument("--trace", type=int, metavar="ROUNDS", help="also print the half-clock trace")

    p = sub.add_parser("nist", help="run the 15-test battery over keystream files")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("--bits", type=int, default=DEFAULT_BITS, help="bits used from each file")
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", type=Path, help="write the text report here as well")
    p.add_argument("--csv", type=Path, help="write the CSV report here")
    p.add_argument("--drop-invalid", action="store_true",
                   help="leave out results whose applicability condition failed")

    p = sub.add_parser("serve", help="accept one encrypted session and write received plaintext")
    _common(p)
    p.add_argument("--addr", type=_address, default=("127.0.0.1", 0), help="HOST:PORT to listen on")
    p.add_argument("--out", type=Path, help="plaintext sink (default stdout)")
    p.add_argument("--fifo", type=int, default=DEFAULT_FIFO, help="keystream FIFO bytes")
    p.add_argument("--discard", type=int, default=DEFAULT_DISCARD)
    p.add_argument("--timeout", type=float, default=30.0)

    p = sub.add_parser("connect", help="send a file over an encrypted session")
    _common(p)
    p.add_argument("--addr", type=_address, required=True, help="HOST:PORT of the server")
    p.add_argument("--in", dest="inp", type=Path, help="input file (default stdin)")
    p.add_argument("--chunk", type=int, default=1 << 16, help="plaintext bytes per frame")
    p.add_argument("--fifo", type=int, default=DEFAULT_FIFO)
    p.add_argument("--discard", type=int, default=DEFAULT_DISCARD)
    p.add_argument("--timeout", type=float, default=30.0)
    return parser


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _read_input(path: Path | None) -> bytes:
    return path.read_bytes() if path else sys.stdin.buffer.read()


def _write_output(path: Path | None, data: bytes) -> None:
    if path:
        path.write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def cmd_gen(args: argparse.Namespace) -> int:
    if args.nbytes < 0:
        raise UsageError("--nbytes must be >= 0")
    if args.files is None:
        if args.key is None and args.key_hex is None:
            raise UsageError("gen needs --key/--key-hex, or --files with --keyfile")
        args.out.write_bytes(generate(args.design, _key(args), args.nbytes))
        return EXIT_OK
    if args.keyfile is None:
        raise UsageError("--files needs --keyfile")
    lines = [ln.strip() for ln in args.keyfile.read_text(encoding="utf-8").splitlines()]
    keys = [ln for ln in lines if ln]
    if len(keys) < args.files:
        raise ConfigError(f"{args.keyfile} lists {len(keys)} keys, {args.files} needed")
    args.out.mkdir(parents=True, exist_ok=True)
    width = max(3, len(str(args.files)))
    for k, text in enumerate(keys[: args.files], 1):
        key = KeyMaterial.from_hex(text) if args.keyfile_hex else KeyMaterial.from_text(text)
        dest = args.out / f"{args.design.name.lower()}_{k:0{width}d}.bin"
        dest.write_bytes(generate(args.design, key, args.nbytes))
    return EXIT_OK


def cmd_xor(args: argparse.Namespace) -> int:
    if args.skip < 0:
        raise UsageError("--skip must be >= 0")
    data = _read_input(args.inp)
    engine = KeystreamEngine(args.design, _key(args))
    engine.read(args.skip)
    _write_output(args.out, xor_bytes(data, engine.read(len(data))))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = args.design
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    freq = cfg.frequency_hz if args.frequency_mhz is None else args.frequency_mhz * 1e6
    clocks = cycle_model.clock_count(cfg, args.n)
    b = cycle_model.budget(cfg)
    rows = [
        ("design", cfg.name),
        ("bytes per clock", str(cfg.bytes_per_clock)),
        ("setup clocks", f"{b.setup} (+{b.prga_fill_clocks} fill)"),
        (f"clocks for n={args.n}", _frac(clocks)),
        ("clocks per byte", _frac(cycle_model.per_byte_cost(cfg, args.n)) if args.n else "n/a"),
        ("asymptotic clocks per byte", _frac(cfg.rate)),
        (f"throughput at {freq / 1e6:g} MHz", f"{cycle_model.throughput_bps(cfg, freq) / 1e9:.3f} Gbps"),
    ]
    if args.measure_bytes > 0:
        generate(cfg, b"warmup", 64)
        t0 = time.perf_counter()
        generate(cfg, b"benchmark-key-16", args.measure_bytes)
        dt = time.perf_counter() - t0
        rows.append(("software keystream", f"{args.measure_bytes / dt / 1e6:.1f} MB/s"))
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k.ljust(width)}  {v}")
    if args.trace is not None:
        print()
        sys.stdout.write(cycle_model.trace(cfg, args.trace).text())
    return EXIT_OK


def _frac(x) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x} (= {float(x):.6g})"


def cmd_nist(args: argparse.Namespace) -> int:
    if not 0 < args.alpha < 1:
        raise UsageError("--alpha must be in (0, 1)")
    seqs = [BitSequence.from_file(f, args.bits) for f in args.files]
    report = run_suite(seqs, alpha=args.alpha, params=TestParams(), jobs=max(1, args.jobs),
                       drop_invalid=args.drop_invalid)
    text = render_text(report)
    sys.stdout.write(text)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    if args.csv:
        args.csv.write_text(render_csv(report), encoding="utf-8")
    return EXIT_OK if report.passed else EXIT_STAT_FAIL


def _channel(args: argparse.Namespace, role: str) -> ChannelConfig:
    host, port = args.addr
    return ChannelConfig(role, _key(args), args.design, host, port, args.fifo, args.discard,
                         args.timeout)


def cmd_serve(args: argparse.Namespace) -> int:
    cfg = _channel(args, "listener")

    def announce(port: int) -> None:
        print(f"listening on {cfg.host}:{port}", file=sys.stderr, flush=True)

    sink: BinaryIO = args.out.open("wb") if args.out else sys.stdout.buffer
    try:
        with serve_once(cfg, announce) as session:
            for frame in session:
                sink.write(frame)
            sink.flush()
            print(f"received {session.frames_received} frames, keystream used {session.consumed}",
                  file=sys.stderr)
    finally:
        if args.out:
            sink.close()
    return EXIT_OK


def cmd_connect(args: argparse.Namespace) -> int:
    if args.chunk < 1:
        raise UsageError("--chunk must be positive")
    data = _read_input(args.inp)
    with connect(_channel(args, "initiator")) as session:
        for start in range(0, len(data), args.chunk):
            session.send(data[start:start + args.chunk])
        print(f"sent {session.frames_sent} frames, keystream used {session.consumed}",
              file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "encrypt": cmd_xor,
    "decrypt": cmd_xor,
    "bench": cmd_bench,
    "nist": cmd_nist,
    "serve": cmd_serve,
    "connect": cmd_connect,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (RC4Error, OSError) as exc:
        print(f"rc4pkrs: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
