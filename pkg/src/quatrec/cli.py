"""Command line entry point: ``quatrec {recover,qft,verify,kernel}``.

Exit codes: 0 success, 1 usage or input error, 2 recovery without a
convergence guarantee or without convergence, 3 a verification property
failed.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import dqft
from .errors import QuatRecError
from .limiting import (
    LimitingPair,
    hs_norm,
    hs_norm_bruteforce,
    kernel_matrix,
    op_norm_estimate,
)
from .recovery import make_noise, recover, simulate_received
from .signal import Mask, QSignal2D, mask_from_spec, parse_mask_spec
from .synth_io import (
    ExperimentConfig,
    bandlimit_project,
    image_to_qsignal,
    load_signal,
    qsignal_to_image,
    read_netpbm,
    save_signal,
    synth_texture,
    write_metrics,
    write_netpbm,
)
from .uncertainty import check_uncertainty, concentration, random_trial

log = logging.getLogger("quatrec")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_CONVERGENCE = 2
EXIT_VERIFY_FAILED = 3

MAX_VERIFY_PX = 16 * 16


class UsageError(Exception):
    pass


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        r, c = text.lower().split("x")
        r, c = int(r), int(c)
    except ValueError:
        raise UsageError(f"dims must look like 8x8, got {text!r}") from None
    if r < 1 or c < 1:
        raise UsageError(f"dims must be positive, got {text!r}")
    return r, c


def _image_ext(mode: str) -> str:
    return ".ppm" if mode == "vector" else ".pgm"


def run_recover(cfg: ExperimentConfig) -> int:
    """Synthesize or load, bandlimit, mask, recover, write artifacts."""
    if cfg.input is not None:
        img = read_netpbm(cfg.input)
        cfg = replace(cfg, rows=img.rows, cols=img.cols)
    cfg.validate()
    band = mask_from_spec(cfg.band, cfg.rows, cfg.cols)
    missing = mask_from_spec(cfg.missing, cfg.rows, cfg.cols)
    pair = LimitingPair(missing, band)

    if cfg.input is not None:
        f = bandlimit_project(image_to_qsignal(img), band)
    else:
        f = bandlimit_project(synth_texture((cfg.rows, cfg.cols), band, cfg.seed), band)
    noise = make_noise(cfg.rows, cfg.cols, cfg.noise, cfg.seed + 1) if cfg.noise > 0 else None
    problem = simulate_received(f, pair, noise, cfg.max_iters, cfg.tol)
    report = recover(problem, truth=f)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    ext = _image_ext(cfg.image_mode)
    write_netpbm(qsignal_to_image(f, cfg.image_mode), out / f"original{ext}")
    write_netpbm(qsignal_to_image(problem.received, cfg.image_mode), out / f"masked{ext}")
    write_netpbm(qsignal_to_image(report.recovered, cfg.image_mode), out / f"recovered{ext}")
    write_netpbm(qsignal_to_image(report.recovered - f, "modulus"), out / "error.pgm")
    write_metrics(report, out / "metrics.csv")

    err = report.final_error
    print(f"grid {cfg.rows}x{cfg.cols}  |T|={missing.count}  |W|={band.count}  "
          f"|T||W|/N={pair.tw_product / pair.n_px:.6f}  rho={report.rho:.6f}")
    print(f"iterations {report.iterations_run}  converged={report.converged}  "
          f"guaranteed={report.guaranteed}  true_error={err:.3e}")
    if not report.guaranteed:
        print("warning: |T||W| >= N, recovery is not guaranteed", file=sys.stderr)
    if report.converged and report.guaranteed:
        return EXIT_OK
    return EXIT_NO_CONVERGENCE


def run_qft(src, dst, inverse: bool = False) -> int:
    src, dst = Path(src), Path(dst)
    if src.suffix == ".npy":
        f = load_signal(src)
    else:
        f = image_to_qsignal(read_netpbm(src))
    F = dqft.qft_inverse(f) if inverse else dqft.qft_forward(f)
    if dst.suffix == ".npy":
        save_signal(F, dst)
    else:
        # only the modulus survives 8-bit export; normalise to the peak
        peak = float(np.max(np.sqrt(np.sum(F.data ** 2, axis=-1))))
        write_netpbm(qsignal_to_image(F, "modulus", scale=1.0 / peak if peak > 0 else 1.0), dst)
    print(f"{'inverse' if inverse else 'forward'} QFT {f.rows}x{f.cols}: {src} -> {dst}")
    return EXIT_OK


def _random_pair(rows, cols, rng):
    t = Mask(rng.random((rows, cols)) < rng.uniform(0.05, 0.8))
    w = Mask(rng.random((rows, cols)) < rng.uniform(0.05, 0.8))
    return LimitingPair(t, w)


def run_verify(dims=(8, 8), trials=1000, seed=0, out=None, forward=None, inverse=None,
               stream=None) -> int:
    """Property sweeps: transform identities, HS-norm lemmas, uncertainty bound.

    ``forward``/``inverse`` replace the transform under test (fault injection).
    The uncertainty sweep uses ``trials`` draws; the costlier transform and
    kernel checks use ``max(1, trials // 10)``.
    """
    stream = stream or sys.stdout
    forward = forward or dqft.qft_forward
    inverse = inverse or dqft.qft_inverse
    rows, cols = dims
    if rows * cols > MAX_VERIFY_PX:
        raise UsageError(f"verify needs at most {MAX_VERIFY_PX} cells, got {rows}x{cols}")
    if trials < 0:
        raise UsageError("trials must be >= 0")

    rng = np.random.default_rng(seed)
    heavy = max(1, trials // 10) if trials > 0 else 0
    results = {}

    def record(name, worst, ok, n):
        results[name] = {"pass": bool(ok), "worst": float(worst), "trials": int(n)}

    if trials == 0:
        print("warning: trials=0, every property passes vacuously", file=stream)

    # transform
    worst_parseval = worst_round = worst_naive = 0.0
    for _ in range(heavy):
        f = QSignal2D.random(rows, cols, rng)
        F = forward(f)
        worst_parseval = max(worst_parseval, abs(F.norm() - f.norm()) / f.norm())
        worst_round = max(worst_round, float(np.max(np.abs(inverse(F).data - f.data))))
        worst_naive = max(worst_naive, float(np.max(np.abs(F.data - dqft.qft_naive(f).data))))
    record("parseval", worst_parseval, worst_parseval < 1e-10, heavy)
    record("round_trip", worst_round, worst_round < 1e-10, heavy)
    record("fast_vs_naive", worst_naive, worst_naive < 1e-10, heavy)

    # HS-norm lemmas and operator norm
    worst_hs = worst_commute = 0.0
    worst_op = -math.inf if heavy else 0.0
    for _ in range(heavy):
        pair = _random_pair(rows, cols, rng)
        closed = hs_norm(pair)
        a = hs_norm_bruteforce(pair, "FW_ST")
        b = hs_norm_bruteforce(pair, "ST_FW")
        worst_hs = max(worst_hs, abs(a - closed))
        worst_commute = max(worst_commute, abs(a - b))
        worst_op = max(worst_op, op_norm_estimate(pair, 30) - closed)
    record("hs_norm_closed_form", worst_hs, worst_hs <= 1e-9, heavy)
    record("hs_norm_commute", worst_commute, worst_commute <= 1e-9, heavy)
    record("op_norm_le_hs", worst_op, worst_op <= 1e-9, heavy)

    # uncertainty bound
    worst_margin = math.inf if trials else 0.0
    violations = 0
    for _ in range(trials):
        f, pair = random_trial(rows, cols, rng)
        ok, margin = check_uncertainty(concentration(f, pair))
        violations += not ok
        worst_margin = min(worst_margin, margin)
    record("uncertainty_bound", worst_margin, violations == 0, trials)

    all_ok = all(r["pass"] for r in results.values())
    for name, r in results.items():
        print(f"{'PASS' if r['pass'] else 'FAIL'} {name:<22} worst={r['worst']:.3e} trials={r['trials']}",
              file=stream)
    summary = {"dims": [rows, cols], "trials": trials, "seed": seed, "passed": all_ok, "properties": results}
    if out is not None:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if all_ok else EXIT_VERIFY_FAILED


def run_kernel(band_spec: str, out, dims=(8, 8), missing_spec: str | None = None) -> int:
    """Dump ``k(t, x)`` for every ``t`` in T and every ``x`` as CSV."""
    rows, cols = dims
    band = mask_from_spec(parse_mask_spec(band_spec), rows, cols)
    t_mask = Mask.full(rows, cols) if missing_spec is None else mask_from_spec(parse_mask_spec(missing_spec), rows, cols)
    pair = LimitingPair(t_mask, band)
    tc = t_mask.cells()
    xc = np.argwhere(np.ones((rows, cols), bool))
    K = kernel_matrix(pair, t_cells=tc, x_cells=xc) if len(tc) else np.zeros((0, len(xc), 4))
    out = Path(out)
    try:
        with open(out, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["t_row", "t_col", "x_row", "x_col", "w", "x", "y", "z"])
            for p, (t1, t2) in enumerate(tc):
                for q, (x1, x2) in enumerate(xc):
                    wr.writerow([t1, t2, x1, x2, *(repr(float(v)) for v in K[p, q])])
    except OSError as exc:
        raise OSError(f"cannot write kernel table {out}: {exc}") from exc
    print(f"kernel table {len(tc)}x{len(xc)} -> {out}  hs_norm={hs_norm(pair):.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quatrec", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("recover", help="run a recovery experiment from a config file")
    r.add_argument("--config", required=True)
    r.add_argument("--seed", type=int)
    r.add_argument("--out")
    r.add_argument("--noise", type=float)
    r.add_argument("--max-iters", type=int)

    q = sub.add_parser("qft", help="transform an image or .npy signal")
    q.add_argument("--in", dest="src", required=True)
    q.add_argument("--out", dest="dst", required=True)
    q.add_argument("--inverse", action="store_true")

    v = sub.add_parser("verify", help="run property sweeps")
    v.add_argument("--dims", default="8x8")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", default="verify-summary.json")

    k = sub.add_parser("kernel", help="dump kernel tables")
    k.add_argument("--band", required=True)
    k.add_argument("--out", required=True)
    k.add_argument("--dims", default="8x8")
    k.add_argument("--missing")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "recover":
            overrides = {"seed": args.seed, "out": args.out, "noise": args.noise, "max_iters": args.max_iters}
            cfg = ExperimentConfig.from_file(args.config, overrides)
            cfg.validate()
            return run_recover(cfg)
        if args.command == "qft":
            return run_qft(args.src, args.dst, args.inverse)
        if args.command == "verify":
            return run_verify(_parse_dims(args.dims), args.trials, args.seed, args.out)
        if args.command == "kernel":
            return run_kernel(args.band, args.out, _parse_dims(args.dims), args.missing)
    except (UsageError, QuatRecError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
