"""Time the numba and pure-numpy versions of the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The fast transform is included as a reference point for the direct sums.
Both backends are imported side by side, so the env flag is not needed here.
"""
import argparse
import time

import numpy as np

from quatrec import _accel, _kernels
from quatrec.dqft import qft_forward
from quatrec.signal import MaskSpec, QSignal2D, mask_from_spec


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba is not importable; only the numpy timings are meaningful")

    rng = np.random.default_rng(0)
    rows = []
    for n in (8, 16, 32):
        f = QSignal2D.random(n, n, rng)
        d = np.ascontiguousarray(f.data)
        _kernels.naive_qft_loops(d, False)  # compile outside the timer
        a = _kernels.naive_qft_loops(d, False)
        b = _kernels.naive_qft_numpy(d, False)
        assert np.allclose(a, b, atol=1e-10)
        rows.append((f"naive_qft {n}x{n}",
                     best_of(lambda: _kernels.naive_qft_loops(d, False), args.repeat),
                     best_of(lambda: _kernels.naive_qft_numpy(d, False), args.repeat),
                     best_of(lambda: qft_forward(f), args.repeat)))

    for n, band in ((12, 2), (16, 3), (24, 4)):
        W = mask_from_spec(MaskSpec.centered_rect(band, band), n, n)
        t = np.argwhere(mask_from_spec(MaskSpec.block(0, 0, n // 3, n // 3), n, n).members)
        x = np.argwhere(np.ones((n, n), bool))
        w = W.cells()
        _kernels.kernel_table_loops(t, x, w, n, n)
        rows.append((f"kernel_table {n}x{n} |T|={len(t)} |W|={len(w)}",
                     best_of(lambda: _kernels.kernel_table_loops(t, x, w, n, n), args.repeat),
                     best_of(lambda: _kernels.kernel_table_numpy(t, x, w, n, n), args.repeat),
                     None))

    print(f"{'case':40s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s} {'fast [s]':>11s}")
    for name, tn, tp, tf in rows:
        fast = f"{tf:11.2e}" if tf is not None else f"{'-':>11s}"
        print(f"{name:40s} {tn:11.2e} {tp:11.2e} {tp / tn:8.1f} {fast}")


if __name__ == "__main__":
    main()
