"""Test-signal synthesis, Netpbm image I/O, metrics files and experiment configs.

Colour images are embedded as pure quaternions ``R i + G j + B k`` and gray
images as the scalar part, with samples scaled by ``1/maxval``.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .dqft import qft_forward, qft_inverse
from .errors import SpecError
from .signal import Mask, MaskSpec, QSignal2D, apply_mask, mask_from_spec, parse_mask_spec

__all__ = [
    "ImageBuffer",
    "read_netpbm",
    "write_netpbm",
    "image_to_qsignal",
    "qsignal_to_image",
    "bandlimit_project",
    "synth_bandlimited",
    "synth_texture",
    "write_metrics",
    "read_metrics",
    "summary_path",
    "save_signal",
    "load_signal",
    "ExperimentConfig",
    "METRICS_COLUMNS",
]

METRICS_COLUMNS = ("iter", "residual", "true_error")


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """Integer samples, shape ``(rows, cols)`` for gray or ``(rows, cols, 3)`` for RGB."""

    samples: np.ndarray
    maxval: int = 255

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim == 3 and s.shape[2] == 1:
            s = s[..., 0]
        if s.ndim not in (2, 3) or (s.ndim == 3 and s.shape[2] != 3):
            raise ValueError(f"unsupported channel layout {s.shape}")
        if not 0 < self.maxval <= 65535:
            raise ValueError(f"maxval must be in 1..65535, got {self.maxval}")
        dtype = np.uint8 if self.maxval < 256 else np.uint16
        if np.any(s < 0) or np.any(s > self.maxval):
            raise ValueError("sample outside 0..maxval")
        s = s.astype(dtype)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def rows(self) -> int:
        return self.samples.shape[0]

    @property
    def cols(self) -> int:
        return self.samples.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.samples.ndim == 2 else 3

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.maxval == other.maxval and np.array_equal(self.samples, other.samples)

    __hash__ = None


def _tokens(data: bytes, count: int, pos: int):
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ValueError("truncated Netpbm header")
        out.append(data[start:pos])
    return out, pos


def read_netpbm(path) -> ImageBuffer:
    """Read a binary PGM (P5) or PPM (P6) file."""
    path = Path(path)
    data = path.read_bytes()
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise ValueError(f"{path}: not a binary PGM/PPM file (magic {magic!r})")
    (w, h, mv), pos = _tokens(data, 3, 2)
    width, height, maxval = int(w), int(h), int(mv)
    if not 0 < maxval <= 65535:
        raise ValueError(f"{path}: bad maxval {maxval}")
    pos += 1  # single whitespace after maxval
    channels = 1 if magic == b"P5" else 3
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    n = width * height * channels
    raw = np.frombuffer(data, dtype=dtype, count=n, offset=pos)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return ImageBuffer(raw.reshape(shape).astype(np.uint16 if maxval > 255 else np.uint8), maxval)


def write_netpbm(img: ImageBuffer, path) -> None:
    path = Path(path)
    magic = b"P5" if img.channels == 1 else b"P6"
    header = magic + f"\n{img.cols} {img.rows}\n{img.maxval}\n".encode("ascii")
    dtype = ">u2" if img.maxval > 255 else "u1"
    try:
        path.write_bytes(header + img.samples.astype(dtype).tobytes())
    except OSError as exc:
        raise OSError(f"cannot write image {path}: {exc}") from exc


def image_to_qsignal(img: ImageBuffer) -> QSignal2D:
    s = img.samples.astype(float) / img.maxval
    out = np.zeros((img.rows, img.cols, 4))
    if img.channels == 1:
        out[..., 0] = s
    elif img.channels == 3:
        out[..., 1:] = s
    else:  # pragma: no cover - ImageBuffer already rejects this
        raise ValueError(f"unsupported channel count {img.channels}")
    return QSignal2D._wrap(out)


def qsignal_to_image(f: QSignal2D, mode: str = "vector", maxval: int = 255, scale: float = 1.0) -> ImageBuffer:
    """Quantize a signal to an image.

    ``scalar`` takes the real part, ``vector`` the ``(i, j, k)`` parts as RGB,
    ``modulus`` the per-cell ``|q|``.  Values are multiplied by ``scale``,
    clamped to ``[0, 1]`` and rounded to ``0..maxval``.
    """
    d = f.data
    if mode == "scalar":
        v = d[..., 0]
    elif mode == "vector":
        v = d[..., 1:]
    elif mode == "modulus":
        v = np.sqrt(np.sum(d * d, axis=-1))
    else:
        raise ValueError(f"mode must be scalar, vector or modulus, got {mode!r}")
    v = np.clip(v * scale, 0.0, 1.0)
    return ImageBuffer(np.rint(v * maxval).astype(np.int64), maxval)


def _as_mask(w, rows, cols) -> Mask:
    if isinstance(w, Mask):
        if w.shape != (rows, cols):
            raise SpecError(f"spec: mask {w.shape} vs grid {(rows, cols)}")
        return w
    if isinstance(w, str):
        w = parse_mask_spec(w)
    return mask_from_spec(w, rows, cols)


def bandlimit_project(f: QSignal2D, w) -> QSignal2D:
    """Project onto signals whose spectrum lives in ``w`` (a MaskSpec or Mask)."""
    m = _as_mask(w, f.rows, f.cols)
    return qft_inverse(apply_mask(qft_forward(f), m))


def synth_bandlimited(dims, w, seed=0) -> QSignal2D:
    """Unit-energy signal with a Gaussian random spectrum supported on ``w``."""
    rows, cols = dims
    m = _as_mask(w, rows, cols)
    if m.count == 0:
        raise SpecError("spec: empty band")
    rng = np.random.default_rng(seed)
    spec = rng.standard_normal((rows, cols, 4)) * m.members[..., None]
    f = qft_inverse(QSignal2D._wrap(spec))
    return f / f.norm()


def synth_texture(dims, w, seed=0, contrast=0.35) -> QSignal2D:
    """Bandlimited texture scaled for display.

    The random part is scaled so its largest component magnitude is
    ``contrast``; if the zero frequency is in the band a constant 0.5 is added
    to every component, which keeps the result bandlimited and puts the image
    in mid-gray range.
    """
    rows, cols = dims
    m = _as_mask(w, rows, cols)
    g = synth_bandlimited(dims, m, seed)
    peak = float(np.max(np.abs(g.data)))
    g = g * (contrast / peak)
    if m.members[0, 0]:
        g = QSignal2D._wrap(g.data + 0.5)
    return g


def save_signal(f: QSignal2D, path) -> None:
    with open(path, "wb") as fh:
        np.save(fh, f.data, allow_pickle=False)


def load_signal(path) -> QSignal2D:
    return QSignal2D(np.load(path, allow_pickle=False))


def summary_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".summary.json")


def write_metrics(report, path) -> None:
    """Per-iteration CSV plus a JSON summary next to it.

    Rows are ``iter, residual, true_error`` with iteration ``n`` reporting
    ``||s_n - s_{n-1}||`` and ``||s_n - f||`` (blank without ground truth).
    The summary goes to ``<stem>.summary.json``.
    """
    path = Path(path)
    errs = report.error_history
    try:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(METRICS_COLUMNS)
            for n, res in enumerate(report.residual_history, start=1):
                te = repr(float(errs[n])) if errs is not None else ""
                wr.writerow([n, repr(float(res)), te])
        summary = {
            "rho": report.rho,
            "error_bound_c": report.error_bound_c,
            "converged": report.converged,
            "guaranteed": report.guaranteed,
            "iterations_run": report.iterations_run,
            "final_residual": report.residual_history[-1] if report.residual_history else None,
            "final_true_error": errs[-1] if errs else None,
        }
        with open(summary_path(path), "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write metrics to {path}: {exc}") from exc


def read_metrics(path) -> dict:
    path = Path(path)
    out = {"iter": [], "residual": [], "true_error": []}
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        if tuple(header) != METRICS_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        for row in rd:
            out["iter"].append(int(row[0]))
            out["residual"].append(float(row[1]))
            out["true_error"].append(float(row[2]) if row[2] else None)
    sp = summary_path(path)
    if sp.exists():
        out["summary"] = json.loads(sp.read_text())
    return out


def _opt_int(v):
    return None if v in (None, "", "none", "auto") else int(v)


def _opt_float(v):
    return None if v in (None, "", "none", "auto") else float(v)


@dataclass
class ExperimentConfig:
    """Settings of one recovery experiment.

    Read from a flat ``key = value`` file; ``#`` starts a comment.
    """

    rows: int = 64
    cols: int = 64
    band: MaskSpec = field(default_factory=lambda: MaskSpec.centered_rect(6, 6))
    missing: MaskSpec = field(default_factory=lambda: MaskSpec.block(30, 30, 4, 4))
    noise: float = 0.0
    seed: int = 0
    max_iters: int | None = None
    tol: float | None = None
    out: Path = Path("out")
    input: Path | None = None
    image_mode: str = "vector"

    KEYS = ("rows", "cols", "band", "missing", "noise", "seed", "max_iters", "tol", "out", "input", "image_mode")

    @classmethod
    def from_mapping(cls, values: dict, base: "ExperimentConfig | None" = None) -> "ExperimentConfig":
        cfg = base or cls()
        conv = {
            "rows": int,
            "cols": int,
            "band": parse_mask_spec,
            "missing": parse_mask_spec,
            "noise": float,
            "seed": int,
            "max_iters": _opt_int,
            "tol": _opt_float,
            "out": Path,
            "input": lambda v: Path(v) if v not in (None, "", "none") else None,
            "image_mode": str,
        }
        changes = {}
        for key, raw in values.items():
            key = key.strip().replace("-", "_")
            if key not in conv:
                raise SpecError(f"spec: unknown config key {key!r}")
            try:
                changes[key] = conv[key](raw.strip() if isinstance(raw, str) else raw)
            except ValueError as exc:
                raise SpecError(f"spec: bad value for {key}: {raw!r} ({exc})") from None
        return replace(cfg, **changes)

    @classmethod
    def from_file(cls, path, overrides: dict | None = None) -> "ExperimentConfig":
        path = Path(path)
        values = {}
        for lineno, line in enumerate(path.read_text().splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise SpecError(f"spec: {path}:{lineno}: expected key = value")
            values[key.strip()] = val.strip()
        cfg = cls.from_mapping(values)
        if overrides:
            cfg = cls.from_mapping({k: v for k, v in overrides.items() if v is not None}, cfg)
        if cfg.input is not None and not cfg.input.is_absolute():
            cfg = replace(cfg, input=(path.parent / cfg.input))
        return cfg

    def validate(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise SpecError(f"spec: bad grid {self.rows}x{self.cols}")
        if self.noise < 0 or not math.isfinite(self.noise):
            raise SpecError("spec: noise must be a finite nonnegative number")
        if self.image_mode not in ("scalar", "vector", "modulus"):
            raise SpecError(f"spec: image_mode {self.image_mode!r}")
        mask_from_spec(self.band, self.rows, self.cols)
        mask_from_spec(self.missing, self.rows, self.cols)
