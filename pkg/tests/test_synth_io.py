import numpy as np
import pytest

from quatrec.dqft import qft_forward
from quatrec.errors import SpecError
from quatrec.recovery import RecoveryReport
from quatrec.signal import Mask, MaskSpec, QSignal2D, mask_from_spec
from quatrec.synth_io import (
    ExperimentConfig,
    ImageBuffer,
    bandlimit_project,
    image_to_qsignal,
    load_signal,
    qsignal_to_image,
    read_metrics,
    read_netpbm,
    save_signal,
    summary_path,
    synth_bandlimited,
    synth_texture,
    write_metrics,
    write_netpbm,
)


def test_image_embedding():
    assert image_to_qsignal(ImageBuffer(np.zeros((3, 4), np.uint8))) == QSignal2D.zeros(3, 4)
    g = np.zeros((2, 2), np.uint8)
    g[1, 0] = 255
    f = image_to_qsignal(ImageBuffer(g))
    assert f[1, 0].to_array().tolist() == [1.0, 0.0, 0.0, 0.0]
    rgb = np.zeros((1, 1, 3), np.uint8)
    rgb[0, 0] = (255, 0, 0)
    assert image_to_qsignal(ImageBuffer(rgb))[0, 0].to_array().tolist() == [0.0, 1.0, 0.0, 0.0]


def test_sixteen_bit_scaling():
    img = ImageBuffer(np.array([[65535, 0]]), maxval=65535)
    assert image_to_qsignal(img).data[0, :, 0].tolist() == [1.0, 0.0]


def test_unsupported_channels():
    with pytest.raises(ValueError):
        ImageBuffer(np.zeros((2, 2, 2), np.uint8))


def test_zero_signal_modulus_image_is_black():
    img = qsignal_to_image(QSignal2D.zeros(4, 4), "modulus")
    assert img.channels == 1 and not img.samples.any()


def test_rgb_round_trip(rng):
    samples = rng.integers(0, 256, (5, 6, 3))
    img = ImageBuffer(samples)
    back = qsignal_to_image(image_to_qsignal(img), "vector")
    assert np.max(np.abs(back.samples.astype(int) - samples)) <= 1


def test_modes_and_clamping():
    f = QSignal2D(np.array([[[2.0, -1.0, 0.5, 0.25]]]))
    assert qsignal_to_image(f, "scalar").samples.tolist() == [[255]]
    assert qsignal_to_image(f, "vector").samples.tolist() == [[[0, 128, 64]]]
    with pytest.raises(ValueError):
        qsignal_to_image(f, "hue")


def test_netpbm_golden_bytes(tmp_path):
    gray = ImageBuffer(np.array([[0, 128, 255], [1, 2, 3]], np.uint8))
    write_netpbm(gray, tmp_path / "a.pgm")
    assert (tmp_path / "a.pgm").read_bytes() == b"P5\n3 2\n255\n" + bytes([0, 128, 255, 1, 2, 3])
    rgb = ImageBuffer(np.array([[[1, 2, 3], [4, 5, 6]]], np.uint8))
    write_netpbm(rgb, tmp_path / "b.ppm")
    assert (tmp_path / "b.ppm").read_bytes() == b"P6\n2 1\n255\n" + bytes(range(1, 7))
    wide = ImageBuffer(np.array([[258, 65535]]), maxval=65535)
    write_netpbm(wide, tmp_path / "c.pgm")
    assert (tmp_path / "c.pgm").read_bytes() == b"P5\n2 1\n65535\n\x01\x02\xff\xff"
    for name, img in (("a.pgm", gray), ("b.ppm", rgb), ("c.pgm", wide)):
        assert read_netpbm(tmp_path / name) == img


def test_netpbm_header_comments(tmp_path):
    p = tmp_path / "c.pgm"
    p.write_bytes(b"P5\n# made by hand\n2 # width\n1\n255\n\x07\x09")
    img = read_netpbm(p)
    assert img.samples.tolist() == [[7, 9]]


def test_netpbm_rejects_other_formats(tmp_path):
    p = tmp_path / "x.pgm"
    p.write_bytes(b"P2\n1 1\n255\n0\n")
    with pytest.raises(ValueError, match="not a binary"):
        read_netpbm(p)


def test_bandlimit_project(rng):
    spec = MaskSpec.centered_rect(2, 2)
    f = QSignal2D.random(16, 16, rng)
    g = bandlimit_project(f, spec)
    assert g.norm() < f.norm()
    assert bandlimit_project(g, spec).allclose(g, atol=1e-10)
    W = mask_from_spec(spec, 16, 16)
    spectrum = qft_forward(g).data
    assert np.max(np.abs(spectrum[~W.members])) < 1e-10
    assert bandlimit_project(g, "centered-rect:2,2").allclose(g, atol=1e-10)
    with pytest.raises(SpecError):
        bandlimit_project(f, Mask.full(8, 8))


def test_bandlimit_keeps_pure_quaternions_pure(rng):
    # symmetric bands filter each component independently
    f = QSignal2D.from_components(x=rng.random((12, 10)), y=rng.random((12, 10)), z=rng.random((12, 10)))
    g = bandlimit_project(f, MaskSpec.centered_rect(2, 3))
    assert np.max(np.abs(g.data[..., 0])) < 1e-12


def test_synth_bandlimited():
    c = synth_bandlimited((6, 6), MaskSpec.explicit([(0, 0)]), 1)
    assert np.allclose(c.data, c.data[0, 0], atol=1e-15)
    W = mask_from_spec(MaskSpec.centered_rect(1, 2), 10, 10)
    f = synth_bandlimited((10, 10), W, 4)
    assert f.norm() == pytest.approx(1.0, abs=1e-14)
    off = qft_forward(f).data[~W.members]
    assert np.sqrt(np.sum(off ** 2)) < 1e-10
    assert synth_bandlimited((10, 10), W, 4) == f
    assert synth_bandlimited((10, 10), W, 5) != f


def test_synth_texture_range():
    t = synth_texture((32, 32), MaskSpec.centered_rect(3, 3), 0)
    assert t.data.min() >= 0.1 and t.data.max() <= 0.9
    W = mask_from_spec(MaskSpec.centered_rect(3, 3), 32, 32)
    assert np.max(np.abs(qft_forward(t).data[~W.members])) < 1e-10


def _report(n, with_truth=True):
    hist = [0.5 ** k * (1 + 1e-3 * k) / 3 for k in range(1, n + 1)]
    errs = [0.5 ** k / 7 for k in range(n + 1)] if with_truth else None
    return RecoveryReport(QSignal2D.zeros(2, 2), n, hist, 0.5, 2.0, True, True, errs)


def test_metrics_empty_history(tmp_path):
    p = tmp_path / "m.csv"
    write_metrics(_report(0, with_truth=False), p)
    assert p.read_text() == "iter,residual,true_error\n"
    assert summary_path(p).exists()


def test_metrics_rows_and_parse_back(tmp_path):
    p = tmp_path / "m.csv"
    rep = _report(20)
    write_metrics(rep, p)
    lines = p.read_text().splitlines()
    assert len(lines) == 21
    back = read_metrics(p)
    assert back["residual"] == rep.residual_history
    assert back["true_error"] == rep.error_history[1:]
    assert back["iter"] == list(range(1, 21))
    s = back["summary"]
    assert (s["rho"], s["error_bound_c"], s["converged"], s["iterations_run"]) == (0.5, 2.0, True, 20)


def test_metrics_without_truth(tmp_path):
    p = tmp_path / "m.csv"
    write_metrics(_report(3, with_truth=False), p)
    assert read_metrics(p)["true_error"] == [None, None, None]


def test_metrics_io_error_has_path(tmp_path):
    bad = tmp_path / "missing-dir" / "m.csv"
    with pytest.raises(OSError, match="missing-dir"):
        write_metrics(_report(2), bad)


def test_signal_npy_round_trip(tmp_path, rng):
    f = QSignal2D.random(3, 5, rng)
    save_signal(f, tmp_path / "f.npy")
    assert load_signal(tmp_path / "f.npy") == f


def test_config_file(tmp_path):
    p = tmp_path / "exp.cfg"
    p.write_text(
        "# experiment\nrows = 32\ncols = 16\nband = centered-rect:3,2\n"
        "missing = block:4,4,2,2  # hole\nnoise = 0.01\nseed = 9\nmax_iters = auto\n"
    )
    cfg = ExperimentConfig.from_file(p, {"seed": 11, "out": str(tmp_path / "o")})
    assert (cfg.rows, cfg.cols, cfg.noise, cfg.seed) == (32, 16, 0.01, 11)
    assert cfg.band == MaskSpec.centered_rect(3, 2)
    assert cfg.missing == MaskSpec.block(4, 4, 2, 2)
    assert cfg.max_iters is None
    cfg.validate()


@pytest.mark.parametrize("text", ["colour = red\n", "rows 8\n", "band = block:0,0,99,99\n", "noise = -1\n"])
def test_config_errors(tmp_path, text):
    p = tmp_path / "bad.cfg"
    p.write_text(text)
    with pytest.raises(SpecError):
        ExperimentConfig.from_file(p).validate()
