import numpy as np
import pytest

from shadowsim.errors import DegenerateZone, WindowTooLarge, ZeroVariance
from shadowsim.extraction import (
    Trace,
    empirical_cross_correlation,
    extract_regression,
    extract_sliding,
    read_trace_csv,
    remove_fast_fading,
    write_shadowing_csv,
)
from shadowsim.shadowing import ShadowParams, generate
from shadowsim.correlation import cholesky


def make_trace(levels, distances=None, spacing=1.0):
    n = len(levels)
    x = np.arange(n) * spacing
    if distances is None:
        distances = 100.0 + x
    return Trace(x, np.zeros(n), distances, levels, spacing)


def test_remove_fast_fading_constant():
    t = make_trace(np.full(200, -80.0))
    out = remove_fast_fading(t, window_m=12.0)
    assert np.allclose(out.level_db, -80.0, atol=1e-12)
    assert np.array_equal(out.distance_m, t.distance_m)


def test_remove_fast_fading_recovers_smooth_part():
    spacing = 0.15
    n = 4000
    x = np.arange(n) * spacing
    smooth = -70.0 - 0.02 * x
    ripple = 2.0 * np.sin(2 * np.pi * x / 1.5)  # 1.5 m period << 12 m window
    t = make_trace(smooth + ripple, spacing=spacing)
    out = remove_fast_fading(t, window_m=12.0)
    interior = slice(100, n - 100)
    assert np.max(np.abs(out.level_db[interior] - smooth[interior])) < 0.5


def test_remove_fast_fading_single_sample_window_is_identity():
    t = make_trace(np.sin(np.arange(100)) * 5 - 80)
    out = remove_fast_fading(t, window_m=1.0)
    # Single-point mean; only dB->power->dB round-off remains.
    assert np.allclose(out.level_db, t.level_db, atol=1e-12)


def test_window_too_large():
    t = make_trace(np.zeros(10), spacing=0.5)  # spans 4.5 m
    with pytest.raises(WindowTooLarge):
        remove_fast_fading(t, window_m=12.0)
    with pytest.raises(WindowTooLarge):
        extract_sliding(t, window_m=800.0)


def test_averaging_domains_differ_on_nonconstant_input():
    rng = np.random.default_rng(0)
    t = make_trace(-80 + 6 * rng.standard_normal(500), spacing=0.15)
    p = remove_fast_fading(t, 12.0, domain="power").level_db
    d = remove_fast_fading(t, 12.0, domain="db").level_db
    a = remove_fast_fading(t, 12.0, domain="amplitude").level_db
    # Jensen: power mean >= amplitude mean >= dB mean.
    assert np.all(p >= a - 1e-9)
    assert np.all(a >= d - 1e-9)


def test_regression_recovers_noiseless_parameters():
    d = np.logspace(2, 3.4, 500)
    t = make_trace(16.0 + 36.0 * np.log10(d), distances=d)
    res = extract_regression(t, [list(range(500))])
    (fit,) = res.fitted_params
    assert fit.a == pytest.approx(16.0, abs=1e-9)
    assert fit.b == pytest.approx(36.0, abs=1e-9)
    assert np.max(np.abs(res.shadowing)) < 1e-9


def test_regression_round_trip_with_generator_shadowing():
    n = 100_000
    d = np.logspace(2, 3.5, n)
    p = ShadowParams(sigma=7.0, beta=0.3, n_links=1)
    shadow = generate(p, np.eye(1), seed=101, n_steps=n)[0]
    shadow = shadow - shadow.mean()  # zero empirical mean, as injected
    t = make_trace(16.0 + 36.0 * np.log10(d) + shadow, distances=d)
    res = extract_regression(t, [list(range(n))])
    assert np.max(np.abs(res.shadowing - shadow)) < 0.5
    assert res.std == pytest.approx(7.0, abs=0.5)


def test_regression_per_zone_parameters():
    # Four zones, each with its own noiseless (a, b).
    params = [(16.0, 36.0), (20.0, 30.0), (10.0, 40.0), (5.0, 25.0)]
    d = np.concatenate([np.logspace(2, 3, 50) for _ in params])
    levels = np.concatenate(
        [a + b * np.log10(np.logspace(2, 3, 50)) for a, b in params]
    )
    t = make_trace(levels, distances=d)
    zones = [list(range(i * 50, (i + 1) * 50)) for i in range(4)]
    res = extract_regression(t, zones)
    for fit, (a, b) in zip(res.fitted_params, params):
        assert fit.a == pytest.approx(a, abs=1e-6)
        assert fit.b == pytest.approx(b, abs=1e-6)


def test_regression_residuals_orthogonal_to_design():
    rng = np.random.default_rng(3)
    d = np.logspace(2, 3.3, 400)
    t = make_trace(16 + 36 * np.log10(d) + 5 * rng.standard_normal(400), distances=d)
    res = extract_regression(t, [list(range(400))])
    assert abs(np.sum(res.shadowing)) < 1e-7
    assert abs(np.dot(res.shadowing, np.log10(d))) < 1e-6


def test_regression_degenerate_zone():
    t = make_trace(np.zeros(10), distances=np.full(10, 500.0))
    with pytest.raises(DegenerateZone):
        extract_regression(t, [list(range(10))])


def test_sliding_constant_trace():
    t = make_trace(np.full(2000, -75.0), spacing=1.0)
    res = extract_sliding(t, window_m=800.0)
    assert np.allclose(res.shadowing, 0.0, atol=1e-12)
    assert res.std == 0.0


def test_sliding_tracks_smooth_radial_trend():
    # Far enough out that the log-distance trend is nearly linear across
    # one window, so the centered mean tracks it closely.
    spacing = 1.0
    d = 2000.0 + np.arange(3000) * spacing
    t = make_trace(16 + 36 * np.log10(d), distances=d, spacing=spacing)
    res = extract_sliding(t, window_m=800.0)
    interior = slice(600, 2400)
    assert np.max(np.abs(res.shadowing[interior])) < 0.3
    edge_peak = np.max(np.abs(res.shadowing))
    assert edge_peak > np.max(np.abs(res.shadowing[interior]))


def test_sliding_absorbs_slow_components():
    # Spatially correlated shadowing (50 m decorrelation at 1 m spacing):
    # the 800 m window soaks up the slow components, so the extracted std
    # falls short of the injected one.
    spacing = 1.0
    n = 20_000
    d = 1000.0 + np.arange(n) * spacing
    p = ShadowParams(sigma=7.0, beta=np.exp(-1.0 / 50.0), n_links=1)
    shadow = generate(p, np.eye(1), seed=103, n_steps=n)[0]
    t = make_trace(16 + 36 * np.log10(d) + shadow, distances=d, spacing=spacing)
    res = extract_sliding(t, window_m=800.0)
    assert res.std < np.std(shadow)
    assert abs(np.mean(res.shadowing)) < 0.2


def test_translation_covariance():
    rng = np.random.default_rng(7)
    levels = -80 + 5 * rng.standard_normal(3000)
    t = make_trace(levels, spacing=1.0)
    shifted = make_trace(levels + 13.0, spacing=1.0)
    f1 = remove_fast_fading(t, 12.0).level_db
    f2 = remove_fast_fading(shifted, 12.0).level_db
    assert np.allclose(f2 - f1, 13.0, atol=1e-9)
    s1 = extract_sliding(t, 800.0).shadowing
    s2 = extract_sliding(shifted, 800.0).shadowing
    assert np.allclose(s1, s2, atol=1e-9)


def test_cross_correlation_anchors():
    a = np.array([1.0, 2.0, 3.0, 5.0])
    assert empirical_cross_correlation(a, a) == pytest.approx(1.0)
    assert empirical_cross_correlation(a, -a) == pytest.approx(-1.0)
    with pytest.raises(ZeroVariance):
        empirical_cross_correlation(a, np.ones(4))


def test_cross_correlation_closes_with_generator():
    M = np.array([[1.0, 0.6], [0.6, 1.0]])
    p = ShadowParams(sigma=7.0, beta=0.5, n_links=2)
    s = generate(p, cholesky(M), seed=107, n_steps=1_000_000)
    assert empirical_cross_correlation(s[0], s[1]) == pytest.approx(0.6, abs=0.02)


def test_trace_csv_round_trip(tmp_path):
    t = make_trace(-80 + np.arange(5.0), spacing=0.5)
    path = tmp_path / "trace.csv"
    with open(path, "w") as fh:
        fh.write("x,y,distance_m,level_db\n")
        for i in range(len(t)):
            fh.write(f"{t.x[i]},{t.y[i]},{t.distance_m[i]},{t.level_db[i]}\n")
    loaded = read_trace_csv(path, spacing=0.5)
    assert np.allclose(loaded.level_db, t.level_db)
    assert np.allclose(loaded.distance_m, t.distance_m)

    out = tmp_path / "shadow.csv"
    write_shadowing_csv(out, t.level_db)
    lines = out.read_text().splitlines()
    assert lines[0] == "index,shadowing_db"
    assert len(lines) == 6
