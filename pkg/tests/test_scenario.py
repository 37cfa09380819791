import numpy as np
import pytest

from algas3.pmu import FRAME, Pmu, VerdictCode
from algas3.scenario import (
    Injection,
    ScenarioConfig,
    ScenarioError,
    SensorGenerator,
    gen_frame,
    half_width,
    integrate_altitude,
    load_config,
    parse_config,
    run_scenario,
)

QUIET = ScenarioConfig(duration=120, profile="constant", altitude=1000,
                       noise_radar=0, noise_lidar=0)


def frames(config):
    g = SensorGenerator(config)
    return [gen_frame(g, t, config.profile_altitude(t)) for t in range(config.duration)]


def test_noise_free_profile_is_exact():
    for f in frames(QUIET):
        assert f.radar == (1000,) * 4 and f.lidar == (500,) * 4


def test_tilt_offsets_each_corner():
    f = frames(QUIET.with_(tilt=(0, 10, 60, -20), duration=1))[0]
    assert f.radar == (1000, 1010, 1060, 980)
    assert f.lidar == (500, 505, 530, 490)


def test_linear_profile_clamps_at_ground():
    cfg = ScenarioConfig(altitude=100, rate=4, duration=40, noise_radar=0, noise_lidar=0)
    assert [f.radar[0] for f in frames(cfg)][::10] == [100, 60, 20, 0]


def test_bias_applies_before_halving():
    inj = Injection("Bias", "lidar", (1,), start=50, duration=20, magnitude=300)
    fs = frames(QUIET.with_(injections=(inj,)))
    for t, f in enumerate(fs):
        assert f.lidar[1] == (650 if 50 <= t < 70 else 500)
        assert f.lidar[0] == 500 and f.radar[1] == 1000


def test_dropout_and_stuck():
    cfg = ScenarioConfig(duration=60, altitude=1000, rate=2, noise_radar=0, noise_lidar=0,
                         injections=(Injection("Dropout", "radar", (0,), 10, 5),
                                     Injection("StuckAt", "radar", (2,), 20, 10)))
    fs = frames(cfg)
    assert [f.radar[0] for f in fs[10:15]] == [0] * 5
    assert [f.radar[2] for f in fs[19:31]] == [962] * 11 + [940]


def test_injection_touches_only_its_window():
    base = QUIET.with_(noise_radar=8, noise_lidar=8, seed=3)
    jam = Injection("SpectrumJam", "radar", (2,), 30, 40, 128)
    a, b = frames(base), frames(base.with_(injections=(jam,)))
    for t, (fa, fb) in enumerate(zip(a, b)):
        assert fa.lidar == fb.lidar
        for c in range(4):
            if c == 2 and 30 <= t < 70:
                continue
            assert fa.radar[c] == fb.radar[c]
    assert any(a[t].radar[2] != b[t].radar[2] for t in range(30, 70))


def test_same_seed_same_frames():
    cfg = ScenarioConfig(duration=50, seed=11)
    assert frames(cfg) == frames(cfg)
    assert frames(cfg) != frames(cfg.with_(seed=12))


@pytest.mark.parametrize("sigma, a", [(0, 0), (8, 13), (128, 221)])
def test_uniform_width_matches_sigma(sigma, a):
    assert half_width(sigma) == a
    if a:
        std = np.sqrt(((2 * a + 1) ** 2 - 1) / 12)
        assert abs(std - sigma) <= 0.5


def test_jam_variance_across_seeds():
    hits = total = 0
    for seed in range(100):
        cfg = QUIET.with_(seed=seed, duration=64,
                          injections=(Injection("SpectrumJam", "radar", (0,), 0, 64, 128),))
        r = np.array([f.radar[0] for f in frames(cfg)])
        for w in range(0, 64, FRAME):
            total += 1
            hits += r[w:w + FRAME].var() > 4 * 1024
    assert hits / total >= 0.95


def test_jam_on_raw_samples_reads_as_attack():
    cfg = QUIET.with_(seed=1, duration=64,
                      injections=(Injection("SpectrumJam", "lidar", (0,), 0, 64, 128),))
    p = Pmu()
    verdicts = [p.push(f.radar[0], 2 * f.lidar[0]) for f in frames(cfg)]
    assert [v.code for v in verdicts if v] == [VerdictCode.ATTACK_LIDAR] * 4


@pytest.mark.parametrize("alt, cmds, out", [
    (1000, [0, 0, 0, 0], 1000),
    (1000, [-16] * 4, 984),
    (5, [-16] * 4, 0),
    (100, [-16, -16, 0, 0], 92),
    (100, [-1, 0, 0, 0], 99),  # floored mean
])
def test_integrate_altitude(alt, cmds, out):
    assert integrate_altitude(alt, cmds) == out


def test_zero_duration_run_is_empty():
    trace = run_scenario(ScenarioConfig(duration=0))
    assert len(trace) == 0
    assert trace.to_csv().count("\n") == 1


def test_nominal_descent_is_quiet():
    trace = run_scenario(ScenarioConfig())
    assert len(trace) == 460
    assert not any(r.output.safety_alarm or r.output.divergence_alarm for r in trace)


def test_closed_loop_lands_without_undershoot():
    cfg = ScenarioConfig(loop="closed", altitude=900, duration=400)
    trace = run_scenario(cfg)
    assert trace.final_altitude == 0
    for r in trace:
        step = sum(o.command for o in r.output.corners) // 4
        assert r.altitude + step >= -128


def test_recorded_profile():
    series = tuple(range(1000, 900, -1))
    cfg = ScenarioConfig(profile="recorded", series=series, duration=100,
                         noise_radar=0, noise_lidar=0)
    assert [f.radar[3] for f in frames(cfg)] == list(series)


# -- configuration ----------------------------------------------------------

SAMPLE = """
[scenario]
duration = 200     # ticks
seed = 7
profile = constant
altitude = 1000
tilt = 0, 0, 60, 0

[injection jam]
kind = SpectrumJam
channel = Lidar
corners = 0 2
start = 64
duration = 100
magnitude = 700

[external]
UWB-Sensor is Very Noisy = 32768
"""


def test_parse_sample():
    cfg = parse_config(SAMPLE)
    assert (cfg.duration, cfg.seed, cfg.profile, cfg.tilt) == (200, 7, "constant", (0, 0, 60, 0))
    (inj,) = cfg.injections
    assert inj == Injection("SpectrumJam", "lidar", (0, 2), 64, 100, 700, "jam")
    assert cfg.external == ((("UWB-Sensor", "Very Noisy"), 32768),)


@pytest.mark.parametrize("text, msg", [
    ("[scenario]\nduraton = 5\n", "unknown key 'duraton'"),
    ("[scenaria]\n", "unknown section"),
    ("[injection x]\nkind = Bias\nchannel = radar\nstrength = 3\n", "unknown key 'strength'"),
    ("[injection x]\nkind = Bias\n", "kind and channel are required"),
    ("[injection x]\nkind = Zap\nchannel = radar\n", "kind must be one of"),
    ("[scenario]\nduration = 10\n[injection x]\nkind = Bias\nchannel = radar\nstart = 5\n"
     "duration = 10\n", "past the end"),
    ("[scenario]\nseed = many\n", "invalid literal"),
    ("[external]\nUWB-Sensor = 5\n", "must read"),
    ("no section header", "malformed"),
])
def test_config_errors(text, msg):
    with pytest.raises(ScenarioError, match=msg):
        parse_config(text)


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioError, match="cannot read"):
        load_config(tmp_path / "absent.ini")


def test_rules_path_is_relative_to_config(tmp_path):
    (tmp_path / "s.ini").write_text("[scenario]\nrules = my.rules\n")
    assert load_config(tmp_path / "s.ini").rules == str(tmp_path / "my.rules")


def test_frames_must_be_in_order():
    g = SensorGenerator(QUIET)
    with pytest.raises(ScenarioError):
        g.frame(1, 1000)
