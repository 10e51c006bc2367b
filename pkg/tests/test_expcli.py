import json
import math

import numpy as np
import pytest

import edrlab.bounds
from edrlab import qalg
from edrlab.errors import DomainError, EmptySweep, ParseError, ValidationError
from edrlab.expcli.frontier import boundary_residual, frontier
from edrlab.expcli.config import ScenarioConfig, parse_config
from edrlab.expcli.csvio import emit_csv
from edrlab.expcli.main import main
from edrlab.expcli.sweep import (
    CSV_FIELDS,
    SweepRecord,
    fraction_tighter,
    sweep,
    theta_grid,
)
from edrlab.expcli.verify import replay, verify

CUSTOM = """
scenario = custom
psi.amplitudes = 1,0, 0,0
phi_p.amplitudes = 0,0, 1,0
a.entries = 0,0, 1,0, 1,0, 0,0
b.entries = 0,0, 0,-1, 0,1, 0,0
m.entries = 0,0, 1,0, 1,0, 0,0
u.entries = 1,0, 0,0, 0,0, 0,0,  0,0, 1,0, 0,0, 0,0,  0,0, 0,0, 0,0, 1,0,  0,0, 0,0, 1,0, 0,0
witness.kind = optimal
"""


def write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestConfig:
    def test_defaults(self):
        cfg = parse_config("")
        assert cfg == ScenarioConfig()
        assert cfg.scenario == "fig2" and cfg.theta_count == 10000
        assert cfg.witness.kind == "sampled" and cfg.witness.sample_count == 1000

    def test_fig3(self):
        cfg = parse_config("scenario = fig3\ntheta_count = 8  # comment\nlambda = 0.01\nseed = 5")
        assert (cfg.scenario, cfg.theta_count, cfg.lam, cfg.seed) == ("fig3", 8, 0.01, 5)
        assert cfg.witness.seed == 5

    def test_bad_theta_count(self):
        with pytest.raises(ValidationError) as info:
            parse_config("theta_count = 0")
        assert info.value.field == "theta_count"

    def test_parse_error_line(self):
        with pytest.raises(ParseError) as info:
            parse_config("scenario = fig2\n\nthis line is broken")
        assert info.value.lineno == 3
        with pytest.raises(ParseError):
            parse_config("seed = 1\nseed = 2")

    @pytest.mark.parametrize("text,key", [
        ("colour = red", "colour"),
        ("scenario = fig9", "scenario"),
        ("witness.kind = greedy", "witness.kind"),
        ("witness.samples = 0", "witness.samples"),
        ("witness.kind = explicit", "witness.state"),
        ("phi = half", "phi"),
    ])
    def test_validation(self, text, key):
        with pytest.raises(ValidationError) as info:
            parse_config(text)
        assert info.value.field == key

    def test_custom_model(self):
        cfg = parse_config(CUSTOM)
        m = cfg.custom_model
        np.testing.assert_array_equal(m.coupling, np.eye(4)[[0, 1, 3, 2]])
        assert m.observable_b[0, 1] == -1j

    def test_custom_invalid(self):
        with pytest.raises(ValidationError):
            parse_config(CUSTOM.replace("b.entries = 0,0, 0,-1", "b.entries = 0,0, 0,1"))


class TestSweep:
    def test_four_points(self):
        recs = sweep(ScenarioConfig(theta_count=4, witness=edrlab.bounds.WitnessStrategy.optimal()))
        assert [r.theta for r in recs] == theta_grid(4)
        assert all(r.error is None for r in recs)
        for r in recs:
            assert r.epsilon_a == pytest.approx(math.sqrt(2))
            assert r.c_ab == pytest.approx(abs(math.cos(2 * r.theta)), abs=1e-12)

    def test_fig3_quarter_pi(self):
        recs = sweep(ScenarioConfig(scenario="fig3", theta_count=8))
        r = recs[1]  # theta = pi/4
        assert r.c_ab == pytest.approx(0, abs=1e-15)
        assert math.isnan(r.l_new2)
        assert r.new_beats_branciard is False

    def test_l_new1_property(self):
        r = sweep(ScenarioConfig(theta_count=1, witness=edrlab.bounds.WitnessStrategy.optimal()))[0]
        assert r.l_new1 == pytest.approx(1.0)  # 0.5 (4 - 4) + 1

    def test_parallel_matches_serial(self):
        cfg = ScenarioConfig(scenario="fig3", theta_count=12, seed=3,
                             witness=edrlab.bounds.WitnessStrategy.sampled(50, 3))
        assert sweep(cfg, workers=2) == sweep(cfg)

    def test_custom_rejected(self):
        with pytest.raises(ValidationError):
            sweep(ScenarioConfig(scenario="custom"))

    def test_fraction(self):
        with pytest.raises(EmptySweep):
            fraction_tighter([])
        recs = [SweepRecord(0.0, 1, 1, 1, 1, 1, 1, 1, False) for _ in range(5)]
        assert fraction_tighter(recs) == 0.0


class TestFrontier:
    def test_unit_example(self):
        curves = {c.name: c for c in frontier(1, 1, 1, 2.0, grid_count=11)}
        assert curves["ozawa"].points[0] == (0.0, 1.0)
        ozawa_eta = [eta for _, eta in curves["ozawa"].points]
        assert ozawa_eta == sorted(ozawa_eta, reverse=True)
        assert curves["ozawa"].points[-1][0] <= 1.0  # eta reaches 0 at eps = C / dB
        assert curves["branciard"].points[0] == (0.0, 1.0)
        assert curves["new"].points[0] == pytest.approx((0.0, math.sqrt(2)))
        assert curves["new"].points[-1] == pytest.approx((math.sqrt(2), 0.0))
        for c in curves.values():
            for eps, eta in c.points:
                assert eta >= 0
                assert abs(boundary_residual(c.name, eps, eta, 1, 1, 1, 2.0)) < 1e-9

    def test_robertson_violation(self):
        with pytest.raises(DomainError):
            frontier(1.0, 0.5, 0.5, 2.0)

    def test_invalid(self):
        with pytest.raises(ValueError):
            frontier(0.0, 1, 1, 2.0)


class TestCsv:
    def test_header_only(self, tmp_path):
        out = tmp_path / "empty.csv"
        emit_csv([], out)
        assert out.read_text() == ",".join(CSV_FIELDS) + "\n"

    def test_rows_and_rerun(self, tmp_path):
        cfg = ScenarioConfig(theta_count=4, seed=1, witness=edrlab.bounds.WitnessStrategy.sampled(20, 1))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(sweep(cfg), a)
        emit_csv(sweep(cfg), b)
        lines = a.read_text().splitlines()
        assert len(lines) == 5
        assert lines[1].split(",")[-1] in ("true", "false")
        assert a.read_bytes() == b.read_bytes()


class TestVerify:
    def test_clean_run(self):
        res = verify(seed=0, trials=30)
        assert res.ok and res.exit_code == 0
        assert res.evaluated["thm1_optimal"] == 30

    def test_zero_trials(self):
        with pytest.raises(ValueError):
            verify(0, 0)
        assert main(["verify", "--trials", "0"]) == 1

    def test_fault_injection(self, monkeypatch, tmp_path):
        original = edrlab.bounds.thm1_rhs

        def broken(f, sign=None, witness=None):
            # flip the commutator part
            return original(f, sign, witness) - 2 * edrlab.bounds.commutator_part(f, sign) + 10.0

        monkeypatch.setattr(edrlab.bounds, "thm1_rhs", broken)
        res = verify(seed=0, trials=20)
        assert res.exit_code == 2
        v = res.violations[0]
        assert v["slack"] < 0
        from edrlab.model import MeasurementModel
        m = MeasurementModel.from_dict(v["model"])
        assert m == m  # round-trips without validation error
        report = tmp_path / "v.json"
        assert main(["verify", "--trials", "5", "--report", str(report)]) == 2
        assert json.loads(report.read_text())["violations"]
        monkeypatch.undo()
        assert all(lhs - rhs >= -1e-9 for _, lhs, rhs in replay(0, v["trial"]))


class TestMain:
    def test_report(self, tmp_path, capsys):
        cfg = write(tmp_path, "scenario = fig2\nwitness.kind = optimal\n")
        assert main(["report", "--config", str(cfg)]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["thm1_rhs"] == pytest.approx(4)

    def test_report_custom(self, tmp_path, capsys):
        assert main(["report", "--config", str(write(tmp_path, CUSTOM))]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["stats"]["epsilon_a"] == pytest.approx(math.sqrt(2))

    def test_sweep(self, tmp_path, capsys):
        cfg = write(tmp_path, "theta_count = 6\nwitness.samples = 10\n")
        out = tmp_path / "s.csv"
        assert main(["sweep", "--config", str(cfg), "--out", str(out), "--seed", "2"]) == 0
        assert len(out.read_text().splitlines()) == 7
        assert "fraction_tighter" in capsys.readouterr().out

    def test_frontier(self, tmp_path):
        out = tmp_path / "f.csv"
        assert main(["frontier", "--cab", "1", "--da", "1", "--db", "1", "--grid", "11", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "name,epsilon,eta"

    def test_exit_codes(self, tmp_path):
        assert main([]) == 1
        assert main(["report"]) == 1
        assert main(["report", "--config", str(tmp_path / "missing.cfg")]) == 3
        assert main(["report", "--config", str(write(tmp_path, "theta_count = -1"))]) == 1
        assert main(["frontier", "--cab", "1", "--da", ".5", "--db", ".5", "--out", str(tmp_path / "x")]) == 1
        cfg = write(tmp_path, "theta_count = 2\n", "ok.cfg")
        assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "nodir" / "x.csv")]) == 3
        assert main(["sweep", "--config", str(cfg)]) == 1
