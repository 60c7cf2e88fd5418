import json
import math

import numpy as np
import pytest

from paranorms import cli
from paranorms.conditions import superquadratic_margin
from paranorms.generator import exp_minus_one


def run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    rc = cli.main(list(argv) + ["--out", str(out)])
    return rc, out


class TestExitCodes:
    def test_audit_ok(self, tmp_path):
        rc, _ = run(tmp_path, "audit", "--phi", "power:p=3")
        assert rc == cli.EXIT_OK

    def test_bad_generator_spec(self, tmp_path):
        rc, _ = run(tmp_path, "audit", "--phi", "power:p=zwei")
        assert rc == cli.EXIT_INPUT

    def test_bad_expression(self, tmp_path):
        rc, _ = run(tmp_path, "audit", "--phi", "expr:t^t")
        assert rc == cli.EXIT_INPUT

    def test_route_unavailable_is_3(self, tmp_path):
        rc, _ = run(tmp_path, "modulus", "--phi", "power:p=1",
                    "--method", "eF", "--r", "1", "--eps", "1")
        assert rc == cli.EXIT_ROUTE

    def test_thm5_needs_exp_e(self, tmp_path):
        rc, _ = run(tmp_path, "modulus", "--phi", "power:p=2",
                    "--method", "thm5", "--r", "1", "--eps", "1")
        assert rc == cli.EXIT_ROUTE

    def test_ball_needs_plane(self, tmp_path):
        rc, _ = run(tmp_path, "ball", "--phi", "power:p=2",
                    "--weights", "1,1,1", "--r", "1.0")
        assert rc == cli.EXIT_INPUT

    def test_ball_needs_four_points(self, tmp_path):
        rc, _ = run(tmp_path, "ball", "--phi", "power:p=2", "--r", "1.0",
                    "--n", "3")
        assert rc == cli.EXIT_INPUT

    def test_verify_violation_is_1(self, tmp_path):
        rc, _ = run(tmp_path, "verify", "--phi", "power:p=2", "--method",
                    "eA", "--r", "1.0", "--eps", "1.0", "--samples", "800",
                    "--seed", "3", "--inflate-delta", "1.5")
        assert rc == cli.EXIT_VIOLATION

    def test_bad_weights(self, tmp_path):
        rc, _ = run(tmp_path, "certify", "--phi", "power:p=2",
                    "--weights", "1,x")
        assert rc == cli.EXIT_INPUT

    def test_empty_delta_grid(self, tmp_path):
        rc, _ = run(tmp_path, "modulus", "--phi", "power:p=2",
                    "--method", "eA", "--r", "1.0", "--eps", "5.0")
        assert rc == cli.EXIT_INPUT


class TestAudit:
    def test_exp_superquadratic_fails_with_live_witness(self, tmp_path):
        rc, out = run(tmp_path, "audit", "--phi",
                      "exp:a=2.71828182845904523536")
        assert rc == cli.EXIT_OK
        doc = json.loads(out.read_text())
        rep = {r["name"]: r for r in doc["results"]}["superquadratic"]
        assert rep["verdict"] == "fails"
        r, s = rep["witness"]
        margin, _ = superquadratic_margin(exp_minus_one(), r, s)
        assert float(margin) <= 0.5 * rep["margin"]

    def test_power3_superquadratic_holds(self, tmp_path):
        rc, out = run(tmp_path, "audit", "--phi", "power:p=3")
        doc = json.loads(out.read_text())
        rep = {r["name"]: r for r in doc["results"]}["superquadratic"]
        assert rep["verdict"] == "holds-on-grid"

    def test_expr_rational_ratio_superadditive(self, tmp_path):
        rc, out = run(tmp_path, "audit", "--phi", "expr:t^3/(t+1)")
        doc = json.loads(out.read_text())
        rep = {r["name"]: r for r in doc["results"]}["ratio-superadditive"]
        assert rep["verdict"] == "holds-on-grid"

    def test_schema(self, tmp_path):
        _, out = run(tmp_path, "audit", "--phi", "power:p=2")
        doc = json.loads(out.read_text())
        assert set(doc) == {"tool_version", "config_echo", "results"}
        for item in doc["results"]:
            assert {"name", "verdict", "margin", "witness"} <= set(item)

    def test_csv_columns(self, tmp_path):
        _, out = run(tmp_path, "audit", "--phi", "power:p=2",
                     "--format", "csv", name="audit.csv")
        header = out.read_text().splitlines()[0]
        assert header == \
            "name,verdict,margin,normalized_margin,witness,excluded,discrepancy"


class TestCertify:
    def test_exp_unit_weights(self, tmp_path):
        _, out = run(tmp_path, "certify", "--phi", "exp:a=e",
                     "--weights", "1,1")
        cert = json.loads(out.read_text())["results"][0]
        assert cert["paranorm_routes"] == ["Lemma3-Mulholland"]
        assert set(cert["uniform_convexity_routes"]) == \
            {"Thm11-strict-convexity", "Thm5-exact"}

    def test_power2_unit_weights(self, tmp_path):
        _, out = run(tmp_path, "certify", "--phi", "power:p=2",
                     "--weights", "1,1")
        cert = json.loads(out.read_text())["results"][0]
        assert cert["paranorm_routes"] == ["Lemma3-Mulholland"]
        assert "Thm1-superquadratic" in cert["uniform_convexity_routes"]
        assert "Thm11-strict-convexity" in cert["uniform_convexity_routes"]

    def test_power3_sub_probability(self, tmp_path):
        _, out = run(tmp_path, "certify", "--phi", "power:p=3",
                     "--weights", "0.5,0.3")
        cert = json.loads(out.read_text())["results"][0]
        assert cert["paranorm_routes"] == ["Lemma1-F-concave"]
        assert "Thm1-superquadratic" in cert["uniform_convexity_routes"]


class TestModulus:
    def test_power2_eA_value(self, tmp_path):
        _, out = run(tmp_path, "modulus", "--phi", "power:p=2", "--method",
                     "eA", "--r", "1", "--eps", "1")
        row = json.loads(out.read_text())["results"][0]
        assert row["delta"] == pytest.approx(0.1339745962155614, rel=1e-12)

    def test_thm5_monotone_in_eps(self, tmp_path):
        _, out = run(tmp_path, "modulus", "--phi", "exp:a=e", "--method",
                     "thm5", "--r", "1.0", "--eps", "0.2:1.8:9")
        deltas = [row["delta"] for row in json.loads(out.read_text())["results"]]
        assert all(a < b for a, b in zip(deltas, deltas[1:]))

    def test_clarkson_matches_eA_for_powers(self, tmp_path):
        _, out_a = run(tmp_path, "modulus", "--phi", "power:p=3", "--method",
                       "eA", "--r", "1.0,2.0", "--eps", "0.5,1.2",
                       name="a.json")
        _, out_c = run(tmp_path, "modulus", "--phi", "power:p=3", "--method",
                       "clarkson", "--r", "1.0,2.0", "--eps", "0.5,1.2",
                       name="c.json")
        da = [row["delta"] for row in json.loads(out_a.read_text())["results"]]
        dc = [row["delta"] for row in json.loads(out_c.read_text())["results"]]
        assert da == dc

    def test_csv_contract(self, tmp_path):
        _, out = run(tmp_path, "modulus", "--phi", "power:p=2", "--method",
                     "eA", "--r", "1", "--eps", "1", "--format", "csv",
                     name="m.csv")
        lines = out.read_text().splitlines()
        assert lines[0] == "r,eps,method,delta,residual"
        fields = lines[1].split(",")
        assert float(fields[3]) == pytest.approx(1 - math.sqrt(3) / 2,
                                                 rel=1e-15)


class TestVerify:
    def test_exp_thm5_clean(self, tmp_path):
        rc, out = run(tmp_path, "verify", "--phi", "exp:a=e", "--method",
                      "thm5", "--r", "0.8,1.4", "--eps", "0.6,1.1",
                      "--samples", "1500", "--seed", "5")
        assert rc == cli.EXIT_OK
        rows = json.loads(out.read_text())["results"]
        assert all(not row["violation_flag"] for row in rows)

    def test_power4_eA_clean(self, tmp_path):
        rc, out = run(tmp_path, "verify", "--phi", "power:p=4", "--method",
                      "eA", "--r", "0.9,1.4", "--eps", "0.6,1.0",
                      "--samples", "1500", "--seed", "8")
        assert rc == cli.EXIT_OK
        rows = json.loads(out.read_text())["results"]
        assert all(not row["violation_flag"] for row in rows)

    def test_csv_columns(self, tmp_path):
        rc, out = run(tmp_path, "verify", "--phi", "power:p=2", "--method",
                      "eA", "--r", "1.0", "--eps", "1.0", "--samples", "500",
                      "--seed", "1", "--format", "csv", name="v.csv")
        assert rc == cli.EXIT_OK
        header = out.read_text().splitlines()[0]
        assert header == ("r,eps,delta_theory,delta_empirical,violation_flag,"
                          "witness_x,witness_y,low_coverage")


class TestBall:
    def test_euclid_circle(self, tmp_path):
        _, out = run(tmp_path, "ball", "--phi", "power:p=2", "--r", "1.0",
                     "--n", "16", name="b.csv")
        rows = [line.split(",") for line in
                out.read_text().splitlines()[1:]]
        for _, x1, x2 in rows:
            assert float(x1) ** 2 + float(x2) ** 2 == pytest.approx(1.0,
                                                                    abs=1e-9)

    def test_exp_boundary_is_convex_polygon(self, tmp_path):
        _, out = run(tmp_path, "ball", "--phi", "exp:a=e", "--r", "2.0",
                     "--n", "64", name="b.csv")
        pts = np.array([[float(a), float(b)] for _, a, b in
                        (line.split(",") for line in
                         out.read_text().splitlines()[1:])])
        edges = np.diff(np.vstack([pts, pts[:1], pts[1:2]]), axis=0)
        cross = edges[:-1, 0] * edges[1:, 1] - edges[:-1, 1] * edges[1:, 0]
        assert np.all(cross > -1e-12)   # counterclockwise turns only

    def test_default_format_is_csv(self, tmp_path):
        _, out = run(tmp_path, "ball", "--phi", "power:p=2", "--r", "1.0",
                     name="b.out")
        assert out.read_text().startswith("theta,")


class TestDeterminism:
    def test_verify_reports_byte_identical(self, tmp_path):
        args = ["verify", "--phi", "power:p=2", "--method", "eA",
                "--r", "0.9,1.1", "--eps", "0.7", "--samples", "1000",
                "--seed", "17"]
        rc1, out1 = run(tmp_path, *args, name="r1.json")
        rc2, out2 = run(tmp_path, *args, name="r2.json")
        assert rc1 == rc2 == cli.EXIT_OK
        assert out1.read_bytes() == out2.read_bytes()

    def test_audit_reports_byte_identical(self, tmp_path):
        rc1, out1 = run(tmp_path, "audit", "--phi", "exp:a=e", name="a1.json")
        rc2, out2 = run(tmp_path, "audit", "--phi", "exp:a=e", name="a2.json")
        assert out1.read_bytes() == out2.read_bytes()

    def test_floats_have_17_significant_digits(self, tmp_path):
        _, out = run(tmp_path, "modulus", "--phi", "power:p=2", "--method",
                     "eA", "--r", "1", "--eps", "1", "--format", "csv",
                     name="m.csv")
        delta_text = out.read_text().splitlines()[1].split(",")[3]
        # round-trip exactness
        assert float(delta_text) == 1 - math.sqrt(3) / 2
        assert len(delta_text.replace(".", "").replace("-", "").lstrip("0")) \
            >= 16


class TestStdout:
    def test_writes_to_stdout_without_out(self, capsys):
        rc = cli.main(["modulus", "--phi", "power:p=2", "--method", "eA",
                       "--r", "1", "--eps", "1", "--format", "csv"])
        assert rc == cli.EXIT_OK
        captured = capsys.readouterr()
        assert captured.out.startswith("r,eps,method")
