import json
import os
import pathlib
import subprocess
from fractions import Fraction

import pytest

import dmoments

SCHEMAS = pathlib.Path(__file__).resolve().parents[2] / "schemas"


def test_published_constants():
    assert dmoments.bk("usp", 1) == Fraction(1, 6)
    assert dmoments.bk("so", 2) == Fraction(7, 30)
    rows = dmoments.bk_table("usp", 2)
    assert rows[1]["value"] == Fraction(19, 5040)
    assert rows[1]["factored"] == "19 / (2^4 * 3^2 * 5 * 7)"


def test_ominus_identity():
    for k in range(1, 8):
        assert dmoments.bk("ominus", k) == 3 * 2**k * dmoments.bk("usp", k)


def test_series():
    assert dmoments.g_series(0, 2) == [1, Fraction(1, 2), Fraction(1, 48)]
    assert dmoments.g_series(-1, 2) == [0, 1, Fraction(1, 12)]
    for ell in (-2, -1, 0, 1):
        assert dmoments.tau(5, ell, 6) == dmoments.tau(5, ell, 6, method="det")


def test_factor_and_asymptotic():
    f = dmoments.factor_rational(Fraction(19, 5040))
    assert f["display"] == "19 / (2^4 * 3^2 * 5 * 7)"
    assert f["denominator"] == [("2", 4), ("3", 2), ("5", 1), ("7", 1)]
    assert dmoments.moment_asymptotic("so", 1, 50) == 10000
    assert dmoments.to_decimal("1/3", 5) == "0.33333"


def test_monte_carlo():
    e = dmoments.estimate_moment("usp", 1, 2, samples=10, seed=1)
    assert e["mean"] == pytest.approx(4.0, rel=1e-12)
    a = dmoments.estimate_moment("so", 5, 1, samples=200, seed=3, workers=1)
    b = dmoments.estimate_moment("so", 5, 1, samples=200, seed=3, workers=2)
    assert a["mean"] == b["mean"]
    angles, coeffs = dmoments.sample_angles("ominus", 1, 9)
    assert angles == []
    assert coeffs == [1.0, 0.0, -1.0]


def test_euler():
    assert float(dmoments.euler_factor(1, 2)) == pytest.approx(5 / 6, rel=1e-15)
    assert dmoments.a_k_euler(2, 2)["primes_used"] == 1


def test_errors():
    with pytest.raises(ValueError):
        dmoments.bk_table("unitary", 3)


@pytest.mark.skipif("DMOMENTS_CLI" not in os.environ, reason="CLI path not provided")
@pytest.mark.parametrize(
    "args, schema",
    [
        (["bk", "--group", "so", "--kmax", "4", "--format", "json"], "bk_table"),
        (["mc", "--group", "so", "--n", "3", "--k", "1", "--samples", "50", "--seed", "2"], "mc_report"),
        (["verify", "--suite", "dodgson", "--json"], "verify_summary"),
    ],
)
def test_cli_json_matches_schema(args, schema):
    jsonschema = pytest.importorskip("jsonschema")
    out = subprocess.run([os.environ["DMOMENTS_CLI"], *args], check=True, capture_output=True, text=True).stdout
    doc = json.loads(out)
    jsonschema.validate(doc, json.loads((SCHEMAS / f"{schema}.schema.json").read_text()))
    assert json.loads(json.dumps(doc)) == doc
