import csv
import io
import json
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from summa import serialize as S
from summa.dyadic import DyadicMeasure, DyadicStep
from summa.errors import DomainError
from summa.martingales import AdaptedSequence, Filtration
from summa.norms import ExactComplex
from summa.paths import Polyline
from summa.report import Report, render

from strategies import rationals


class TestScalars:
    def test_rational_strings(self):
        assert S.fmt_scalar(F(3, 4)) == "3/4" and S.fmt_scalar(F(8)) == "8" and S.fmt_scalar(5) == "5"

    def test_float_digits(self):
        assert S.fmt_scalar(1 / 3) == 0.333333333333

    def test_infinities(self):
        assert S.fmt_scalar(float("inf")) == "inf" and S.fmt_scalar(float("-inf")) == "-inf"

    def test_complex(self):
        assert S.fmt_scalar(ExactComplex(F(1, 2), -1)) == ["1/2", "-1"]

    @given(rationals)
    def test_rational_round_trip(self, q):
        from summa.norms import as_scalar
        assert as_scalar(S.fmt_scalar(q)) == q


class TestLoad:
    def test_literal(self):
        assert S.load_json('{"a": 1}') == {"a": 1}

    def test_malformed(self):
        with pytest.raises(S.InputError):
            S.load_json("{not json")

    def test_missing_file(self, tmp_path):
        with pytest.raises(S.InputError):
            S.load_json(tmp_path / "absent.json")

    def test_file(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text("[1, 2]")
        assert S.load_json(str(p)) == [1, 2]


class TestRoundTrips:
    def test_measure_complex_by_default(self):
        mu = S.measure_from_json({"weights": [[1, 2], "1/3"]})
        assert mu.weights[0] == ExactComplex(1, 2)
        assert S.measure_from_json(S.measure_to_json(mu)).weights == mu.weights

    def test_measure_vector_with_norm(self):
        mu = S.measure_from_json({"weights": [[1, 2], [0, 1]], "norm": "l1"})
        assert mu.kind == "vector"
        back = S.measure_from_json(S.measure_to_json(mu))
        assert back.weights == mu.weights and back.kind == "vector"

    def test_measure_needs_weights(self):
        with pytest.raises(S.InputError):
            S.measure_from_json({"atoms": [0]})

    def test_family_array_shorthand(self):
        fam = S.family_from_json(["1/2", "-1/4"])
        assert fam.terms == (F(1, 2), F(-1, 4))

    def test_streamed_family(self):
        fam = S.family_from_json({"kind": "streamed", "generator": "geometric", "horizon": 5,
                                  "params": {"ratio": "1/2"}})
        assert fam.term(0) == F(1, 2)

    def test_unknown_family_kind(self):
        with pytest.raises(S.InputError):
            S.family_from_json({"kind": "weird"})

    def test_dyadic_step(self):
        f = DyadicStep(2, (F(1), F(0), F(-1, 2), F(3)))
        assert S.step_from_json(S.step_to_json(f)) == f

    def test_dyadic_measure(self):
        mu = DyadicMeasure(DyadicStep(1, (F(1), F(0))), ((F(1, 4), F(1, 2)),))
        back = S.dyadic_measure_from_json(json.loads(S.dumps(S.dyadic_measure_to_json(mu))))
        assert back.density == mu.density and back.atoms == mu.atoms

    def test_sequence(self):
        seq = AdaptedSequence.of_terminal(Filtration.dyadic(2), (F(4), F(0), F(0), F(0)))
        back = S.sequence_from_json(json.loads(S.dumps(S.sequence_to_json(seq))))
        assert back.values == seq.values and back.filtration.weights == seq.filtration.weights

    def test_sequence_needs_values(self):
        with pytest.raises(S.InputError):
            S.sequence_from_json({"weights": ["1"], "stages": [[[0]]]})

    @given(st.lists(rationals, min_size=2, max_size=6), st.sampled_from(["linear", "jump-left", "jump-right"]))
    def test_polyline(self, pts, interp):
        f = Polyline(tuple(range(len(pts))), tuple(pts), interp)
        back = S.polyline_from_json(json.loads(S.dumps(S.polyline_to_json(f))))
        assert back.points == f.points and back.knots == f.knots and back.interp == interp


class TestPhi:
    def test_parse(self):
        phi = S.parse_phi("t^2 - 1/3*t + 2", 0, 1)
        assert phi(F(1, 2)) == F(1, 4) - F(1, 6) + 2

    def test_not_polynomial(self):
        with pytest.raises(DomainError):
            S.parse_phi("sin(t)", 0, 1)

    def test_irrational_coefficient(self):
        with pytest.raises(DomainError):
            S.parse_phi("sqrt(2)*t", 0, 1)


class TestRender:
    def make(self):
        r = Report(["demo"], {"value": F(1, 3), "ok": True})
        r.check("positive", True)
        r.check("small", False, witness=[F(1, 2)])
        return r

    def test_json_summary(self):
        d = json.loads(render(self.make()))
        assert d["result"]["value"] == "1/3"
        assert d["summary"] == {"checks": 2, "failed": 1, "status": "fail"}
        assert d["checks"][1]["witness"] == ["1/2"]

    def test_csv_line_endings(self):
        out = render(self.make(), "csv")
        assert out.startswith("key,value\r\n") and "\r\n" in out
        rows = list(csv.reader(io.StringIO(out)))
        assert ["value", "1/3"] in rows and ["check:small", "fail"] in rows

    def test_tabular_csv(self):
        r = Report(["t"], columns=("j", "x"), rows=[[1, F(1, 2)], [2, 0.5]])
        rows = list(csv.reader(io.StringIO(render(r, "csv"))))
        assert rows == [["j", "x"], ["1", "1/2"], ["2", "0.5"]]

    def test_table(self):
        out = render(self.make(), "table")
        assert out.splitlines()[-1] == "status: fail"

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render(self.make(), "xml")

    def test_ok_without_checks(self):
        assert Report(["x"]).ok
