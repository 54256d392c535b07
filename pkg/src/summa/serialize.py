"""JSON encodings of the toolkit's data types.

Exact rationals travel as ``"p/q"`` strings (integers as ``"8"``), floats as
JSON numbers, complex weights as ``[re, im]`` pairs and vectors as lists.
"""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction
from pathlib import Path

from .dyadic import DyadicMeasure, DyadicStep
from .errors import DomainError
from .martingales import AdaptedSequence, Filtration
from .measures import AtomSpace, PartitionAlgebra, SignedMeasure
from .norms import INF, ExactComplex, NormDescriptor, as_scalar
from .paths import PiecewisePolynomial, Polyline
from .sums import IndexedFamily, named_family


class InputError(ValueError):
    """Malformed JSON input."""


def load_json(source):
    """Parse a path or a literal JSON string; raises InputError on bad JSON."""
    text = source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith(("{", "["))):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {source if len(str(source)) < 80 else 'input'}: {exc}") from None


# ---------------------------------------------------------------------------
# encoding


def fmt_scalar(x) -> object:
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if x == INF:
            return "inf"
        if x == -INF:
            return "-inf"
        if math.isnan(x):
            return "nan"
        return float(f"{x:.12g}")
    if isinstance(x, complex):
        return [fmt_scalar(x.real), fmt_scalar(x.imag)]
    if isinstance(x, ExactComplex):
        return [fmt_scalar(x.re), fmt_scalar(x.im)]
    return x


def to_jsonable(obj):
    """Recursively convert results into JSON-ready values."""
    if isinstance(obj, NormDescriptor):
        return obj.to_json()
    if isinstance(obj, (bool, int, float, Fraction, complex, ExactComplex)) or obj is None:
        return fmt_scalar(obj)
    if isinstance(obj, str):
        return obj
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return [to_jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple, range)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return to_jsonable(obj.tolist())
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=False)


# ---------------------------------------------------------------------------
# decoding


def _value(v):
    """A scalar, an ExactComplex from [re, im], or a vector."""
    if isinstance(v, list):
        return tuple(as_scalar(c) for c in v)
    return as_scalar(v)


def parse_vector(data) -> tuple:
    if isinstance(data, str):
        data = [s for s in data.split(",") if s.strip()]
    if not isinstance(data, list):
        raise InputError("a vector is a JSON array or a comma-separated list")
    return tuple(as_scalar(x) for x in data)


def family_from_json(data) -> IndexedFamily:
    if isinstance(data, list):
        data = {"kind": "finite", "terms": data}
    if not isinstance(data, dict):
        raise InputError("a family is a JSON object or array")
    kind = data.get("kind", "finite")
    if kind == "finite":
        if "terms" not in data:
            raise InputError("finite family needs 'terms'")
        cplx = data.get("complex", False)
        terms = []
        for t in data["terms"]:
            if isinstance(t, list) and cplx:
                terms.append(ExactComplex(as_scalar(t[0]), as_scalar(t[1])))
            else:
                terms.append(_value(t))
        return IndexedFamily.finite(terms, data.get("norm"))
    if kind == "streamed":
        name = data.get("generator") or data.get("name")
        if not name:
            raise InputError("streamed family needs 'generator'")
        return named_family(name, data.get("horizon"), **data.get("params", {}))
    raise InputError(f"unknown family kind {kind!r}")


def measure_from_json(data) -> SignedMeasure:
    """{atoms, weights, norm?, kind?}: pairs are complex unless a norm or kind 'vector' is given."""
    if not isinstance(data, dict) or "weights" not in data:
        raise InputError("a measure is an object with 'weights'")
    ws = data["weights"]
    labels = data.get("atoms", list(range(len(ws))))
    vector = data.get("kind") == "vector" or "norm" in data
    weights = []
    for w in ws:
        if isinstance(w, list) and not vector:
            if len(w) != 2:
                raise InputError("complex weights are [re, im] pairs")
            weights.append(ExactComplex(as_scalar(w[0]), as_scalar(w[1])))
        else:
            weights.append(_value(w))
    space = AtomSpace(tuple(labels))
    return SignedMeasure(space, tuple(weights), NormDescriptor.parse(data.get("norm")))


def measure_to_json(mu: SignedMeasure) -> dict:
    out = {"atoms": list(mu.space.labels), "weights": to_jsonable(mu.weights)}
    if mu.kind == "vector":
        out["norm"] = mu.norm.label()
    return out


def partition_from_json(data, n: int) -> PartitionAlgebra:
    if not isinstance(data, list) or not all(isinstance(c, list) for c in data):
        raise InputError("a partition is a list of atom-index lists")
    return PartitionAlgebra(tuple(tuple(int(i) for i in c) for c in data), n)


def step_from_json(data) -> DyadicStep:
    if not isinstance(data, dict) or "values" not in data:
        raise InputError("a dyadic step is {level, values}")
    vals = data["values"]
    level = data.get("level", max(len(vals) - 1, 0).bit_length())
    return DyadicStep(int(level), tuple(as_scalar(v) for v in vals))


def step_to_json(f: DyadicStep) -> dict:
    return {"level": f.level, "values": to_jsonable(f.values)}


def dyadic_measure_from_json(data) -> DyadicMeasure:
    if not isinstance(data, dict):
        raise InputError("a dyadic measure is {density, atoms}")
    dens = data.get("density", {"level": 0, "values": ["0"]})
    atoms = [(a["loc"], a["mass"]) for a in data.get("atoms", [])]
    return DyadicMeasure(step_from_json(dens), tuple(atoms))


def dyadic_measure_to_json(mu: DyadicMeasure) -> dict:
    return {"density": step_to_json(mu.density),
            "atoms": [{"loc": fmt_scalar(l), "mass": fmt_scalar(m)} for l, m in mu.atoms]}


def filtration_from_json(data) -> Filtration:
    if not isinstance(data, dict) or "stages" not in data:
        raise InputError("a filtration is {atoms, weights, stages}")
    n = len(data.get("atoms") or data["weights"])
    labels = data.get("atoms", list(range(n)))
    weights = data.get("weights") or [Fraction(1, n)] * n
    space = AtomSpace(tuple(labels), tuple(as_scalar(w) for w in weights))
    return Filtration(space, tuple(partition_from_json(s, n) for s in data["stages"]))


def sequence_from_json(data) -> AdaptedSequence:
    """Filtration JSON plus 'values': per stage, one value per cell or per atom."""
    filt = filtration_from_json(data)
    if "values" not in data:
        raise InputError("an adapted sequence needs 'values'")
    vals = []
    for j, stage_vals in enumerate(data["values"], start=1):
        stage_vals = [_value(v) for v in stage_vals]
        if len(stage_vals) == filt.n_atoms:
            vals.append(tuple(stage_vals))
        else:
            vals.append(filt.expand(j, stage_vals))
    return AdaptedSequence(filt, tuple(vals), NormDescriptor.parse(data.get("norm")))


def sequence_to_json(seq: AdaptedSequence) -> dict:
    filt = seq.filtration
    return {"atoms": list(filt.space.labels), "weights": to_jsonable(filt.weights),
            "stages": [[list(c) for c in P.cells] for P in filt.stages],
            "values": [to_jsonable(seq.cell_values(j)) for j in range(1, len(seq) + 1)]}


def polyline_from_json(data) -> Polyline:
    if not isinstance(data, dict) or "knots" not in data or "points" not in data:
        raise InputError("a polyline is {knots, points, interp, norm}")
    return Polyline(tuple(as_scalar(k) for k in data["knots"]), tuple(_value(p) for p in data["points"]),
                    data.get("interp", "linear"), NormDescriptor.parse(data.get("norm")))


def polyline_to_json(f: Polyline) -> dict:
    return {"knots": to_jsonable(f.knots), "points": to_jsonable(f.points),
            "interp": f.interp, "norm": f.norm.to_json()}


def phi_from_json(data) -> PiecewisePolynomial:
    if not isinstance(data, dict) or "breaks" not in data or "polys" not in data:
        raise InputError("a piecewise polynomial is {breaks, polys}")
    return PiecewisePolynomial(tuple(data["breaks"]), tuple(tuple(p) for p in data["polys"]))


def parse_phi(text: str, a, b) -> PiecewisePolynomial:
    """A polynomial in t such as 't^2 - 1/3*t' on [a, b]."""
    import sympy

    t = sympy.Symbol("t")
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={"t": t}, rational=True)
        poly = sympy.Poly(expr, t)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise DomainError(f"phi must be a polynomial in t: {exc}") from None
    coeffs = []
    for c in reversed(poly.all_coeffs()):
        c = sympy.nsimplify(c)
        if not c.is_Rational:
            raise DomainError("phi needs rational coefficients")
        coeffs.append(Fraction(int(c.p), int(c.q)))
    return PiecewisePolynomial.polynomial(tuple(coeffs) or (Fraction(0),), a, b)


def norm_from_arg(desc) -> NormDescriptor:
    if isinstance(desc, str) and desc.lstrip().startswith("{"):
        desc = load_json(desc)
    return NormDescriptor.parse(desc)
