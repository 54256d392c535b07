"""The ``summa`` command line.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or domain error,
3 malformed input, 4 an enumeration guard was exceeded.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from . import dyadic, martingales, measures, norms, paths, sums, suites
from .errors import GuardExceeded, SummaError
from .report import Report, render
from .serialize import (InputError, dyadic_measure_from_json, family_from_json, load_json,
                        measure_from_json, norm_from_arg, parse_phi, parse_vector,
                        partition_from_json, polyline_from_json, sequence_from_json,
                        sequence_to_json, step_from_json, step_to_json)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3, 4


def _scalar(text):
    try:
        return norms.as_scalar(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


def _scalars(text):
    try:
        return list(parse_vector(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None


def _coeffs(text):
    """Comma list; an entry 're:im' becomes an exact complex number."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            re_, im = part.split(":")
            out.append(norms.ExactComplex(_scalar(re_), _scalar(im)))
        elif part:
            out.append(_scalar(part))
    return out


# ---------------------------------------------------------------------------
# norms


def cmd_norms_lp(a):
    r = Report(a.command, {"vector": a.vec, "p": a.p, "norm": norms.lp_norm(a.vec, a.p)})
    return r


def cmd_norms_holder(a):
    rep = norms.holder_verify(a.f, a.g, a.p, a.q)
    r = Report(a.command, rep)
    r.check("holder", rep.holds)
    return r


def cmd_norms_interpolate(a):
    rep = norms.lp_interpolate(a.f, a.p, a.q, a.r)
    r = Report(a.command, rep)
    r.check("interpolation", rep.holds)
    return r


# ---------------------------------------------------------------------------
# sums


def _family(a):
    if a.terms:
        return family_from_json(load_json(a.terms))
    params = {}
    if a.ratio is not None:
        params["ratio"] = a.ratio
    return sums.named_family(a.family, a.horizon, **params)


def cmd_sums_ynorm(a):
    F = _family(a)
    val, wit = sums.y_norm(F, with_witness=True)
    return Report(a.command, {"terms": len(F), "y_norm": val, "witness_subset": wit})


def cmd_sums_znorm(a):
    F = _family(a)
    return Report(a.command, {"terms": len(F), "z_norm": sums.z_norm(F)})


def cmd_sums_wnorm(a):
    F = _family(a)
    return Report(a.command, {"terms": len(F), "K": a.K, "w_norm": sums.w_norm(F, a.K)})


def cmd_sums_cauchy(a):
    v = sums.generalized_cauchy_check(_family(a), a.eps, a.horizon_check, seed=a.seed)
    r = Report(a.command, v)
    r.check("cauchy", v.status != "fail", v.witness or None)
    return r


def cmd_sums_signs(a):
    v = sums.sign_uniform_convergence_check(_family(a), a.eps, a.horizon_check, a.window, a.sampling)
    r = Report(a.command, v)
    r.check("sign_uniform", v.status != "fail", v.witness or None)
    return r


def cmd_sums_eval(a):
    return Report(a.command, {"result": sums.unordered_sum_eval(_family(a), a.eps, a.horizon_check)})


def cmd_sums_rearrange(a):
    F = _family(a)
    perm = a.perm if a.perm is not None else random.Random(a.seed).sample(range(len(F)), len(F))
    rep = sums.rearrangement_test(F, perm, a.eps)
    r = Report(a.command, rep)
    r.check("rearrangement", rep.agree)
    return r


# ---------------------------------------------------------------------------
# measures


def _measure(path):
    return measure_from_json(load_json(path))


def cmd_measures_variation(a):
    mu = _measure(a.measure)
    P = partition_from_json(load_json(a.partition), len(mu)) if a.partition else None
    A = a.set if a.set is not None else None
    return Report(a.command, {"total_variation": measures.total_variation(mu, P, A),
                              "variation_weights": measures.variation_measure(mu).weights})


def cmd_measures_jordan(a):
    mu = _measure(a.measure)
    p, m = measures.jordan_decompose(mu)
    P, N = measures.hahn_decompose(mu)
    r = Report(a.command, {"positive": p.weights, "negative": m.weights,
                           "hahn_positive": P, "hahn_negative": N})
    r.check("reconstruction", all(x - y == w for x, y, w in zip(p.weights, m.weights, mu.weights)))
    return r


def cmd_measures_rn(a):
    mu, nu = _measure(a.measure), _measure(a.base)
    h = measures.radon_nikodym(mu, nu)
    r = Report(a.command, {"density": h})
    r.check("reconstruction", all(measures.reconstruct(h, nu, [i]) == mu.weights[i] for i in range(len(mu))))
    return r


def cmd_measures_lebesgue(a):
    mu, nu = _measure(a.measure), _measure(a.base)
    ac, sing, h = measures.lebesgue_decompose(mu, nu)
    r = Report(a.command, {"absolutely_continuous": ac.weights, "singular": sing.weights, "density": h})
    r.check("sum", all(x + y == w for x, y, w in zip(ac.weights, sing.weights, mu.weights)))
    return r


# ---------------------------------------------------------------------------
# dyadic


def cmd_dyadic_average(a):
    f = step_from_json(load_json(a.step))
    return Report(a.command, {"average": step_to_json(dyadic.dyadic_average(f, a.level))})


def cmd_dyadic_maximal(a):
    mu = dyadic_measure_from_json(load_json(a.measure))
    ls = dyadic.maximal_level_sets(mu, a.t, a.depth)
    hl = dyadic.hl_maximal_weak_type(mu, a.t, min(a.depth, a.hl_depth))
    r = Report(a.command, {
        "t": a.t, "depth": a.depth,
        "level_set": {"intervals": ls.as_endpoints(), "lebesgue": ls.lebesgue, "mass": ls.mass},
        "grid": {"depth": min(a.depth, a.hl_depth), "lower": hl.lower, "upper": hl.upper,
                 "bound": hl.bound, "constant_one_holds": hl.constant_one_holds},
    })
    r.check("dyadic_weak_type", ls.certified)
    r.check("grid_weak_type", hl.holds)
    return r


def cmd_dyadic_khintchine(a):
    rep = dyadic.khintchine_report(a.coeffs, a.p)
    r = Report(a.command, rep)
    r.check("khintchine", rep.holds)
    return r


def cmd_dyadic_lacunary(a):
    if len(a.freqs) != len(a.coeffs):
        raise SummaError("--freqs and --coeffs need the same length")
    val = dyadic.lacunary_moment(a.freqs, a.coeffs, a.k)
    return Report(a.command, {"moment": val, "gap_ratio": dyadic.gap_ratio(a.freqs),
                              "collapses": dyadic.lacunary_collapse(a.freqs, a.k)})


# ---------------------------------------------------------------------------
# martingales


def _seq(a):
    return sequence_from_json(load_json(a.seq))


def cmd_mart_classify(a):
    c = martingales.classify(_seq(a))
    return Report(a.command, c)


def cmd_mart_decompose(a):
    seq = _seq(a)
    m, A = martingales.doob_decompose(seq)
    r = Report(a.command, {"martingale": sequence_to_json(m)["values"],
                           "predictable": sequence_to_json(A)["values"]})
    r.check("martingale_part", martingales.classify(m).kind == "martingale")
    return r


def cmd_mart_maximal(a):
    seq = _seq(a)
    r = Report(a.command, {"maximal": martingales.maximal_function(seq)})
    if a.t is not None:
        w = martingales.weak_type_check(seq, a.t)
        r.payload["weak_type"] = w
        r.check("weak_type", w.holds)
    if a.p is not None:
        d = martingales.doob_lp_check(seq, a.p)
        r.payload["doob"] = d
        r.check("doob_lp", d.holds)
    return r


def cmd_mart_stop(a):
    seq = _seq(a)
    tau = martingales.first_passage(seq, a.t).truncate(len(seq))
    rep = martingales.optional_stopping_check(seq, tau)
    r = Report(a.command, {"tau": tau.values, "stopped_value": martingales.stop(seq, tau).values,
                           "optional_stopping": rep})
    r.check("optional_stopping", rep.holds, rep.witness)
    return r



def cmd_mart_experiment(a):
    params = {k: getattr(a, k) for k in ("stages", "J", "n", "depth", "dim") if getattr(a, k) is not None}
    if a.name == "doubling":
        params.setdefault("seed", a.seed)
        if a.t is not None:
            params["t"] = a.t
    try:
        table = martingales.run_experiment(a.name, **params)
    except TypeError as exc:
        raise SummaError(f"bad parameters for {a.name}: {exc}") from None
    r = Report(a.command, columns=table.columns, rows=table.rows)
    for name, ok in table.checks.items():
        r.check(name, ok)
    return r


# ---------------------------------------------------------------------------
# paths and convexity


def _path(a):
    return polyline_from_json(load_json(a.path))


def cmd_path_length(a):
    f = _path(a)
    lam = paths.path_length(f)
    r = Report(a.command, {"length": lam})
    if not isinstance(f.points[0], tuple):
        P, N, _ = paths.pos_neg_variation(f)
        r.payload.update(positive=P, negative=N)
        r.check("P+N=length", P + N == lam)
    return r


def cmd_path_measure(a):
    f = _path(a)
    nu = paths.path_measure(f)
    ivs = [paths.Interval.parse(s) for s in a.interval]
    r = Report(a.command, {"value": nu(ivs), "length_measure": nu.length_measure()(ivs)})
    r.check("dominated", nu.dominated(ivs))
    return r


def cmd_path_stieltjes(a):
    f = _path(a)
    phi = parse_phi(a.phi, f.a, f.b)
    res = paths.riemann_stieltjes(phi, f, a.mesh)
    return Report(a.command, {"value": res.value, "error_bound": res.bound, "points": res.points})


def cmd_path_chain(a):
    rep = paths.equality_chain_check(_path(a))
    r = Report(a.command, rep)
    r.check("equality_chain", (not rep.endpoint_equals_length) or (rep.collinear_in_order and rep.affine_reconstruction))
    return r


def cmd_convexity_modulus(a):
    nd = norm_from_arg(a.norm)
    rows = paths.uniform_convexity_modulus(nd, a.eps, a.dim, a.grid)
    return Report(a.command, columns=("eps", "delta", "l2_oracle"),
                  rows=[(r.eps, r.delta, r.oracle) for r in rows])


def cmd_convexity_strict(a):
    res = paths.strict_convexity_witness(norm_from_arg(a.norm), a.dim, a.grid, seed=a.seed)
    return Report(a.command, res)


def cmd_suite(a):
    return suites.run_suite(a.name, a.seed)


# ---------------------------------------------------------------------------
# parser


def _globals(suppress: bool) -> argparse.ArgumentParser:
    d = argparse.SUPPRESS if suppress else None
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--format", choices=("json", "csv", "table"), default=d if suppress else "json")
    g.add_argument("--seed", type=int, default=d)
    g.add_argument("--tol", type=float, default=d, help="float comparison tolerance")
    g.add_argument("--guard-subsets", type=int, default=d, help="subset enumeration guard")
    g.add_argument("--out", default=d, help="write the report to this file")
    return g


def build_parser() -> argparse.ArgumentParser:
    leaf = _globals(True)
    top = argparse.ArgumentParser(prog="summa", parents=[_globals(False)],
                                  description="Exact checks for sums, measures, dyadic analysis, martingales and paths.")
    groups = top.add_subparsers(dest="group", required=True, metavar="GROUP")

    def group(name, help_):
        return groups.add_parser(name, help=help_).add_subparsers(dest="cmd", required=True, metavar="COMMAND")

    def leafp(sub, name, fn, help_):
        p = sub.add_parser(name, help=help_, parents=[leaf])
        p.set_defaults(fn=fn)
        return p

    g = group("norms", "finite l^p norms and inequalities")
    p = leafp(g, "lp", cmd_norms_lp, "l^p norm of a vector")
    p.add_argument("--vec", type=_scalars, required=True)
    p.add_argument("--p", type=_scalar, default=Fraction(2))
    p = leafp(g, "holder", cmd_norms_holder, "Holder's inequality")
    for k in ("f", "g"):
        p.add_argument(f"--{k}", type=_scalars, required=True)
    p.add_argument("--p", type=_scalar, required=True)
    p.add_argument("--q", type=_scalar, required=True)
    p = leafp(g, "interpolate", cmd_norms_interpolate, "log-convexity of l^p norms")
    p.add_argument("--f", type=_scalars, required=True)
    for k in ("p", "q", "r"):
        p.add_argument(f"--{k}", type=_scalar, required=True)

    g = group("sums", "unordered sums and their norms")
    for name, fn, help_ in (("ynorm", cmd_sums_ynorm, "largest finite subsum"),
                            ("znorm", cmd_sums_znorm, "largest signed sum"),
                            ("wnorm", cmd_sums_wnorm, "largest root-of-unity weighted sum"),
                            ("cauchy", cmd_sums_cauchy, "generalized Cauchy criterion"),
                            ("signs", cmd_sums_signs, "uniform convergence over sign choices"),
                            ("eval", cmd_sums_eval, "value of the unordered sum"),
                            ("rearrange", cmd_sums_rearrange, "sum under a permutation")):
        p = leafp(g, name, fn, help_)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--terms", help="family JSON file")
        src.add_argument("--family", choices=sorted(sums.FAMILIES))
        p.add_argument("--ratio", type=_scalar)
        p.add_argument("--horizon", type=int)
        if name == "wnorm":
            p.add_argument("--K", type=int, default=8)
        if name in ("cauchy", "signs", "eval", "rearrange"):
            p.add_argument("--eps", type=_scalar, default=Fraction(1, 10 ** 6))
            p.add_argument("--horizon-check", type=int, help="terms examined by the check")
        if name == "signs":
            p.add_argument("--window", type=int, default=12)
            p.add_argument("--sampling", action="store_true")
        if name == "rearrange":
            p.add_argument("--perm", type=_ints, help="permutation; random from --seed when omitted")

    g = group("measures", "finite signed and vector measures")
    p = leafp(g, "variation", cmd_measures_variation, "total variation")
    p.add_argument("--measure", required=True)
    p.add_argument("--partition", help="partition JSON; discrete when omitted")
    p.add_argument("--set", type=_ints)
    p = leafp(g, "jordan", cmd_measures_jordan, "Jordan and Hahn decompositions")
    p.add_argument("--measure", required=True)
    for name, fn, help_ in (("rn", cmd_measures_rn, "Radon-Nikodym derivative"),
                            ("lebesgue", cmd_measures_lebesgue, "Lebesgue decomposition")):
        p = leafp(g, name, fn, help_)
        p.add_argument("--measure", required=True)
        p.add_argument("--base", required=True, help="nonnegative reference measure JSON")

    g = group("dyadic", "dyadic averages, maximal functions and sign sums")
    p = leafp(g, "average", cmd_dyadic_average, "conditional average on level-l intervals")
    p.add_argument("--step", required=True)
    p.add_argument("--level", type=int, required=True)
    p = leafp(g, "maximal", cmd_dyadic_maximal, "maximal function level sets")
    p.add_argument("--measure", required=True)
    p.add_argument("--t", type=_scalar, required=True)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--hl-depth", type=int, default=6, help="depth cap for the shifted-grid estimate")
    p = leafp(g, "khintchine", cmd_dyadic_khintchine, "Rademacher sum moments")
    p.add_argument("--coeffs", type=_coeffs, required=True)
    p.add_argument("--p", type=_scalar, default=Fraction(4))
    p = leafp(g, "lacunary", cmd_dyadic_lacunary, "moments of lacunary trigonometric sums")
    p.add_argument("--freqs", type=_ints, required=True)
    p.add_argument("--coeffs", type=_coeffs, required=True)
    p.add_argument("--k", type=int, default=2)

    g = group("mart", "martingales on finite filtrations")
    for name, fn, help_ in (("classify", cmd_mart_classify, "martingale, sub, super or none"),
                            ("decompose", cmd_mart_decompose, "Doob decomposition"),
                            ("maximal", cmd_mart_maximal, "maximal function, weak type and L^p bounds"),
                            ("stop", cmd_mart_stop, "first passage stopping")):
        p = leafp(g, name, fn, help_)
        p.add_argument("--seq", required=True)
        if name == "maximal":
            p.add_argument("--t", type=_scalar)
            p.add_argument("--p", type=_scalar)
        if name == "stop":
            p.add_argument("--t", type=_scalar, required=True)
    p = leafp(g, "experiment", cmd_mart_experiment, "named experiment tables")
    p.add_argument("name", choices=sorted(martingales.EXPERIMENTS))
    p.add_argument("--stages", type=int)
    p.add_argument("--J", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--t", type=_scalar)

    g = group("path", "paths of bounded variation")
    for name, fn, help_ in (("length", cmd_path_length, "length and variations"),
                            ("measure", cmd_path_measure, "increment measure of intervals"),
                            ("stieltjes", cmd_path_stieltjes, "Riemann-Stieltjes integral"),
                            ("chain", cmd_path_chain, "equality case of the triangle inequality")):
        p = leafp(g, name, fn, help_)
        p.add_argument("--in", dest="path", required=True)
        if name == "measure":
            p.add_argument("--interval", action="append", required=True, help='e.g. "[0,1/2)"; repeatable')
        if name == "stieltjes":
            p.add_argument("--phi", required=True, help='polynomial in t, e.g. "t^2"')
            p.add_argument("--mesh", type=_scalar, default=Fraction(1, 1024))

    g = group("convexity", "convexity of finite-dimensional norms")
    p = leafp(g, "modulus", cmd_convexity_modulus, "grid modulus of uniform convexity")
    p.add_argument("--norm", required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--eps", type=lambda s: [float(x) for x in s.split(",")], default=[0.5, 1.0, 1.5])
    p = leafp(g, "strict", cmd_convexity_strict, "search for a flat piece of the unit sphere")
    p.add_argument("--norm", required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--grid", type=int, default=4096)

    p = groups.add_parser("suite", help="run a verification suite", parents=[leaf])
    p.add_argument("name", choices=sorted(suites.SUITES) + ["all"])
    p.set_defaults(fn=cmd_suite)
    return top


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SUMMA_SEED")
    try:
        return int(env) if env else 0
    except ValueError:
        raise SummaError(f"SUMMA_SEED must be an integer, got {env!r}") from None


def _command_echo(argv) -> list:
    """argv without the output-only flags, so reports do not depend on them."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("--out", "--format"):
            skip = True
            continue
        if tok.startswith(("--out=", "--format=")):
            continue
        out.append(tok)
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    old_tol, old_guard = norms.get_tolerance(), sums.SUBSET_GUARD
    try:
        args.seed = _seed(args)
        args.command = _command_echo(argv)
        if args.tol is not None:
            norms.set_tolerance(args.tol)
        if args.guard_subsets is not None:
            sums.set_subset_guard(args.guard_subsets)
        report = args.fn(args)
        text = render(report, args.format)
    except InputError as exc:
        print(f"summa: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GuardExceeded as exc:
        print(f"summa: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (SummaError, ValueError, ZeroDivisionError, KeyError, TypeError) as exc:
        print(f"summa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        norms.set_tolerance(old_tol)
        sums.set_subset_guard(old_guard)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
