"""Batch front end.

Subcommands: validate, mutate, dual, stability, polarization, constants,
thresholds, sweep, generate.  All numbers cross the boundary as exact
"num/den" strings; output is deterministic (sorted keys, fixed layout)
so identical configurations produce byte-identical bytes.

Exit codes: 0 success, 1 mathematical failure, 2 usage error.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from .exactfield import Field
from .theta import (theta_from_json, theta_to_json, point_from_json,
                    point_to_json, validate_theta, in_W0, scalar_to_str)
from .mutation import (build_dual, default_choice, mutate, involution_report,
                       double_dual_report)
from .homdata import (projective_space_hom_data, hom_data_to_json,
                      hom_data_from_json, build_theta_p, Polarization,
                      map_polarization)
from .stability import is_semistable_rs
from .constants import sigma0, sigma1, c_formula, c_tau_search
from .thresholds import ThresholdInput, thm64_ok, equality_dimension_vectors


def _frac(s):
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def _field(spec):
    if spec == "rationals":
        return Field()
    if spec.startswith("gf:"):
        return Field(int(spec.split(":")[1]))
    raise argparse.ArgumentTypeError("field must be rationals or gf:p")


def _emit(args, payload, fmt=None):
    fmt = fmt or args.format
    config = {
        "command": args.command,
        "field": args.field_spec,
        "seed": args.seed,
        "budget_subspaces": args.budget_subspaces,
        "budget_orbit": args.budget_orbit,
        "threads": int(os.environ.get("MUTATION_FORGE_THREADS", "1")),
    }
    if fmt == "json":
        text = json.dumps({"config": config, "result": payload},
                          sort_keys=True, separators=(",", ": "),
                          indent=2) + "\n"
    else:
        lines = ["# " + json.dumps(config, sort_keys=True,
                                   separators=(",", ":"))]
        header, rows = payload
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(str(x) for x in row))
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_validate(args):
    theta = theta_from_json(_load(args.theta))
    rep = validate_theta(theta)
    payload = {"ok": rep.ok, "checks": [{"name": n, "ok": v, "detail": d}
                                        for n, v, d in rep.checks]}
    _emit(args, payload, fmt="json")
    return 0 if rep.ok else 1


def cmd_dual(args):
    theta = theta_from_json(_load(args.theta))
    dual = build_dual(theta)
    payload = {"prime": theta_to_json(dual.prime)}
    code = 0
    if args.verify:
        rep = validate_theta(dual.prime)
        dd = double_dual_report(theta)
        payload["prime_valid"] = rep.ok
        payload["double_dual_ok"] = dd.ok
        if not (rep.ok and dd.ok):
            code = 1
    _emit(args, payload, fmt="json")
    return code


def cmd_mutate(args):
    theta = theta_from_json(_load(args.theta))
    w = point_from_json(theta, _load(args.point))
    if not in_W0(w):
        deficit = theta.dim_mult - w.psi2.rank()
        sys.stderr.write("point is not in the open locus W0: "
                         "psi2 rank deficit %d\n" % deficit)
        return 1
    dual = build_dual(theta)
    z = mutate(dual, w, default_choice(w))
    payload = {"mutation": point_to_json(z)}
    code = 0
    if args.verify:
        rep = involution_report(theta, w)
        payload["involution_ok"] = rep.ok
        if not rep.ok:
            code = 1
    _emit(args, payload, fmt="json")
    return code


def _instance_from_spec(args):
    spec = _load(args.instance)
    h = hom_data_from_json(spec["hom"])
    return build_theta_p(h, spec["m"], spec["n"], spec["p"]), spec


def cmd_stability(args):
    inst, spec = _instance_from_spec(args)
    w = point_from_json(inst.theta, spec["point"])
    pol = Polarization([_frac(x) for x in spec["lam"]],
                       [_frac(x) for x in spec["mu"]],
                       spec["m"], spec["n"])
    verdict = is_semistable_rs(inst, w, pol, group=args.group,
                               budget=args.budget_subspaces)
    payload = {"group": args.group,
               "semistable": verdict.semistable,
               "stable": verdict.stable}
    _emit(args, payload, fmt="json")
    return 0


def cmd_polarization(args):
    spec = _load(args.instance)
    h = hom_data_from_json(spec["hom"])
    pol = Polarization([_frac(x) for x in spec["lam"]],
                       [_frac(x) for x in spec["mu"]],
                       spec["m"], spec["n"])
    rep = map_polarization(pol, h, spec["p"])
    payload = {
        "alpha": [scalar_to_str(x) for x in rep.lam],
        "beta": [scalar_to_str(x) for x in rep.mu],
        "constant": scalar_to_str(rep.constant),
        "m_prime": rep.m_mult,
        "n_prime": rep.n_mult,
        "ok": rep.ok,
        "violations": rep.violations,
    }
    _emit(args, payload, fmt="json")
    return 0 if rep.ok else 1


def cmd_constants(args):
    field = _field(args.field_spec)
    t = sigma0(field, args.n) if args.which == 0 else sigma1(field, args.n)
    closed = c_formula(args.which, args.n, args.m)
    rep = c_tau_search(t, args.m, budget=args.budget_subspaces,
                       seed=args.seed, samples=args.samples,
                       reference=closed)
    payload = {"closed_form": scalar_to_str(closed),
               "search": rep.to_json()}
    _emit(args, payload, fmt="json")
    return 1 if rep.exceeds_reference else 0


def cmd_thresholds(args):
    inp = ThresholdInput(args.m1, args.m2, args.n1, _frac(args.t), n=args.n)
    rep = thm64_ok(inp, args.case)
    payload = {"ok": rep.ok,
               "conditions": [{"name": n, "ok": v}
                              for n, v in rep.conditions],
               "failing": rep.failing}
    _emit(args, payload, fmt="json")
    return 0


def _singular_flag(t, m1, m2, n1):
    lam1 = (1 - t) / m1
    lam2 = t / m2
    mu1 = Fraction(1, n1)
    fams = equality_dimension_vectors([lam1, lam2], [mu1], [m1, m2], [n1])
    return 1 if fams else 0


def _singular_ts(m1, m2, n1):
    """Exact parameters t in (0,1) where some integer dimension family
    achieves the equality (1-t)/m1 * m' + t/m2 * m'' = n'/n1."""
    out = set()
    for mp1 in range(m1 + 1):
        for mp2 in range(m2 + 1):
            for np1 in range(n1):
                if mp1 == 0 and mp2 == 0 and np1 == 0:
                    continue
                # (1-t)*mp1/m1 + t*mp2/m2 = np1/n1, linear in t
                a = Fraction(mp2, m2) - Fraction(mp1, m1)
                b = Fraction(np1, n1) - Fraction(mp1, m1)
                if a == 0:
                    continue
                t = b / a
                if 0 < t < 1:
                    out.add(t)
    return sorted(out)


def cmd_sweep(args):
    header = ["t_num", "t_den", "case", "verdict", "failing_condition",
              "singular_flag"]
    rows = []
    grid = {Fraction(i, args.grid) for i in range(1, args.grid)}
    grid.update(_singular_ts(args.m1, args.m2, args.n1))
    for t in sorted(grid):
        flag = _singular_flag(t, args.m1, args.m2, args.n1)
        for case in (1, 2):
            inp = ThresholdInput(args.m1, args.m2, args.n1, t, n=args.n)
            rep = thm64_ok(inp, case)
            rows.append([t.numerator, t.denominator, case,
                         int(rep.ok), ";".join(rep.failing), flag])
    _emit(args, (header, rows), fmt="csv")
    return 0


def cmd_generate(args):
    field = _field(args.field_spec)
    h = projective_space_hom_data(field, args.n, args.edeg, args.fdeg)
    payload = {"hom": hom_data_to_json(h)}
    if args.m and args.nmult:
        inst = build_theta_p(h, args.m, args.nmult, args.p)
        payload["theta"] = theta_to_json(inst.theta)
    _emit(args, payload, fmt="json")
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="mutforge",
        description="exact-arithmetic mutations of spaces of morphisms")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", dest="field_spec", default="rationals",
                        help="rationals or gf:p")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-subspaces", type=int, default=10 ** 5)
    common.add_argument("--budget-orbit", type=int, default=10 ** 6)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--verify", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name):
        return sub.add_parser(name, parents=[common])

    s = add("validate"); s.add_argument("--theta", required=True)
    s.set_defaults(func=cmd_validate)

    s = add("dual"); s.add_argument("--theta", required=True)
    s.set_defaults(func=cmd_dual)

    s = add("mutate")
    s.add_argument("--theta", required=True)
    s.add_argument("--point", required=True)
    s.set_defaults(func=cmd_mutate)

    s = add("stability")
    s.add_argument("--instance", required=True)
    s.add_argument("--group", choices=["Gred", "G"], default="Gred")
    s.set_defaults(func=cmd_stability)

    s = add("polarization")
    s.add_argument("--instance", required=True)
    s.set_defaults(func=cmd_polarization)

    s = add("constants")
    s.add_argument("--which", type=int, choices=[0, 1], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--samples", type=int, default=1000)
    s.set_defaults(func=cmd_constants)

    s = add("thresholds")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m1", type=int, required=True)
    s.add_argument("--m2", type=int, required=True)
    s.add_argument("--n1", type=int, required=True)
    s.add_argument("--t", required=True)
    s.add_argument("--case", type=int, choices=[1, 2], required=True)
    s.set_defaults(func=cmd_thresholds)

    s = add("sweep")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m1", type=int, required=True)
    s.add_argument("--m2", type=int, required=True)
    s.add_argument("--n1", type=int, required=True)
    s.add_argument("--grid", type=int, default=24)
    s.set_defaults(func=cmd_sweep)

    s = add("generate")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--edeg", type=int, nargs="+", required=True)
    s.add_argument("--fdeg", type=int, nargs="+", required=True)
    s.add_argument("--m", type=int, nargs="*", default=None)
    s.add_argument("--nmult", type=int, nargs="*", default=None)
    s.add_argument("--p", type=int, default=0)
    s.set_defaults(func=cmd_generate)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
