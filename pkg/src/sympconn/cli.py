"""Command line: report / curvature / flow.

Exit codes: 0 every assertion passed, 1 some assertion failed, 2 the
algebra, momentum or configuration could not be built.
"""

import argparse
import sys

import numpy as np

from . import report as rep
from .cache import load_algebra
from .config import ConfigError, RunConfig
from .curvature import Budget, curvature_report
from .grading import GradingError, grade, grading_report
from .liecore.algebra import jacobi_witness
from .liecore.linalg import BudgetExceeded
from .sympdata import StructuralFault, extract, identity_report, roundtrip

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
ORDER_BAND = (1.9, 2.1)


def _setup(cfg):
    L, cache_status = load_algebra(cfg.algebra, cfg.cache, cfg.allow_large)
    tg = grade(L)
    return L, tg, cache_status


def cmd_report(cfg):
    L, tg, cache_status = _setup(cfg)
    jw = jacobi_witness(L)
    g = grading_report(tg)
    ssd = extract(tg, check=False)
    ident = identity_report(ssd)
    rt = roundtrip(ssd)
    results = {
        "jacobi": {"pass": jw is None, "witness": None if jw is None else str(jw)},
        "grading": g,
        "identities": ident,
        "dims": [L.dim, ssd.h_dim, ssd.V_dim],
        "roundtrip": {"pass": rt is None, "mismatch": None if rt is None else str(rt)},
    }
    ok = jw is None and g["frame_check"] and ident["pass"] and rt is None
    return rep.make_report("report", cfg.echo(), results, ok, cache_status)


def cmd_curvature(cfg):
    L, tg, cache_status = _setup(cfg)
    ssd = extract(tg)
    res = curvature_report(ssd, cfg.budget)
    return rep.make_report("curvature", cfg.echo(), res, res["pass"], cache_status)


def _in_band(order):
    return order is None or ORDER_BAND[0] <= order <= ORDER_BAND[1]


def _order_ok(order):
    """Second order or better; degenerate momenta can make a residual superconverge."""
    return order is None or order >= ORDER_BAND[0]


def cmd_flow(cfg):
    from . import contactflow as cf
    L, tg, cache_status = _setup(cfg)
    if L.matrices is None:
        raise ConfigError(f"{L.name} has no matrix model; flows need one")
    ctx = cf.FlowContext(L, tg)
    mom = cf.parse_momentum(ctx, cfg.a)
    a_mat = cf.momentum_matrix(ctx, mom)
    rng = np.random.default_rng(cfg.seed)
    checks = []

    fp = cf.generic_point(ctx, a_mat, rng)
    checks.append(rep.assertion("base_point_q_residual", fp.residual, cfg.retract_tol,
                                fp.residual < cfg.retract_tol))
    # Newton and graded lift land on the same point
    kick = fp.g @ cf.expm(1e-3 * cf.random_algebra_element(ctx, rng))
    pn = cf.retract(ctx, kick, a_mat, cfg.retract_tol, method="newton")
    pl = cf.retract(ctx, kick, a_mat, cfg.retract_tol, method="lift")
    gap = float(np.linalg.norm(pn.g - pl.g))
    checks.append(rep.assertion("newton_matches_lift", gap, cfg.assert_tol, gap < cfg.assert_tol))
    S = cf.mc_decompose(ctx, fp, fp.A)
    dev = abs(S.kappa + 0.5) + float(np.linalg.norm(S.theta)) + float(np.linalg.norm(S.eta))
    checks.append(rep.assertion("xi_a_coframe", dev, cfg.assert_tol, dev < cfg.assert_tol))

    v1, v2 = cf.random_tangent(ctx, fp, rng), cf.random_tangent(ctx, fp, rng)
    orders, table, spread = cf.convergence_orders(ctx, fp, a_mat, v1, v2, cfg.eps_sweep)
    for name in cf.EQUATIONS:
        checks.append(rep.assertion(f"order_{name}", orders[name], ORDER_BAND[0],
                                    _order_ok(orders[name]), exact=orders[name] is None,
                                    in_band=_in_band(orders[name])))
    checks.append(rep.assertion("stencil_invariant_spread", spread, 1e-10, spread < 1e-10))

    vf = cf.vector_field_audit(ctx, fp, a_mat, rng, cfg.eps_sweep)
    for name, order in vf["orders"].items():
        if name == "xi_h_f":
            worst = max(vf["residuals"][name])
            checks.append(rep.assertion(name, worst, cfg.assert_tol, worst < cfg.assert_tol))
        elif name == "bracket_one_sided":
            checks.append(rep.assertion(name, order, [0.8, 1.2],
                                        order is None or 0.8 <= order <= 1.2))
        else:
            checks.append(rep.assertion(f"order_{name}", order, ORDER_BAND[0], _order_ok(order),
                                        in_band=_in_band(order)))

    path = cf.retracted_path(ctx, fp, a_mat, rng, cfg.path_steps, cfg.step)
    drift = cf.conserved_invariants(ctx, path)
    checks.append(rep.assertion("f_plus_rho2_drift", drift["f_plus_rho2_drift"], cfg.assert_tol,
                                drift["f_plus_rho2_drift"] < cfg.assert_tol))
    checks.append(rep.assertion("ad_trace_drift", drift["ad_trace_drift"], cfg.assert_tol,
                                drift["ad_trace_drift"] < cfg.assert_tol))

    frac = cf.transversality_scan(ctx, ctx.coords(a_mat), cfg.samples, rng)
    kind = cfg.a.partition(":")[0]
    if kind in ("bochner", "ricci"):
        checks.append(rep.assertion("model_momentum_transversal", frac, 0.0, frac == 1.0))
    sym = cf.symmetry_dimension(ctx, mom.a)
    if "normal_form" in sym:
        nf = sym["normal_form"]
        checks.append(rep.assertion("stab_matches_normal_form", sym["stab_dim"], 0,
                                    nf["consistent"], expected=nf["expected_stab"]))

    results = {
        "algebra": L.name,
        "a_spec": mom.spec,
        "residual_orders": orders,
        "residual_table": {"eps": list(cfg.eps_sweep), **table},
        "vector_fields": vf,
        "invariant_drift": drift,
        "transversality_fraction": frac,
        "transversality_samples": cfg.samples,
        "stab_dim": sym["stab_dim"],
        "symmetry_dim": sym["symmetry_dim"],
        "normal_form": sym.get("normal_form"),
        "checks": checks,
    }
    ok = all(c["pass"] for c in checks)
    return rep.make_report("flow", cfg.echo(), results, ok, cache_status)


COMMANDS = {"report": cmd_report, "curvature": cmd_curvature, "flow": cmd_flow}


def build_parser():
    p = argparse.ArgumentParser(prog="sympconn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--algebra", required=True,
                       help="sl_real:N | sp_real:N | su:P,Q | so:P,Q | g2_split | chevalley:TYPE")
        s.add_argument("--a", default=None,
                       help="momentum: bochner:p,q | ricci:c | normal:c[,rho0...] | explicit:path")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--eps-sweep", default="1e-2,5e-3,2.5e-3")
        s.add_argument("--samples", type=int, default=10000)
        s.add_argument("--path-steps", type=int, default=1000)
        s.add_argument("--budget-kernel", type=int, default=None,
                       help="cap on the number of unknowns of one exact kernel")
        s.add_argument("--allow-large", action="store_true",
                       help="allow gated algebras (E-series)")
        s.add_argument("--out", default=None)
        s.add_argument("--cache", default=None)
    return p


def config_from_args(args):
    try:
        eps = tuple(float(x) for x in args.eps_sweep.split(",") if x)
    except ValueError:
        raise ConfigError(f"bad --eps-sweep {args.eps_sweep!r}") from None
    cfg = RunConfig(command=args.command, algebra=args.algebra, a=args.a, seed=args.seed,
                    eps_sweep=eps, samples=args.samples, path_steps=args.path_steps,
                    budget=Budget(max_columns=args.budget_kernel), out=args.out,
                    cache=args.cache, allow_large=args.allow_large)
    return cfg.validate()


def run(cfg):
    return COMMANDS[cfg.command](cfg)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        doc = run(cfg)
    except (ConfigError, GradingError, StructuralFault, BudgetExceeded, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:  # retraction failures and the like
        from .contactflow import RetractionError
        if isinstance(e, RetractionError):
            print(f"error: {e}", file=sys.stderr)
            return EXIT_FAIL
        raise
    text = rep.dumps(doc)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    status = "PASS" if doc["pass"] else "FAIL"
    print(f"{cfg.command} {cfg.algebra}: {status}", file=sys.stderr)
    return EXIT_PASS if doc["pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
