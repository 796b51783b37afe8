"""sidonforge command line: construct, verify, search, sigma, montecarlo.

Exit codes: 0 success, 1 a claim failed verification, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import certificate as cert
from .bounds import cyclic_bound_report, exact_alpha, exact_beta, interval_bound_report
from .construct import (
    PastingParams,
    assemble_integer_gsidon,
    bose_sidon_baseline,
    build_cyclic_gsidon,
    build_parabola_union,
    paste,
)
from .continuum import (
    DiscretizationParams,
    certified_ratio,
    discretize,
    inverse_sqrt_profile,
    make_prob_model,
    monte_carlo_check,
    optimize_sigma,
    read_profile_csv,
    write_profile_csv,
)
from .errors import SidonError
from .repfn import Flavor, rep_profile, verify_g_sidon


def _emit(args, payload: dict, line: str) -> None:
    print(json.dumps(payload, sort_keys=True) if args.json else line)


def _summary(A, nominal=None) -> dict:
    return {
        "group": A.group.describe(),
        "size": len(A),
        "claimed_g": A.claimed_g,
        "achieved_g": A.achieved_g,
        "nominal_g": nominal,
        "verified": A.verified,
        "density": cert.density(A),
    }


def cmd_construct(args) -> int:
    nominal = None
    if args.kind == "parabola":
        A = build_parabola_union(args.p, args.k, args.t).sidon_set
        nominal = A.provenance["nominal_g"]
    elif args.kind == "cyclic":
        A, nominal = build_cyclic_gsidon(args.k, args.s, args.p)
    elif args.kind == "paste":
        A_int, C = cert.read_certificate(args.A), cert.read_certificate(args.C)
        if A_int.achieved_g is None or C.achieved_g is None:
            raise SidonError("inputs must carry a profile")
        A = paste(PastingParams(A_int, C, A_int.achieved_g, C.achieved_g))
        nominal = A.claimed_g
    elif args.kind == "assemble":
        A = assemble_integer_gsidon(args.g, args.N, args.eps, seed=args.seed)
        nominal = args.g
    else:
        A = bose_sidon_baseline(args.p).verify(g=2, flavor=Flavor.ORDERED)
    cert.write_certificate(A, args.out)
    s = _summary(A, nominal)
    s["certificate"] = str(args.out)
    _emit(
        args,
        s,
        f"|A|={s['size']} in {A.group}  achieved_g={s['achieved_g']}  nominal_g={nominal}  "
        f"density={s['density']:.6f}  -> {args.out}",
    )
    return 0 if A.verified else 1


def cmd_verify(args) -> int:
    A = cert.read_certificate(args.path)
    g = args.g if args.g is not None else A.claimed_g
    prof = rep_profile(A)
    out = {
        "size": len(A),
        "group": A.group.describe(),
        "flavor": A.flavor.value,
        "claimed_g": g,
        "max_r": prof.max_r,
        "max_r_restricted": prof.max_restricted,
        "max_r_unordered": prof.max_unordered,
    }
    bad = verify_g_sidon(A, g, A.flavor) if g is not None else None
    ok = g is not None and bad is None
    out["holds"] = ok
    if bad is not None:
        out["violation"] = {"x": list(bad.x) if isinstance(bad.x, tuple) else bad.x, "count": bad.count}
    line = (
        f"|A|={len(A)}  max r={prof.max_r}  max r'={prof.max_restricted}  max r*={prof.max_unordered}  "
        f"claim {A.flavor.value} <= {g}: {'OK' if ok else 'FAILS'}"
    )
    if bad is not None:
        line += f"  (x={bad.x} has {bad.count})"
    _emit(args, out, line)
    return 0 if ok else 1


def cmd_search(args) -> int:
    flavor = Flavor(args.flavor)
    if args.interval is not None:
        size, A = exact_beta(args.interval, args.g, flavor, ceiling=args.ceiling)
        report = interval_bound_report(args.interval, args.g, flavor)
    else:
        kw = {} if args.ceiling is None else {"ceiling": args.ceiling}
        size, A = exact_alpha(args.cyclic, args.g, flavor, **kw)
        report = cyclic_bound_report(args.cyclic, args.g, flavor)
    report.optimum = size
    if args.out:
        cert.write_certificate(A, args.out)
    out = report.to_dict()
    out["witness"] = list(A.elements)
    lines = [f"optimum {size} in {A.group} ({flavor.value}, g={args.g})  witness {list(A.elements)}"]
    for name, value in report.bounds.items():
        tag = "" if report.applicable.get(name, True) else "  (n/a for this flavor)"
        lines.append(f"  {name:16s} {value:10.4f}  slack {value - size:8.4f}{tag}")
    _emit(args, out, "\n".join(lines))
    return 0


def cmd_sigma(args) -> int:
    if args.verify:
        f = read_profile_csv(args.verify)
        ratio = certified_ratio(f)
        _emit(args, {"N": f.N, "ratio": ratio}, f"N={f.N}  certified ratio {ratio!r}")
        return 0
    if args.N is None:
        raise SidonError("give N or --verify PROFILE")
    res = optimize_sigma(args.N, budget=args.budget, seed=args.seed)
    if args.emit:
        write_profile_csv(res.step, args.emit)
    out = {"N": args.N, "ratio": res.ratio, "start_ratio": res.start_ratio, "iterations": res.iterations}
    _emit(args, out, f"N={args.N}  certified ratio {res.ratio!r}  (start {res.start_ratio:.6f})")
    return 0


def cmd_montecarlo(args) -> int:
    f = read_profile_csv(args.profile) if args.profile else inverse_sqrt_profile(args.pieces)
    disc = discretize(f, DiscretizationParams(n=args.n, eps=args.eps))
    model = make_prob_model(disc.coeffs, args.n, 1 / 3, disc.integral, seed=args.seed)
    print(monte_carlo_check(model, args.trials, args.eps).to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")

    parser = argparse.ArgumentParser(prog="sidonforge", description="g-Sidon set toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="build a set and write its certificate")
    csub = con.add_subparsers(dest="kind", required=True)
    par = csub.add_parser("parabola", parents=[common])
    par.add_argument("p", type=int)
    par.add_argument("k", type=int)
    par.add_argument("--t", type=int, default=None, help="shift (default: best)")
    cyc = csub.add_parser("cyclic", parents=[common])
    cyc.add_argument("p", type=int)
    cyc.add_argument("k", type=int)
    cyc.add_argument("s", type=int)
    pst = csub.add_parser("paste", parents=[common])
    pst.add_argument("A", help="certificate of the integer pattern")
    pst.add_argument("C", help="certificate of the cyclic set")
    asm = csub.add_parser("assemble", parents=[common])
    asm.add_argument("g", type=int)
    asm.add_argument("N", type=int)
    asm.add_argument("eps", type=float)
    bse = csub.add_parser("baseline", parents=[common])
    bse.add_argument("p", type=int)
    for p in (par, cyc, pst, asm, bse):
        p.add_argument("-o", "--out", default="certificate.json")
        p.set_defaults(func=cmd_construct)

    ver = sub.add_parser("verify", parents=[common], help="recheck a certificate")
    ver.add_argument("path")
    ver.add_argument("--g", type=int, default=None, help="cap to test instead of claimed_g")
    ver.set_defaults(func=cmd_verify)

    sea = sub.add_parser("search", parents=[common], help="exact maximum by branch and bound")
    where = sea.add_mutually_exclusive_group(required=True)
    where.add_argument("--interval", type=int, metavar="N")
    where.add_argument("--cyclic", type=int, metavar="Q")
    sea.add_argument("--g", type=int, required=True)
    sea.add_argument("--flavor", choices=[f.value for f in Flavor], default="ordered")
    sea.add_argument("--ceiling", type=int, default=None)
    sea.add_argument("-o", "--out", default=None, help="write the witness certificate")
    sea.set_defaults(func=cmd_search)

    sig = sub.add_parser("sigma", parents=[common], help="step-function lower bounds for sigma")
    sig.add_argument("N", type=int, nargs="?")
    sig.add_argument("--budget", type=int, default=200)
    sig.add_argument("--emit", default=None, help="write the profile CSV")
    sig.add_argument("--verify", default=None, metavar="PROFILE", help="re-certify a profile CSV")
    sig.set_defaults(func=cmd_sigma)

    mc = sub.add_parser("montecarlo", parents=[common], help="sampled g-Sidon sets from a profile")
    mc.add_argument("--n", type=int, default=10_000)
    mc.add_argument("--eps", type=float, default=0.3)
    mc.add_argument("--trials", type=int, default=200)
    mc.add_argument("--profile", default=None, help="StepFunction CSV (default 1/sqrt(pi x))")
    mc.add_argument("--pieces", type=int, default=4096, help="pieces of the default profile")
    mc.set_defaults(func=cmd_montecarlo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SidonError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
