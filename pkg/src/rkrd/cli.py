"""Command-line front end.

Exit codes: 0 fail_to_reject / success, 3 reject, 1 error, 2 usage.
"""

import argparse
import csv
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from rkrd import __version__
from rkrd.audit import REJECT, AuditClaim, report_to_dict, run_audit, verify_report
from rkrd.errors import RkrdError
from rkrd.estimator import BLOCK, GramProblem, estimate_block
from rkrd.figure import (
    ALPHAS,
    N_SEEDS,
    PANELS,
    SAMPLE_SIZES,
    lambda_grid,
    panel_curves,
    panel_manifest,
)
from rkrd.kernels import KernelSpec
from rkrd.mechanisms import (
    D,
    D_PRIME,
    GaussianMechanism,
    calibrate_sigma,
    classic_sigma,
    gaussian_renyi,
)
from rkrd.sample_io import FLOAT_FMT, emit_samples, ingest_samples

log = logging.getLogger("rkrd")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_REJECT = 3

CLAIM_FLAGS = {
    "eps-dp": "eps_dp",
    "eps-delta-dp": "eps_delta_dp",
    "rdp": "rdp",
    "rkrdp": "rkrdp",
}


def float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def bandwidth_arg(text):
    if text == "median":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bandwidth must be 'median' or a number, got {text!r}")


def kernel_spec(args):
    family = "product-rbf" if args.kernel in ("product-rbf", "product") else "rbf"
    return KernelSpec(family, args.bandwidth)


def _fmt(x):
    return FLOAT_FMT % x


def _timestamp():
    return datetime.now(timezone.utc).isoformat()


def _write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _out_stem(path):
    p = Path(path)
    return p.with_suffix("") if p.suffix.lower() in (".csv", ".json") else p


def cmd_estimate(args):
    xs = ingest_samples(args.p_samples, args.format)
    ys = ingest_samples(args.q_samples, args.format)
    spec = kernel_spec(args)
    problem = GramProblem(spec, xs, ys)
    rows = []
    for alpha in args.alpha:
        for lam in args.lambda_:
            if args.method == BLOCK:
                est = estimate_block(problem.spec, xs, ys, alpha, lam)
            else:
                est = problem.estimate(alpha, lam)
            rows.append(est)
    bandwidth = problem.bandwidth
    stem = _out_stem(args.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    with open(stem.with_suffix(".csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "lambda", "n", "value", "bandwidth", "method"])
        for e in rows:
            bw = _fmt(bandwidth) if np.ndim(bandwidth) == 0 else ";".join(_fmt(b) for b in bandwidth)
            w.writerow([_fmt(e.alpha), _fmt(e.lam), e.n_p, _fmt(e.value), bw, e.method])
    _write_json(
        stem.with_suffix(".json"),
        {
            "estimates": [e.as_dict() for e in rows],
            "metadata": {
                "seed": args.seed,
                "kernel": {"family": problem.spec.family, "bandwidth": bandwidth},
                "p_samples": str(args.p_samples),
                "q_samples": str(args.q_samples),
                "n_p": problem.n_p,
                "n_q": problem.n_q,
                "created": _timestamp(),
                "version": __version__,
            },
        },
    )
    for e in rows:
        print(f"alpha={e.alpha:g} lambda={e.lam:g} value={e.value:.6g}")
    return EXIT_OK


def cmd_audit(args):
    if len(args.alpha) != 1:
        raise RkrdError("audit takes a single --alpha")
    if args.lambda_ is not None and len(args.lambda_) != 1:
        raise RkrdError("audit takes a single --lambda")
    lam = args.lambda_[0] if args.lambda_ else None
    kind = CLAIM_FLAGS[args.claim]
    if kind == "eps_delta_dp" and lam is not None:
        log.warning("--lambda ignored: an (epsilon, delta) claim fixes lambda = delta * exp(-epsilon)")
        lam = None
    claim = AuditClaim(
        kind=kind,
        epsilon=args.epsilon,
        alpha=args.alpha[0],
        delta=args.delta,
        lam=lam,
        level_x0=args.level,
    )
    xs = ingest_samples(args.p_samples, args.format)
    ys = ingest_samples(args.q_samples, args.format)
    report = run_audit(claim, kernel_spec(args), xs, ys)
    data = report_to_dict(report, seed=args.seed, version=__version__)
    for note in report.notes:
        log.warning(note)
    if args.out:
        _write_json(args.out, data)
    print(json.dumps(data, indent=2))
    return EXIT_REJECT if report.decision == REJECT else EXIT_OK


def cmd_verify(args):
    data = json.loads(Path(args.report).read_text())
    decision = verify_report(data)
    if decision != data["decision"]:
        raise RkrdError(f"stored decision {data['decision']!r} does not match recomputed {decision!r}")
    print(decision)
    return EXIT_REJECT if decision == REJECT else EXIT_OK


def cmd_mechanism(args):
    if args.sigma is not None:
        sigma = args.sigma
    elif args.sensitivity == 0:
        raise RkrdError("with zero sensitivity pass --sigma explicitly")
    else:
        if args.epsilon is None or args.delta is None:
            raise RkrdError("calibration needs --epsilon and --delta (or pass --sigma)")
        sigma = calibrate_sigma(args.epsilon, args.delta, args.sensitivity)
    mech = GaussianMechanism.with_sensitivity(args.dim, args.sensitivity, sigma, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ext = args.format or "csv"
    meta = {
        "mechanism": "gaussian",
        "dim": args.dim,
        "n": args.n,
        "sensitivity": args.sensitivity,
        "sigma": sigma,
        "epsilon": args.epsilon,
        "delta": args.delta,
        "seed": args.seed,
        "version": __version__,
    }
    p_path = emit_samples(mech.sample(D, args.n), out / f"p.{ext}", ext, metadata=meta)
    q_path = emit_samples(mech.sample(D_PRIME, args.n), out / f"q.{ext}", ext, metadata=meta)
    _write_json(out / "mechanism.json", {**meta, "p_samples": p_path.name, "q_samples": q_path.name})
    print(f"sigma={sigma:.6g} wrote {p_path} {q_path}")
    return EXIT_OK


def cmd_calibrate(args):
    sigma = calibrate_sigma(args.epsilon, args.delta, args.sensitivity)
    data = {
        "epsilon": args.epsilon,
        "delta": args.delta,
        "sensitivity": args.sensitivity,
        "sigma": sigma,
        "classic_sigma": classic_sigma(args.epsilon, args.delta, args.sensitivity),
        "lambda0": args.delta * float(np.exp(-args.epsilon)),
        "renyi": {f"{a:g}": gaussian_renyi(a, args.sensitivity, sigma) for a in args.alpha},
    }
    print(json.dumps(data, indent=2))
    return EXIT_OK


def cmd_reproduce_figure(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    alphas = args.alpha or list(ALPHAS)
    lambdas = args.lambda_ or list(lambda_grid(args.lambda_points))
    sizes = args.n or list(SAMPLE_SIZES)
    spec = kernel_spec(args)
    manifest = {
        "alphas": alphas,
        "lambdas": list(map(float, lambdas)),
        "sample_sizes": sizes,
        "seeds": args.seeds,
        "base_seed": args.seed,
        "kernel": {"family": spec.family, "bandwidth": spec.bandwidth_value()},
        "sigma_reading": "panel noise values are standard deviations",
        "panels": [],
        "created": _timestamp(),
        "version": __version__,
    }
    for index, panel in enumerate(PANELS):
        if args.panel and panel.name not in args.panel:
            continue
        values = panel_curves(panel, index, alphas, lambdas, sizes, args.seeds, args.seed, spec)
        path = out / f"{panel.name}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["alpha", "lambda", "n", "mean", "std", "rd"])
            for i, a in enumerate(alphas):
                rd = gaussian_renyi(a, panel.sensitivity, panel.sigma)
                for j, lam in enumerate(lambdas):
                    for k, n in enumerate(sizes):
                        v = values[i, j, k]
                        w.writerow([_fmt(a), _fmt(lam), n, _fmt(v.mean()), _fmt(v.std()), _fmt(rd)])
        entry = panel_manifest(panel, alphas)
        entry["file"] = path.name
        manifest["panels"].append(entry)
        log.info("wrote %s", path)
    _write_json(out / "manifest.json", manifest)
    print(f"wrote {len(manifest['panels'])} panels to {out}")
    return EXIT_OK


def _add_common(p, samples=True):
    if samples:
        p.add_argument("--p-samples", required=True, help="samples drawn on D")
        p.add_argument("--q-samples", required=True, help="samples drawn on D'")
    p.add_argument("--kernel", default="rbf", choices=["rbf", "product-rbf"])
    p.add_argument("--bandwidth", type=bandwidth_arg, default="median")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rkrd",
        description="Regularized kernel Renyi divergence estimation and privacy auditing.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="RKRD over an (alpha, lambda) grid")
    _add_common(p)
    p.add_argument("--alpha", type=float_list, default=[2.0])
    p.add_argument("--lambda", dest="lambda_", type=float_list, default=[0.1])
    p.add_argument("--method", choices=["symmetric", "block"], default="symmetric")
    p.add_argument("--out", required=True, help="output stem; writes STEM.csv and STEM.json")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("audit", help="test a privacy claim")
    _add_common(p)
    p.add_argument("--claim", required=True, choices=sorted(CLAIM_FLAGS))
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--alpha", type=float_list, default=[2.0])
    p.add_argument("--lambda", dest="lambda_", type=float_list, default=None)
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--out", default=None, help="report JSON path")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("verify", help="recompute the decision of a stored report")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mechanism", help="draw paired Gaussian-mechanism sample files")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--sensitivity", type=float, default=10.0)
    p.add_argument("--sigma", type=float, default=None, help="skip calibration")
    p.add_argument("--dim", type=int, default=30)
    p.add_argument("--n", type=int, default=600)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_mechanism)

    p = sub.add_parser("calibrate", help="exact Gaussian noise calibration")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--sensitivity", type=float, default=10.0)
    p.add_argument("--alpha", type=float_list, default=list(ALPHAS))
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("reproduce-figure", help="Gaussian-mechanism RKRD curves")
    _add_common(p, samples=False)
    p.add_argument("--alpha", type=float_list, default=None)
    p.add_argument("--lambda", dest="lambda_", type=float_list, default=None)
    p.add_argument("--lambda-points", type=int, default=25)
    p.add_argument("--n", type=int_list, default=None)
    p.add_argument("--seeds", type=int, default=N_SEEDS)
    p.add_argument("--panel", action="append", choices=[q.name for q in PANELS])
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_reproduce_figure)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return args.func(args)
    except (RkrdError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
