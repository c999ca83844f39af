"""Command-line front end.

Examples::

    phistat occupation --family eps --param -1 --a 0 --b 1 --energies=-1:1:2
    phistat maxent --family eps --param 1 --energies 0,1 --mean-energy 0.5
    phistat maxent --family haldane --param 0.5 --energies @spectrum.json
    phistat entropy --family eps --param 1 --p 0.5,0.5
    phistat wu --param 0.5 --eta=-2:2:8 --format json
    phistat sample --model geometric --p 1 --n 100000 --seed 7
    phistat verify --abs-tol 1e-2

Tables go to standard output (or ``--out``) as CSV or JSON.  Floats are
written in their shortest round-trip form so output is byte-reproducible.
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import verification
from .config import QuadratureConfig
from .entropy import EntropyFamily, entropy_gradient, entropy_hessian, entropy_value
from .errors import InfeasibleConstraint, PhistatError
from .expfam import Bernoulli, CurvedBernoulli, CurvedGeometric, Geometric
from .maxent import MaxEntProblem, solve_closed_form, solve_numeric, verify_maximum, weight_function
from .simplex import MomentConstraint, load_spectrum
from .wu import wu_omega, wu_weight

MODELS = {
    "bernoulli": lambda p, eps: Bernoulli(p),
    "geometric": lambda p, eps: Geometric(p),
    "curved_bernoulli": lambda p, eps: CurvedBernoulli(p, eps),
    "curved_geometric": lambda p, eps: CurvedGeometric(p, eps),
}


class UsageError(Exception):
    pass


def parse_grid(text):
    """Parse ``"x1,x2,..."`` or an inclusive range ``"lo:hi:steps"`` (steps + 1 points)."""
    text = text.strip()
    if ":" in text:
        try:
            lo, hi, steps = text.split(":")
            lo, hi, steps = float(lo), float(hi), int(steps)
        except ValueError:
            raise UsageError(f"bad range {text!r}; expected lo:hi:steps") from None
        if steps < 1:
            raise UsageError("a range needs at least one step")
        return [lo + (hi - lo) * k / steps for k in range(steps + 1)]
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad number list {text!r}") from None


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def render(rows, columns, fmt_name, document=None):
    """Render ``rows`` (dicts) as CSV, or ``document`` (default: the rows) as JSON."""
    if fmt_name == "json":
        doc = document if document is not None else [dict(zip(columns, (r[c] for c in columns))) for r in rows]
        return json.dumps(_jsonable(doc), indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def _config(args):
    kw = {}
    if args.abs_tol is not None:
        kw["abs_tol"] = args.abs_tol
    if args.rel_tol is not None:
        kw["rel_tol"] = args.rel_tol
    try:
        return QuadratureConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _family(args, default="eps"):
    name = args.family or default
    if name == "bgs":
        return EntropyFamily.bgs()
    if args.param is None:
        raise UsageError(f"--param is required for --family {name}")
    if name == "eps":
        return EntropyFamily.epsilon(args.param)
    if name == "haldane":
        return EntropyFamily.haldane(args.param)
    raise UsageError(f"unknown family {name!r}")


def _require(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n for n in missing))


def _energies(args):
    """Energy list plus optional mean energy from ``--energies`` (``@file`` allowed)."""
    _require(args, "energies")
    spec = args.energies
    if spec.startswith("@"):
        path = spec[1:]
        with open(path) as fh:
            doc = json.load(fh)
        if isinstance(doc, dict):
            if "mean_energy" in doc and args.mean_energy is None:
                constraint = load_spectrum(doc)
                return list(constraint.spectrum.E), constraint.mean_energy
            return [float(x) for x in doc["energies"]], args.mean_energy
        return [float(x) for x in doc], args.mean_energy
    return parse_grid(spec), args.mean_energy


def cmd_occupation(args, cfg):
    _require(args, "a", "b")
    family = _family(args)
    energies, _ = _energies(args)
    rows = []
    for E in energies:
        try:
            p = weight_function(family, args.a, args.b, E, cfg)
        except PhistatError as exc:
            raise PhistatError(f"at E={E!r}: {exc}") from exc
        rows.append({"E": E, "eta": args.a + args.b * E, "p": p})
    doc = {"family": str(family), "a": args.a, "b": args.b, "rows": rows}
    return render(rows, ["E", "eta", "p"], args.format, doc)


def cmd_maxent(args, cfg):
    family = _family(args)
    energies, mean = _energies(args)
    if mean is None:
        raise UsageError("missing --mean-energy (or a spectrum file with mean_energy)")
    prob = MaxEntProblem(MomentConstraint(energies, mean), family)
    closed = solve_closed_form(prob, cfg)
    numeric = solve_numeric(prob, cfg)
    discrepancy = float(np.max(np.abs(closed.p.p - numeric.p.p)))
    report = verify_maximum(closed, prob, raise_on_failure=False)
    doc = closed.to_dict()
    doc.update(
        family=str(family),
        numeric=numeric.to_dict(),
        discrepancy=discrepancy,
        verification=report.to_dict(),
    )
    rows = [
        {"level": i, "E": E, "p": p, "p_numeric": q}
        for i, (E, p, q) in enumerate(zip(energies, closed.p.p, numeric.p.p))
    ]
    return render(rows, ["level", "E", "p", "p_numeric"], args.format or "json", doc)


def cmd_entropy(args, cfg):
    _require(args, "p")
    family = _family(args)
    p = np.array(parse_grid(args.p))
    terms = [entropy_value(family, [x]) for x in p]
    grad = entropy_gradient(family, p)
    hess = entropy_hessian(family, p)
    rows = [{"p": a, "term": t, "gradient": g, "hessian": h} for a, t, g, h in zip(p, terms, grad, hess)]
    doc = {"family": str(family), "entropy": entropy_value(family, p), "levels": rows}
    return render(rows, ["p", "term", "gradient", "hessian"], args.format, doc)


def cmd_wu(args, cfg):
    _require(args, "param", "eta")
    g = args.param
    rows = []
    for eta in parse_grid(args.eta):
        rows.append({"eta": eta, "omega": wu_omega(g, eta, cfg), "p": wu_weight(g, eta, cfg)})
    return render(rows, ["eta", "omega", "p"], args.format, {"g": g, "rows": rows})


def cmd_sample(args, cfg):
    _require(args, "model", "p", "n")
    if args.model not in MODELS:
        raise UsageError(f"unknown model {args.model!r}; choose from {sorted(MODELS)}")
    if args.model.startswith("curved") and args.param is None:
        raise UsageError("--param (eps) is required for curved models")
    (p,) = parse_grid(args.p)
    model = MODELS[args.model](p, args.param)
    seed = 0 if args.seed is None else args.seed
    stats = model.sample(args.n, seed)
    doc = stats.to_dict()
    return render([doc], ["count", "mean", "variance", "seed"], args.format or "json", doc)


def cmd_verify(args, cfg):
    seed = 0 if args.seed is None else args.seed
    results = verification.run_battery(cfg, seed=seed)
    if args.format == "json":
        text = json.dumps(_jsonable([r._asdict() for r in results]), indent=2) + "\n"
    else:
        text = "".join(
            f"{'PASS' if r.passed else 'FAIL'} {r.name} residual={fmt(r.residual)} tol={fmt(r.tolerance)}\n"
            for r in results
        )
    return text, all(r.passed for r in results)


COMMANDS = {
    "occupation": cmd_occupation,
    "maxent": cmd_maxent,
    "entropy": cmd_entropy,
    "wu": cmd_wu,
    "sample": cmd_sample,
    "verify": cmd_verify,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="phistat", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--family", choices=["eps", "haldane", "bgs"])
    parser.add_argument("--param", type=float, help="eps, g, or eps of a curved model")
    parser.add_argument("--a", type=float)
    parser.add_argument("--b", type=float)
    parser.add_argument("--energies", help="list x1,x2,..., range lo:hi:steps, or @file.json")
    parser.add_argument("--mean-energy", type=float)
    parser.add_argument("--eta", help="natural-argument grid for the wu command")
    parser.add_argument("--model", help="sampler model: " + ", ".join(sorted(MODELS)))
    parser.add_argument("--p", help="model parameter, or occupation list for entropy")
    parser.add_argument("--n", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--format", choices=["csv", "json"])
    parser.add_argument("--out")
    parser.add_argument("--abs-tol", type=float)
    parser.add_argument("--rel-tol", type=float)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None and args.command in ("occupation", "entropy", "wu"):
        args.format = "csv"
    ok = True
    try:
        cfg = _config(args)
        result = COMMANDS[args.command](args, cfg)
        if isinstance(result, tuple):
            result, ok = result
    except UsageError as exc:
        parser.error(str(exc))
    except InfeasibleConstraint as exc:
        print(f"phistat: {exc}", file=sys.stderr)
        return 1
    except (PhistatError, ValueError, OSError) as exc:
        print(f"phistat: error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(result)
    else:
        sys.stdout.write(result)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
