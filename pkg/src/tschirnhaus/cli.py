"""Command-line interface.

Subcommands: ``bound`` for obliteration bound queries, ``transform`` to
apply a transformation, ``reduce`` for the term-removal pipelines emitting
certificates, ``verify`` to re-check a certificate, and ``demo-quintic``
for the end-to-end quintic solver.  Exit codes: 0 success, 2 the ambient
dimension is too small, 3 a genericity failure survived every retry, 4
certificate verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys

import mpmath as mp

from .errors import AmbientTooSmall, GenericityFailure
from .numeric import PrecisionConfig
from .obliteration import DegreeProfile, line_bound, point_bound
from .pipeline import (
    Certificate,
    bring_reduce,
    quintic_solve_demo,
    remove5,
    remove_terms_generic,
    verify_certificate,
)
from . import serialize as sz

EXIT_OK = 0
EXIT_AMBIENT = 2
EXIT_GENERICITY = 3
EXIT_VERIFY = 4


def _cfg_from_args(args):
    return PrecisionConfig(bits=args.precision, tol_rel=args.tol,
                           max_retries=args.retries, seed=args.seed)


def _add_cfg_args(sp):
    sp.add_argument("--precision", type=int, default=256,
                    help="working precision in bits (default 256)")
    sp.add_argument("--tol", type=float, default=1e-30,
                    help="relative residual tolerance (default 1e-30)")
    sp.add_argument("--seed", type=int, default=0,
                    help="seed for every random choice (default 0)")
    sp.add_argument("--retries", type=int, default=6,
                    help="genericity/escalation retry budget (default 6)")


def _load_monic(path, bits):
    with open(path) as fh:
        return sz.monic_from_json(json.load(fh), bits)


def _load_transformation(path, n, bits):
    with open(path) as fh:
        return sz.transformation_from_json(json.load(fh), n, bits)


def cmd_bound(args):
    profile = DegreeProfile.parse(args.profile)
    value = line_bound(profile) if args.mode == "line" else point_bound(profile)
    print(value)
    return EXIT_OK


def cmd_transform(args):
    from .transform import transform
    cfg = _cfg_from_args(args)
    p = _load_monic(args.poly, cfg.bits)
    T = _load_transformation(args.transformation, p.n, cfg.bits)
    q = transform(p, T, cfg)
    sys.stdout.write(sz.dumps(sz.monic_to_json(q, sz.digits_for_bits(cfg.bits))))
    return EXIT_OK


def cmd_reduce(args):
    cfg = _cfg_from_args(args)
    p = _load_monic(args.poly, cfg.bits)
    if args.variant == "generic":
        cert = remove_terms_generic(p, args.k, cfg)
    else:
        if args.k != 5:
            raise AmbientTooSmall(
                "geometric variants implement k = 5; use --variant generic")
        cert = remove5(p, args.variant, cfg)
    text = cert.dumps()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args):
    with open(args.certificate) as fh:
        cert = Certificate.loads(fh.read())
    rep = verify_certificate(cert)
    for line in rep.lines():
        print(line)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_demo_quintic(args):
    cfg = _cfg_from_args(args)
    p = _load_monic(args.poly, cfg.bits)
    roots, cert, bring, plog, vlog = quintic_solve_demo(p, cfg)
    dps = sz.digits_for_bits(cfg.bits)
    out = {
        "roots": sz.scalars_to_json(roots, dps),
        "bring_A": sz.scalar_to_json(bring.A, dps),
        "bring_scale": sz.scalar_to_json(bring.scale, dps),
        "pipeline_max_degree": plog.max_degree,
        "certificate": cert.to_json_dict(),
    }
    sys.stdout.write(sz.dumps(out))
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="tschirnhaus",
        description="Tschirnhaus transformations with solve-degree certificates")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="obliteration bound for a degree profile")
    b.add_argument("--profile", required=True,
                   help='degree:count pairs, e.g. "3:1,2:0,1:0"')
    b.add_argument("--mode", choices=("line", "point"), default="line")
    b.set_defaults(fn=cmd_bound)

    t = sub.add_parser("transform", help="apply a transformation to a polynomial")
    t.add_argument("poly", help="monic polynomial JSON file")
    t.add_argument("transformation", help="transformation JSON file")
    _add_cfg_args(t)
    t.set_defaults(fn=cmd_transform)

    r = sub.add_parser("reduce", help="remove the first k coefficients")
    r.add_argument("poly", help="monic polynomial JSON file")
    r.add_argument("--k", type=int, default=5)
    r.add_argument("--variant", choices=("generic", "segre", "strict"),
                   default="segre")
    r.add_argument("-o", "--output", help="certificate output path")
    _add_cfg_args(r)
    r.set_defaults(fn=cmd_reduce)

    v = sub.add_parser("verify", help="re-check a certificate")
    v.add_argument("certificate", help="certificate JSON file")
    v.set_defaults(fn=cmd_verify)

    d = sub.add_parser("demo-quintic", help="solve a quintic via Bring form")
    d.add_argument("poly", help="monic quintic JSON file")
    _add_cfg_args(d)
    d.set_defaults(fn=cmd_demo_quintic)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except AmbientTooSmall as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.required is not None:
            print(f"required: {exc.required}", file=sys.stderr)
        return EXIT_AMBIENT
    except GenericityFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY


if __name__ == "__main__":
    sys.exit(main())
