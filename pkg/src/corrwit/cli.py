"""Command-line entry point.

Exit codes: 0 success, 1 mathematical or constructive failure, 2 I/O or
validation error.  ``CORRWIT_TOL`` overrides the default detector tolerance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import detect, povm, report, states, witness
from .fileio import (
    FileFormatError,
    dumps,
    matrix_record,
    povm_record,
    read_matrix_file,
    read_povm_file,
    write_json,
    write_povm_file,
)

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def default_tol() -> float:
    raw = os.environ.get("CORRWIT_TOL")
    if raw is None:
        return detect.DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise FileFormatError(f"CORRWIT_TOL={raw!r} is not a number") from None


def _emit(obj, as_json: bool, text: str) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n" if as_json else text)


def cmd_classify(args) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    _, d, op = read_matrix_file(args.state, kinds=("state",))
    rho = states.DensityMatrix(op, d)
    rep = detect.classify(rho, tol).as_dict()
    text = "".join(f"{k:<18}{v}\n" for k, v in rep.items())
    _emit(rep, args.json, text)
    return EXIT_OK


def _direction(args) -> states.Direction:
    if args.delta:
        _, d, op = read_matrix_file(args.delta, kinds=("direction",))
        return states.Direction(op, d)
    return states.random_direction(args.dim, args.seed)


def _entangle_record(cert) -> dict:
    d = cert.kappa.d
    return {
        "schema_version": "1",
        "kind": "certificate",
        "witness": "entangle",
        "d": d,
        "lambda": float(cert.lam),
        "min_pt_eig": float(cert.min_pt_eig),
        "branch": cert.branch,
        "alpha": float(cert.reduced.alpha),
        "a_norm": float(np.linalg.norm(cert.reduced.a)),
        "delta": matrix_record(cert.delta.op, "direction", d),
        "U": matrix_record(cert.U, "unitary", d),
        "V": matrix_record(cert.V, "unitary", d),
        "kappa": matrix_record(cert.kappa.op, "state", d),
    }


def _crossing_record(cert) -> dict:
    d = cert.kappa.d
    return {
        "schema_version": "1",
        "kind": "certificate",
        "witness": cert.kind,
        "d": d,
        "lambda": float(cert.lam),
        "branch": cert.branch,
        "base_class": cert.base_class,
        "exit_classes": list(cert.exit_classes),
        "indices": {k: int(v) for k, v in cert.indices.items()},
        "verdicts": {k: {"base": bool(v[0]), "kappa": bool(v[1])} for k, v in cert.evidence.items()},
        "delta": matrix_record(cert.delta.op, "direction", d),
        "base": matrix_record(cert.base.op, "state", d),
        "kappa": matrix_record(cert.kappa.op, "state", d),
    }


def cmd_witness(args) -> int:
    if args.kind == "flat":
        if args.dim is None:
            raise FileFormatError("witness flat needs --dim")
        delta, lam_max = witness.flat_direction_counterexample(args.dim)
        grid = np.linspace(-lam_max, lam_max, 101)
        inside = float(witness.flat_direction_min_pt_eig(args.dim, grid).min())
        outside = float(witness.flat_direction_min_pt_eig(args.dim, [1.05 * lam_max]).min())
        rec = {
            "schema_version": "1",
            "kind": "certificate",
            "witness": "flat",
            "d": args.dim,
            "threshold": lam_max,
            "min_pt_eig_inside": inside,
            "min_pt_eig_outside": outside,
            "delta": matrix_record(delta.op, "direction", args.dim),
        }
        ok = inside >= -1e-12 and outside < 0
        text = f"flat direction d={args.dim}: threshold {lam_max:.17g}\n  min pt eig on grid {inside:.3e}, at 1.05x {outside:.3e}\n"
    else:
        if not args.delta and args.dim is None:
            raise FileFormatError("give --dim (with --seed) or --delta")
        delta = _direction(args)
        builders = {
            "entangle": (witness.build_entangling_perturbation, _entangle_record),
            "noncq": (witness.build_noncq_perturbation, _crossing_record),
            "noncc": (witness.build_noncc_perturbation, _crossing_record),
            "nonclass": (witness.build_non_cq_or_qc_perturbation, _crossing_record),
        }
        build, record = builders[args.kind]
        try:
            cert = build(delta)
        except witness.WitnessConstructionError as exc:
            print(f"construction failed: {exc}", file=sys.stderr)
            return EXIT_FAIL
        rec = record(cert)
        ok = cert.verify()
        text = f"{args.kind} certificate d={rec['d']}: lambda {rec['lambda']:.6e}"
        if "min_pt_eig" in rec:
            text += f", min pt eig {rec['min_pt_eig']:.6e}"
        text += "\n"
    if args.out:
        write_json(args.out, rec)
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_povm(args) -> int:
    if args.sub == "build-cq":
        if args.dim is None:
            raise FileFormatError("povm build-cq needs --dim")
        result = povm.build_minimal_cq_povm(args.dim, args.epsilon)
        rec = povm_record(result, args.dim)
        if args.out:
            write_povm_file(args.out, result, args.dim)
            print(f"wrote {len(result)} elements to {args.out}")
        else:
            sys.stdout.write(dumps(rec))
        return EXIT_OK
    d, elems = read_povm_file(args.file)
    P = povm.Povm(tuple(elems), d)
    ok, residuals = povm.validate(P)
    a = povm.analyze(P)
    rep = {
        "outcomes": len(P),
        "valid": ok,
        **residuals,
        "dim_e": a.dim_e,
        "dim_xe": a.dim_xe,
        "informationally_complete": a.informationally_complete,
        "decides_cq": a.decides_cq,
    }
    _emit(rep, args.json, "".join(f"{k:<26}{v}\n" for k, v in rep.items()))
    return EXIT_OK if ok else EXIT_IO


def cmd_report(args) -> int:
    rep = report.run_report(args.dim, args.trials, args.seed)
    rep["command"] = ["report", "--dim", str(args.dim), "--trials", str(args.trials), "--seed", str(args.seed)]
    if args.json:
        sys.stdout.write(json.dumps(rep, indent=2) + "\n")
    else:
        sys.stdout.write(report.format_report(rep))
    return EXIT_OK if rep["all_passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="corrwit", description="Correlation-class detectors and boundary-crossing witnesses.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="run the PPT / CQ / QC / CC detectors on a state file")
    c.add_argument("state")
    c.add_argument("--tol", type=float)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    w = sub.add_parser("witness", help="construct a boundary-crossing certificate")
    w.add_argument("kind", choices=["entangle", "noncq", "noncc", "nonclass", "flat"])
    w.add_argument("--dim", type=int)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--delta", help="direction file (overrides --dim/--seed)")
    w.add_argument("--out")
    w.set_defaults(func=cmd_witness)

    m = sub.add_parser("povm", help="analyze a POVM file or build the minimal CQ POVM")
    m.add_argument("sub", choices=["analyze", "build-cq"])
    m.add_argument("file", nargs="?")
    m.add_argument("--dim", type=int)
    m.add_argument("--epsilon", type=float, default=0.1)
    m.add_argument("--out")
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_povm)

    r = sub.add_parser("report", help="randomized reproduction of the verification-cost table")
    r.add_argument("--dim", type=int, default=2)
    r.add_argument("--trials", type=int, default=100)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "povm" and args.sub == "analyze" and not args.file:
        print("povm analyze needs a file", file=sys.stderr)
        return EXIT_IO
    try:
        return args.func(args)
    except (FileFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
