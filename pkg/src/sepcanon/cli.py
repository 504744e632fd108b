"""Command-line interface: ``sepcanon {check,decompose,verify,gen,entropy}``.

Exit codes: 0 success / separable, 1 invalid density matrix, 2 parse or
numerical failure, 3 inseparable (``check`` only), 4 verification failed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import decomp, formats, geometry, qstate, septest
from .errors import InvalidDensity, InvalidInput, SepCanonError
from .matcore import PSD_TOL

EXIT_OK = 0
EXIT_INVALID_STATE = 1
EXIT_FAILURE = 2
EXIT_INSEPARABLE = 3
EXIT_VERIFY_FAILED = 4


class CliError(Exception):
    def __init__(self, code: int, message: str, diagnostics=None):
        super().__init__(message)
        self.code = code
        self.diagnostics = diagnostics or {}


def _tolerances(args) -> qstate.ToleranceConfig:
    tol = qstate.DEFAULT_TOL
    if args.tol is not None:
        tol = tol.scaled(args.tol / PSD_TOL)
    return qstate.ToleranceConfig(
        args.psd_tol if args.psd_tol is not None else tol.psd_tol,
        args.rank_tol if args.rank_tol is not None else tol.rank_tol,
        args.recon_tol if args.recon_tol is not None else tol.recon_tol,
    )


def _load_state(path, tol) -> qstate.DensityMatrix:
    try:
        m, dims = formats.state_from_dict(formats.read_json(path))
    except (OSError, ValueError) as exc:
        if isinstance(exc, InvalidDensity):
            raise
        raise CliError(EXIT_FAILURE, f"cannot read state file {path}: {exc}") from exc
    try:
        return qstate.validate_density(m, dims, tol)
    except InvalidDensity as exc:
        raise CliError(EXIT_INVALID_STATE, str(exc), {"violations": [[k, v] for k, v in exc.violations]}) from exc
    except SepCanonError as exc:
        raise CliError(EXIT_FAILURE, str(exc)) from exc


def _emit(text: str, out) -> None:
    if out:
        formats.write_text(out, text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    tol = _tolerances(args)
    rho = _load_state(args.input, tol)
    v = septest.ppt_check(rho, tol)
    print(f"dims: {rho.dim_a}x{rho.dim_b}")
    print("pt_spectrum: " + " ".join(repr(float(x)) for x in v.pt_spectrum))
    print(f"min_pt_eigenvalue: {float(v.min_pt_eigenvalue)!r}")
    print(f"negative_count: {v.negative_count}")
    print(f"verdict: {v.verdict.value}" + (" (boundary)" if v.boundary else ""))
    return EXIT_OK if v.ppt_holds else EXIT_INSEPARABLE


def cmd_decompose(args) -> int:
    tol = _tolerances(args)
    rho = _load_state(args.input, tol)
    report = decomp.decompose(rho, tol)
    meta = formats.report_metadata(report, args.seed)
    _emit(formats.dumps(formats.decomposition_to_dict(report.decomposition, meta)), args.out)
    if args.out:
        print(
            f"wrote {report.n_terms} terms ({report.decomposition.n_negative} negative), "
            f"reconstruction error {report.reconstruction_error:.3e}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = _tolerances(args)
    rho = _load_state(args.state, tol)
    try:
        d, _ = formats.decomposition_from_dict(formats.read_json(args.decomposition))
    except (OSError, ValueError) as exc:
        raise CliError(EXIT_FAILURE, f"cannot read decomposition file: {exc}") from exc
    rep = decomp.verify_decomposition(d, rho, tol)
    print(f"terms: {rep.n_terms}")
    print(f"negative_weights: {rep.n_negative}")
    print(f"weight_sum: {rep.weight_sum!r}")
    print(f"max_abs_error: {rep.max_error!r}")
    print(f"product_terms_valid: {all(rep.product_valid)}")
    print("result: " + ("pass" if rep.passed else "FAIL"))
    return EXIT_OK if rep.passed else EXIT_VERIFY_FAILED


def _need_seed(args):
    if args.seed is None:
        raise CliError(EXIT_FAILURE, f"gen {args.kind} requires --seed")
    return args.seed


def cmd_gen(args) -> int:
    kind = args.kind
    try:
        if kind == "werner":
            if args.x is None:
                raise CliError(EXIT_FAILURE, "gen werner requires --x")
            rho = qstate.make_werner(args.x)
            text = formats.dumps(formats.state_to_dict(rho.matrix))
        elif kind == "werner-reference":
            if args.x is None:
                raise CliError(EXIT_FAILURE, "gen werner-reference requires --x")
            d = decomp.werner_reference_decomposition(args.x)
            meta = {"source": "werner-closed-form", "x": args.x, "statistical": bool(np.all(d.weights >= 0))}
            text = formats.dumps(formats.decomposition_to_dict(d, meta))
        elif kind == "bell":
            psi = qstate.make_bell(args.bell_kind)
            if args.projector:
                text = formats.dumps(formats.state_to_dict(np.outer(psi, psi.conj())))
            else:
                text = formats.dumps(formats.vector_to_dict(psi))
        elif kind == "random-separable":
            rho = qstate.random_separable(_need_seed(args), args.k, (2, args.dim_b))
            text = formats.dumps(formats.state_to_dict(rho.matrix, rho.dims))
        elif kind == "random":
            rho = qstate.random_density(_need_seed(args), args.rank, (2, args.dim_b))
            text = formats.dumps(formats.state_to_dict(rho.matrix, rho.dims))
        elif kind == "plane-case":
            angles = list(args.angles) + [0.0] * (4 - len(args.angles))
            v1, v2 = geometry.gen_plane_case(args.type, *angles, seed=args.seed)
            text = formats.dumps(formats.plane_to_dict(args.type.upper(), v1, v2))
        else:
            raise CliError(EXIT_FAILURE, f"unknown generator {kind!r}")
    except (InvalidInput, SepCanonError) as exc:
        raise CliError(EXIT_FAILURE, str(exc)) from exc
    _emit(text, args.out)
    return EXIT_OK


def cmd_entropy(args) -> int:
    tol = _tolerances(args)
    rho = _load_state(args.input, tol)
    ic = qstate.index_of_correlation(rho)
    if abs(ic) < 5e-13:
        ic = 0.0
    print(f"{ic:.12f}")
    return EXIT_OK


def _add_tol_flags(p):
    p.add_argument("--tol", type=float, help="psd tolerance; rank and reconstruction tolerances scale with it")
    p.add_argument("--psd-tol", type=float)
    p.add_argument("--rank-tol", type=float)
    p.add_argument("--recon-tol", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sepcanon", description=__doc__.splitlines()[0])
    parser.add_argument("--json-errors", action="store_true", help="print failures as JSON on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="PPT separability verdict")
    p.add_argument("input")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="canonical product decomposition of a 2x2 state")
    p.add_argument("input")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, help="recorded in the output; the algorithm is deterministic")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="check a decomposition file against a state file")
    p.add_argument("state")
    p.add_argument("decomposition")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate states, vectors and reference decompositions")
    p.add_argument(
        "kind", choices=["werner", "werner-reference", "bell", "random-separable", "random", "plane-case"]
    )
    p.add_argument("--x", type=float)
    p.add_argument("--kind", dest="bell_kind", default="psi-minus")
    p.add_argument("--projector", action="store_true", help="bell: write the density matrix instead of the ket")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--rank", type=int, default=4)
    p.add_argument("--dim-b", type=int, default=2, choices=[2, 3])
    p.add_argument("--type", default="P3", choices=["P1", "P2", "P3", "p1", "p2", "p3"])
    p.add_argument("--angles", type=float, nargs="+", default=[math.pi / 4])
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("entropy", help="index of correlation")
    p.add_argument("input")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_entropy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        code, msg, diag = exc.code, str(exc), exc.diagnostics
    except InvalidDensity as exc:
        code, msg, diag = EXIT_INVALID_STATE, str(exc), {}
    except (SepCanonError, ValueError) as exc:
        code, msg = EXIT_FAILURE, f"{type(exc).__name__}: {exc}"
        diag = getattr(exc, "diagnostics", {}) or {}
    if args.json_errors:
        payload = {"exit_code": code, "error": msg, "diagnostics": diag}
        print(json.dumps(payload, default=str), file=sys.stderr)
    else:
        print(f"error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
