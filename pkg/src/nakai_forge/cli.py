"""Command-line front end.

Subcommands: check, witness, verify, identity, symmetrize, member,
milnor, examples.  Exit codes: 0 success / witness found, 1 input
rejected, 2 parse or usage error, 3 resource limit exceeded, 4 internal
inconsistency (a theorem-violation signal or a certificate that fails
replay).  Set NAKAI_FORGE_LOG=DEBUG|INFO|WARNING for diagnostics.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from .derivations import build_candidate_tuple, symmetrize
from .exprio import (
    CertificateError,
    ParseError,
    format_poly,
    parse_poly,
    read_certificate,
    write_certificate,
)
from .groebner import (
    Ideal,
    InternalInconsistencyError,
    MonomialOrder,
    ResourceLimitExceeded,
    buchberger,
    jacobian_ideal,
)
from .minors import verify_cofactor_identity
from .pipeline import (
    INPUT_REJECTED,
    RESOURCE_EXHAUSTED,
    WITNESS_FOUND,
    PipelineConfig,
    WitnessCertificate,
    build_witness,
    certificate_failures,
)
from .poly import Polynomial

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_RESOURCES = 3
EXIT_INCONSISTENT = 4

# name, expression, variables, expected verdict.  The Brieskorn entries are
# not homogeneous, so the homogeneous-only construction rejects them; the
# table reports that outcome rather than hiding them.
BUILTIN_CORPUS = [
    ("cyclic-cubic", "x^2*y + y^2*z + z^2*x", ["x", "y", "z"], WITNESS_FOUND),
    ("fermat-cubic", "x^3 + y^3 + z^3", ["x", "y", "z"], WITNESS_FOUND),
    ("fermat-quartic", "x^4 + y^4 + z^4", ["x", "y", "z"], WITNESS_FOUND),
    ("fermat-cubic-4", "x^3 + y^3 + z^3 + w^3", ["x", "y", "z", "w"], WITNESS_FOUND),
    ("brieskorn-2-3-4", "x^2 + y^3 + z^4", ["x", "y", "z"], INPUT_REJECTED),
    ("brieskorn-3-3-4", "x^3 + y^3 + z^4", ["x", "y", "z"], INPUT_REJECTED),
]


def _configure_logging():
    level_name = os.environ.get("NAKAI_FORGE_LOG", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _read_input(args) -> tuple[Polynomial, list[str]]:
    """An inline expression with --vars, or a file with a 'vars:' header line."""
    source = args.input
    path = Path(source)
    try:
        is_file = path.is_file()
    except OSError:
        is_file = False  # expressions can exceed the filesystem name limit
    if is_file:
        lines = path.read_text(encoding="utf-8").splitlines()
        if lines and lines[0].strip().lower().startswith("vars:"):
            variables = [v.strip() for v in lines[0].split(":", 1)[1].split(",") if v.strip()]
            text = " ".join(lines[1:])
        elif args.vars:
            variables = _split_vars(args.vars)
            text = " ".join(lines)
        else:
            raise ParseError("input file needs a 'vars: x,y,z' header line or --vars", 0)
    else:
        if not args.vars:
            raise ParseError("inline expressions require --vars", 0)
        variables = _split_vars(args.vars)
        text = source
    return parse_poly(text, variables), variables


def _split_vars(spec: str) -> list[str]:
    return [v.strip() for v in spec.split(",") if v.strip()]


def _order(args) -> MonomialOrder:
    return MonomialOrder(getattr(args, "order", "grevlex"))


def _config(args) -> PipelineConfig:
    return PipelineConfig(
        bound=args.bound,
        max_retries=args.retries,
        seed=args.seed,
        order=_order(args),
        max_pairs=args.max_pairs,
        modular_prefilter=getattr(args, "prefilter", False),
    )


def _emit(text: str):
    sys.stdout.write(text + "\n")
    sys.stdout.flush()


def cmd_check(args) -> int:
    f, variables = _read_input(args)
    order = _order(args)
    if f.is_zero():
        _emit("rejected: the zero polynomial does not define a hypersurface")
        return EXIT_REJECTED
    degree = f.homogeneous_degree()
    gb = buchberger(jacobian_ideal(f), order, max_pairs=args.max_pairs)
    zero_dim = gb.is_zero_dimensional()
    milnor = gb.quotient_dimension() if zero_dim else None
    isolated = degree is not None and degree >= 2 and zero_dim
    if args.json:
        _emit(json.dumps({
            "polynomial": format_poly(f, variables, order),
            "homogeneous": degree is not None,
            "degree": degree,
            "jacobian_zero_dimensional": zero_dim,
            "isolated_homogeneous_singularity": isolated,
            "milnor_number": milnor,
        }, indent=2, sort_keys=True))
    else:
        _emit(f"polynomial:            {format_poly(f, variables, order)}")
        _emit(f"homogeneous:           {'yes, degree ' + str(degree) if degree is not None else 'no'}")
        _emit(f"jacobian 0-dimensional: {'yes' if zero_dim else 'no'}")
        _emit(f"milnor number:         {milnor if milnor is not None else 'infinite (not isolated)'}")
    return EXIT_OK


def cmd_witness(args) -> int:
    f, variables = _read_input(args)
    cert = build_witness(f, variables, _config(args))
    payload = write_certificate(cert.document)
    if args.out:
        Path(args.out).write_bytes(payload)
    if args.json:
        sys.stdout.write(payload.decode("utf-8"))
        sys.stdout.flush()
    else:
        _emit(f"verdict: {cert.verdict}")
        if cert.verdict == WITNESS_FOUND:
            change = cert.document["change_of_coordinates"]
            _emit(f"slice:   y1 = {_slice_text(change, variables)} (attempt {change['attempts']})")
            witness = next(
                t for t in cert.document["membership_tests"]["tests"]
                if t["name"] == "witness_diagonal_vs_modified_jacobian"
            )
            _emit(f"witness: d1(y1) = {witness['polynomial']}")
            _emit(f"normal form mod (y1^2, g_2, ..., g_n): {witness['normal_form']}")
        elif cert.verdict == INPUT_REJECTED:
            rejection = cert.document["input"].get("rejection", {})
            _emit(f"reason:  {rejection.get('reason')}: {rejection.get('message')}")
        if args.out:
            _emit(f"certificate written to {args.out}")
    if cert.verdict == WITNESS_FOUND:
        return EXIT_OK
    if cert.verdict == RESOURCE_EXHAUSTED:
        return EXIT_RESOURCES
    return EXIT_REJECTED


def _slice_text(change: dict, variables) -> str:
    parts = []
    for coeff, name in zip(change["slice_coefficients"], variables):
        if coeff == "0":
            continue
        parts.append(name if coeff == "1" else f"{coeff}*{name}")
    return " + ".join(parts) if parts else "0"


def cmd_verify(args) -> int:
    data = Path(args.certificate).read_bytes()
    document = read_certificate(data)
    failures = certificate_failures(WitnessCertificate(document))
    if args.json:
        _emit(json.dumps({"valid": not failures, "failures": failures}, indent=2))
    elif failures:
        for failure in failures:
            _emit(f"FAIL: {failure}")
        _emit("certificate INVALID")
    else:
        _emit(f"certificate VALID (verdict {document['verdict']})")
    return EXIT_OK if not failures else EXIT_INCONSISTENT


def cmd_identity(args) -> int:
    f, variables = _read_input(args)
    holds, residual = verify_cofactor_identity(f, args.i, args.j, args.k)
    if args.json:
        _emit(json.dumps({
            "i": args.i, "j": args.j, "k": args.k,
            "holds": holds,
            "residual": format_poly(residual, variables),
        }, indent=2))
    else:
        _emit(f"identity ({args.i},{args.j},{args.k}): {'holds, residual 0' if holds else 'VIOLATED'}")
        if not holds:
            _emit(f"residual: {format_poly(residual, variables)}")
    return EXIT_OK if holds else EXIT_INCONSISTENT


def cmd_symmetrize(args) -> int:
    f, variables = _read_input(args)
    order = _order(args)
    try:
        candidate = build_candidate_tuple(f)
    except ValueError as exc:
        _emit(f"rejected: {exc}")
        return EXIT_REJECTED
    gb = buchberger(jacobian_ideal(f), order, max_pairs=args.max_pairs)
    symmetric, ledger = symmetrize(candidate, gb)
    result = {
        "candidate": [[format_poly(p, variables, order) for p in d.images] for d in candidate.ders],
        "adjustments": [
            {"target": m.target, "hamiltonian": [m.k, m.l],
             "coefficient": format_poly(m.coeff, variables, order)}
            for m in ledger
        ],
        "symmetric": [[format_poly(p, variables, order) for p in d.images] for d in symmetric.ders],
    }
    if args.json:
        _emit(json.dumps(result, indent=2))
    else:
        _emit("candidate tuple images:")
        for i, row in enumerate(result["candidate"], 1):
            _emit(f"  d{i}: ({', '.join(row)})")
        _emit(f"adjustments ({len(ledger)}):")
        for m in result["adjustments"]:
            _emit(f"  d{m['target']} += ({m['coefficient']}) * D[{m['hamiltonian'][0]},{m['hamiltonian'][1]}]")
        _emit("symmetric tuple images:")
        for i, row in enumerate(result["symmetric"], 1):
            _emit(f"  d{i}: ({', '.join(row)})")
    return EXIT_OK


def cmd_member(args) -> int:
    if not args.vars:
        raise ParseError("member requires --vars", 0)
    variables = _split_vars(args.vars)
    p = parse_poly(args.polynomial, variables)
    gens = [parse_poly(text, variables) for text in args.ideal.split(",")]
    order = _order(args)
    gb = buchberger(Ideal(tuple(gens)), order, max_pairs=args.max_pairs)
    cofactors = gb.lift(p)
    nf = gb.normal_form(p)
    if args.json:
        _emit(json.dumps({
            "member": cofactors is not None,
            "normal_form": format_poly(nf, variables, order),
            "cofactors": None if cofactors is None else [format_poly(c, variables, order) for c in cofactors],
        }, indent=2))
    elif cofactors is not None:
        _emit("MEMBER")
        for c, g in zip(cofactors, gens):
            _emit(f"  ({format_poly(c, variables, order)}) * ({format_poly(g, variables, order)})")
    else:
        _emit("NOT MEMBER")
        _emit(f"  normal form: {format_poly(nf, variables, order)}")
    return EXIT_OK


def cmd_milnor(args) -> int:
    f, variables = _read_input(args)
    if f.is_zero():
        _emit("rejected: the zero polynomial")
        return EXIT_REJECTED
    gb = buchberger(jacobian_ideal(f), _order(args), max_pairs=args.max_pairs)
    if not gb.is_zero_dimensional():
        _emit("rejected: Jacobian ideal is not zero-dimensional (Milnor number is infinite)")
        return EXIT_REJECTED
    _emit(str(gb.quotient_dimension()))
    return EXIT_OK


def cmd_examples(args) -> int:
    rows = []
    records = []
    all_expected = True
    for name, text, variables, expected in BUILTIN_CORPUS:
        f = parse_poly(text, variables)
        start = time.time()
        cert = build_witness(f, variables, _config(args))
        elapsed = time.time() - start
        failures = certificate_failures(cert)
        as_expected = cert.verdict == expected and not failures
        all_expected = all_expected and as_expected
        info = cert.document["input"]
        milnor = info.get("milnor_number")
        if milnor is None and info.get("isolated") is None and not f.is_zero():
            gb = buchberger(jacobian_ideal(f), _order(args), max_pairs=args.max_pairs)
            milnor = gb.quotient_dimension() if gb.is_zero_dimensional() else None
        rows.append((
            name, text, str(info.get("degree", "-")), str(milnor if milnor is not None else "-"),
            cert.verdict, "ok" if as_expected else "UNEXPECTED", f"{elapsed:.2f}s",
        ))
        records.append({
            "name": name, "polynomial": text, "verdict": cert.verdict,
            "expected": expected, "certificate_valid": not failures,
            "milnor_number": milnor, "seconds": round(elapsed, 3),
        })
    if args.json:
        _emit(json.dumps(records, indent=2))
    else:
        header = ("name", "polynomial", "deg", "milnor", "verdict", "status", "time")
        widths = [max(len(r[i]) for r in rows + [header]) for i in range(len(header))]
        for row in [header] + rows:
            _emit("  ".join(field.ljust(w) for field, w in zip(row, widths)))
    return EXIT_OK if all_expected else EXIT_INCONSISTENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nakai-forge",
        description="Exact second-order derivation witnesses for homogeneous isolated hypersurface singularities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("input", help="polynomial expression or path to a file with a 'vars:' header")
        p.add_argument("--vars", help="comma-separated variable names for inline expressions")
        p.add_argument("--order", choices=["grevlex", "lex"], default="grevlex")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--bound", type=int, default=3, help="slice coefficient search bound")
        p.add_argument("--retries", type=int, default=200, help="maximum slice attempts")
        p.add_argument("--max-pairs", type=int, default=100_000, dest="max_pairs")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--out", help="write the certificate to this path")

    common(sub.add_parser("check", help="homogeneity, isolatedness, Milnor number"))
    witness = sub.add_parser("witness", help="run the full pipeline and emit a certificate")
    common(witness)
    witness.add_argument("--prefilter", action="store_true",
                         help="screen slice candidates modulo a prime before the exact check")
    verify = sub.add_parser("verify", help="replay a certificate without searching")
    verify.add_argument("certificate", help="path to a certificate file")
    verify.add_argument("--json", action="store_true")
    identity = sub.add_parser("identity", help="cofactor identity residual report")
    common(identity)
    identity.add_argument("-i", type=int, required=True)
    identity.add_argument("-j", type=int, required=True)
    identity.add_argument("-k", type=int, required=True)
    common(sub.add_parser("symmetrize", help="candidate tuple, ledger, symmetric tuple"))
    member = sub.add_parser("member", help="ideal membership with cofactors")
    member.add_argument("polynomial")
    member.add_argument("--ideal", required=True, help="comma-separated generators")
    member.add_argument("--vars", required=True)
    member.add_argument("--order", choices=["grevlex", "lex"], default="grevlex")
    member.add_argument("--max-pairs", type=int, default=100_000, dest="max_pairs")
    member.add_argument("--json", action="store_true")
    common(sub.add_parser("milnor", help="quotient dimension of the Jacobian ideal"))
    examples = sub.add_parser("examples", help="run the built-in corpus and print a summary")
    for flag, kwargs in [
        ("--seed", {"type": int, "default": 0}),
        ("--bound", {"type": int, "default": 3}),
        ("--retries", {"type": int, "default": 200}),
        ("--max-pairs", {"type": int, "default": 100_000, "dest": "max_pairs"}),
        ("--order", {"choices": ["grevlex", "lex"], "default": "grevlex"}),
        ("--json", {"action": "store_true"}),
    ]:
        examples.add_argument(flag, **kwargs)
    return parser


HANDLERS = {
    "check": cmd_check,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "identity": cmd_identity,
    "symmetrize": cmd_symmetrize,
    "member": cmd_member,
    "milnor": cmd_milnor,
    "examples": cmd_examples,
}


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return HANDLERS[args.command](args)
    except (ParseError, CertificateError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ResourceLimitExceeded as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCES
    except InternalInconsistencyError as exc:
        sys.stderr.write(f"internal inconsistency: {exc}\n")
        return EXIT_INCONSISTENT
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
