"""Command line front end.

Exit status: 0 success, 1 negative mathematical result (not majorized,
verification or simulation failed), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .birkhoff import birkhoff_decompose, validate_decomposition
from .core import BistochasticMatrix, LoccError, ParseError, WeightVector, parse_rational
from .instances import random_instance
from .majorization import NotMajorized, majorization_certificate
from .povm import post_measurement_weights
from .protocol import deserialize, gamma_from_povm, plan, serialize, verify_converse, verify_protocol
from .sim import DEFAULT_MAX_N, run_protocol_simulation

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _read_json(path: str):
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _read_raw_vector(path: str) -> list[Fraction]:
    data = _read_json(path)
    if not isinstance(data, list) or not data:
        raise InputError(f"{path}: expected a non-empty JSON array of rationals")
    try:
        return [parse_rational(x, f"{path}[{k}]") for k, x in enumerate(data)]
    except ParseError as exc:
        raise InputError(str(exc)) from None


def _read_pair(args) -> tuple[WeightVector, WeightVector]:
    alpha = _read_raw_vector(args.alpha)
    beta = _read_raw_vector(args.beta)
    if len(alpha) != len(beta):
        if not args.pad:
            raise InputError(
                f"vectors have lengths {len(alpha)} and {len(beta)}; pass --pad to "
                "append zero weights to the shorter one"
            )
        n = max(len(alpha), len(beta))
        alpha += [Fraction(0)] * (n - len(alpha))
        beta += [Fraction(0)] * (n - len(beta))
    try:
        return WeightVector(tuple(alpha)), WeightVector(tuple(beta))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit_json(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _fmt_matrix(rows) -> str:
    return "\n".join("  [" + ", ".join(f"{str(Fraction(x)):>6}" for x in r) + "]" for r in rows)


def cmd_check(args) -> int:
    alpha, beta = _read_pair(args)
    cert = majorization_certificate(beta, alpha)
    if args.json:
        _emit_json({
            "majorizes": cert.holds,
            "violation": cert.violation,
            "prefixes": [{"k": k, "beta": str(b), "alpha": str(a)} for k, b, a in cert.prefixes],
        })
    else:
        print("MAJORIZES" if cert.holds else f"NOT MAJORIZED: first violation at k={cert.violation}")
        for k, b, a in cert.prefixes:
            mark = ">=" if b >= a else "< "
            print(f"  k={k}: {b} {mark} {a}")
    return EXIT_OK if cert.holds else EXIT_NEGATIVE


def cmd_plan(args) -> int:
    alpha, beta = _read_pair(args)
    try:
        protocol, trace = plan(alpha, beta, return_trace=True)
    except NotMajorized as exc:
        print(f"NOT MAJORIZED: {exc}", file=sys.stderr if args.json else sys.stdout)
        return EXIT_NEGATIVE
    text = serialize(protocol)
    if args.out:
        Path(args.out).write_text(text)
    if args.json:
        sys.stdout.write(text)
        return EXIT_OK
    print(f"protocol with {len(protocol.elements)} outcomes, N={protocol.n}")
    if args.explain:
        print("T-transforms (sorted coordinates):")
        for step in trace.chain:
            print(f"  j={step.j} k={step.k} t={step.t}")
        print("transfer matrix D:")
        print(_fmt_matrix(protocol.transfer))
        print("Birkhoff peeling:")
        for step in trace.peels:
            print(f"  subtract {step.p} x P{step.sigma}")
    for e in protocol.elements:
        post = post_measurement_weights(e, alpha)
        print(f"  outcome {e.sigma}: p={e.p} diag=({', '.join(map(str, e.diag))}) "
              f"post={post}")
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    try:
        d = BistochasticMatrix.parse(_read_json(args.matrix), args.matrix)
    except ParseError as exc:
        raise InputError(str(exc)) from None
    dec = birkhoff_decompose(d)
    assert validate_decomposition(d, dec)
    if args.json:
        _emit_json(dec.to_json())
    else:
        print(f"{len(dec)} terms")
        for p, sigma in dec:
            print(f"  {p} x P{sigma}  sigma={list(sigma.images)}")
    return EXIT_OK


def _load_protocol(path: str):
    try:
        return deserialize(_read_text(path))
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_verify(args) -> int:
    protocol = _load_protocol(args.protocol)
    report = verify_protocol(protocol)
    ok = report.ok
    converse = None
    gamma = None
    if args.converse:
        converse = verify_converse(protocol.alpha, protocol.beta, protocol.elements)
        ok = ok and converse
        try:
            gamma = gamma_from_povm(protocol.elements).rows
        except ValueError:
            gamma = None
    if args.json:
        out = {"ok": ok, "checks": report.checks, "messages": report.messages}
        if args.converse:
            out["converse"] = converse
            out["gamma"] = [[str(x) for x in r] for r in gamma] if gamma else None
        _emit_json(out)
    else:
        for name, passed in report.checks.items():
            extra = f" ({report.messages[name]})" if name in report.messages else ""
            print(f"{'PASS' if passed else 'FAIL'} {name}{extra}")
        if args.converse:
            print(f"{'PASS' if converse else 'FAIL'} converse")
            if gamma:
                print("Gamma:")
                print(_fmt_matrix(gamma))
        print("VERIFIED" if ok else "VERIFICATION FAILED")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_simulate(args) -> int:
    protocol = _load_protocol(args.protocol)
    report = run_protocol_simulation(protocol, max_n=args.max_n)
    if args.json:
        _emit_json(report.to_json())
    else:
        for o in report.outcomes:
            print(f"  outcome {o.sigma}: p_exact={o.p_exact} p_sim={o.p_simulated:.15f} "
                  f"fidelity={o.fidelity:.15f}")
        print(f"total probability {report.total_probability:.15f}")
        print("SIMULATION OK" if report.ok else "SIMULATION FAILED")
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_random_instance(args) -> int:
    if args.n < 1:
        raise InputError("N must be at least 1")
    alpha, beta = random_instance(args.n, args.seed)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "alpha.json").write_text(json.dumps(alpha.to_json()) + "\n")
        (out / "beta.json").write_text(json.dumps(beta.to_json()) + "\n")
    if args.json or not args.out:
        _emit_json({"alpha": alpha.to_json(), "beta": beta.to_json()})
    else:
        print(f"wrote {out / 'alpha.json'} and {out / 'beta.json'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="locc-convert",
        description="Plan and check single-measurement LOCC conversions of bipartite pure states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def pair(p):
        p.add_argument("alpha", help="JSON array with the source Schmidt weights")
        p.add_argument("beta", help="JSON array with the target Schmidt weights")
        p.add_argument("--pad", action="store_true",
                       help="append zero weights to the shorter vector")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("check", help="test whether beta majorizes alpha")
    pair(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("plan", help="build a conversion protocol")
    pair(p)
    p.add_argument("--out", help="write the protocol JSON here")
    p.add_argument("--explain", action="store_true",
                   help="show the T-transform chain and the Birkhoff peeling")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("decompose", help="Birkhoff decomposition of a doubly stochastic matrix")
    p.add_argument("matrix", help="JSON array of rows")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="exactly re-check a protocol file")
    p.add_argument("protocol", help="protocol JSON file, or - for stdin")
    p.add_argument("--converse", action="store_true",
                   help="also certify majorization from the POVM alone")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="run a protocol on explicit state vectors")
    p.add_argument("protocol", help="protocol JSON file, or - for stdin")
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("random-instance", help="generate a random majorizing pair")
    p.add_argument("n", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory to receive alpha.json and beta.json")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_random_instance)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, LoccError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
