"""Command line interface.

Exit discipline: 0 when the requested property holds / the object was built,
1 when a decision procedure answers "no" (property fails, nothing found,
wrong retrieval), 2 on usage, format, size-guard or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .codes import (
    PirCode,
    SearchGuardError,
    check_certificate,
    construct_pir2,
    construct_pir3,
    construct_pir4,
    format_certificate,
    format_code,
    lower_bound_ok,
    min_redundancy_code,
    parse_certificate,
    parse_code,
    parse_generator_text,
    rho,
    verify_pk,
)
from .emulator import Database, encode_database, overhead_report, run_session
from .gf2 import FormatError, RankDeficientError
from .witness import ProofReplayError, build_proof_witness

_BUILDERS = {2: construct_pir2, 3: construct_pir3, 4: construct_pir4}


def _err(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def cmd_construct(args: argparse.Namespace) -> int:
    builder = _BUILDERS.get(args.k)
    if builder is None:
        return _err(f"no construction for k={args.k}; supported k: 2, 3, 4")
    code = builder(args.s)
    out = Path(args.out)
    cert_path = Path(args.cert) if args.cert else out.with_name(out.name + ".cert")
    out.write_text(format_code(code))
    assert code.certificate is not None
    cert_path.write_text(format_certificate(code.certificate))
    print(
        f"s={code.s} k={code.k} n={code.n} redundancy={code.redundancy} "
        f"overhead={code.n}/{code.s}"
    )
    print(f"wrote code to {out}")
    print(f"wrote certificate to {cert_path}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    g, _ = parse_generator_text(Path(args.infile).read_text())
    if args.cert:
        cert = parse_certificate(Path(args.cert).read_text())
        if check_certificate(g, cert, args.k):
            print(f"certificate verifies: {cert.k} disjoint recovery sets per coordinate")
            return 0
        print("certificate rejected")
        return 1
    cert = verify_pk(g, args.k)
    if cert is None:
        print(f"no {args.k} pairwise-disjoint recovery sets for some coordinate")
        return 1
    sys.stdout.write(format_certificate(cert))
    return 0


def cmd_rho(args: argparse.Namespace) -> int:
    print(rho(args.s, args.k))
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    holds = lower_bound_ok(args.s, args.r)
    verdict = "holds" if holds else "fails"
    print(f"r(r-1) = {args.r * (args.r - 1)} vs 2s = {2 * args.s}: bound {verdict}")
    return 0 if holds else 1


def cmd_search(args: argparse.Namespace) -> int:
    kwargs = {}
    if args.guard is not None:
        kwargs["cells_guard"] = args.guard
    code = min_redundancy_code(args.s, args.k, args.rmax, **kwargs)
    if code is None:
        print(f"no {args.k}-recovery code with s={args.s} within redundancy {args.rmax}")
        return 1
    print(f"minimum redundancy: {code.redundancy}")
    sys.stdout.write(format_code(code))
    return 0


def cmd_witness(args: argparse.Namespace) -> int:
    g, _ = parse_generator_text(Path(args.infile).read_text())
    cert = verify_pk(g, 3)
    if cert is None:
        print("matrix lacks 3 pairwise-disjoint recovery sets for some coordinate")
        return 1
    witness = build_proof_witness(PirCode(g, 3, cert))
    sys.stdout.write(witness.summary())
    return 0


def cmd_emulate(args: argparse.Namespace) -> int:
    code = parse_code(Path(args.infile).read_text())
    cert_path = Path(args.cert) if args.cert else Path(args.infile + ".cert")
    if cert_path.exists():
        cert = parse_certificate(cert_path.read_text())
        if not check_certificate(code.generator, cert, code.k):
            return _err(f"certificate {cert_path} does not verify against the code")
    else:
        cert = verify_pk(code.generator, code.k)
        if cert is None:
            return _err("code does not have its claimed recovery property")
    code = PirCode(code.generator, code.k, cert)
    if args.partlen < 1:
        return _err(f"part length must be at least 1, got {args.partlen}")
    expected_len = code.s * args.partlen
    if len(args.db) != expected_len or args.db.strip("01"):
        return _err(f"--db must be {expected_len} chars of 0/1")
    value = sum(1 << i for i, ch in enumerate(args.db) if ch == "1")
    db = Database.from_int(code.s, args.partlen, value)
    if args.seed < 0:
        return _err(f"seed must be nonnegative, got {args.seed}")
    storage = encode_database(db, code)
    transcript = run_session(db, storage, code, args.index, args.seed)
    sys.stdout.write(transcript.dump())
    sys.stdout.write(overhead_report(code, args.partlen).summary())
    return 0 if transcript.ok() else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pirkit",
        description="k-server recovery codes: construct, verify, search, emulate",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a redundancy-optimal code (k in 2..4)")
    p.add_argument("--k", type=int, required=True, help="number of disjoint recovery sets")
    p.add_argument("--s", type=int, required=True, help="number of database parts")
    p.add_argument("--out", required=True, help="output path for the code file")
    p.add_argument("--cert", help="output path for the certificate (default: <out>.cert)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="decide the k-recovery property of a matrix")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--in", dest="infile", required=True, help="matrix or code file")
    p.add_argument("--cert", help="check this certificate instead of searching")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rho", help="closed-form minimum redundancy (k in 2..4)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("bound", help="check the 3-server counting bound r(r-1) >= 2s")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("search", help="brute-force the exact minimum redundancy")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--rmax", type=int, required=True, help="largest redundancy to try")
    p.add_argument("--guard", type=int, help="raise the 2^(s*r) level guard (default 24)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("witness", help="replay the redundancy bound argument on a matrix")
    p.add_argument("--in", dest="infile", required=True, help="matrix or code file")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("emulate", help="run one private-retrieval session")
    p.add_argument("--in", dest="infile", required=True, help="code file with k header")
    p.add_argument("--cert", help="certificate file (default: <in>.cert when present)")
    p.add_argument("--partlen", type=int, required=True, help="bits per database part")
    p.add_argument("--db", required=True, help="database as s*partlen chars of 0/1")
    p.add_argument("--index", type=int, required=True, help="global bit index to retrieve")
    p.add_argument("--seed", type=int, required=True, help="randomness pool (nonnegative int)")
    p.set_defaults(func=cmd_emulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, RankDeficientError, SearchGuardError, ProofReplayError) as exc:
        return _err(str(exc))
    except (ValueError, OSError) as exc:
        return _err(str(exc))


if __name__ == "__main__":
    sys.exit(main())
