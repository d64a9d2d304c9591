"""Command-line front end.

Exit codes: 0 success, 1 identity violated, 2 bad parameters, 3 internal
invariant failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import platform
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__, identities, storage
from .errors import InvariantError, ParameterError
from .quatalg import is_definite
from .storage import dumps, fraction_to_str
from .ternary.genus import genus_theta_coeffs

EXIT_OK, EXIT_VIOLATED, EXIT_PARAM, EXIT_INTERNAL = 0, 1, 2, 3

DEFAULTS = {"m_max": 30, "M": 10}


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(",", " ").split())


def _load_config(path: Optional[str]) -> dict:
    out = dict(DEFAULTS)
    if not path:
        return out
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise ParameterError(f"cannot read config file {path}")
    sec = cp["quatlat"] if cp.has_section("quatlat") else cp[cp.default_section]
    if "neighbor_primes" in sec:
        out["neighbor_primes"] = _int_list(sec["neighbor_primes"])
    for key in ("m_max", "M"):
        if key in sec:
            out[key] = int(sec[key])
    return out


def _setting(args, config: dict, name: str):
    v = getattr(args, name, None)
    return config.get(name) if v is None else v


def _cache(args, config) -> identities.GenusCache:
    primes = args.neighbor_primes if args.neighbor_primes else config.get("neighbor_primes")
    return identities.GenusCache(storage.resolve_cache_dir(args.cache_dir), primes)


def _emit_table(args, header: list[str], rows: list[list], out) -> None:
    if args.json:
        out.write(dumps({"columns": header, "rows": [dict(zip(header, r)) for r in rows]}))
    elif args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
        for r in [header] + rows:
            out.write("  ".join(str(x).rjust(w) for x, w in zip(r, widths)) + "\n")


def _rat(x: Fraction, args) -> str:
    return fraction_to_str(x) if (args.json or args.csv) else str(x)


def cmd_lattice(args, config, out) -> int:
    identities.check_space(args.D, args.N)
    L = identities.lattice(args.D, args.N)
    parity = "definite" if is_definite(args.D) else "indefinite"
    if args.json:
        out.write(dumps({"D": args.D, "N": args.N, "gram": [list(r) for r in L.gram], "det": L.det, "parity": parity}))
    else:
        out.write(f"L_{args.D}({args.N})  {parity}\n")
        for row in L.gram:
            out.write("  [" + ", ".join(f"{x:>4}" for x in row) + "]\n")
        out.write(f"det {L.det}\n")
    return EXIT_OK


def cmd_rep(args, config, out) -> int:
    identities.check_space(args.D, args.N)
    if not is_definite(args.D):
        raise ParameterError(
            f"B({args.D}) is indefinite: representation numbers are infinite; "
            f"use `quatlat heegner --D {args.D} --N {args.N}` for normalized Heegner degrees"
        )
    m_max = _setting(args, config, "m_max")
    rs = identities.definite_series(args.D, args.N, m_max, _cache(args, config))
    _emit_table(args, ["m", "r"], [[m, _rat(r, args)] for m, r in enumerate(rs)], out)
    return EXIT_OK


def cmd_genus(args, config, out) -> int:
    identities.check_space(args.D, args.N)
    if not is_definite(args.D):
        raise ParameterError(f"B({args.D}) is indefinite; the genus enumeration needs a definite lattice")
    G = _cache(args, config).get(args.D, args.N)
    if args.json:
        out.write(dumps(storage.genus_to_json(G)))
        return EXIT_OK
    out.write(f"genus of L_{args.D}({args.N}): {G.class_number} class(es), mass {G.mass}\n")
    out.write(f"neighbor primes {', '.join(map(str, G.neighbor_primes))}\n")
    for C, a in zip(G.classes, G.aut_orders):
        out.write(f"  {[list(r) for r in C.gram]}  |Aut| = {a}\n")
    return EXIT_OK


def cmd_theta(args, config, out) -> int:
    identities.check_space(args.D, args.N)
    if not is_definite(args.D):
        raise ParameterError(f"B({args.D}) is indefinite; use `quatlat heegner`")
    M = _setting(args, config, "M")
    G = _cache(args, config).get(args.D, args.N)
    series = genus_theta_coeffs(G, M)
    if args.json:
        out.write(dumps({"D": args.D, "N": args.N, "coefficients": [fraction_to_str(c) for c in series.coefficients]}))
    else:
        out.write(str(series) + "\n")
    return EXIT_OK


def cmd_heegner(args, config, out) -> int:
    m_max = _setting(args, config, "m_max")
    recs = identities.heegner_degrees(args.D, args.N, m_max, args.split_prime, _cache(args, config))
    rows = [[r.m, _rat(r.r, args), _rat(r.vol, args), _rat(r.deg, args)] for r in recs]
    _emit_table(args, ["m", "r", "vol", "deg"], rows, out)
    return EXIT_OK


def cmd_verify(args, config, out) -> int:
    m_max = _setting(args, config, "m_max")
    cache = _cache(args, config)
    need = {"thm11": ("p", "q"), "thm13": ("p",), "cor12": ("p", "q")}[args.identity]
    missing = [f"--{n}" for n in need if getattr(args, n) is None]
    if missing:
        raise ParameterError(f"{args.identity} needs {' '.join(missing)}")
    if args.identity == "thm11":
        report = identities.verify_thm11(args.D, args.p, args.q, args.N, m_max, cache)
    elif args.identity == "thm13":
        report = identities.verify_thm13(args.D, args.p, args.N, m_max, cache)
    else:
        report = identities.verify_cor12(args.D, args.p, args.q, args.N, m_max, cache)
    data = storage.report_to_json(report)
    data["toolchain"] = f"python {platform.python_version()}"
    text = dumps(data)
    if args.output:
        storage.atomic_write(args.output, text)
    if args.json:
        out.write(text)
    else:
        for r in report.rows:
            mark = "ok" if r.equal else "MISMATCH"
            out.write(f"m={r.m:>3}  lhs={r.lhs}  rhs={r.rhs}  {mark}\n")
        out.write(f"{report.name} ({report.mode}): {'holds' if report.verdict else 'VIOLATED'}\n")
    return EXIT_OK if report.verdict else EXIT_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--D", type=int, required=True, help="squarefree discriminant")
    common.add_argument("--N", type=int, default=1, help="Eichler level, coprime to D")
    common.add_argument("--cache-dir", help=f"genus cache directory (env {storage.CACHE_ENV_VAR})")
    common.add_argument("--neighbor-primes", type=_int_list, help="odd primes for neighbor closure, e.g. 5,7")
    common.add_argument("--config", help="INI file with a [quatlat] section")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")

    parser = argparse.ArgumentParser(prog="quatlat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"quatlat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("lattice", parents=[common], help="Gram matrix of L_D(N)").set_defaults(func=cmd_lattice)
    p = sub.add_parser("rep", parents=[common], help="genus-averaged representation numbers")
    p.add_argument("--m-max", dest="m_max", type=int)
    p.set_defaults(func=cmd_rep)
    sub.add_parser("genus", parents=[common], help="class representatives and mass").set_defaults(func=cmd_genus)
    p = sub.add_parser("theta", parents=[common], help="genus theta series")
    p.add_argument("--M", dest="M", type=int)
    p.set_defaults(func=cmd_theta)
    p = sub.add_parser("heegner", parents=[common], help="normalized Heegner degrees and volumes")
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--split-prime", type=int)
    p.set_defaults(func=cmd_heegner)
    p = sub.add_parser("verify", parents=[common], help="check an identity; exit 1 if any row fails")
    p.add_argument("identity", choices=["thm11", "thm13", "cor12"])
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--output", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARAM if exc.code else EXIT_OK
    try:
        config = _load_config(args.config)
        return args.func(args, config, out)
    except InvariantError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
