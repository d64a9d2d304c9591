"""JSON persistence for genus cache files and identity reports.

Rationals are written as ``"num/den"`` strings and every map is emitted with
sorted keys, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from . import __version__
from .errors import InvariantError
from .ternary.genus import GenusData
from .ternary.lattice import TernaryLattice

SCHEMA_VERSION = 1
CACHE_ENV_VAR = "QUATLAT_CACHE_DIR"
DEFAULT_CACHE_DIR = ".quatlat-cache"


def fraction_to_str(x: Union[int, Fraction]) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den or 1))


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def atomic_write(path: Union[str, Path], text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def resolve_cache_dir(flag: Union[str, Path, None] = None) -> Path:
    if flag:
        return Path(flag)
    return Path(os.environ.get(CACHE_ENV_VAR, DEFAULT_CACHE_DIR))


def genus_cache_path(cache_dir: Union[str, Path], D: int, N: int) -> Path:
    return Path(cache_dir) / f"genus_D{D}_N{N}.json"


def genus_to_json(G: GenusData) -> dict:
    if G.tag is None:
        raise ValueError("only (D, N)-tagged genera can be cached")
    D, N = G.tag
    return {
        "schema_version": SCHEMA_VERSION,
        "D": D,
        "N": N,
        "neighbor_primes": list(G.neighbor_primes),
        "classes": [[c for row in L.gram for c in row] for L in G.classes],
        "aut_orders": list(G.aut_orders),
        "mass": fraction_to_str(G.mass),
    }


def genus_from_json(data: dict) -> GenusData:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise InvariantError(f"unsupported genus cache schema {data.get('schema_version')!r}")
    classes = []
    for flat in data["classes"]:
        if len(flat) != 9:
            raise InvariantError("cached Gram matrix does not have 9 entries")
        classes.append(TernaryLattice((tuple(flat[0:3]), tuple(flat[3:6]), tuple(flat[6:9]))))
    auts = [int(a) for a in data["aut_orders"]]
    mass = fraction_from_str(data["mass"])
    G = GenusData(classes, auts, mass, tuple(data["neighbor_primes"]), (data["D"], data["N"]))
    if G.recomputed_mass() != mass:
        raise InvariantError("cached mass does not match the recorded automorphism orders")
    return G


def save_genus(G: GenusData, cache_dir: Union[str, Path]) -> Path:
    D, N = G.tag  # type: ignore[misc]
    path = genus_cache_path(cache_dir, D, N)
    atomic_write(path, dumps(genus_to_json(G)))
    return path


def load_genus(cache_dir: Union[str, Path], D: int, N: int):
    path = genus_cache_path(cache_dir, D, N)
    if not path.exists():
        return None
    with open(path, encoding="utf-8") as fh:
        return genus_from_json(json.load(fh))


def report_to_json(report) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "identity": report.name,
        "mode": report.mode,
        "parameters": dict(report.parameters),
        "rows": [
            {"m": r.m, "lhs": fraction_to_str(r.lhs), "rhs": fraction_to_str(r.rhs), "equal": r.equal}
            for r in report.rows
        ],
        "verdict": report.verdict,
        "version": f"quatlat {__version__}",
    }
