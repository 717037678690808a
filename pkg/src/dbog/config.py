"""Reading and writing field configuration files.

A configuration is a JSON object with keys, in this order, ``lattice``,
``A``, ``Phi`` and ``metadata``. ``A[s][i]`` is the matrix of the connection
along axis ``i`` at the ``s``-th site and ``Phi[s]`` the Higgs matrix, with
sites enumerated row-major over ``(k_1, ..., k_n)``. Every matrix is
``[[[re, im], [re, im]], [[re, im], [re, im]]]``.

Files are written compactly with Python's shortest round-trip float repr,
so ``write(read(f))`` reproduces ``f`` byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import su2
from .calculus import Cochain
from .lattice import Lattice

SITE_ORDER = "row-major over (k_1, ..., k_n)"


class ConfigError(ValueError):
    """Malformed configuration; ``where`` is a JSON path such as ``$.A[3][1]``."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class FieldConfig:
    lattice: Lattice
    A: Cochain
    Phi: Cochain
    metadata: dict = field(default_factory=dict)


def _matrix(data, where):
    if not (isinstance(data, list) and len(data) == 2):
        raise ConfigError(where, "expected a 2x2 matrix")
    out = np.empty((2, 2), dtype=complex)
    for i, row in enumerate(data):
        if not (isinstance(row, list) and len(row) == 2):
            raise ConfigError(f"{where}[{i}]", "expected a row of two entries")
        for j, z in enumerate(row):
            at = f"{where}[{i}][{j}]"
            if not (isinstance(z, list) and len(z) == 2):
                raise ConfigError(at, "expected [re, im]")
            for part in z:
                if isinstance(part, bool) or not isinstance(part, (int, float)) or not math.isfinite(part):
                    raise ConfigError(at, f"not a finite number: {part!r}")
            out[i, j] = complex(z[0], z[1])
    return out


def _list(data, length, where):
    if not isinstance(data, list):
        raise ConfigError(where, "expected an array")
    if len(data) != length:
        raise ConfigError(where, f"expected {length} entries, found {len(data)}")
    return data


def from_json(data) -> FieldConfig:
    if not isinstance(data, dict):
        raise ConfigError("$", "expected an object")
    for key in ("lattice", "A", "Phi"):
        if key not in data:
            raise ConfigError("$", f"missing key {key!r}")
    try:
        lattice = Lattice.from_json(data["lattice"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("$.lattice", str(exc)) from None
    ns, n = lattice.num_sites, lattice.n
    a = np.empty((ns, n, 2, 2), dtype=complex)
    for s, site in enumerate(_list(data["A"], ns, "$.A")):
        for i, m in enumerate(_list(site, n, f"$.A[{s}]")):
            a[s, i] = _matrix(m, f"$.A[{s}][{i}]")
    phi = np.empty((ns, 1, 2, 2), dtype=complex)
    for s, m in enumerate(_list(data["Phi"], ns, "$.Phi")):
        phi[s, 0] = _matrix(m, f"$.Phi[{s}]")
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ConfigError("$.metadata", "expected an object")
    return FieldConfig(
        lattice,
        Cochain(lattice, 1, a.reshape(lattice.extents + (n, 2, 2))),
        Cochain(lattice, 0, phi.reshape(lattice.extents + (1, 2, 2))),
        dict(metadata),
    )


def to_json(cfg: FieldConfig) -> dict:
    lat = cfg.lattice
    a = cfg.A.values.reshape(lat.num_sites, lat.n, 2, 2)
    phi = cfg.Phi.values.reshape(lat.num_sites, 2, 2)
    metadata = {"site_order": SITE_ORDER}
    metadata.update(cfg.metadata)
    return {
        "lattice": lat.to_json(),
        "A": [[su2.to_json(m) for m in site] for site in a],
        "Phi": [su2.to_json(m) for m in phi],
        "metadata": metadata,
    }


def dumps(cfg: FieldConfig) -> str:
    return json.dumps(to_json(cfg), separators=(",", ":")) + "\n"


def loads(text: str) -> FieldConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return from_json(data)


def read_config(path) -> FieldConfig:
    return loads(Path(path).read_text(encoding="utf-8"))


def write_config(path, cfg: FieldConfig) -> None:
    Path(path).write_text(dumps(cfg), encoding="utf-8")
