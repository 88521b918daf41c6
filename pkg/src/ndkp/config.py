"""JSON run configuration: parsing, validation and a canonical echo.

Schema (all keys except ``lattice`` and ``solution`` are optional)::

    {
      "lattice": {
        "base": [0, 0, 0],
        "window": {"n": [0, 3], "m": [0, 3], "h": [0, 3]},
        "p": [2, 2.5, 3, 3.5], "q": [...], "r": [...]
      },
      "solution": {
        "k_blocks": [{"kind": "diagonal", "values": [1], "amplitudes": [1]},
                     {"kind": "jordan", "value": 2, "size": 2, "amplitude": 1}],
        "kappa_blocks": [...],
        "C": "identity"
      },
      "constants": {"x0": 0, "y0": 1, "yp0": 1, "xi0": 1, "eta0": 1,
                    "zp0": 1, "sigma0": 1, "z0": 0},
      "checks": ["LPKP", "NQC(1/3,1/7)", "INVARIANCE"],
      "tolerance": 1e-10,
      "points": "interior",
      "seed": 0,
      "strict_zdef": false,
      "outputs": {"report": "report.json"}
    }

Numbers may be JSON numbers, fraction strings such as ``"10/3"`` or
``[re, im]`` pairs.  Sequences are indexed from the window start.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, NdkpError
from .fields import DeformConstants, Fields, parse_number
from .lattice import LatticeParams, LatticePoint, validate_params
from .solution import BlockSpec, SpectralConfig
from .verify import DEFAULT_TOLERANCE, parse_check

SCHEMA_VERSION = 1
TOP_KEYS = {"lattice", "solution", "constants", "checks", "tolerance", "points", "seed",
            "strict_zdef", "outputs"}
PSEUDO_CHECKS = ("INVARIANCE",)


@dataclass
class RunConfig:
    params: LatticeParams
    spectral: SpectralConfig
    constants: DeformConstants
    checks: list
    tolerance: float = DEFAULT_TOLERANCE
    points: object = "interior"
    seed: int = 0
    strict_zdef: bool = False
    outputs: dict = field(default_factory=dict)
    source: dict = field(default_factory=dict)

    def fields(self) -> Fields:
        return Fields(self.params, self.spectral, self.constants, strict_zdef=self.strict_zdef)

    def echo(self) -> dict:
        """Resolved configuration in canonical JSON-ready form."""
        P, S = self.params, self.spectral
        return {
            "lattice": {
                "base": list(P.base),
                "window": {d: list(w) for d, w in zip("nmh", P.window)},
                "p": [encode_complex(x) for x in P.p],
                "q": [encode_complex(x) for x in P.q],
                "r": [encode_complex(x) for x in P.r],
            },
            "solution": {
                "k_blocks": [_echo_block(b) for b in S.k_blocks],
                "kappa_blocks": [_echo_block(b) for b in S.kappa_blocks],
                "C": [[encode_complex(x) for x in row] for row in np.asarray(S.C)],
            },
            "constants": {k: encode_complex(getattr(self.constants, k))
                          for k in ("x0", "y0", "yp0", "xi0", "eta0", "zp0", "sigma0", "z0")},
            "checks": [str(c) for c in self.checks],
            "tolerance": self.tolerance,
            "points": self.points if isinstance(self.points, str) else [list(p) for p in self.points],
            "seed": self.seed,
            "strict_zdef": self.strict_zdef,
            "outputs": dict(self.outputs),
        }


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _echo_block(b: BlockSpec) -> dict:
    if b.kind == "diagonal":
        return {"kind": "diagonal", "values": [encode_complex(v) for v in b.values],
                "amplitudes": [encode_complex(a) for a in b.amplitudes]}
    return {"kind": "jordan", "value": encode_complex(b.values[0]), "size": b.size,
            "amplitude": encode_complex(b.amplitudes[0])}


class _Locator:
    """Maps a field name to the first line of the source that mentions it."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def line_of(self, key: str) -> int | None:
        pat = re.compile(r'"' + re.escape(key) + r'"\s*:')
        for i, line in enumerate(self.lines, 1):
            if pat.search(line):
                return i
        return None


def _err(loc: _Locator, path: str, msg: str) -> ConfigError:
    key = path.split(".")[-1].split("[")[0]
    line = loc.line_of(key)
    where = f"{path} (line {line})" if line else path
    exc = ConfigError(f"{where}: {msg}")
    exc.field = path
    exc.line = line
    return exc


def _number(loc, path, x) -> complex:
    if isinstance(x, bool) or x is None:
        raise _err(loc, path, f"expected a number, got {x!r}")
    try:
        z = parse_number(x)
    except (ValueError, TypeError):
        raise _err(loc, path, f"expected a number, fraction string or [re, im], got {x!r}") from None
    if not np.isfinite(z):
        raise _err(loc, path, "value must be finite")
    return z


def _numbers(loc, path, xs) -> list[complex]:
    if not isinstance(xs, list):
        raise _err(loc, path, "expected an array")
    return [_number(loc, f"{path}[{i}]", x) for i, x in enumerate(xs)]


def _int_triple(loc, path, x) -> tuple[int, int, int]:
    if not (isinstance(x, list) and len(x) == 3 and all(isinstance(v, int) and not isinstance(v, bool)
                                                        for v in x)):
        raise _err(loc, path, f"expected three integers, got {x!r}")
    return tuple(x)


def _window(loc, w):
    if isinstance(w, dict):
        missing = [d for d in "nmh" if d not in w]
        if missing:
            raise _err(loc, "lattice.window", f"missing ranges for {', '.join(missing)}")
        rows = [w[d] for d in "nmh"]
    elif isinstance(w, list) and len(w) == 3:
        rows = w
    else:
        raise _err(loc, "lattice.window", "expected {\"n\": [lo, hi], \"m\": ..., \"h\": ...}")
    out = []
    for d, row in zip("nmh", rows):
        if not (isinstance(row, list) and len(row) == 2 and all(isinstance(v, int) for v in row)):
            raise _err(loc, f"lattice.window.{d}", f"expected [lo, hi] integers, got {row!r}")
        out.append(tuple(row))
    return tuple(out)


def _block(loc, path, b) -> BlockSpec:
    if not isinstance(b, dict):
        raise _err(loc, path, "expected a block object")
    kind = b.get("kind")
    try:
        if kind == "diagonal":
            values = _numbers(loc, f"{path}.values", b.get("values"))
            amps = b.get("amplitudes")
            amps = _numbers(loc, f"{path}.amplitudes", amps) if amps is not None else None
            return BlockSpec.diagonal(values, amps)
        if kind == "jordan":
            size = b.get("size")
            if not isinstance(size, int) or isinstance(size, bool):
                raise _err(loc, f"{path}.size", f"expected an integer, got {size!r}")
            return BlockSpec.jordan(_number(loc, f"{path}.value", b.get("value")), size,
                                    _number(loc, f"{path}.amplitude", b.get("amplitude", 1)))
    except NdkpError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise _err(loc, path, str(exc)) from None
    raise _err(loc, f"{path}.kind", f"expected 'diagonal' or 'jordan', got {kind!r}")


def parse_config(data: dict, text: str = "") -> RunConfig:
    loc = _Locator(text)
    if not isinstance(data, dict):
        raise _err(loc, "<root>", "configuration must be a JSON object")
    unknown = sorted(set(data) - TOP_KEYS)
    if unknown:
        raise _err(loc, unknown[0], f"unknown key; allowed: {', '.join(sorted(TOP_KEYS))}")
    for key in ("lattice", "solution"):
        if key not in data:
            raise _err(loc, key, "required section is missing")

    lat = data["lattice"]
    if not isinstance(lat, dict):
        raise _err(loc, "lattice", "expected an object")
    for key in ("window", "p", "q", "r"):
        if key not in lat:
            raise _err(loc, f"lattice.{key}", "required field is missing")
    window = _window(loc, lat["window"])
    base = _int_triple(loc, "lattice.base", lat.get("base", [w[0] for w in window]))
    seqs = [_numbers(loc, f"lattice.{s}", lat[s]) for s in "pqr"]
    try:
        params = LatticeParams(base=LatticePoint(*base), window=window, p=seqs[0], q=seqs[1], r=seqs[2])
    except NdkpError as exc:
        raise _err(loc, "lattice", str(exc)) from None

    sol = data["solution"]
    if not isinstance(sol, dict):
        raise _err(loc, "solution", "expected an object")
    blocks = {}
    for key in ("k_blocks", "kappa_blocks"):
        raw = sol.get(key)
        if not isinstance(raw, list) or not raw:
            raise _err(loc, f"solution.{key}", "expected a non-empty array of blocks")
        blocks[key] = [_block(loc, f"solution.{key}[{i}]", b) for i, b in enumerate(raw)]
    C = sol.get("C", "identity")
    if not isinstance(C, str):
        if not isinstance(C, list) or not all(isinstance(row, list) for row in C):
            raise _err(loc, "solution.C", "expected \"identity\" or a matrix (array of rows)")
        C = [[_number(loc, f"solution.C[{i}][{j}]", x) for j, x in enumerate(row)]
             for i, row in enumerate(C)]
    try:
        spectral = SpectralConfig(blocks["k_blocks"], blocks["kappa_blocks"], C)
    except (NdkpError, ValueError) as exc:
        raise _err(loc, "solution", str(exc)) from None

    consts = data.get("constants", {})
    if not isinstance(consts, dict):
        raise _err(loc, "constants", "expected an object")
    names = ("x0", "y0", "yp0", "xi0", "eta0", "zp0", "sigma0", "z0")
    bad = sorted(set(consts) - set(names))
    if bad:
        raise _err(loc, f"constants.{bad[0]}", f"unknown constant; allowed: {', '.join(names)}")
    try:
        constants = DeformConstants(**{k: _number(loc, f"constants.{k}", v) for k, v in consts.items()})
    except NdkpError as exc:
        raise _err(loc, "constants", str(exc)) from None

    raw_checks = data.get("checks", [])
    if not isinstance(raw_checks, list) or not all(isinstance(c, str) for c in raw_checks):
        raise _err(loc, "checks", "expected an array of check names")
    checks = []
    extra_a, extra_b = [], []
    for i, name in enumerate(raw_checks):
        if name.strip() in PSEUDO_CHECKS:
            checks.append(name.strip())
            continue
        try:
            req = parse_check(name)
        except ValueError as exc:
            raise _err(loc, f"checks[{i}]", str(exc)) from None
        for kind, val in zip(req.definition.params, req.args):
            (extra_a if kind == "a" else extra_b if kind == "b" else []).append(val)
        checks.append(req)

    tol = data.get("tolerance", DEFAULT_TOLERANCE)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
        raise _err(loc, "tolerance", f"expected a positive number, got {tol!r}")

    points = data.get("points", "interior")
    if points != "interior":
        if not isinstance(points, list):
            raise _err(loc, "points", "expected \"interior\" or a list of [n, m, h]")
        points = [LatticePoint(*_int_triple(loc, f"points[{i}]", p)) for i, p in enumerate(points)]

    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise _err(loc, "seed", f"expected an integer, got {seed!r}")
    strict = data.get("strict_zdef", False)
    if not isinstance(strict, bool):
        raise _err(loc, "strict_zdef", "expected true or false")
    outputs = data.get("outputs", {})
    if not isinstance(outputs, dict) or not all(isinstance(v, str) for v in outputs.values()):
        raise _err(loc, "outputs", "expected an object of file paths")

    try:
        validate_params(params, spectral, extra_a, extra_b)
    except NdkpError as exc:
        m = re.match(r"([pqr])_(-?\d+)", str(exc))
        if m:
            d = "pqr".index(m.group(1))
            path = f"lattice.{m.group(1)}[{int(m.group(2)) - params.window[d][0]}]"
        else:
            path = "solution"
        raise _err(loc, path, str(exc)) from None

    return RunConfig(params, spectral, constants, checks, float(tol), points, seed, strict,
                     dict(outputs), data)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        err = ConfigError(f"{path}: cannot read config ({exc.strerror})")
        err.field, err.line = None, None
        raise err from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        err = ConfigError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
        err.field, err.line = None, exc.lineno
        raise err from None
    return parse_config(data, text)
