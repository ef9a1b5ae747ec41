"""Text problem/result files.

JSON-shaped, UTF-8, schema versioned with a ``format: 1`` field. Complex
entries are stored as [re, im] pairs; floats round-trip exactly through
repr, so parse(emit(x)) is bitwise faithful.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SchemaError

FORMAT_VERSION = 1

STRUCTURE_NAMES = (
    "unstructured",
    "symmetric",
    "hermitian",
    "t-odd",
    "star-odd",
    "t-even",
    "star-even",
    "star-shh",
    "t-shh",
)


def encode_matrix(a) -> list:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in a]
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def decode_matrix(obj, name: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{name}: not a numeric array: {exc}") from None
    if arr.ndim == 2 and arr.shape[-1] == 2:  # vector of [re, im]
        return arr[:, 0] + 1j * arr[:, 1]
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[:, :, 0] + 1j * arr[:, :, 1]
    raise SchemaError(f"{name}: expected [re, im] pairs, got shape {arr.shape}")


def _decode_optional(block, key, name):
    if block is None or block.get(key) is None:
        return None
    return decode_matrix(block[key], name)


@dataclass
class PairBlock:
    x: np.ndarray | None = None
    lam: np.ndarray | None = None
    eigenvalues: np.ndarray | None = None


@dataclass
class ProblemFile:
    structure: str
    m: np.ndarray
    k: np.ndarray
    change: PairBlock = field(default_factory=PairBlock)
    targets: PairBlock = field(default_factory=PairBlock)
    fixed: PairBlock | None = None
    parameters: dict = field(default_factory=dict)
    quadratic: bool = False


_PARAM_MATRIX_KEYS = ("z1", "z2", "mhat")
_PARAM_LIST_KEYS = ("quad_alpha", "quad_beta", "imag_beta", "real_beta")
_PARAM_SCALAR_KEYS = ("t", "slack")
_PARAM_INT_KEYS = ("num_couples", "num_quadruples", "num_imag_pairs", "num_real_pairs")
_PARAM_STR_KEYS = ("strategy",)


def _decode_pair_block(obj, name) -> PairBlock:
    if obj is None:
        return PairBlock()
    if not isinstance(obj, dict):
        raise SchemaError(f"{name} must be an object")
    return PairBlock(
        x=_decode_optional(obj, "x", f"{name}.x"),
        lam=_decode_optional(obj, "lambda", f"{name}.lambda"),
        eigenvalues=_decode_optional(obj, "eigenvalues", f"{name}.eigenvalues"),
    )


def _encode_pair_block(block: PairBlock | None):
    if block is None:
        return None
    out = {}
    if block.x is not None:
        out["x"] = encode_matrix(block.x)
    if block.lam is not None:
        out["lambda"] = encode_matrix(block.lam)
    if block.eigenvalues is not None:
        out["eigenvalues"] = encode_matrix(block.eigenvalues)
    return out or None


def load_problem(path) -> ProblemFile:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read problem file: {exc}") from None
    if not isinstance(raw, dict):
        raise SchemaError("problem file must hold a JSON object")
    if raw.get("format") != FORMAT_VERSION:
        raise SchemaError(f"unsupported format {raw.get('format')!r}")
    structure = raw.get("structure", "unstructured")
    if structure is None:
        structure = "unstructured"
    if structure not in STRUCTURE_NAMES:
        raise SchemaError(f"unknown structure {structure!r}")
    if "m" not in raw or "k" not in raw:
        raise SchemaError("problem file needs 'm' and 'k' matrices")
    m = decode_matrix(raw["m"], "m")
    k = decode_matrix(raw["k"], "k")
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape != k.shape:
        raise SchemaError("m and k must be square matrices of equal size")
    params_raw = raw.get("parameters") or {}
    if not isinstance(params_raw, dict):
        raise SchemaError("parameters must be an object")
    params = {}
    for key, value in params_raw.items():
        if value is None:
            continue
        if key in _PARAM_MATRIX_KEYS:
            params[key] = decode_matrix(value, f"parameters.{key}")
        elif key in _PARAM_LIST_KEYS:
            params[key] = [float(v) for v in value]
        elif key in _PARAM_SCALAR_KEYS:
            params[key] = float(value)
        elif key in _PARAM_INT_KEYS:
            params[key] = int(value)
        elif key in _PARAM_STR_KEYS:
            params[key] = str(value)
        else:
            raise SchemaError(f"unknown parameter {key!r}")
    pf = ProblemFile(
        structure=structure,
        m=m,
        k=k,
        change=_decode_pair_block(raw.get("change"), "change"),
        targets=_decode_pair_block(raw.get("targets"), "targets"),
        fixed=(
            _decode_pair_block(raw["fixed"], "fixed")
            if raw.get("fixed") is not None
            else None
        ),
        parameters=params,
        quadratic=bool(raw.get("quadratic", False)),
    )
    return pf


def dump_problem(pf: ProblemFile) -> str:
    params = {}
    for key, value in pf.parameters.items():
        if key in _PARAM_MATRIX_KEYS:
            params[key] = encode_matrix(value)
        elif key in _PARAM_LIST_KEYS:
            params[key] = [float(v) for v in value]
        else:
            params[key] = value
    doc = {
        "format": FORMAT_VERSION,
        "structure": pf.structure,
        "quadratic": pf.quadratic,
        "m": encode_matrix(pf.m),
        "k": encode_matrix(pf.k),
        "change": _encode_pair_block(pf.change),
        "targets": _encode_pair_block(pf.targets),
        "fixed": _encode_pair_block(pf.fixed),
        "parameters": params or None,
    }
    return json.dumps(doc, indent=1, sort_keys=True)


def save_problem(path, pf: ProblemFile):
    Path(path).write_text(dump_problem(pf) + "\n", encoding="utf-8")


def save_pairs(path, fixed_x, fixed_lam):
    doc = {
        "format": FORMAT_VERSION,
        "fixed": {"x": encode_matrix(fixed_x), "lambda": encode_matrix(fixed_lam)},
    }
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", "utf-8")


def load_pairs(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read pairs file: {exc}") from None
    if raw.get("format") != FORMAT_VERSION:
        raise SchemaError(f"unsupported format {raw.get('format')!r}")
    out = {}
    for key in ("targets", "fixed"):
        if raw.get(key) is not None:
            out[key] = _decode_pair_block(raw[key], key)
    return out


def certificate_dict(cert) -> dict:
    doc = {
        "target_residual": cert.target_residual,
        "target_relative": cert.target_relative,
        "spillover_residual": cert.spillover_residual,
        "spillover_relative": cert.spillover_relative,
        "structure_residuals": dict(cert.structure_residuals),
        "definiteness": dict(cert.definiteness),
        "pass": cert.passed,
    }
    if cert.spectrum is not None:
        doc["spectrum"] = {
            "max_distance": cert.spectrum.max_distance,
            "unmatched": cert.spectrum.unmatched,
            "infinite_computed": cert.spectrum.infinite_computed,
            "tol": cert.spectrum.tol,
        }
    return doc


def save_result(path, result, cert=None, extra=None):
    prov = {}
    for key, value in result.provenance.items():
        if isinstance(value, np.ndarray):
            prov[key] = encode_matrix(value)
        elif isinstance(value, (bool, int, float, str)):
            prov[key] = value
        elif isinstance(value, complex):
            prov[key] = [value.real, value.imag]
    doc = {
        "format": FORMAT_VERSION,
        "delta_m": encode_matrix(result.delta_m),
        "delta_k": encode_matrix(result.delta_k),
        "provenance": prov,
        "certificate": certificate_dict(cert) if cert is not None else None,
    }
    if extra:
        doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", "utf-8")


def load_delta(path) -> tuple[np.ndarray, np.ndarray]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read delta file: {exc}") from None
    if raw.get("format") != FORMAT_VERSION:
        raise SchemaError(f"unsupported format {raw.get('format')!r}")
    if "delta_m" not in raw or "delta_k" not in raw:
        raise SchemaError("delta file needs 'delta_m' and 'delta_k'")
    return decode_matrix(raw["delta_m"], "delta_m"), decode_matrix(
        raw["delta_k"], "delta_k"
    )


def load_pencil(path) -> tuple[np.ndarray, np.ndarray, str]:
    """(M, K, structure) from a problem file or a bare pencil file."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read pencil file: {exc}") from None
    if raw.get("format") != FORMAT_VERSION:
        raise SchemaError(f"unsupported format {raw.get('format')!r}")
    if "m" not in raw or "k" not in raw:
        raise SchemaError("pencil file needs 'm' and 'k'")
    structure = raw.get("structure") or "unstructured"
    if structure not in STRUCTURE_NAMES:
        raise SchemaError(f"unknown structure {structure!r}")
    return decode_matrix(raw["m"], "m"), decode_matrix(raw["k"], "k"), structure
