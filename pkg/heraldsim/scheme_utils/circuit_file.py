"""circuit_file.py convert files to circuit and matrix objects.

Circuits are stored as JSON objects

    {"modes": 2,
     "ops": [{"type": "two_mode_squeeze", "modes": [1, 2], "zeta": 1.0},
             {"type": "loss", "mode": 1, "eta": "eta1"}],
     "herald": [1],
     "heralded_mode": 2,
     "target": {"type": "fock", "m": 1}}

with complex numbers written as [re, im] pairs. Single-mode operations use
``mode``, two-mode operations ``modes``; ``heralded_mode`` defaults to the last
mode. Loop hafnian inputs are JSON objects with ``base`` (rows of [re, im]
pairs), ``loops`` and ``reps``.
"""

import json
import logging
from typing import Any, Dict, List

import numpy as np

from heraldsim.exceptions import InvalidParameterException
from heraldsim.lhaf_utils.lhaf_engine import LoopMatrixSpec

from . import op_signatures
from .schemes import CircuitOp, CircuitSpec, TargetSpec

_COMPLEX_PARAMS = {"z", "zeta", "alpha"}


def decode_complex(value: Any, name: str) -> complex:
    """
    decode_complex reads a number or an [re, im] pair.

    Parameters
    ----------
    value : Any
        the JSON value
    name : str
        field name used in error messages

    Returns
    -------
    complex
        the decoded number
    """
    if isinstance(value, bool):
        raise InvalidParameterException(f"{name} must be a number, got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        re, im = value
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            return complex(re, im)
    raise InvalidParameterException(f"{name} must be a number or an [re, im] pair, got {value!r}")


def encode_complex(value: complex) -> List[float]:
    """Write a complex number as an [re, im] pair."""
    value = complex(value)
    return [value.real, value.imag]


def _real(value: Any, name: str) -> float:
    number = decode_complex(value, name)
    if number.imag != 0:
        raise InvalidParameterException(f"{name} must be real, got {value!r}")
    return number.real


def _op_modes(entry: Dict[str, Any], count: int) -> List[int]:
    modes = entry.get("modes", [entry["mode"]] if "mode" in entry else None)
    if not isinstance(modes, list) or len(modes) != count:
        raise InvalidParameterException(
            f"{entry.get('type')} needs {'mode' if count == 1 else 'modes'} "
            f"with {count} entr{'y' if count == 1 else 'ies'}"
        )
    if not all(isinstance(k, int) and not isinstance(k, bool) for k in modes):
        raise InvalidParameterException(f"mode numbers must be integers, got {modes}")
    return modes


def op_from_dict(entry: Dict[str, Any]) -> CircuitOp:
    """
    op_from_dict converts one ``ops`` entry into a CircuitOp.

    Parameters
    ----------
    entry : Dict[str, Any]
        the JSON object of the operation

    Returns
    -------
    CircuitOp
        the operation
    """
    if not isinstance(entry, dict) or entry.get("type") not in op_signatures:
        raise InvalidParameterException(
            f"operation {entry!r} must be an object with a type in {list(op_signatures)}"
        )
    kind = entry["type"]
    count, names = op_signatures[kind]
    modes = _op_modes(entry, count)
    params: Dict[str, Any] = {}
    for name in names:
        if name not in entry:
            raise InvalidParameterException(f"{kind} is missing {name}")
        value = entry[name]
        if name in _COMPLEX_PARAMS:
            params[name] = decode_complex(value, name)
        elif name == "eta" and isinstance(value, str):
            params[name] = value
        else:
            params[name] = _real(value, name)
    return CircuitOp(kind, tuple(modes), params)


def op_to_dict(op: CircuitOp) -> Dict[str, Any]:
    """Inverse of ``op_from_dict``."""
    entry: Dict[str, Any] = {"type": op.kind}
    if len(op.modes) == 1:
        entry["mode"] = op.modes[0]
    else:
        entry["modes"] = list(op.modes)
    for name, value in op.params.items():
        entry[name] = encode_complex(value) if name in _COMPLEX_PARAMS else value
    return entry


def target_from_dict(entry: Dict[str, Any]) -> TargetSpec:
    """
    target_from_dict converts the ``target`` object into a TargetSpec.

    Parameters
    ----------
    entry : Dict[str, Any]
        ``{"type": "fock", "m": 1}``, ``{"type": "cat", "alpha": [0, 1.24],
        "parity": "odd"}``, ``{"type": "psia", "a": 0.53}`` or ``{"type": "vacuum"}``

    Returns
    -------
    TargetSpec
        the target
    """
    if not isinstance(entry, dict) or "type" not in entry:
        raise InvalidParameterException(f"target {entry!r} must be an object with a type")
    params = {key: value for key, value in entry.items() if key != "type"}
    if "alpha" in params:
        params["alpha"] = decode_complex(params["alpha"], "alpha")
    if "a" in params:
        params["a"] = _real(params["a"], "a")
    if "m" in params and not (isinstance(params["m"], int) and not isinstance(params["m"], bool)):
        raise InvalidParameterException(f"m must be an integer, got {params['m']!r}")
    return TargetSpec(entry["type"], params)


def target_to_dict(target: TargetSpec) -> Dict[str, Any]:
    """Inverse of ``target_from_dict``."""
    entry: Dict[str, Any] = {"type": target.kind}
    for name, value in target.params.items():
        entry[name] = encode_complex(value) if name == "alpha" else value
    return entry


def circuit_from_dict(data: Dict[str, Any]) -> CircuitSpec:
    """
    circuit_from_dict converts a parsed circuit file into a CircuitSpec.

    Parameters
    ----------
    data : Dict[str, Any]
        the parsed JSON object

    Returns
    -------
    CircuitSpec
        the circuit

    Raises
    ------
    InvalidParameterException
        if a field is missing or malformed
    """
    if not isinstance(data, dict):
        raise InvalidParameterException("a circuit file must hold a JSON object")
    missing = [key for key in ("modes", "ops", "herald", "target") if key not in data]
    if missing:
        raise InvalidParameterException(f"circuit file is missing {missing}")
    if not isinstance(data["modes"], int) or not isinstance(data["ops"], list):
        raise InvalidParameterException("modes must be an integer and ops a list")
    if not isinstance(data["herald"], list) or not all(
        isinstance(n, int) and not isinstance(n, bool) for n in data["herald"]
    ):
        raise InvalidParameterException("herald must be a list of photon numbers")
    return CircuitSpec(
        num_modes=data["modes"],
        ops=tuple(op_from_dict(entry) for entry in data["ops"]),
        pattern=tuple(data["herald"]),
        heralded_mode=data.get("heralded_mode", data["modes"]),
        target=target_from_dict(data["target"]),
        name=data.get("name", "custom"),
        loss_mapping=data.get("loss_mapping", ""),
    )


def circuit_to_dict(spec: CircuitSpec) -> Dict[str, Any]:
    """Inverse of ``circuit_from_dict``; the recorded transmissions are not stored."""
    return {
        "name": spec.name,
        "modes": spec.num_modes,
        "ops": [op_to_dict(op) for op in spec.ops],
        "herald": list(spec.pattern),
        "heralded_mode": spec.heralded_mode,
        "target": target_to_dict(spec.target),
        "loss_mapping": spec.loss_mapping,
    }


def _load_json(file_path: str) -> Any:
    try:
        with open(file_path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InvalidParameterException(f"{file_path} is not valid JSON: {e}")
    except OSError as e:
        raise InvalidParameterException(f"cannot read {file_path}: {e.strerror}")


def read_circuit(file_path: str) -> CircuitSpec:
    """
    read_circuit reads a circuit file.

    Parameters
    ----------
    file_path : str
        path of the JSON file

    Returns
    -------
    CircuitSpec
        the circuit, possibly with open transmissions
    """
    logging.info(f"Reading circuit from {file_path}")
    return circuit_from_dict(_load_json(file_path))


def write_circuit(spec: CircuitSpec, file_path: str) -> None:
    """Write ``spec`` as a circuit file."""
    with open(file_path, "w") as f:
        json.dump(circuit_to_dict(spec), f, indent=2)
    logging.info(f"Wrote {spec.name} circuit to {file_path}")


def read_loop_matrix(file_path: str) -> LoopMatrixSpec:
    """
    read_loop_matrix reads a loop hafnian input file.

    Parameters
    ----------
    file_path : str
        path of a JSON object with ``base``, ``loops`` and ``reps``

    Returns
    -------
    LoopMatrixSpec
        the compressed matrix

    Raises
    ------
    InvalidParameterException
        if a field is missing, malformed or the dimensions disagree
    """
    data = _load_json(file_path)
    if not isinstance(data, dict):
        raise InvalidParameterException(f"{file_path} must hold a JSON object")
    missing = [key for key in ("base", "loops", "reps") if key not in data]
    if missing:
        raise InvalidParameterException(f"{file_path} is missing {missing}")
    rows, loops, reps = data["base"], data["loops"], data["reps"]
    if not all(isinstance(field, list) for field in (rows, loops, reps)):
        raise InvalidParameterException("base, loops and reps must be lists")
    if any(not isinstance(row, list) or len(row) != len(rows) for row in rows):
        raise InvalidParameterException("base must be a square list of rows")
    base = np.array(
        [[decode_complex(value, "base") for value in row] for row in rows], dtype=complex
    ).reshape(len(rows), len(rows))
    loops = np.array([decode_complex(value, "loops") for value in loops], dtype=complex)
    if not all(isinstance(r, int) and not isinstance(r, bool) for r in reps):
        raise InvalidParameterException(f"reps must be integers, got {reps}")
    return LoopMatrixSpec(base, loops, np.array(reps, dtype=np.int64))


def write_loop_matrix(spec: LoopMatrixSpec, file_path: str) -> None:
    """Write ``spec`` as a loop hafnian input file."""
    data = {
        "base": [[encode_complex(value) for value in row] for row in spec.base],
        "loops": [encode_complex(value) for value in spec.loops],
        "reps": [int(r) for r in spec.reps],
    }
    with open(file_path, "w") as f:
        json.dump(data, f)
