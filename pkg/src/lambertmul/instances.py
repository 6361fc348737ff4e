"""Random instance generation and the JSON interchange format.

An instance is a measure space, a partition of its atoms, and a set of
named complex functions.  The file format is

    {"weights": [...], "blocks": [[...], ...],
     "functions": {"name": [[re, im], ...], ...}}

Complex values are always two-element ``[re, im]`` arrays.  Numbers are
written with Python's shortest round-tripping decimal form (up to 17
significant digits), so write-then-read reproduces every float bit-exactly.

Witness payloads produced by the verifier extend this with an optional
``"params"`` object (exponents, scalars, derived seeds); ``inf`` exponents
are encoded as the string ``"inf"`` to keep the files strict JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .measure import INF, MeasureSpace, Partition, as_function, make_space

__all__ = [
    "GeneratorConfig",
    "Instance",
    "InstanceFormatError",
    "random_instance",
    "read_instance",
    "write_instance",
]


class InstanceFormatError(ValueError):
    """A malformed instance file; the message names the offending field."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Bounds for random instance generation.

    ``weight_floor_ratio`` keeps atom weights bounded away from zero:
    every weight is at least that fraction of the mean raw weight, which
    keeps block averaging well-conditioned while still allowing large
    dynamic range.
    """

    max_atoms: int = 16
    max_blocks: int = 6
    value_scale: float = 4.0
    weight_floor_ratio: float = 1e-6
    n_functions: int = 3

    def __post_init__(self):
        if self.max_atoms < 1 or self.max_blocks < 1 or self.n_functions < 1:
            raise ValueError("generator bounds must be at least 1")
        if self.value_scale <= 0:
            raise ValueError("value_scale must be positive")


@dataclass
class Instance:
    """A concrete test instance: space, partition, named functions, parameters."""

    space: MeasureSpace
    partition: Partition
    functions: dict[str, np.ndarray]
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        doc = {
            "weights": [float(x) for x in self.space.weights],
            "blocks": [list(b) for b in self.partition.blocks],
            "functions": {
                name: [[float(z.real), float(z.imag)] for z in np.asarray(vals)]
                for name, vals in self.functions.items()
            },
        }
        if self.params:
            doc["params"] = _encode_params(self.params)
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping) -> "Instance":
        space, partition, functions = _parse_instance_doc(doc)
        params = _decode_params(doc.get("params", {}))
        return cls(space=space, partition=partition, functions=functions, params=params)


def _encode_params(params: Mapping) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, complex):
            out[k] = [v.real, v.imag]
        elif isinstance(v, float) and v == INF:
            out[k] = "inf"
        else:
            out[k] = v
    return out


def _decode_params(doc: Mapping) -> dict:
    out = {}
    for k, v in doc.items():
        if v == "inf":
            out[k] = INF
        elif isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
            out[k] = complex(v[0], v[1])
        else:
            out[k] = v
    return out


def random_instance(
    seed: int, config: GeneratorConfig = GeneratorConfig()
) -> tuple[MeasureSpace, Partition, list[np.ndarray]]:
    """Deterministic random instance for a seed.

    Weights are lognormal with a floor of ``weight_floor_ratio`` times the
    mean raw weight.  Degenerate shapes are emitted with fixed probability:
    roughly 8% single-atom spaces, and (on larger spaces) 8% coarse and 8%
    fine partitions each, so edge cases are always exercised.  Function
    values are complex with modulus at most ``value_scale``.
    """
    rng = np.random.default_rng(seed)
    if config.max_atoms == 1 or rng.random() < 0.08:
        n = 1
    else:
        n = int(rng.integers(1, config.max_atoms + 1))

    raw = rng.lognormal(mean=0.0, sigma=1.0, size=n)
    floor = config.weight_floor_ratio * float(raw.mean())
    space = make_space(np.maximum(raw, floor))

    shape = rng.random()
    if n == 1:
        partition = Partition(1, [[0]])
    elif shape < 0.08:
        partition = Partition(n, [range(n)])
    elif shape < 0.16:
        partition = Partition(n, [[i] for i in range(n)])
    else:
        nb = int(rng.integers(1, min(config.max_blocks, n) + 1))
        perm = rng.permutation(n)
        cuts = np.sort(rng.choice(np.arange(1, n), size=nb - 1, replace=False)) if nb > 1 else []
        partition = Partition(n, [chunk.tolist() for chunk in np.split(perm, cuts)])

    functions = []
    for _ in range(config.n_functions):
        mod = config.value_scale * rng.random(n)
        phs = rng.uniform(0.0, 2.0 * np.pi, n)
        functions.append(mod * np.exp(1j * phs))
    return space, partition, functions


def _field(doc: Mapping, key: str, where: str):
    if key not in doc:
        raise InstanceFormatError(f"{where}: missing required field '{key}'")
    return doc[key]


def _parse_instance_doc(doc: Mapping) -> tuple[MeasureSpace, Partition, dict[str, np.ndarray]]:
    weights = _field(doc, "weights", "instance")
    if not isinstance(weights, list) or not weights:
        raise InstanceFormatError("weights: expected a non-empty array of numbers")
    for i, x in enumerate(weights):
        if not isinstance(x, (int, float)) or isinstance(x, bool):
            raise InstanceFormatError(f"weights[{i}]: expected a number, got {x!r}")
    try:
        space = make_space(weights)
    except ValueError as exc:
        raise InstanceFormatError(f"weights: {exc}") from exc

    blocks = _field(doc, "blocks", "instance")
    if not isinstance(blocks, list):
        raise InstanceFormatError("blocks: expected an array of index arrays")
    for k, b in enumerate(blocks):
        if not isinstance(b, list):
            raise InstanceFormatError(f"blocks[{k}]: expected an array of atom indices")
        for j, i in enumerate(b):
            if not isinstance(i, int) or isinstance(i, bool):
                raise InstanceFormatError(f"blocks[{k}][{j}]: expected an integer atom index")
    try:
        partition = Partition(space.n_atoms, blocks)
    except ValueError as exc:
        raise InstanceFormatError(f"blocks: {exc}") from exc

    raw_fns = doc.get("functions", {})
    if not isinstance(raw_fns, dict):
        raise InstanceFormatError("functions: expected an object of named value arrays")
    functions: dict[str, np.ndarray] = {}
    for name, vals in raw_fns.items():
        if not isinstance(vals, list) or len(vals) != space.n_atoms:
            raise InstanceFormatError(
                f"functions[{name!r}]: expected {space.n_atoms} values, got "
                f"{len(vals) if isinstance(vals, list) else type(vals).__name__}"
            )
        parsed = np.empty(space.n_atoms, dtype=np.complex128)
        for i, z in enumerate(vals):
            if (
                not isinstance(z, list)
                or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            ):
                raise InstanceFormatError(
                    f"functions[{name!r}][{i}]: complex values must be [re, im] number pairs"
                )
            parsed[i] = complex(z[0], z[1])
        try:
            functions[name] = as_function(space, parsed)
        except ValueError as exc:
            raise InstanceFormatError(f"functions[{name!r}]: {exc}") from exc
    return space, partition, functions


def read_instance(path) -> tuple[MeasureSpace, Partition, dict[str, np.ndarray]]:
    """Read an instance file; errors carry line/field diagnostics."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    if not isinstance(doc, dict):
        raise InstanceFormatError(f"{path}: top-level value must be an object")
    return _parse_instance_doc(doc)


def write_instance(
    path,
    space: MeasureSpace,
    partition: Partition,
    functions: Mapping[str, np.ndarray],
) -> None:
    """Write an instance file in the interchange format."""
    inst = Instance(space=space, partition=partition, functions=dict(functions))
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(inst.to_dict(), fh, indent=1, sort_keys=True)
        fh.write("\n")
