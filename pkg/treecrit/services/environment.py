"""
Environment service: config parsing, moments and label sampling.

Configs are UTF-8 JSON. Every failure is raised as a ConfigParseError
subclass naming the offending field, e.g. ``entries[2][1].sigma``.
"""

import json
from pathlib import Path
from typing import Any, Dict, Mapping, Sequence, Type, Union

import numpy as np
from pydantic import ValidationError

from ..core.exceptions import (
    ConfigParseError,
    DomainError,
    InvalidBranchingError,
    MissingEntryError,
    NonPositiveSupportError,
    ProbabilitySumError,
    SchemaViolationError,
    UnknownFamilyError,
)
from ..core.logging import get_logger
from ..distributions import LabelDistribution, get_registry
from ..models.brw import BrwSpec
from ..models.environment import EnvSpec, MomentMatrix, RegularityReport, SiblingMode
from ..models.rwre import RwreSpec

logger = get_logger(__name__)

ConfigSource = Union[str, bytes, Mapping[str, Any]]

ENV_KEYS = {"b", "root_color", "sibling_mode", "entries", "rwre"}
BRW_KEYS = {"b", "start_type", "steps"}

# pydantic error type -> parse error class
_ERROR_TYPES: Dict[str, Type[ConfigParseError]] = {
    "non_positive_support": NonPositiveSupportError,
    "probability_sum": ProbabilitySumError,
}


def _field_path(prefix: str, loc: Sequence[Union[str, int]]) -> str:
    path = prefix
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path


def _raise_validation(exc: ValidationError, prefix: str) -> None:
    err = exc.errors()[0]
    field = _field_path(prefix, err.get("loc", ()))
    message = f"{field}: {err.get('msg', 'invalid value')}"
    error_class = _ERROR_TYPES.get(str(err.get("type")), SchemaViolationError)
    raise error_class(message, field=field) from exc


def _load_mapping(source: ConfigSource) -> Dict[str, Any]:
    if isinstance(source, (str, bytes)):
        try:
            data = json.loads(source)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise SchemaViolationError(f"config is not valid JSON: {e}") from e
    else:
        data = dict(source)
    if not isinstance(data, dict):
        raise SchemaViolationError("config must be a JSON object")
    return data


def _parse_b(data: Mapping[str, Any]) -> int:
    if "b" not in data:
        raise SchemaViolationError("missing required field 'b'", field="b")
    b = data["b"]
    if isinstance(b, bool) or not isinstance(b, int) or b < 2:
        raise InvalidBranchingError(b)
    return b


def _parse_colour(data: Mapping[str, Any], key: str, b: int) -> int:
    value = data.get(key, 1)
    if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= b:
        raise SchemaViolationError(f"{key} must be an integer in 1..{b}, got {value!r}", field=key)
    return value


def _grid_cell(grid: Any, i: int, j: int) -> Any:
    """Cell (i, j), 1-based, or None when the grid has a hole there."""
    if not isinstance(grid, list) or len(grid) < i:
        return None
    row = grid[i - 1]
    if not isinstance(row, list) or len(row) < j:
        return None
    return row[j - 1]


def _check_grid(grid: Any, b: int, name: str) -> None:
    if not isinstance(grid, list):
        raise SchemaViolationError(f"{name} must be a {b}x{b} array", field=name)
    for i in range(1, b + 1):
        for j in range(1, b + 1):
            if _grid_cell(grid, i, j) is None:
                raise MissingEntryError(i, j)
    if len(grid) > b or any(isinstance(row, list) and len(row) > b for row in grid):
        raise SchemaViolationError(f"{name} has more than {b} rows or columns", field=name)


def parse_distribution(payload: Any, field: str) -> LabelDistribution:
    """Build one label law from a ``{"kind": ..., **params}`` object."""
    registry = get_registry()
    if not isinstance(payload, dict):
        raise SchemaViolationError(f"{field} must be an object with a 'kind'", field=field)
    kind = payload.get("kind")
    if not isinstance(kind, str):
        raise SchemaViolationError(f"{field}.kind is required", field=f"{field}.kind")
    if registry.get(kind) is None:
        raise UnknownFamilyError(kind, field=f"{field}.kind", known=registry.kinds())
    try:
        return registry.build(payload)
    except ValidationError as e:
        _raise_validation(e, field)
        raise  # unreachable


def parse_env(config: ConfigSource) -> EnvSpec:
    """
    Parse and validate an environment config.

    Raises:
        ConfigParseError: Subclass naming the offending field
    """
    data = _load_mapping(config)
    unknown = sorted(set(data) - ENV_KEYS)
    if unknown:
        raise SchemaViolationError(f"unknown top-level field {unknown[0]!r}", field=unknown[0])

    b = _parse_b(data)
    root_color = _parse_colour(data, "root_color", b)
    try:
        mode = SiblingMode(data.get("sibling_mode", SiblingMode.INDEPENDENT.value))
    except ValueError as e:
        raise SchemaViolationError(
            f"sibling_mode must be one of {[m.value for m in SiblingMode]}", field="sibling_mode"
        ) from e

    if mode is SiblingMode.RWRE_JOINT:
        env = _parse_rwre_env(data, b, root_color)
    else:
        if "rwre" in data:
            raise SchemaViolationError(
                "'rwre' is only allowed with sibling_mode 'rwre_joint'", field="rwre"
            )
        if "entries" not in data:
            raise SchemaViolationError("missing required field 'entries'", field="entries")
        grid = data["entries"]
        _check_grid(grid, b, "entries")
        entries = tuple(
            tuple(
                parse_distribution(_grid_cell(grid, i, j), f"entries[{i}][{j}]")
                for j in range(1, b + 1)
            )
            for i in range(1, b + 1)
        )
        env = EnvSpec(b=b, entries=entries, sibling_mode=mode, root_color=root_color)

    logger.debug(
        "env_parsed",
        b=env.b,
        sibling_mode=env.sibling_mode.value,
        regular=env.regularity.all_passed,
    )
    return env


def _parse_rwre_env(data: Mapping[str, Any], b: int, root_color: int) -> EnvSpec:
    if "entries" in data:
        raise SchemaViolationError(
            "rwre_joint environments derive their entries from the 'rwre' block", field="entries"
        )
    block = data.get("rwre")
    if not isinstance(block, dict):
        raise SchemaViolationError("rwre_joint needs an 'rwre' object", field="rwre")
    for key in ("b", "root_color"):
        if key in block:
            raise SchemaViolationError(f"set {key} at the top level, not in 'rwre'", field=f"rwre.{key}")
    try:
        spec = RwreSpec.model_validate({**block, "b": b, "root_color": root_color})
    except ValidationError as e:
        _raise_validation(e, "rwre")
        raise
    return env_from_rwre(spec)


def env_from_rwre(spec: RwreSpec) -> EnvSpec:
    """Environment whose row-i joint law is the ratio vector of p(u), c(u) = i."""
    return EnvSpec(
        b=spec.b,
        entries=spec.ratio_marginals(),
        sibling_mode=SiblingMode.RWRE_JOINT,
        root_color=spec.root_color,
        rwre=spec,
    )


def parse_brw(config: ConfigSource) -> BrwSpec:
    """Parse a branching-random-walk step-law config."""
    data = _load_mapping(config)
    unknown = sorted(set(data) - BRW_KEYS)
    if unknown:
        raise SchemaViolationError(f"unknown top-level field {unknown[0]!r}", field=unknown[0])
    b = _parse_b(data)
    _parse_colour(data, "start_type", b)
    if "steps" not in data:
        raise SchemaViolationError("missing required field 'steps'", field="steps")
    _check_grid(data["steps"], b, "steps")
    try:
        return BrwSpec.model_validate(data)
    except ValidationError as e:
        _raise_validation(e, "")
        raise


def _read_config(path: Union[str, Path]) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise ConfigParseError(f"cannot read config {path}: {e.strerror}", field=str(path)) from e


def load_env(path: Union[str, Path]) -> EnvSpec:
    return parse_env(_read_config(path))


def load_brw(path: Union[str, Path]) -> BrwSpec:
    return parse_brw(_read_config(path))


def moment(dist: LabelDistribution, s: float) -> float:
    """E[xi^s] for one label law."""
    return dist.moment(s)


def moment_matrix(env: EnvSpec, s: float) -> MomentMatrix:
    """
    m(s), entry (i, j) = E[xi_ij^s].

    Raises:
        DomainError: Tagged with the first (i, j) whose domain excludes s
    """
    log_values = np.empty((env.b, env.b))
    for i, j, dist in env.iter_entries():
        try:
            log_values[i - 1, j - 1] = dist.log_moment(s)
        except DomainError as e:
            raise e.tagged(i, j) from e
    return MomentMatrix(s=s, log_values=log_values)


def _check_colours(env: EnvSpec, colours: np.ndarray) -> None:
    if colours.size and (colours.min() < 1 or colours.max() > env.b):
        raise DomainError(f"parent colours must lie in 1..{env.b}")


def _draw_rows(
    env: EnvSpec, parent_colours: np.ndarray, rng: np.random.Generator, log: bool
) -> np.ndarray:
    colours = np.asarray(parent_colours, dtype=np.int64)
    _check_colours(env, colours)
    out = np.empty((colours.size, env.b))
    for i in range(1, env.b + 1):
        mask = colours == i
        n = int(mask.sum())
        if n == 0:
            continue
        if env.sibling_mode is SiblingMode.RWRE_JOINT and env.rwre is not None:
            p = env.rwre.law(i).sample(rng, n)
            if log:
                out[mask] = np.log(p[:, 1:]) - np.log(p[:, :1])
            else:
                out[mask] = p[:, 1:] / p[:, :1]
        else:
            for j in range(1, env.b + 1):
                dist = env.entry(i, j)
                out[mask, j - 1] = dist.sample_log(rng, n) if log else dist.sample(rng, n)
    return out


def sample_rows(env: EnvSpec, parent_colours: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Labels below each parent: row k, column j is xi on the edge from a
    parent of colour ``parent_colours[k]`` to its colour-(j+1) child.

    Draw order is fixed (parent colour, then child colour), so results are
    a deterministic function of the generator state.
    """
    return _draw_rows(env, parent_colours, rng, log=False)


def sample_log_rows(
    env: EnvSpec, parent_colours: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """As :func:`sample_rows`, returning log xi."""
    return _draw_rows(env, parent_colours, rng, log=True)


def sample_row(env: EnvSpec, parent_color: int, rng: np.random.Generator) -> np.ndarray:
    """The b child-edge labels (xi_i1, ..., xi_ib) below one parent of colour i."""
    return sample_rows(env, np.array([parent_color]), rng)[0]


def check_regularity(env: EnvSpec) -> RegularityReport:
    return env.regularity
