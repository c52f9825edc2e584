"""
State files: {"dims": [d1, ...], "re": [[...]], "im": [[...]]}, row-major.
"""

import logging
import math
from pathlib import Path
from typing import Any, List, Union

import numpy as np
from pydantic import BaseModel, Field, FiniteFloat, PositiveInt, ValidationError, model_validator

from smooth_entropy.config import config
from smooth_entropy.exceptions import ConfigError, SmoothEntropyException
from smooth_entropy.linalg.operators import MultipartiteState

logger = logging.getLogger(__name__)


class StateFile(BaseModel):
    """On-disk form of a multipartite state.

    Floats are written in their shortest round-trip form, so a state read
    back from its own file is bit-identical.
    """

    dims: List[PositiveInt] = Field(..., min_length=1)
    re: List[List[FiniteFloat]]
    im: List[List[FiniteFloat]]

    @model_validator(mode="after")
    def check_shape_and_trace(self) -> "StateFile":
        d = math.prod(self.dims)
        for name in ("re", "im"):
            rows = getattr(self, name)
            shape = (len(rows), len(rows[0]) if rows else 0)
            if len(rows) != d or any(len(row) != d for row in rows):
                raise ValueError(f"Field '{name}' has shape {shape}, expected {(d, d)} from dims {self.dims}")
        trace = sum(self.re[i][i] for i in range(d))
        if trace > 1.0 + config.herm_tol:
            raise ValueError(f"Fields 're'/'im' have trace {trace!r} > 1")
        return self

    @classmethod
    def from_state(cls, rho: MultipartiteState) -> "StateFile":
        m = rho.matrix
        return cls(dims=list(rho.dims), re=np.real(m).tolist(), im=np.imag(m).tolist())

    def to_state(self) -> MultipartiteState:
        m = np.array(self.re, dtype=float) + 1j * np.array(self.im, dtype=float)
        try:
            return MultipartiteState.from_matrix(m, dims=self.dims)
        except SmoothEntropyException as e:
            raise ConfigError(f"Fields 're'/'im' do not describe a valid state: {e.message}")


def _config_error(e: ValidationError, source: str) -> ConfigError:
    first = e.errors()[0]
    loc = first.get("loc", ())
    if loc:
        return ConfigError(f"{source}: invalid field '{loc[0]}': {first.get('msg')}")
    return ConfigError(f"{source}: {first.get('msg')}")


def state_to_json(rho: MultipartiteState) -> str:
    return StateFile.from_state(rho).model_dump_json() + "\n"


def state_from_dict(data: Any) -> MultipartiteState:
    try:
        model = StateFile.model_validate(data)
    except ValidationError as e:
        raise _config_error(e, "State JSON")
    return model.to_state()


def read_state(path: Union[str, Path]) -> MultipartiteState:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"State file not found: {path}")
    try:
        model = StateFile.model_validate_json(text)
    except ValidationError as e:
        if any(err.get("type") == "json_invalid" for err in e.errors()):
            raise ConfigError(f"State file {path} is not valid JSON: {e.errors()[0].get('msg')}")
        raise _config_error(e, f"State file {path}")
    rho = model.to_state()
    logger.debug(f"Read state with dims {rho.dims} from {path}")
    return rho


def write_state(rho: MultipartiteState, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(state_to_json(rho), encoding="utf-8")
    logger.debug(f"Wrote state with dims {rho.dims} to {path}")
