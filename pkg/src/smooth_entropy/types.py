from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, ValidationInfo, field_validator

# --- Enums ---

class TraceClass(str, Enum):
    """Trace classification of a density operator."""
    NORMALIZED = "normalized"
    SUBNORMALIZED = "subnormalized"

class DistanceKind(str, Enum):
    """Which closeness measure a DistanceValue carries."""
    FIDELITY = "fidelity"
    GENERALIZED_FIDELITY = "generalized_fidelity"
    PURIFIED_DISTANCE = "purified_distance"
    TRACE_DISTANCE = "trace_distance"

class EntropyMeasure(str, Enum):
    """Unsmoothed entropy functionals."""
    VN = "vn"
    COND_VN = "cond_vn"
    RELATIVE = "relative"
    RENYI_ALPHA = "renyi_alpha"
    H0 = "h0"
    HMIN = "hmin"

class SmoothMeasure(str, Enum):
    """Entropies that admit an epsilon-smoothed variant."""
    HMIN = "hmin"
    H0 = "h0"

class TruncationDirection(str, Enum):
    """Which end of a spectrum loses weight during smoothing."""
    CUT_LARGE = "cut_large"
    CUT_SMALL = "cut_small"

class SdpStatus(str, Enum):
    """Termination status of the interior-point solver."""
    OPTIMAL = "optimal"
    MAX_ITER = "max_iter"
    INFEASIBLE_NUMERICS = "infeasible_numerics"

# --- Value Models ---

class DistanceValue(BaseModel):
    """A fidelity or distance, clamped to [0, 1]."""
    kind: DistanceKind
    value: float = Field(..., ge=0.0, le=1.0, description="Clamped value")
    raw: float = Field(..., description="Unclamped value, kept for tolerance forensics")

    @classmethod
    def clamped(cls, kind: DistanceKind, raw: float) -> "DistanceValue":
        return cls(kind=kind, value=min(max(float(raw), 0.0), 1.0), raw=float(raw))

    def __float__(self) -> float:
        return self.value

class EntropyValue(BaseModel):
    """An entropy in bits."""
    measure: EntropyMeasure
    value: float = Field(..., description="Entropy in bits")
    alpha: Optional[float] = Field(None, validate_default=True, description="Order, only for renyi_alpha")

    @field_validator("alpha")
    @classmethod
    def alpha_only_for_renyi(cls, v: Optional[float], info: ValidationInfo) -> Optional[float]:
        measure = info.data.get("measure")
        if v is not None and measure != EntropyMeasure.RENYI_ALPHA:
            raise ValueError("alpha is only meaningful for renyi_alpha")
        if v is None and measure == EntropyMeasure.RENYI_ALPHA:
            raise ValueError("renyi_alpha requires alpha")
        return v

    def __float__(self) -> float:
        return self.value
