from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator


class CheckSpec(BaseModel):
    """One entry of a verification suite."""
    check_id: str = Field(..., description="Registered check identifier")
    trials: int = Field(100, ge=0, description="Number of trials")
    dims: List[Tuple[int, ...]] = Field(default_factory=list, description="Subsystem-dimension tuples, cycled over trials")
    epsilons: List[float] = Field(default_factory=list, description="Smoothing parameters, cycled over trials")
    alphas: List[float] = Field(default_factory=list, description="Renyi orders, cycled over trials")
    n_values: List[int] = Field(default_factory=list, description="Copy counts for tensor-power checks")
    seed: int = Field(0, ge=0, description="Master seed; trial i uses a seed derived from (seed, i)")
    tolerance: float = Field(1e-7, ge=0.0, description="A trial passes iff slack >= -tolerance")

    @field_validator("dims")
    @classmethod
    def dims_positive(cls, v: List[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
        for dims in v:
            if not dims or any(d < 1 for d in dims):
                raise ValueError(f"Subsystem dimensions must be positive, got {dims}")
        return v

    @field_validator("epsilons")
    @classmethod
    def epsilons_in_range(cls, v: List[float]) -> List[float]:
        for eps in v:
            if not 0.0 <= eps < 1.0:
                raise ValueError(f"epsilon must lie in [0, 1), got {eps}")
        return v


class TrialRecord(BaseModel):
    """Outcome of a single trial; the claim under test reads lhs <= rhs."""
    check_id: str
    trial: int
    seed: int
    dims: Tuple[int, ...]
    epsilon: Optional[float] = None
    alpha: Optional[float] = None
    n: Optional[int] = None
    input_digest: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    bound_mode: bool = False
    details: Dict[str, float] = Field(default_factory=dict)
    state_json: Optional[str] = Field(None, description="Full input for reproduction, kept for failures")


class VerificationReport(BaseModel):
    check_id: str
    claim: str
    anchor: str
    bound_mode: bool
    negated: bool = False
    records: List[TrialRecord] = Field(default_factory=list)
    min_slack: Optional[float] = None
    failures: int = 0
    runtime_s: float = 0.0
    spec: CheckSpec

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @property
    def violations(self) -> List[TrialRecord]:
        return [r for r in self.records if not r.passed]


class SuiteReport(BaseModel):
    reports: List[VerificationReport] = Field(default_factory=list)
    total_trials: int = 0
    total_failures: int = 0
    runtime_s: float = 0.0
    config_echo: Dict[str, Any] = Field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 0 if self.total_failures == 0 else 1
