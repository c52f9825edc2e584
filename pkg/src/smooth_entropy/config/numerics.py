import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()


class NumericsConfig(BaseModel):
    """Numeric tolerances and size caps shared by every module."""

    # Validation and spectral thresholds
    herm_tol: float = Field(1e-10, ge=0.0, description="Hermiticity / PSD / trace tolerance")
    rank_tol: float = Field(1e-10, ge=0.0, description="Support threshold relative to the largest eigenvalue")
    zero_eig: float = Field(1e-14, ge=0.0, description="Eigenvalues below this are exact zeros inside logs")

    # Size caps
    max_dim: int = Field(4096, ge=1, description="Largest admissible matrix dimension")
    sdp_max_dim_b: int = Field(64, ge=1, description="Largest conditioning dimension for the SDP")
    max_type_classes: int = Field(2_000_000, ge=1, description="Cap on tensor-power type classes")

    # Solver defaults
    sdp_tol: float = Field(1e-9, gt=0.0)
    sdp_max_iter: int = Field(200, ge=1)

    # Harness
    workers: int = Field(1, ge=1, description="Threads used to run independent trials")
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "NumericsConfig":
        """Create config from environment variables."""
        return cls(
            herm_tol=float(os.getenv("SMOOTH_ENTROPY_HERM_TOL", "1e-10")),
            rank_tol=float(os.getenv("SMOOTH_ENTROPY_RANK_TOL", "1e-10")),
            zero_eig=float(os.getenv("SMOOTH_ENTROPY_ZERO_EIG", "1e-14")),
            max_dim=int(os.getenv("SMOOTH_ENTROPY_MAX_DIM", "4096")),
            sdp_max_dim_b=int(os.getenv("SMOOTH_ENTROPY_SDP_MAX_DIM_B", "64")),
            max_type_classes=int(os.getenv("SMOOTH_ENTROPY_MAX_TYPE_CLASSES", "2000000")),
            sdp_tol=float(os.getenv("SMOOTH_ENTROPY_SDP_TOL", "1e-9")),
            sdp_max_iter=int(os.getenv("SMOOTH_ENTROPY_SDP_MAX_ITER", "200")),
            workers=int(os.getenv("SMOOTH_ENTROPY_WORKERS", "1")),
            log_level=os.getenv("SMOOTH_ENTROPY_LOG_LEVEL", "INFO"),
        )


# Global config instance
config = NumericsConfig.from_env()
