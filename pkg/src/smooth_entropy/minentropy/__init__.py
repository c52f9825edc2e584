from .conditional import CertificateReport, hmin_conditional, verify_certificate
from .sdp import InteriorPointSolver, SdpProblem, SdpSolution, hermitian_basis, sdp_solve

__all__ = [
    "CertificateReport",
    "InteriorPointSolver",
    "SdpProblem",
    "SdpSolution",
    "hermitian_basis",
    "hmin_conditional",
    "sdp_solve",
    "verify_certificate",
]
