"""Bound states of PT-symmetric star graphs with complex Robin vertex couplings."""

from ._core import (
    BifurcationNotFound,
    CertificationUnavailable,
    ConsistencyError,
    DegenerateConfiguration,
    StarGraphModel,
    anomalous_real_roots,
    cli,
    complex_roots,
    count_roots,
    critical_alpha,
    matching_determinant,
    real_spectrum,
    secular_closed,
    secular_sum,
)

__all__ = [
    "BifurcationNotFound",
    "CertificationUnavailable",
    "ConsistencyError",
    "DegenerateConfiguration",
    "StarGraphModel",
    "anomalous_real_roots",
    "cli",
    "complex_roots",
    "count_roots",
    "critical_alpha",
    "matching_determinant",
    "real_spectrum",
    "secular_closed",
    "secular_sum",
]
