"""Specializations of consistent aggregation.

* :mod:`.kernel` -- Nadaraya-Watson smoothing as similarity-weighted pooling.
* :mod:`.pooling` -- experts with multiplicities, and timestamped experts
  under exponential discounting (with discount recovery).
* :mod:`.voting` -- individualistic weighted voting over reported priors.
"""

from .kernel import KernelSpec, TabulatedShape, check_symmetric_similarity, kernel_weights, nw_smooth
from .pooling import (
    DiscountReport,
    TimedRuleTable,
    aggregate_timed,
    aggregate_with_multiplicity,
    recover_discount,
    time_shift,
)
from .voting import vote

__all__ = [
    "DiscountReport",
    "KernelSpec",
    "TabulatedShape",
    "TimedRuleTable",
    "aggregate_timed",
    "aggregate_with_multiplicity",
    "check_symmetric_similarity",
    "kernel_weights",
    "nw_smooth",
    "recover_discount",
    "time_shift",
    "vote",
]
