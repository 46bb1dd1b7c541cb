"""One-pass conflict estimators and the random-order separation tester."""

from .config import FAR, NOT_APPLICABLE, VALID, EstimatorConfig, EstimatorReport
from .exact import ea_count
from .separation import varand_separate
from .va import VaEstimator, two_pass_va_estimate, va_estimate
from .vadeg import FutureSampler, VaDegEstimator, vadeg_estimate, vadeg_estimate_known_m
from .varand import VaRandEstimator, bucket_count, bucket_index, varand_estimate

__all__ = [
    "FAR", "NOT_APPLICABLE", "VALID", "EstimatorConfig", "EstimatorReport",
    "ea_count", "varand_separate", "VaEstimator", "two_pass_va_estimate", "va_estimate",
    "FutureSampler", "VaDegEstimator", "vadeg_estimate", "vadeg_estimate_known_m",
    "VaRandEstimator", "bucket_count", "bucket_index", "varand_estimate",
]
