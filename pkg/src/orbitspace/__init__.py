"""Orbit spaces of compact linear groups with commutative identity component."""

from .classify import Report, UnknownReason, Verdict, decide
from .fileformat import load_instance, load_point
from .groupmodel import ComponentElement, GroupSpec, TorusCosetElement, validate_spec
from .stabilizer import PointSpec, SamplingPlan
from .weights import WeightMultiset, decompose, is_q_stable, sign_normalize

__all__ = [
    "ComponentElement", "GroupSpec", "PointSpec", "Report", "SamplingPlan", "TorusCosetElement", "UnknownReason",
    "Verdict", "WeightMultiset", "decide", "decompose", "is_q_stable", "load_instance", "load_point",
    "sign_normalize", "validate_spec",
]
