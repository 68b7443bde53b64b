from .distribution import BinaryKLQuery, DiscreteDistribution
from .query import TailQuery, MultiplicativeQuery, BoundResult
from .oracle_specs import (
    BinomialSpec,
    UrnSpec,
    JointDistribution,
    HypergeometricClaimsReport,
    NegativeCorrelationReport,
    Lemma1Report,
    WeakBoundPipelineReport,
)
from .selector import ScoreMatrix, SelectorDistribution, EncodingScheme, StabilityReport, AccuracyReport
from .suite import SuiteOptions, SuiteReport
from .simulation import (
    IidModel,
    HeterogeneousModel,
    UrnModel,
    SimulationSpec,
    EmpiricalTail,
    ScorecardRow,
)

__all__ = [
    "BinaryKLQuery", "DiscreteDistribution",
    "TailQuery", "MultiplicativeQuery", "BoundResult",
    "BinomialSpec", "UrnSpec", "JointDistribution",
    "HypergeometricClaimsReport", "NegativeCorrelationReport", "Lemma1Report", "WeakBoundPipelineReport",
    "ScoreMatrix", "SelectorDistribution", "EncodingScheme", "StabilityReport", "AccuracyReport",
    "IidModel", "HeterogeneousModel", "UrnModel", "SimulationSpec", "EmpiricalTail", "ScorecardRow",
    "SuiteOptions", "SuiteReport",
]
