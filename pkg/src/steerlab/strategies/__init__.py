"""Strategy catalogs, trade-off envelopes and the double-violation search."""
from .catalog import MAX_ALPHA, Scenario, Settings, StrategyCase, case_catalog, is_maximal, score_settings
from .envelope import Segment, TradeoffEnvelope, build_envelope, tangent_pairs, upper_hull
from .optimize import ViolationOptimum, optimize_double_violation, optimize_scenario, pareto_front
from .weak import weak_benchmark, weak_catalog, weak_closed_form, weak_correlators, weak_scores

__all__ = [
    "MAX_ALPHA", "Scenario", "Settings", "StrategyCase", "case_catalog", "is_maximal", "score_settings",
    "Segment", "TradeoffEnvelope", "build_envelope", "tangent_pairs", "upper_hull",
    "ViolationOptimum", "optimize_double_violation", "optimize_scenario", "pareto_front",
    "weak_benchmark", "weak_catalog", "weak_closed_form", "weak_correlators", "weak_scores",
]
