"""Sequential sharing of steering and Bell nonlocality between one Alice and
two observers on the other side, with projective or weak middle measurements."""
from .angles import format_angle, parse_angle
from .channels import (MeasurementAction, PointerModel, WeakAction, bob_channel, correlator_ab, correlator_ac,
                       joint_distribution, joint_probability, projector, weak_channel)
from .core import Observable, dagger, is_hermitian, is_psd, is_unitary, pauli, rot_y, tensor
from .states import DensityMatrix, max_entangled, partial_entangled
from .strategies import (Scenario, StrategyCase, TradeoffEnvelope, ViolationOptimum, build_envelope, case_catalog,
                         optimize_double_violation, optimize_scenario, tangent_pairs, weak_benchmark)
from .witnesses import (SettingPair, WitnessKind, WitnessScore, best_pair_mix, chsh_parameter, mixed_scores,
                        optimal_partner, steering_parameter, witness)

__version__ = "0.1.0"

__all__ = [
    "format_angle", "parse_angle",
    "MeasurementAction", "PointerModel", "WeakAction", "bob_channel", "correlator_ab", "correlator_ac",
    "joint_distribution", "joint_probability", "projector", "weak_channel",
    "Observable", "dagger", "is_hermitian", "is_psd", "is_unitary", "pauli", "rot_y", "tensor",
    "DensityMatrix", "max_entangled", "partial_entangled",
    "Scenario", "StrategyCase", "TradeoffEnvelope", "ViolationOptimum", "build_envelope", "case_catalog",
    "optimize_double_violation", "optimize_scenario", "tangent_pairs", "weak_benchmark",
    "SettingPair", "WitnessKind", "WitnessScore", "best_pair_mix", "chsh_parameter", "mixed_scores",
    "optimal_partner", "steering_parameter", "witness",
]
