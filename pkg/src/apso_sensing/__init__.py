"""Fusion-weight optimization for cooperative spectrum sensing with PSO and A-APSO."""
from .experiment import ExperimentConfig, ExperimentResult, Variant, interpolate, \
    run_experiment, swarm_size_sweep
from .gaussian import q, q_inv, sample_gaussian
from .sensing import DetectionTrialRecord, QuadraticCoefficients, SensingScenario, \
    build_scenario, coefficients, detection_probability, detection_trial, fitness, \
    objective, reference_scenario, simulate_detection, threshold
from .swarm import OptimizationTrace, Particle, SwarmConfig, SwarmState, acceleration, \
    init_swarm, run, step_apso, step_pso

__version__ = "0.1.0"
