"""Service-time inference for Mt/G/inf queues observed through queue lengths."""

from ._core import (  # noqa: F401
    AdaptiveConfig,
    AdaptiveResult,
    BandwidthInputs,
    BromwichConfig,
    DeconvKernelL,
    DistEstimate,
    ExperimentSpec,
    Grid,
    KernelSupport,
    MeanEstimate,
    MeanKernelJ,
    QueuePath,
    RateModel,
    Rng,
    ServiceModel,
    StripSide,
    TheoryContext,
    ValidationReport,
    build_queue_path,
    choose_config,
    estimate_G,
    estimate_mu,
    estimate_mu_closed_constant,
    estimate_mu_closed_highlow,
    invert,
    laplace_of_L,
    make_constant,
    make_deterministic_service,
    make_exponential,
    make_exponential_service,
    make_highlow,
    make_J,
    make_L,
    make_polynomial,
    make_sinusoidal,
    make_uniform_service,
    run,
    sample_on_grid,
    select_bandwidth_adaptive,
    simulate_arrivals,
    theoretical_b,
    theoretical_h,
    validate_assumptions,
    variance_estimate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
