"""Stored-light beam splitter simulator.

Transfer matrices for storage/release control fields, closed-form photon
counting, quadrature and homodyne statistics, and the brute-force oracles
that check them.
"""

from ._core import (  # noqa: F401
    BasisError,
    CapacityError,
    Channel,
    ConfigError,
    DomainError,
    Error,
    FockInput,
    GramMatrix,
    HomodyneConfig,
    IoError,
    NormalizationError,
    ProbeTreatment,
    QuadratureStats,
    SqueezedInput,
    StageAngles,
    TransferMatrix,
    UndefinedRatioError,
    balanced_variance,
    build_transfer_matrix,
    fano_factor,
    gaussian_oracle,
    general_variance,
    gram_from_packets,
    homodyne_oracle,
    magnetic_phase_matrix,
    mean_release_count,
    oracle_distribution,
    oracle_moments,
    release_distribution_s1,
    release_variance,
    released_quadratures,
    run_experiment,
    run_figure,
    uncertainty_product,
)

__all__ = [name for name in dir() if not name.startswith("_")]
