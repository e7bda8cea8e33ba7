"""Chi-squared tests of homogeneity for two samples on [0, 1] with a growing number of cells."""

from .core import (
    DomainError,
    InfeasibleTarget,
    InvalidArgument,
    InvalidModel,
    Partition,
    cell_index,
    custom_partition,
    equal_partition,
    phi_eval,
)
from .decision import (
    TestReport,
    critical_value,
    gof_test,
    gof_test_counts,
    normal_cdf,
    normal_quantile,
    normal_sf,
    run_test,
)
from .density import (
    AlternativePair,
    CellDensity,
    cdf,
    density_from_config,
    density_value,
    make_alternative,
    norms,
    project_thetas,
    sample,
    sample_counts,
    uniform_density,
)
from .estimators import EstimatedScale, estimate_bias, estimate_scales
from .moments import (
    MomentReport,
    PhiMoments,
    bias_term,
    exact_mean_t1,
    exact_mean_t2,
    gof_theory,
    phi_moments,
    t1_theory,
    t2_theory,
)
from .montecarlo import (
    ExperimentConfig,
    ExperimentResult,
    consistency_sweep,
    normality_diag,
    rate_sweep,
    run_experiment,
)
from .power import PowerPrediction, power_curve, predict_beta
from .statistics import (
    TwoSampleCounts,
    Weights,
    decompose,
    population_T,
    t1_stat,
    t2_stat,
    t3_stat,
    t_stat,
    tally,
    w_term,
)

__version__ = "0.1.0"
