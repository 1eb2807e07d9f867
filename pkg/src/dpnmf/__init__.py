"""Robust NMF with outlier modeling, a differentially-private variant and
Renyi-DP accounting of its privacy spend."""

from .accountant import (
    PrivacySpend,
    RdpCurve,
    compose,
    overall_epsilon,
    rdp_gaussian,
    to_dp,
)
from .data_io import (
    CorpusCounts,
    DataError,
    contaminate,
    load_coordinate,
    load_dense_csv,
    normalize_columns,
    save_dense_csv,
    synth_lowrank,
    tfidf,
)
from .federation import run_protocol
from .init import init_outliers, nndsvd
from .matrix_core import (
    Hyperparams,
    loss,
    project_nonneg,
    project_unit_ball_columns,
    soft_threshold,
)
from .metrics import masked_rmse, objective_value, top_k_terms
from .privacy import (
    PrivacyParams,
    fit_dp,
    gaussian_sigma,
    perturb_statistics,
    sensitivity_a,
    sensitivity_b,
)
from .solver import (
    NumericalError,
    Statistics,
    fit,
    grad_h,
    grad_w,
    lipschitz_step_sizes,
    statistics,
    update_h,
    update_r,
    update_w,
)

__version__ = "0.1.0"
