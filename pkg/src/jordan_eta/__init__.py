"""Least weak-majorization bounds for linear maps on Euclidean Jordan algebras."""

from .eja import (
    Algebra,
    ComplexHermitian,
    Element,
    JordanFrame,
    Product,
    RealSymmetric,
    Spin,
    algebra_from_dict,
    eigenvalues,
    element,
    from_matrix,
    spectral_decomposition,
)
from .eta import (
    EtaEstimate,
    SampleConfig,
    check_inequality,
    eta_estimate,
    eta_lower_sampled,
)
from .majorization import join, w_inf, w_sup, weak_majorizes
from .operators import (
    LinearOperator,
    classify_stochastic,
    make_congruence,
    make_lyapunov,
    make_quad,
    make_schur,
)

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "ComplexHermitian",
    "Element",
    "EtaEstimate",
    "JordanFrame",
    "LinearOperator",
    "Product",
    "RealSymmetric",
    "SampleConfig",
    "Spin",
    "algebra_from_dict",
    "check_inequality",
    "classify_stochastic",
    "eigenvalues",
    "element",
    "eta_estimate",
    "eta_lower_sampled",
    "from_matrix",
    "join",
    "make_congruence",
    "make_lyapunov",
    "make_quad",
    "make_schur",
    "spectral_decomposition",
    "w_inf",
    "w_sup",
    "weak_majorizes",
]
