"""Numerical toolkit for the Fourier uncertainty functional of averaging kernels.

Hot quadrature and series kernels come from a compiled extension when it is
built, otherwise from a numpy implementation; see ``backend_name()``.
"""
from ._backend import available as available_backends
from ._backend import name as backend_name
from ._backend import use as use_backend
from .functional import compare_crossover, invariance_audit, smoothing_bound, uncertainty
from .hypergeom import a_k_closed, a_k_hyper, a_k_quadrature, certify, eval_1F2
from .kernel import KernelSpec, ScaleTransform, apply_scale, l1_norm, moment, parse_kernel
from .spectral import fourier, weighted_sup
from .whittaker import EvenPerturbation, max_hat, stability_verify, sum_identities

__version__ = "0.1.0"

__all__ = [
    "KernelSpec",
    "ScaleTransform",
    "EvenPerturbation",
    "a_k_closed",
    "a_k_hyper",
    "a_k_quadrature",
    "apply_scale",
    "available_backends",
    "backend_name",
    "certify",
    "compare_crossover",
    "eval_1F2",
    "fourier",
    "invariance_audit",
    "l1_norm",
    "max_hat",
    "moment",
    "parse_kernel",
    "smoothing_bound",
    "stability_verify",
    "sum_identities",
    "uncertainty",
    "use_backend",
    "weighted_sup",
]
