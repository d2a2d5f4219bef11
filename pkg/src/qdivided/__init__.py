"""Exact arithmetic for q-divided powers, modules with q-connections, and the
mod-ell cohomology of finite general linear groups."""
from .dalg import DElement, d_derive, d_mul, taylor_expand, to_y_basis, x
from .dmod import FPModule, epsilon_lambda, hilbert, predict_period
from .qarith import QContext, b_value, fl, q_binomial

__version__ = "0.1.0"

__all__ = [
    "QContext",
    "q_binomial",
    "b_value",
    "fl",
    "DElement",
    "x",
    "d_mul",
    "d_derive",
    "taylor_expand",
    "to_y_basis",
    "FPModule",
    "hilbert",
    "epsilon_lambda",
    "predict_period",
]
