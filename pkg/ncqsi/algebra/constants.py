from enum import Enum

import numpy as np

# Default tolerances; suites may tighten them.
TOL_EQ = 1e-10
TOL_PSD = 1e-10

COMPLEX = np.complex128

PAULI = {
    "I": np.eye(2, dtype=COMPLEX),
    "X": np.array([[0, 1], [1, 0]], dtype=COMPLEX),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=COMPLEX),
    "Z": np.array([[1, 0], [0, -1]], dtype=COMPLEX),
}


class StateKind(Enum):
    """How the state omega is specified on the chain"""

    TRACE = "trace"
    PRODUCT_DENSITIES = "product"


class ProcessKind(Enum):
    """Process families that can be evaluated exactly on a finite chain"""

    MARTINGALE_FROM_TERMINAL = "martingale"
    MONOTONE_ADAPTED = "monotone"
    NORM_CONTINUOUS_ADAPTED = "norm_continuous"
    SPECTRAL_STEP = "spectral_step"
    CONSTANT = "constant"

