from enum import Enum

DEFAULT_TOL_CONV = 1e-9
DEFAULT_MAX_DEPTH = 24

DIAGNOSTICS_HEADER = ("depth", "mesh", "points", "successive_gap_H", "gap_to_oracle_H")


class Side(Enum):
    """Right integral sums f(t_{k-1}) dX(t_k); left integral sums dX(t_k) f(t_{k-1})"""

    RIGHT = "right"
    LEFT = "left"
