from ncqsi.integration.constants import DEFAULT_MAX_DEPTH, DEFAULT_TOL_CONV, DIAGNOSTICS_HEADER, Side
from ncqsi.integration.integrate import (
    CauchyGap,
    DiagnosticRow,
    IntegralResult,
    cauchy_pair_gap,
    commutant_action,
    h_gap,
    integral_process,
    integrate,
    integrate_net,
    jump_increment,
    mu_increment,
    oracle_integral,
    write_diagnostics_csv,
)
from ncqsi.integration.partition import DyadicPartition, Partition
from ncqsi.integration.sums import left_sum, right_sum, sigma_operator
