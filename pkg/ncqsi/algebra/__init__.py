from ncqsi.algebra.chain import (
    ChainShape,
    Element,
    embed_factor,
    embed_head,
    matrix_from_json,
    matrix_to_json,
    operator_norm,
    psd_check,
)
from ncqsi.algebra.filtration import Filtration, FiltrationSchedule, GnsSpace, build_filtration
from ncqsi.algebra.process import (
    Constant,
    Increment,
    MartingaleFromTerminal,
    MonotoneAdapted,
    NormContinuousAdapted,
    Process,
    SpectralStep,
    Term,
    certify,
    modulus_delta,
)
from ncqsi.algebra.ramps import RampTable
from ncqsi.algebra.state import ChainModel, StateSpec, gns_inner, gns_norm, l2_norm, state_value
