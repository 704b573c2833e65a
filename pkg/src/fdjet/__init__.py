"""Exact arithmetic for jets of formal diffeomorphisms of (C^n, 0) over Q."""
from .errors import JetError
from .groupdim import (
    EigenvalueSpec,
    cyclic_dim,
    codim_at,
    dim_stabilization_probe,
    lie_closure,
    one_param_dim,
    product_dim_bound,
    relation_lattice,
    semisimple_closure_dim,
    series_profile,
    unipotent_group_dim_at,
)
from .intersection import IdealSpec, jet_quotient_dim, multiplicity, pullback_ideal
from .jets import (
    JetMatrix,
    VectorFieldJet,
    exp_vf,
    log_map,
    matrix_of,
    matrix_to_map,
    parse_vector_field,
    power_t,
    vf_apply,
    vf_bracket,
)
from .jordan import JordanPair, additive_jordan, is_semisimple_at, is_unipotent, multiplicative_jordan
from .orbits import (
    GroupPresentation,
    arnold_sequence,
    boundedness_verdict,
    enumerate_words,
    orbit_multiplicity_sweep,
)
from .parsing import format_map, format_series, parse_map, parse_polynomial, parse_series
from .series import (
    DiffeoJet,
    TruncatedSeries,
    commutator,
    map_compose,
    map_inverse,
    map_power,
    project,
    ts_add,
    ts_mul,
    ts_substitute,
)

__version__ = "0.1.0"
