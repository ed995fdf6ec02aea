"""Exact computations with bigraded modules over Q[x_1..x_m, t_1..t_d].

Gröbner bases and free resolutions, Ext and graded duals, local cohomology
along ``t = 0`` through Čech complexes, and the graded de Rham complex,
together with per-bidegree verification reports.
"""
from .cech import (
    LocalCohomologyTable,
    NonStabilizedError,
    gamma_star,
    local_cohomology,
    local_cohomology_table,
    slice_dims,
    verify_prop1,
)
from .derham import (
    DRComplex,
    PreconditionError,
    compute_m_bound,
    dr_cohomology,
    dr_complex,
    e1_table,
    verify_der3,
    verify_der4_euler,
    verify_final_prop,
)
from .fileio import ModuleFileError, dump_module, load_module, parse_module
from .groebner import (
    MonomialOrder,
    buchberger,
    free_resolution,
    minimalize,
    prune_presentation,
    syzygy_module,
)
from .homology import (
    NotCohenMacaulayError,
    OmegaS,
    ResolutionTooShortError,
    cm_check,
    cm_dual,
    ext_dim,
    ext_S,
    graded_dual,
    graded_dual_dim,
    minimal_resolution,
    selfdual_scan,
)
from .linalg import QQ
from .modules import (
    BigradedPresentation,
    FreeBigradedModule,
    ModuleMap,
    cyclic,
    direct_sum,
    free,
    from_polynomials,
    hilbert_table,
    make_presentation,
    reverse,
    shift,
    t_slice,
    zero_module,
)
from .polyio import PolynomialSyntaxError, parse_polynomial
from .report import CheckRecord, VerificationReport
from .rings import BiDegree, Polynomial, Ring

__version__ = "0.1.0"
