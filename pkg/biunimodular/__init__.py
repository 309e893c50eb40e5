import logging
from importlib.metadata import version

from .api import diagnose, factor, load_source, regions, search_vector
from .blocks import (
    block2n_decompose,
    block2n_synthesize,
    dyadic_decompose,
    dyadic_synthesize,
    u4_entries,
    u4_from_phases,
    u4_params,
)
from .experiments import BenchConfig, run_bench
from .factorize import analyze, decompose, lar_decompose, support_family, synthesize
from .fourier import (
    Generator,
    autocorr_residual,
    bjorck_sequence,
    census,
    gauss_sequence,
    gn_action,
    orbit_of,
)
from .io import load_matrix, load_phase_table, load_vector, to_jsonable, write_json
from .linalg import (
    ComplexMatrix,
    ComplexVector,
    TorusVector,
    UnitaryMatrix,
    fourier_matrix,
    haar_random_unitary,
    inf_to_1_value,
    polar_decompose,
    sign1_map,
    sign_map,
)
from .lowdim import (
    euler_factor,
    u2_biuni,
    u2_from_phases,
    u2_params,
    u3_biuni_construct,
    u3_canonicalize,
    zero_corner_matrix,
)
from .manifold import (
    EPreset,
    full_rank_witness,
    im_rank,
    jacobian_rank,
    phasing_dim,
    region_grid,
    triple_point_clusters,
)
from .results import PhaseTable
from .search import (
    SearchConfig,
    certify_near,
    multi_start_search,
    predicate_report,
    refine,
    run_from,
)

logger = logging.getLogger(__name__)

__all__ = [
    # api.py
    "load_source",
    "search_vector",
    "factor",
    "diagnose",
    "regions",
    # linalg.py
    "ComplexVector",
    "TorusVector",
    "ComplexMatrix",
    "UnitaryMatrix",
    "fourier_matrix",
    "haar_random_unitary",
    "polar_decompose",
    "sign_map",
    "sign1_map",
    "inf_to_1_value",
    # search.py
    "SearchConfig",
    "run_from",
    "multi_start_search",
    "refine",
    "certify_near",
    "predicate_report",
    # factorize.py
    "PhaseTable",
    "synthesize",
    "analyze",
    "lar_decompose",
    "decompose",
    "support_family",
    # lowdim.py
    "u2_biuni",
    "u2_from_phases",
    "u2_params",
    "u3_canonicalize",
    "u3_biuni_construct",
    "euler_factor",
    "zero_corner_matrix",
    # blocks.py
    "block2n_synthesize",
    "block2n_decompose",
    "u4_from_phases",
    "u4_entries",
    "u4_params",
    "dyadic_decompose",
    "dyadic_synthesize",
    # manifold.py
    "im_rank",
    "jacobian_rank",
    "full_rank_witness",
    "phasing_dim",
    "EPreset",
    "region_grid",
    "triple_point_clusters",
    # fourier.py
    "gauss_sequence",
    "bjorck_sequence",
    "autocorr_residual",
    "Generator",
    "gn_action",
    "orbit_of",
    "census",
    # experiments.py
    "BenchConfig",
    "run_bench",
    # io.py
    "load_matrix",
    "load_vector",
    "load_phase_table",
    "to_jsonable",
    "write_json",
]

__version__ = version("biunimodular")
