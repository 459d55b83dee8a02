"""Discrete-time quantum walks on graphs: operators, spectra and search.

Four walks are covered: the Grover walk, the Szegedy walk of a weighted
bipartite graph, the staggered walk on the line graph of a bipartite graph,
and the modified Szegedy walk used for search. Spectra are computed both by
direct eigendecomposition and by lifting the eigenvalues of a small Hermitian
discriminant matrix.
"""

from .errors import InconsistencyError, NumericalError, ParseError, QwalkError, ValidationError
from .graphs import (
    BipartiteGraph,
    EdgeWeighting,
    Multigraph,
    SearchInstance,
    adjacency_matrix,
    arcs,
    build_search_instance,
    duplication,
    line_graph,
    parse_bipartite,
    parse_graph,
    random_walk_matrix,
)
from .operators import (
    AmplitudeAssignment,
    Discriminant,
    WalkOperator,
    grover_matrix,
    search_operators,
    sqw_operators,
    szegedy_isometries,
    szegedy_walk,
)
from .search import HittingReport, StateVector, initial_state, quantum_hitting_time
from .spectra import (
    SpectrumReport,
    grover_spectrum,
    lift_spectrum,
    positive_support_spectrum,
    search_spectrum,
    sqw_spectrum,
    szegedy_spectrum,
)

__version__ = "0.1.0"
