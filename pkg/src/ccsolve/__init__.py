"""Direct solver for degenerate and ill-posed linear systems with
tridiagonal or upper-bidiagonal matrices, an orthogonal-reduction pipeline
for dense systems, textbook reference solvers, and a benchmark harness.
"""

from .bench import (
    AggregateRow,
    BenchRecord,
    PROFILES,
    Profile,
    SolverOptions,
    aggregate,
    emit_report,
    error_metrics,
    parse_report,
    run_suite,
)
from .bidiagonal import (
    CCBidiagonalSolution,
    pseudo_inverse_bidiagonal,
    residual_bound_bidiagonal,
    solve_cc_bidiagonal,
)
from .matrices import (
    BidiagonalMatrix,
    DEFAULT_PRECISION,
    DenseMatrix,
    Matrix,
    Precision,
    TridiagonalMatrix,
    condition_number,
    dense_array,
    frobenius_norm,
    matvec,
    norm_inf,
    to_dense,
)
from .minors import (
    BlockInverse,
    RegularizedBlocks,
    StructureElements,
    block_inverse,
    coupled_diagonal,
    g_sequence,
    lambda_sequence,
    regularized_blocks,
    structure_elements,
)
from .reduction import (
    DenseSolveDiagnostics,
    ReductionResult,
    backmap,
    reduce_general,
    reduce_symmetric,
    reduction_error_budget,
    solve_dense,
)
from .reference import (
    SolverOutcome,
    solve_gauss,
    solve_qr,
    solve_svd_truncated,
    solve_tikhonov,
)
from .systems import (
    Regime,
    TestSystem,
    classify,
    generate_system,
    perturb_solution,
)
from .textio import (
    ParseError,
    matrix_to_text,
    parse_matrix,
    parse_vector,
    read_matrix,
    read_vector,
    vector_to_text,
    write_matrix,
    write_vector,
)
from .tridiagonal import (
    BlockPartition,
    CCSolution,
    ErrorBudget,
    ResidualBound,
    SolveFlags,
    probe_discrepancy,
    pseudo_inverse_tridiagonal,
    residual_bound,
    rounding_budget,
    separation_probe,
    solve_cc_tridiagonal,
)

__version__ = "0.1.0"
