"""Multiplicities of integers in the Stirling triangles, the Lambert-W bound on
them, and searches for factorials that are polygonal numbers."""

from .bounds import BoundEvaluation, asymptotic_comparator, lambert_w0, singmaster_bound
from .combinatorics import (
    StirlingKind,
    TriangleRow,
    assoc_stirling1,
    assoc_stirling2,
    binomial,
    central_assoc_closed_form,
    iter_rows,
    stirling,
    stirling1,
    stirling2,
    stirling2_near_diagonal,
    stirling_row,
    verify_identity,
)
from .diophantine import (
    Disposition,
    SieveOutcome,
    SieveReport,
    SolutionTriple,
    integer_sqrt_exact,
    k4_special,
    polygonal,
    ramanujan_nagell,
    sieve_polygonal,
    solve_diof1,
    solve_diof2,
    solve_polygonal_direct,
    verify_witness,
)
from .modular import PrimeSet, legendre, mod_pow, primes_above
from .multiplicity import (
    InfiniteMultiplicityError,
    MultiplicityReport,
    Occurrence,
    ScanSummary,
    find_collisions,
    minimal_central_index,
    multiplicity,
    row_limit,
    scan_interval,
)

__version__ = "0.1.0"
