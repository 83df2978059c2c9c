"""Numerical verification laboratory for the solvable vector-coherent-state
classes of the 2D and 3D harmonic oscillator.

The registry enumerates every cataloged class; the norms, moments,
resolution, convergence, and taxonomy modules certify normalizability,
the moment identities behind the partial resolution of identity, the
convergence domains, and the classification structure.
"""

from .convergence import (
    Verdict,
    class_verdict,
    comparison_check,
    gamma_ratio_surface,
    ratio_comparison_check,
    ratio_test_double,
    row_column_check,
)
from .frequencies import FrequencyConfig, kappa
from .logspace import LogValue
from .moments import (
    MeasureDensity,
    density_for,
    moment_integral,
    moment_target,
    solve_generalized,
    verify_moments,
)
from .norms import (
    NormResult,
    TermGenerator,
    TruncatedState,
    norm_closed_form,
    norm_series,
    state,
    term_generator,
)
from .registry import get, ids, registry, select
from .report import VerificationReport
from .resolution import aliasing_solutions, resolution_residual, selection_rule
from .structure import ClassSpec, TowerTerm
from .taxonomy import (
    DeformationEdge,
    class_counts,
    deformation_graph,
    enumerate_subclasses,
    landau_map,
    shift_extension,
    verify_factor,
)

__version__ = "0.1.0"
