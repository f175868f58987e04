"""Simplicial-cluster latent partitions and optimal mode-blending generators.

The package builds Voronoi partitions of Gaussian latent space from
equidistant-point frames (or optimized direction sets when the mode
count exceeds the dimension), the blended generator that memorizes mode
centers away from cell boundaries, and the measurement stack around
them: seeded Monte Carlo Gaussian measures, support precision/recall,
k-NN density and coverage, the equilibrium divergence, closed-form
precision bounds, and latent-geometry probes.
"""

from ._backend import BACKEND
from .bounds import (BoundReport, SandwichReport, hyperplane_count,
                     precision_lower_bound, precision_upper_bound,
                     precision_upper_bound_asymptotic, sandwich_check)
from .errors import ConfigError, ConvergenceError, IngestError
from .frames import SimplexFrame, directions_frame, equidistant_points
from .generator import (GeneratorStar, ModeSet, active_set,
                        epsilon_max, epsilon_min, extension_distance,
                        generate, generate_batch, lipschitz_probe)
from .geometry import (cell_index, in_epsilon_boundary, margin,
                       margins_to_all_cells, project_onto_cell)
from .measure import boundary_measure, cell_measures, gaussian_measure
from .metrics import (EquilibriumResult, SampleSet, coverage,
                      coverage_convergence, coverage_schedule_k, density,
                      equilibrium, knn_radii, precision_support,
                      recall_support)
from .optimize import (SweepRow, dimension_sweep, memorization_rate,
                       optimize_directions, partition_objective, sweep_modes)
from .probes import (LabeledLatentSet, LinearModel, convexity_probe,
                     label_latents, nearest_mode_labeler, train_logreg)
from .stats import MeasureEstimate, normal_cdf, wilson_interval

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BoundReport", "ConfigError", "ConvergenceError",
    "EquilibriumResult", "GeneratorStar", "IngestError", "LabeledLatentSet",
    "LinearModel", "MeasureEstimate", "ModeSet", "SampleSet", "SandwichReport",
    "SimplexFrame", "SweepRow", "active_set", "boundary_measure",
    "cell_index", "cell_measures", "convexity_probe", "coverage",
    "coverage_convergence", "coverage_schedule_k", "density",
    "dimension_sweep", "directions_frame", "equidistant_points",
    "equilibrium", "epsilon_max", "epsilon_min", "extension_distance",
    "gaussian_measure", "generate", "generate_batch", "hyperplane_count",
    "in_epsilon_boundary", "knn_radii", "label_latents", "lipschitz_probe",
    "margin", "margins_to_all_cells", "memorization_rate", "nearest_mode_labeler",
    "normal_cdf", "optimize_directions", "partition_objective",
    "precision_lower_bound", "precision_support", "precision_upper_bound",
    "precision_upper_bound_asymptotic", "project_onto_cell", "recall_support",
    "sandwich_check", "sweep_modes", "train_logreg", "wilson_interval",
]
