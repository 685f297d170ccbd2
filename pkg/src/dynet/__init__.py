"""dynet: event-driven simulation and analytics for dynamic random graphs.

The package covers three related model families: Erdos-Renyi graphs whose
edges flip on and off as independent telegraph processes, SI contagion
spreading over such graphs, and node-turnover models (Poisson birth/death
Erdos-Renyi and preferential attachment with node removal), together with
the closed-form laws, bounds and asymptotics that the simulators are
verified against.

The most used names are re-exported here; the submodules stay importable
directly (``dynet.analytics``, ``dynet.scenarios``, ...) for the rest.
"""

from .core_model import (
    DegenerateParametersError,
    EdgeParams,
    GraphSnapshot,
    edge_on_probability,
    sample_edge_trajectory,
    sample_stationary_graph,
)
from .simulator import (
    ResourceCapError,
    SiTrajectory,
    connectivity_time,
    simulate_dynamic_graph,
    simulate_si,
)
from .turnover import (
    DegreeHistogram,
    ExponentialLifespan,
    FifoLifespan,
    HazardGamma,
    calibrate_hazard,
    predicted_degree_density,
    simulate_pa_turnover,
    simulate_turnover_er,
)
from .stats import SampleSet, fit_power_law, mean_ci
from .scenarios import ConfigError, load_config, run_scenario

__version__ = "0.1.0"

__all__ = [
    "DegenerateParametersError", "EdgeParams", "GraphSnapshot",
    "edge_on_probability", "sample_edge_trajectory", "sample_stationary_graph",
    "ResourceCapError", "SiTrajectory", "connectivity_time",
    "simulate_dynamic_graph", "simulate_si",
    "DegreeHistogram", "ExponentialLifespan", "FifoLifespan", "HazardGamma",
    "calibrate_hazard", "predicted_degree_density", "simulate_pa_turnover",
    "simulate_turnover_er",
    "SampleSet", "fit_power_law", "mean_ci",
    "ConfigError", "load_config", "run_scenario",
    "__version__",
]
