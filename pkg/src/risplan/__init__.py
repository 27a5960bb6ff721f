"""Deterministic simulation and multi-objective placement search for
reconfigurable-intelligent-surface deployments in joint
communication/sensing scenarios with an eavesdropper."""

from ._version import __version__
from .scenario import (BlockageSpec, DeploymentArea, LinkBudget, ParseError,
                       PathLossParams, Point2D, RisGainParams, ScenarioConfig,
                       SmallScaleParams, TemporalParams, ValidationError,
                       bearing, config_from_dict, config_hash, config_to_dict,
                       default_config, distance, load_config, save_config)
from .channel import (LINK_IDS, LinkSeries, TapSet, ar_advance, complex_normal,
                      derive_seed, derive_stream, draw_taps, path_loss_db,
                      realize_link)
from .ris import (ALLOWED_ELEMENT_COUNTS, RisConfig, alignment_factor,
                  cascaded_gain, isac_weights, reflection_gain, validate_ris)
from .metrics import (MetricBundle, bundle_from_links, combined_snr_db,
                      evaluate_candidate, realize_links, security_gap,
                      sensing_gain)
from .objective import ObjectiveVector, minmax_normalize, scalarize
from .optimizer import (REPRESENTATIVE_KEYS, EvaluatedCandidate,
                        OptimizationResult, SearchParams, exhaustive_grid,
                        extract_representatives, initial_grid, iterative_search,
                        search_params_from_dict)
from .heatmap import (GRID_METRICS, MetricGrid, cell_key, export_grid,
                      import_grid, sweep_grid)
