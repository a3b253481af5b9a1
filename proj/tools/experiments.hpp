#pragma once

#include "artifacts.hpp"
#include "schema.hpp"

namespace ioncool::cli {

/// Runs one experiment. `threads` caps the workers of internal sweeps.
/// Throws ConfigError for parameter combinations the schema alone cannot
/// reject, and lets NumericalError from the models propagate.
Outcome run_experiment(const Params& params, int threads);

/// Runs the experiment once, or once per grid value when a grid is given.
/// A grid produces sweep.csv with one row of summary values per point,
/// ordered as the grid.
Outcome run_config(const RunConfig& config, int threads);

/// IONCOOL_THREADS, default 1. Throws ConfigError naming the variable when
/// it is not a positive integer.
int threads_from_env();

}  // namespace ioncool::cli
