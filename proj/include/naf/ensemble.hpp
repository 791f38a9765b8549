/// @file ensemble.hpp
/// @brief Ensemble orchestration with a deterministic worker pool, grid reference runs and momentum scans.

#pragma once

#include "naf/config.hpp"
#include "naf/estimators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace naf {

struct EventCounts
{
	long switches = 0;
	long frustrated = 0;
	long halvings = 0;
	long reflections = 0;
};

struct RunReport
{
	RunSpec spec;
	TimeSeries series;
	std::vector<Distribution> distributions;
	std::optional<ChannelTable> channels;
	EventCounts events;
	long n_failed = 0;
	double wall_seconds = 0.0;
	int workers = 1;
	std::vector<std::string> warnings;
	std::vector<std::string> failure_messages; ///< first few, for diagnostics

	double failure_fraction() const;
};

/// @brief Trajectories per work unit; reduction order depends only on this.
inline constexpr long chunk_size = 64;

/// @brief Explicit request, else NAF_WORKERS, else spec.workers, else hardware concurrency.
int resolve_workers(const RunSpec& spec, int requested = 0);

/// @brief Propagate spec.n_traj trajectories and reduce the requested observables.
/// @throws NumericalError if at least 5% of trajectories fail; ConfigError for invalid specs
RunReport run_ensemble(const RunSpec& spec, int workers = 0);

/// @brief Grid wavepacket reference for a one-dimensional model.
RunReport run_exact(const RunSpec& spec);

/// @brief run_ensemble or run_exact depending on the method.
RunReport run(const RunSpec& spec, int workers = 0);

struct ScanPoint
{
	double p0;
	RunReport report;
};

/// @brief One run per initial momentum (model parameter p0).
/// @throws ConfigError for models without a p0 parameter
std::vector<ScanPoint> momentum_scan(const RunSpec& spec, const std::vector<double>& p0, int workers = 0);

} // namespace naf
