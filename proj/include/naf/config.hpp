/// @file config.hpp
/// @brief Run specification: INI parsing with strict keys, defaults, validation and a canonical echo.

#pragma once

#include "naf/dynamics.hpp"
#include "naf/estimators.hpp"
#include "naf/models.hpp"
#include "naf/reference.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace naf {

struct RunSpec
{
	ModelSpec model;
	MethodOptions method;
	double dt = 0.0;       ///< a.u.
	double t_final = 0.0;  ///< a.u.
	int record_every = 1;
	long n_traj = 0;
	std::uint64_t seed = 0;
	Occupation occupation;
	std::vector<ObservableRequest> observables;
	std::string output = "naf_output";
	int workers = 0; ///< 0: environment or hardware default
	GridSpec grid;   ///< exact_grid only

	/// @brief Steps per trajectory, round(t_final / dt).
	long steps() const;
	/// @brief Recorded times 0, record_every dt, ...
	std::vector<double> record_times() const;
};

bool operator==(const ObservableRequest& a, const ObservableRequest& b);
bool operator==(const RunSpec& a, const RunSpec& b);

/// @throws ConfigError listing unknown keys, invalid values or incompatible options
RunSpec parse_run_spec(const std::string& text);
/// @throws ConfigError if the file cannot be read or is invalid
RunSpec load_run_spec(const std::string& path);

/// @brief Canonical INI text with every default made explicit; reparses to an equal spec.
std::string echo_run_spec(const RunSpec& spec);

/// @brief Model definition with the occupation and momentum overrides of @p spec applied.
ModelDefinition build_run_model(const RunSpec& spec);

/// @brief Shortest decimal text that parses back to @p x.
std::string format_double(double x);

} // namespace naf
