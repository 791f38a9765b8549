/// @file output.hpp
/// @brief CSV and report files, written through a temporary file and an atomic rename.

#pragma once

#include "naf/ensemble.hpp"

#include <string>
#include <vector>

namespace naf {

/// @brief Replace @p path with @p content atomically.
/// @throws std::runtime_error with the system message on I/O failure
void write_file_atomic(const std::string& path, const std::string& content);

/// @brief Header `time,<name>,<name>_stderr,...`, shortest round-trip numbers.
std::string time_series_csv(const TimeSeries& series);
/// @brief Columns `P,density`.
std::string distribution_csv(const Distribution& d);
/// @brief Columns `state,transmission,transmission_stderr,reflection,reflection_stderr`.
std::string channels_csv(const ChannelTable& t);
/// @brief Columns `P0,transmission_<k>,transmission_<k>_stderr,reflection_<k>,reflection_<k>_stderr`.
std::string scan_csv(const std::vector<ScanPoint>& scan);
/// @brief Run metadata followed by the configuration echo.
std::string report_text(const RunReport& report);

/// @brief Write every file of a report under the prefix spec.output; returns the paths written.
std::vector<std::string> emit_outputs(const RunReport& report, bool plot_data = false);

} // namespace naf
