/// @file compare.hpp
/// @brief Deviation metrics between two CSV tables sharing column names.

#pragma once

#include <string>
#include <vector>

namespace naf {

/// @brief First column is the abscissa; `<name>_stderr` columns pair with `<name>`.
struct CsvTable
{
	std::vector<std::string> header;
	std::vector<std::vector<double>> columns;

	/// @brief Column index or -1.
	int find(const std::string& name) const;
};

/// @throws std::runtime_error on I/O or parse failure
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

struct ColumnMetrics
{
	std::string name;
	double max_abs = 0.0;
	double rms = 0.0;
	double max_abs_z = 0.0;   ///< 0 when neither side carries standard errors
	std::vector<double> z;    ///< per row of A inside the overlap
	bool has_errors = false;
};

/// @brief B is linearly interpolated onto the abscissae of A inside the common range.
/// @throws std::invalid_argument for disjoint ranges or no shared columns
std::vector<ColumnMetrics> compare(const CsvTable& a, const CsvTable& b);

/// @brief Plain-text metrics table.
std::string format_metrics(const std::vector<ColumnMetrics>& metrics);

} // namespace naf
