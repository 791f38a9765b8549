/// @file compare.cpp
/// @brief CSV comparison by linear interpolation.

#include "naf/compare.hpp"

#include "naf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace naf {

int CsvTable::find(const std::string& name) const
{
	for (std::size_t i = 0; i < header.size(); i++)
	{
		if (header[i] == name)
		{
			return static_cast<int>(i);
		}
	}
	return -1;
}

CsvTable parse_csv(const std::string& text)
{
	CsvTable t;
	std::istringstream in(text);
	std::string line;
	long row = 0;
	while (std::getline(in, line))
	{
		if (!line.empty() && line.back() == '\r')
		{
			line.pop_back();
		}
		if (line.empty())
		{
			continue;
		}
		std::vector<std::string> cells;
		std::string cell;
		std::istringstream ls(line);
		while (std::getline(ls, cell, ','))
		{
			cells.push_back(cell);
		}
		if (t.header.empty())
		{
			t.header = cells;
			t.columns.resize(cells.size());
			continue;
		}
		row++;
		if (cells.size() != t.header.size())
		{
			throw std::runtime_error("row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " cells, header has " + std::to_string(t.header.size()));
		}
		for (std::size_t i = 0; i < cells.size(); i++)
		{
			double v = 0.0;
			const auto r = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v);
			if (r.ec != std::errc() || r.ptr != cells[i].data() + cells[i].size())
			{
				throw std::runtime_error("row " + std::to_string(row) + ": '" + cells[i] + "' is not a number");
			}
			t.columns[i].push_back(v);
		}
	}
	if (t.header.empty())
	{
		throw std::runtime_error("empty CSV");
	}
	return t;
}

CsvTable read_csv(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
	{
		throw std::runtime_error("cannot read '" + path + "'");
	}
	std::ostringstream s;
	s << in.rdbuf();
	try
	{
		return parse_csv(s.str());
	}
	catch (const std::runtime_error& e)
	{
		throw std::runtime_error(path + ": " + e.what());
	}
}

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at)
{
	if (x.size() == 1)
	{
		return y[0];
	}
	const auto it = std::lower_bound(x.begin(), x.end(), at);
	if (it == x.begin())
	{
		return y.front();
	}
	if (it == x.end())
	{
		return y.back();
	}
	const std::size_t hi = it - x.begin();
	const std::size_t lo = hi - 1;
	if (x[hi] == at)
	{
		return y[hi];
	}
	const double f = (at - x[lo]) / (x[hi] - x[lo]);
	return (1.0 - f) * y[lo] + f * y[hi];
}

bool is_error_column(const std::string& name)
{
	return name.size() > 7 && name.compare(name.size() - 7, 7, "_stderr") == 0;
}

} // namespace

std::vector<ColumnMetrics> compare(const CsvTable& a, const CsvTable& b)
{
	if (a.columns.empty() || b.columns.empty() || a.columns[0].empty() || b.columns[0].empty())
	{
		throw std::invalid_argument("cannot compare empty tables");
	}
	const auto& xa = a.columns[0];
	const auto& xb = b.columns[0];
	const double lo = std::max(xa.front(), xb.front());
	const double hi = std::min(xa.back(), xb.back());
	if (lo > hi)
	{
		throw std::invalid_argument("abscissa ranges are disjoint");
	}
	const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
	std::vector<ColumnMetrics> out;
	for (std::size_t i = 1; i < a.header.size(); i++)
	{
		const std::string& name = a.header[i];
		if (is_error_column(name))
		{
			continue;
		}
		const int j = b.find(name);
		if (j < 0)
		{
			continue;
		}
		const int ea = a.find(name + "_stderr");
		const int eb = b.find(name + "_stderr");
		ColumnMetrics m;
		m.name = name;
		m.has_errors = ea >= 0 || eb >= 0;
		double sq = 0.0;
		long n = 0;
		for (std::size_t r = 0; r < xa.size(); r++)
		{
			if (xa[r] < lo - slack || xa[r] > hi + slack)
			{
				continue;
			}
			const double va = a.columns[i][r];
			const double vb = interpolate(xb, b.columns[j], xa[r]);
			const double d = va - vb;
			m.max_abs = std::max(m.max_abs, std::abs(d));
			sq += d * d;
			n++;
			if (m.has_errors)
			{
				const double sa = ea >= 0 ? a.columns[ea][r] : 0.0;
				const double sb = eb >= 0 ? interpolate(xb, b.columns[eb], xa[r]) : 0.0;
				const double s = std::hypot(sa, sb);
				const double z = s > 0.0 ? d / s : (d == 0.0 ? 0.0 : std::copysign(HUGE_VAL, d));
				m.z.push_back(z);
				m.max_abs_z = std::max(m.max_abs_z, std::abs(z));
			}
		}
		m.rms = n > 0 ? std::sqrt(sq / static_cast<double>(n)) : 0.0;
		out.push_back(std::move(m));
	}
	if (out.empty())
	{
		throw std::invalid_argument("no shared columns");
	}
	return out;
}

std::string format_metrics(const std::vector<ColumnMetrics>& metrics)
{
	std::string out = "column,max_abs,rms,max_abs_z\n";
	for (const auto& m : metrics)
	{
		out += m.name + "," + format_double(m.max_abs) + "," + format_double(m.rms) + "," + (m.has_errors ? format_double(m.max_abs_z) : std::string("nan")) + "\n";
	}
	return out;
}

} // namespace naf
