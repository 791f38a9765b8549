/// @file output.cpp
/// @brief File serialization of run reports.

#include "naf/output.hpp"

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace naf {

void write_file_atomic(const std::string& path, const std::string& content)
{
	const std::string tmp = path + ".tmp." + std::to_string(::getpid());
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out)
		{
			throw std::runtime_error("cannot open '" + tmp + "' for writing: " + std::strerror(errno));
		}
		out << content;
		out.flush();
		if (!out)
		{
			throw std::runtime_error("write to '" + tmp + "' failed: " + std::strerror(errno));
		}
	}
	std::error_code ec;
	std::filesystem::rename(tmp, path, ec);
	if (ec)
	{
		std::filesystem::remove(tmp);
		throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
	}
}

std::string time_series_csv(const TimeSeries& s)
{
	std::string out = "time";
	for (const auto& c : s.columns)
	{
		out += "," + c.name + "," + c.name + "_stderr";
	}
	out += "\n";
	for (std::size_t k = 0; k < s.times.size(); k++)
	{
		out += format_double(s.times[k]);
		for (const auto& c : s.columns)
		{
			out += "," + format_double(c.mean[k]) + "," + format_double(c.stderr_[k]);
		}
		out += "\n";
	}
	return out;
}

std::string distribution_csv(const Distribution& d)
{
	std::string out = "P,density\n";
	for (std::size_t i = 0; i < d.grid.size(); i++)
	{
		out += format_double(d.grid[i]) + "," + format_double(d.density[i]) + "\n";
	}
	return out;
}

std::string channels_csv(const ChannelTable& t)
{
	std::string out = "state,transmission,transmission_stderr,reflection,reflection_stderr\n";
	for (std::size_t k = 0; k < t.transmission.size(); k++)
	{
		out += std::to_string(k + 1) + "," + format_double(t.transmission[k]) + "," + format_double(t.transmission_stderr[k]) + "," + format_double(t.reflection[k]) + "," + format_double(t.reflection_stderr[k]) + "\n";
	}
	return out;
}

std::string scan_csv(const std::vector<ScanPoint>& scan)
{
	std::string out = "P0";
	const std::size_t F = scan.empty() || !scan.front().report.channels ? 0 : scan.front().report.channels->transmission.size();
	for (std::size_t k = 0; k < F; k++)
	{
		const std::string n = std::to_string(k + 1);
		out += ",transmission_" + n + ",transmission_" + n + "_stderr,reflection_" + n + ",reflection_" + n + "_stderr";
	}
	out += "\n";
	for (const auto& p : scan)
	{
		out += format_double(p.p0);
		if (p.report.channels)
		{
			const auto& t = *p.report.channels;
			for (std::size_t k = 0; k < F; k++)
			{
				out += "," + format_double(t.transmission[k]) + "," + format_double(t.transmission_stderr[k]) + "," + format_double(t.reflection[k]) + "," + format_double(t.reflection_stderr[k]);
			}
		}
		out += "\n";
	}
	return out;
}

std::string report_text(const RunReport& r)
{
	std::ostringstream o;
	o << "# run report\n";
	o << "method = " << method_name(r.spec.method.method) << "\n";
	o << "model = " << r.spec.model.name << "\n";
	o << "seed = " << r.spec.seed << "\n";
	o << "n_traj_completed = " << r.series.n_traj << "\n";
	o << "n_traj_failed = " << r.n_failed << "\n";
	o << "failure_fraction = " << format_double(r.failure_fraction()) << "\n";
	o << "stderr_defined = " << (r.series.stderr_defined ? "true" : "false") << "\n";
	o << "switches_accepted = " << r.events.switches << "\n";
	o << "switches_frustrated = " << r.events.frustrated << "\n";
	o << "step_halvings = " << r.events.halvings << "\n";
	o << "wall_reflections = " << r.events.reflections << "\n";
	o << "workers = " << r.workers << "\n";
	o << "wall_seconds = " << format_double(r.wall_seconds) << "\n";
	for (const auto& w : r.warnings)
	{
		o << "warning = " << w << "\n";
	}
	for (const auto& m : r.failure_messages)
	{
		o << "failure = " << m << "\n";
	}
	o << "\n# configuration\n" << echo_run_spec(r.spec);
	return o.str();
}

std::vector<std::string> emit_outputs(const RunReport& r, bool plot_data)
{
	std::vector<std::string> paths;
	const std::string& prefix = r.spec.output;
	auto put = [&](const std::string& path, const std::string& text) {
		write_file_atomic(path, text);
		paths.push_back(path);
	};
	if (!r.series.columns.empty())
	{
		put(prefix + ".csv", time_series_csv(r.series));
	}
	for (const auto& d : r.distributions)
	{
		put(prefix + "_" + d.name + ".csv", distribution_csv(d));
	}
	if (r.channels)
	{
		put(prefix + "_channels.csv", channels_csv(*r.channels));
	}
	put(prefix + "_report.txt", report_text(r));
	if (plot_data)
	{
		for (const auto& c : r.series.columns)
		{
			std::string text = "# time " + c.name + "\n";
			for (std::size_t k = 0; k < r.series.times.size(); k++)
			{
				text += format_double(r.series.times[k]) + " " + format_double(c.mean[k]) + "\n";
			}
			put(prefix + "_" + c.name + ".dat", text);
		}
	}
	return paths;
}

} // namespace naf
