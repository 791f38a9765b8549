/// @file naf_cli.cpp
/// @brief Command-line driver: run, scan, exact, compare, validate.

#include "naf/compare.hpp"
#include "naf/config.hpp"
#include "naf/ensemble.hpp"
#include "naf/errors.hpp"
#include "naf/output.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

void print_summary(const naf::RunReport& r, const std::vector<std::string>& paths)
{
	std::cout << "completed " << r.series.n_traj << " trajectories, " << r.n_failed << " failed (fraction " << naf::format_double(r.failure_fraction()) << ") in " << r.wall_seconds << " s on " << r.workers << " worker(s)\n";
	for (const auto& w : r.warnings)
	{
		std::cerr << "warning: " << w << "\n";
	}
	for (const auto& p : paths)
	{
		std::cout << "wrote " << p << "\n";
	}
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Trajectory ensembles for non-adiabatic dynamics"};
	app.require_subcommand(1);

	std::string config;
	int workers = 0;
	bool plot_data = false;
	std::vector<double> p0;
	std::string csv_a, csv_b;

	auto* run = app.add_subcommand("run", "Propagate an ensemble (or the grid reference for exact_grid)");
	run->add_option("config", config, "INI run specification")->required();
	run->add_option("--workers", workers, "Worker threads (overrides NAF_WORKERS)");
	run->add_flag("--plot-data", plot_data, "Also write one x/y file per observable");

	auto* scan = app.add_subcommand("scan", "One run per initial momentum");
	scan->add_option("config", config, "INI run specification")->required();
	scan->add_option("--p0", p0, "Initial momenta")->required()->delimiter(',');
	scan->add_option("--workers", workers, "Worker threads (overrides NAF_WORKERS)");

	auto* exact = app.add_subcommand("exact", "Grid wavepacket reference for the configured model");
	exact->add_option("config", config, "INI run specification")->required();

	auto* cmp = app.add_subcommand("compare", "Deviation metrics between two CSV files");
	cmp->add_option("a", csv_a, "First CSV")->required();
	cmp->add_option("b", csv_b, "Second CSV")->required();

	auto* validate = app.add_subcommand("validate", "Parse a configuration and print it with defaults applied");
	validate->add_option("config", config, "INI run specification")->required();

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::ParseError& e)
	{
		const int code = app.exit(e);
		return code == 0 ? 0 : exit_config;
	}

	try
	{
		if (*run)
		{
			const naf::RunSpec spec = naf::load_run_spec(config);
			const naf::RunReport report = naf::run(spec, workers);
			print_summary(report, naf::emit_outputs(report, plot_data));
		}
		else if (*scan)
		{
			const naf::RunSpec spec = naf::load_run_spec(config);
			const auto points = naf::momentum_scan(spec, p0, workers);
			const std::string path = spec.output + "_scan.csv";
			naf::write_file_atomic(path, naf::scan_csv(points));
			for (const auto& p : points)
			{
				for (const auto& w : p.report.warnings)
				{
					std::cerr << "warning (p0 = " << p.p0 << "): " << w << "\n";
				}
			}
			std::cout << "wrote " << path << "\n";
		}
		else if (*exact)
		{
			naf::RunSpec spec = naf::load_run_spec(config);
			spec.method.method = naf::Method::ExactGrid;
			const naf::RunReport report = naf::run_exact(spec);
			print_summary(report, naf::emit_outputs(report));
		}
		else if (*cmp)
		{
			std::cout << naf::format_metrics(naf::compare(naf::read_csv(csv_a), naf::read_csv(csv_b)));
		}
		else if (*validate)
		{
			std::cout << naf::echo_run_spec(naf::load_run_spec(config));
		}
	}
	catch (const naf::ConfigError& e)
	{
		std::cerr << "config error: " << e.what() << "\n";
		return exit_config;
	}
	catch (const naf::NumericalError& e)
	{
		std::cerr << "numerical failure: " << e.what() << "\n";
		return exit_numerical;
	}
	catch (const std::invalid_argument& e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return exit_config;
	}
	catch (const std::exception& e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	}
	return 0;
}
