/// @file ensemble.cpp
/// @brief Worker pool over fixed trajectory chunks with an ordered merge.

#include "naf/ensemble.hpp"

#include "naf/errors.hpp"
#include "naf/reference.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

namespace naf {

double RunReport::failure_fraction() const
{
	const long total = series.n_traj + n_failed;
	return total > 0 ? static_cast<double>(n_failed) / static_cast<double>(total) : 0.0;
}

int resolve_workers(const RunSpec& spec, int requested)
{
	if (requested > 0)
	{
		return requested;
	}
	if (const char* env = std::getenv("NAF_WORKERS"))
	{
		const int n = std::atoi(env);
		if (n > 0)
		{
			return n;
		}
		throw ConfigError(std::string("NAF_WORKERS must be a positive integer, got '") + env + "'");
	}
	if (spec.workers > 0)
	{
		return spec.workers;
	}
	return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct ChunkResult
{
	Accumulator acc;
	EventCounts events;
	std::vector<std::string> messages;
};

void tally(EventCounts& c, const StepOutcome& o)
{
	for (StepEvent e : o.events)
	{
		switch (e)
		{
		case StepEvent::SwitchAccepted: c.switches++; break;
		case StepEvent::SwitchFrustrated: c.frustrated++; break;
		case StepEvent::SubstepHalving: c.halvings++; break;
		case StepEvent::HardWallReflection: c.reflections++; break;
		}
	}
}

ChunkResult run_chunk(const RunSpec& spec, const ModelDefinition& def, const ObservableLayout& layout, long first, long last)
{
	ChunkResult out{Accumulator(layout), {}, {}};
	const long steps = spec.steps();
	std::vector<double> buffer(layout.slots());
	for (long index = first; index < last; index++)
	{
		RandomStream rng(spec.seed, static_cast<std::uint64_t>(index));
		std::fill(buffer.begin(), buffer.end(), 0.0);
		EventCounts events;
		try
		{
			TrajectoryState state = initialize_trajectory(def, spec.method, spec.occupation, rng);
			layout.record(buffer, 0, state, spec.method);
			for (long s = 1; s <= steps; s++)
			{
				tally(events, advance_trajectory(state, *def.model, spec.method, spec.dt, rng));
				if (s % spec.record_every == 0)
				{
					layout.record(buffer, static_cast<int>(s / spec.record_every), state, spec.method);
				}
			}
			layout.record_final(buffer, state, spec.method);
		}
		catch (const NumericalError& e)
		{
			out.acc.count_failure();
			if (out.messages.size() < 3)
			{
				out.messages.push_back("trajectory " + std::to_string(index) + ": " + e.what());
			}
			continue;
		}
		out.acc.add(buffer);
		out.events.switches += events.switches;
		out.events.frustrated += events.frustrated;
		out.events.halvings += events.halvings;
		out.events.reflections += events.reflections;
	}
	return out;
}

} // namespace

RunReport run_ensemble(const RunSpec& spec, int requested_workers)
{
	if (spec.method.method == Method::ExactGrid)
	{
		throw ConfigError("exact_grid runs through run_exact");
	}
	if (spec.n_traj < 1)
	{
		throw ConfigError("n_traj must be at least 1");
	}
	const auto start = std::chrono::steady_clock::now();
	const ModelDefinition def = build_run_model(spec);
	const std::vector<double> times = spec.record_times();
	const ObservableLayout layout(spec.observables, *def.model, static_cast<int>(times.size()), def.interaction_radius);

	const long n_chunks = (spec.n_traj + chunk_size - 1) / chunk_size;
	const int workers = static_cast<int>(std::min<long>(resolve_workers(spec, requested_workers), n_chunks));

	Accumulator total(layout);
	EventCounts events;
	std::vector<std::string> messages;
	std::map<long, ChunkResult> pending;
	long next_merge = 0;
	std::atomic<long> next_chunk{0};
	std::atomic<bool> abort{false};
	std::mutex mutex;
	std::exception_ptr error;
	const long failure_limit = static_cast<long>(std::ceil(0.05 * static_cast<double>(spec.n_traj)));
	long failures_seen = 0;

	auto worker = [&]() {
		while (!abort.load())
		{
			const long c = next_chunk.fetch_add(1);
			if (c >= n_chunks)
			{
				return;
			}
			try
			{
				const long first = c * chunk_size;
				ChunkResult r = run_chunk(spec, def, layout, first, std::min(spec.n_traj, first + chunk_size));
				std::lock_guard<std::mutex> lock(mutex);
				failures_seen += r.acc.failures();
				if (failures_seen >= failure_limit)
				{
					abort = true;
				}
				pending.emplace(c, std::move(r));
				// merge the contiguous prefix in chunk order
				for (auto it = pending.find(next_merge); it != pending.end(); it = pending.find(next_merge))
				{
					total.merge(it->second.acc);
					events.switches += it->second.events.switches;
					events.frustrated += it->second.events.frustrated;
					events.halvings += it->second.events.halvings;
					events.reflections += it->second.events.reflections;
					for (auto& m : it->second.messages)
					{
						if (messages.size() < 5)
						{
							messages.push_back(std::move(m));
						}
					}
					pending.erase(it);
					next_merge++;
				}
			}
			catch (...)
			{
				std::lock_guard<std::mutex> lock(mutex);
				if (!error)
				{
					error = std::current_exception();
				}
				abort = true;
				return;
			}
		}
	};

	if (workers <= 1)
	{
		worker();
	}
	else
	{
		std::vector<std::thread> pool;
		for (int w = 0; w < workers; w++)
		{
			pool.emplace_back(worker);
		}
		for (auto& t : pool)
		{
			t.join();
		}
	}
	if (error)
	{
		std::rethrow_exception(error);
	}
	if (failures_seen >= failure_limit && failures_seen > 0)
	{
		std::string msg = "aborted: " + std::to_string(failures_seen) + " trajectory failures reach 5% of n_traj = " + std::to_string(spec.n_traj);
		for (const auto& [c, r] : pending)
		{
			for (const auto& m : r.messages)
			{
				if (messages.size() < 5)
				{
					messages.push_back(m);
				}
			}
		}
		for (const auto& m : messages)
		{
			msg += "\n  " + m;
		}
		throw NumericalError(msg);
	}

	RunReport report;
	report.spec = spec;
	report.series = total.time_series(times);
	report.distributions = total.distributions();
	report.channels = total.channels();
	report.events = events;
	report.n_failed = total.failures();
	report.workers = workers;
	report.failure_messages = messages;
	if (report.channels && report.channels->inside_interaction_region > 0)
	{
		report.warnings.push_back(std::to_string(report.channels->inside_interaction_region) + " trajectories are still inside the interaction region |R| < " + format_double(def.interaction_radius) + " at the final time");
	}
	if (!report.series.stderr_defined)
	{
		report.warnings.push_back("standard errors are undefined for a single trajectory and are written as 0");
	}
	report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	return report;
}

RunReport run_exact(const RunSpec& spec)
{
	const auto start = std::chrono::steady_clock::now();
	const ModelDefinition def = build_run_model(spec);
	const Model& model = *def.model;
	const std::vector<double> times = spec.record_times();
	const GridWavefunction psi0 = initial_wavepacket(def, spec.grid, spec.occupation);
	std::vector<double> targets = times;
	const double t_end = static_cast<double>(spec.steps()) * spec.dt;
	if (t_end > targets.back())
	{
		targets.push_back(t_end);
	}
	std::vector<GridWavefunction> snaps = grid_propagate(model, psi0, spec.dt, targets);
	const GridWavefunction final_state = snaps.back();
	snaps.resize(times.size());

	RunReport report;
	report.spec = spec;
	report.series.times = times;
	report.series.n_traj = 1;
	report.series.stderr_defined = false;
	for (const auto& r : spec.observables)
	{
		if (!r.time_resolved())
		{
			continue;
		}
		Column c;
		c.name = r.name();
		for (const auto& wf : snaps)
		{
			double v = 0.0;
			if (r.kind == ObservableKind::MeanR)
			{
				v = grid_mean_R(wf);
			}
			else if (r.kind == ObservableKind::MeanP)
			{
				const double kmax = std::numbers::pi / wf.dR();
				const int n = static_cast<int>(wf.grid.size());
				std::vector<double> pg(n);
				for (int j = 0; j < n; j++)
				{
					pg[j] = -kmax + 2.0 * kmax * j / n;
				}
				const std::vector<double> rho = grid_momentum_distribution(wf, pg, 0.0);
				for (int j = 0; j < n; j++)
				{
					v += pg[j] * rho[j] * (2.0 * kmax / n);
				}
			}
			else
			{
				const ComplexMatrix rho = grid_density(model, wf, r.representation);
				const int i = r.indices[0];
				if (r.kind == ObservableKind::Population)
				{
					v = rho(i, i).real();
				}
				else if (r.kind == ObservableKind::PopulationDifference)
				{
					v = (rho(i, i) - rho(r.indices[1], r.indices[1])).real();
				}
				else
				{
					const Complex z = rho(i, r.indices[1]);
					v = r.part == CoherencePart::Abs ? std::abs(z) : r.part == CoherencePart::Re ? z.real() : z.imag();
				}
			}
			c.mean.push_back(v);
			c.stderr_.push_back(0.0);
		}
		report.series.columns.push_back(std::move(c));
	}
	for (const auto& r : spec.observables)
	{
		if (r.kind == ObservableKind::MomentumDistribution)
		{
			Distribution d;
			d.name = r.name();
			d.grid.assign(r.grid.data(), r.grid.data() + r.grid.size());
			d.density = grid_momentum_distribution(final_state, d.grid, r.damping);
			d.stderr_.assign(d.grid.size(), 0.0);
			report.distributions.push_back(std::move(d));
		}
		else if (r.kind == ObservableKind::Scattering)
		{
			report.channels = grid_channels(model, final_state);
		}
	}
	report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	return report;
}

RunReport run(const RunSpec& spec, int workers)
{
	return spec.method.method == Method::ExactGrid ? run_exact(spec) : run_ensemble(spec, workers);
}

std::vector<ScanPoint> momentum_scan(const RunSpec& spec, const std::vector<double>& p0, int workers)
{
	if (p0.empty())
	{
		throw ConfigError("momentum scan needs at least one p0");
	}
	const ModelDefinition def = build_run_model(spec);
	if (!def.scattering)
	{
		throw ConfigError("momentum scans require a scattering model");
	}
	std::vector<ScanPoint> out;
	for (double p : p0)
	{
		RunSpec s = spec;
		s.model.params["p0"] = format_double(p);
		out.push_back({p, run(s, workers)});
	}
	return out;
}

} // namespace naf
