/// @file estimators.cpp
/// @brief Density estimators, observable slots and the running-statistics reduction.

#include "naf/estimators.hpp"

#include "naf/errors.hpp"

#include <cmath>
#include <numbers>

namespace naf {

double electronic_weight0(const ComplexVector& g_occupied, int jocc, double gamma)
{
	const double F = static_cast<double>(g_occupied.size());
	return F * (0.5 * std::norm(g_occupied[jocc]) - gamma);
}

ComplexMatrix cps_density(const ComplexVector& g, double gamma)
{
	const double F = static_cast<double>(g.size());
	const double denom = 1.0 + F * gamma;
	ComplexMatrix rho = ((1.0 + F) / (2.0 * denom * denom)) * (g * g.adjoint());
	rho.diagonal().array() -= (1.0 - gamma) / denom;
	return rho;
}

ComplexMatrix estimate_density(const TrajectoryState& state, const MethodOptions& options, Representation rep)
{
	const ComplexMatrix T = state.frame.T.cast<Complex>();
	if (options.method == Method::Ehrenfest && options.diabatic_amplitudes)
	{
		const auto& c = std::get<AmplitudePayload>(state.electronic).c;
		const ComplexMatrix rho = c * c.adjoint();
		return rep == Representation::Diabatic ? rho : ComplexMatrix(T.transpose() * rho * T);
	}
	ComplexMatrix rho;
	if (const auto* p = std::get_if<CpsPayload>(&state.electronic))
	{
		rho = cps_density(p->g, options.gamma);
	}
	else if (const auto* p = std::get_if<AmplitudePayload>(&state.electronic))
	{
		rho = p->c * p->c.adjoint();
		if (is_surface_hopping(options.method))
		{
			rho.diagonal().setZero();
			rho(state.active, state.active) = 1.0;
		}
	}
	else
	{
		rho = std::get<KernelPayload>(state.electronic).K;
	}
	return rep == Representation::Adiabatic ? rho : ComplexMatrix(T * rho * T.transpose());
}

namespace {

std::string rep_tag(Representation r)
{
	return r == Representation::Diabatic ? "dia" : "adi";
}

int scalar_width(const ObservableRequest& r)
{
	switch (r.kind)
	{
	case ObservableKind::Coherence: return 2;
	case ObservableKind::Population:
	case ObservableKind::PopulationDifference:
	case ObservableKind::MeanR:
	case ObservableKind::MeanP: return 1;
	default: return 0;
	}
}

double gaussian_kernel(double x, double a)
{
	return std::exp(-x * x / (4.0 * a)) / (2.0 * std::sqrt(std::numbers::pi * a));
}

} // namespace

std::string ObservableRequest::name() const
{
	auto idx = [&](std::size_t i) { return std::to_string(indices.at(i) + 1); };
	switch (kind)
	{
	case ObservableKind::Population: return "pop_" + rep_tag(representation) + "_" + idx(0);
	case ObservableKind::Coherence:
	{
		const char* part_name = part == CoherencePart::Abs ? "abs" : part == CoherencePart::Re ? "re" : "im";
		return "coh_" + rep_tag(representation) + "_" + idx(0) + "_" + idx(1) + "_" + part_name;
	}
	case ObservableKind::PopulationDifference: return "diff_" + rep_tag(representation) + "_" + idx(0) + "_" + idx(1);
	case ObservableKind::MeanR: return "mean_R_" + idx(0);
	case ObservableKind::MeanP: return "mean_P_" + idx(0);
	case ObservableKind::MomentumDistribution: return "momentum_" + idx(0);
	case ObservableKind::Scattering: return "channels";
	}
	return "unknown";
}

bool ObservableRequest::time_resolved() const
{
	return scalar_width(*this) > 0;
}

void ObservableRequest::validate(const Model& model) const
{
	std::size_t need = 0;
	int limit = model.n_states();
	switch (kind)
	{
	case ObservableKind::Population: need = 1; break;
	case ObservableKind::Coherence:
	case ObservableKind::PopulationDifference: need = 2; break;
	case ObservableKind::MeanR:
	case ObservableKind::MeanP:
	case ObservableKind::MomentumDistribution:
		need = 1;
		limit = model.n_dof();
		break;
	case ObservableKind::Scattering: need = 0; break;
	}
	if (indices.size() != need)
	{
		throw ConfigError("observable expects " + std::to_string(need) + " indices, got " + std::to_string(indices.size()));
	}
	for (int i : indices)
	{
		if (i < 0 || i >= limit)
		{
			throw ConfigError("observable index " + std::to_string(i + 1) + " out of range 1.." + std::to_string(limit));
		}
	}
	if (need == 2 && indices[0] == indices[1])
	{
		throw ConfigError("observable expects two distinct states, got " + std::to_string(indices[0] + 1) + " twice");
	}
	if (kind == ObservableKind::MomentumDistribution)
	{
		if (!(damping > 0.0))
		{
			throw ConfigError("momentum distribution requires damping a > 0");
		}
		if (grid.size() < 2)
		{
			throw ConfigError("momentum distribution requires a grid of at least two points");
		}
		for (Eigen::Index i = 1; i < grid.size(); i++)
		{
			if (!(grid[i] > grid[i - 1]))
			{
				throw ConfigError("momentum grid must be strictly increasing");
			}
		}
	}
	if (kind == ObservableKind::Scattering && model.n_dof() != 1)
	{
		throw ConfigError("scattering channels require a one-dimensional model");
	}
}

void RunningStat::add(double x)
{
	n++;
	const double delta = x - mean;
	mean += delta / static_cast<double>(n);
	m2 += delta * (x - mean);
}

void RunningStat::merge(const RunningStat& o)
{
	if (o.n == 0)
	{
		return;
	}
	if (n == 0)
	{
		*this = o;
		return;
	}
	const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
	const double delta = o.mean - mean;
	const double total = na + nb;
	mean += delta * nb / total;
	m2 += o.m2 + delta * delta * na * nb / total;
	n += o.n;
}

double RunningStat::standard_error() const
{
	if (n < 2)
	{
		return 0.0;
	}
	const double var = std::max(m2, 0.0) / static_cast<double>(n - 1);
	return std::sqrt(var / static_cast<double>(n));
}

double ChannelTable::total() const
{
	double s = 0.0;
	for (std::size_t k = 0; k < transmission.size(); k++)
	{
		s += transmission[k] + reflection[k];
	}
	return s;
}

std::vector<double> momentum_distribution(const std::vector<double>& samples, const std::vector<double>& weights, double a, const std::vector<double>& grid)
{
	if (!(a > 0.0))
	{
		throw ConfigError("momentum distribution requires a > 0");
	}
	if (samples.size() != weights.size())
	{
		throw InternalConsistencyError("sample and weight counts differ");
	}
	std::vector<double> out(grid.size(), 0.0);
	if (samples.empty())
	{
		return out;
	}
	for (std::size_t i = 0; i < samples.size(); i++)
	{
		for (std::size_t k = 0; k < grid.size(); k++)
		{
			out[k] += weights[i] * gaussian_kernel(grid[k] - samples[i], a);
		}
	}
	for (double& v : out)
	{
		v /= static_cast<double>(samples.size());
	}
	return out;
}

ChannelTable scattering_channels(const std::vector<ChannelSample>& samples, double interaction_radius)
{
	ChannelTable table;
	if (samples.empty())
	{
		throw NumericalError("empty ensemble");
	}
	const int F = static_cast<int>(samples.front().adiabatic_population.size());
	std::vector<RunningStat> tr(F), re(F);
	for (const auto& s : samples)
	{
		const bool transmitted = s.R > 0.0;
		for (int k = 0; k < F; k++)
		{
			const double v = s.weight * s.adiabatic_population[k];
			tr[k].add(transmitted ? v : 0.0);
			re[k].add(transmitted ? 0.0 : v);
		}
		table.inside_interaction_region += std::abs(s.R) < interaction_radius;
	}
	for (int k = 0; k < F; k++)
	{
		table.transmission.push_back(tr[k].mean);
		table.reflection.push_back(re[k].mean);
		table.transmission_stderr.push_back(tr[k].standard_error());
		table.reflection_stderr.push_back(re[k].standard_error());
	}
	table.n_traj = static_cast<long>(samples.size());
	return table;
}

ObservableLayout::ObservableLayout(std::vector<ObservableRequest> requests, const Model& model, int n_times, double interaction_radius)
	: reqs(std::move(requests)), times(n_times), states(model.n_states()), radius(interaction_radius), scale(model.coordinate_scale())
{
	for (const auto& r : reqs)
	{
		r.validate(model);
	}
	for (const auto& r : reqs)
	{
		scalar_request.push_back(scalars);
		scalars += scalar_width(r);
	}
	total = scalars * times;
	for (const auto& r : reqs)
	{
		final_slot.push_back(total);
		if (r.kind == ObservableKind::MomentumDistribution)
		{
			total += static_cast<int>(r.grid.size());
		}
		else if (r.kind == ObservableKind::Scattering)
		{
			total += 2 * states;
			if (inside < 0)
			{
				inside = total;
				total += 1;
			}
		}
	}
}

void ObservableLayout::record(std::vector<double>& buffer, int k, const TrajectoryState& state, const MethodOptions& options) const
{
	if (scalars == 0)
	{
		return;
	}
	const double w = state.weight;
	std::optional<ComplexMatrix> dia, adi;
	auto density = [&](Representation r) -> const ComplexMatrix& {
		auto& slot = r == Representation::Diabatic ? dia : adi;
		if (!slot)
		{
			slot = estimate_density(state, options, r);
		}
		return *slot;
	};
	double* out = buffer.data() + static_cast<std::size_t>(k) * scalars;
	for (std::size_t q = 0; q < reqs.size(); q++)
	{
		const auto& r = reqs[q];
		double* o = out + scalar_request[q];
		switch (r.kind)
		{
		case ObservableKind::Population:
			o[0] = w * density(r.representation)(r.indices[0], r.indices[0]).real();
			break;
		case ObservableKind::Coherence:
		{
			const Complex z = density(r.representation)(r.indices[0], r.indices[1]);
			o[0] = w * z.real();
			o[1] = w * z.imag();
			break;
		}
		case ObservableKind::PopulationDifference:
		{
			const ComplexMatrix& rho = density(r.representation);
			o[0] = w * (rho(r.indices[0], r.indices[0]) - rho(r.indices[1], r.indices[1])).real();
			break;
		}
		case ObservableKind::MeanR:
			o[0] = w * scale[r.indices[0]] * state.R[r.indices[0]];
			break;
		case ObservableKind::MeanP:
			o[0] = w * state.P[r.indices[0]] / scale[r.indices[0]];
			break;
		default:
			break;
		}
	}
}

void ObservableLayout::record_final(std::vector<double>& buffer, const TrajectoryState& state, const MethodOptions& options) const
{
	const double w = state.weight;
	for (std::size_t q = 0; q < reqs.size(); q++)
	{
		const auto& r = reqs[q];
		double* o = buffer.data() + final_slot[q];
		if (r.kind == ObservableKind::MomentumDistribution)
		{
			const double p = state.P[r.indices[0]];
			for (Eigen::Index i = 0; i < r.grid.size(); i++)
			{
				o[i] = w * gaussian_kernel(r.grid[i] - p, r.damping);
			}
		}
		else if (r.kind == ObservableKind::Scattering)
		{
			const ComplexMatrix rho = estimate_density(state, options, Representation::Adiabatic);
			const bool transmitted = state.R[0] > 0.0;
			for (int k = 0; k < states; k++)
			{
				const double v = w * rho(k, k).real();
				o[k] = transmitted ? v : 0.0;
				o[states + k] = transmitted ? 0.0 : v;
			}
			buffer[inside] = std::abs(state.R[0]) < radius ? 1.0 : 0.0;
		}
	}
}

Accumulator::Accumulator(const ObservableLayout& l) : layout(&l), stats(l.slots())
{
}

void Accumulator::add(const std::vector<double>& buffer)
{
	for (std::size_t i = 0; i < stats.size(); i++)
	{
		stats[i].add(buffer[i]);
	}
	n++;
}

void Accumulator::merge(const Accumulator& o)
{
	for (std::size_t i = 0; i < stats.size(); i++)
	{
		stats[i].merge(o.stats[i]);
	}
	n += o.n;
	failed += o.failed;
}

TimeSeries Accumulator::time_series(const std::vector<double>& times) const
{
	if (n == 0)
	{
		throw NumericalError("empty ensemble: no trajectory completed");
	}
	const int S = layout->scalar_count();
	TimeSeries ts;
	ts.times = times;
	ts.n_traj = n;
	ts.n_failed = failed;
	ts.stderr_defined = n >= 2;
	const auto& reqs = layout->requests();
	int offset = 0;
	for (const auto& r : reqs)
	{
		const int width = scalar_width(r);
		if (width == 0)
		{
			continue;
		}
		Column c;
		c.name = r.name();
		for (std::size_t k = 0; k < times.size(); k++)
		{
			const RunningStat& a = stats[k * S + offset];
			if (r.kind == ObservableKind::Coherence)
			{
				const RunningStat& b = stats[k * S + offset + 1];
				if (r.part == CoherencePart::Re)
				{
					c.mean.push_back(a.mean);
					c.stderr_.push_back(a.standard_error());
				}
				else if (r.part == CoherencePart::Im)
				{
					c.mean.push_back(b.mean);
					c.stderr_.push_back(b.standard_error());
				}
				else
				{
					const double m = std::hypot(a.mean, b.mean);
					c.mean.push_back(m);
					c.stderr_.push_back(m > 0.0 ? std::hypot(a.mean * a.standard_error(), b.mean * b.standard_error()) / m : std::hypot(a.standard_error(), b.standard_error()));
				}
			}
			else
			{
				c.mean.push_back(a.mean);
				c.stderr_.push_back(a.standard_error());
			}
		}
		ts.columns.push_back(std::move(c));
		offset += width;
	}
	return ts;
}

std::vector<Distribution> Accumulator::distributions() const
{
	std::vector<Distribution> out;
	const auto& reqs = layout->requests();
	for (std::size_t q = 0; q < reqs.size(); q++)
	{
		const auto& r = reqs[q];
		if (r.kind != ObservableKind::MomentumDistribution)
		{
			continue;
		}
		Distribution d;
		d.name = r.name();
		const int base = layout->final_offset(static_cast<int>(q));
		for (Eigen::Index i = 0; i < r.grid.size(); i++)
		{
			d.grid.push_back(r.grid[i]);
			d.density.push_back(stats[base + i].mean);
			d.stderr_.push_back(stats[base + i].standard_error());
		}
		out.push_back(std::move(d));
	}
	return out;
}

std::optional<ChannelTable> Accumulator::channels() const
{
	const auto& reqs = layout->requests();
	for (std::size_t q = 0; q < reqs.size(); q++)
	{
		if (reqs[q].kind != ObservableKind::Scattering)
		{
			continue;
		}
		const int base = layout->final_offset(static_cast<int>(q));
		const int F = (layout->inside_slot() - base) / 2;
		ChannelTable t;
		for (int k = 0; k < F; k++)
		{
			t.transmission.push_back(stats[base + k].mean);
			t.transmission_stderr.push_back(stats[base + k].standard_error());
			t.reflection.push_back(stats[base + F + k].mean);
			t.reflection_stderr.push_back(stats[base + F + k].standard_error());
		}
		t.n_traj = n;
		t.inside_interaction_region = std::lround(stats[layout->inside_slot()].mean * static_cast<double>(n));
		return t;
	}
	return std::nullopt;
}

} // namespace naf
