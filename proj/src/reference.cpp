/// @file reference.cpp
/// @brief Split-operator grid propagation, prescribed-path TDSE and the Landau-Zener formula.

#include "naf/reference.hpp"

#include "naf/adiabatic.hpp"
#include "naf/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace naf {

namespace {

std::mutex& planner_mutex()
{
	static std::mutex m;
	return m;
}

/// In-place forward/backward transforms of one contiguous row.
class Fft
{
public:
	explicit Fft(int n) : size(n), buffer(n)
	{
		std::lock_guard<std::mutex> lock(planner_mutex());
		auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
		forward = fftw_plan_dft_1d(n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
		backward = fftw_plan_dft_1d(n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
	}
	~Fft()
	{
		std::lock_guard<std::mutex> lock(planner_mutex());
		fftw_destroy_plan(forward);
		fftw_destroy_plan(backward);
	}
	Fft(const Fft&) = delete;
	Fft& operator=(const Fft&) = delete;

	void run_forward(Complex* data) const { fftw_execute_dft(forward, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data)); }
	void run_backward(Complex* data) const { fftw_execute_dft(backward, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data)); }

	int size;

private:
	std::vector<Complex> buffer;
	fftw_plan forward;
	fftw_plan backward;
};

RealVector wavenumbers(int n, double dR)
{
	RealVector k(n);
	const double dk = 2.0 * std::numbers::pi / (n * dR);
	for (int j = 0; j < n; j++)
	{
		k[j] = dk * (j < n / 2 ? j : j - n);
	}
	return k;
}

void check_grid(const Model& model, const RealVector& grid)
{
	if (model.n_dof() != 1)
	{
		throw ConfigError("grid propagation requires a one-dimensional model");
	}
	if (grid.size() < 4)
	{
		throw ConfigError("grid needs at least four points");
	}
}

/// Row n of psi as a contiguous vector.
std::vector<Complex> row(const ComplexMatrix& psi, int n)
{
	std::vector<Complex> r(psi.cols());
	for (Eigen::Index i = 0; i < psi.cols(); i++)
	{
		r[i] = psi(n, i);
	}
	return r;
}

/// Adiabatic eigenvectors along the grid with continuous signs.
std::vector<RealMatrix> adiabatic_vectors(const Model& model, const RealVector& grid)
{
	std::vector<RealMatrix> out(grid.size());
	AdiabaticFrame prev;
	RealVector R(1);
	for (Eigen::Index i = 0; i < grid.size(); i++)
	{
		R[0] = grid[i];
		AdiabaticFrame f = adiabatic_frame(model, R, i == 0 ? nullptr : &prev);
		out[i] = f.T;
		prev = std::move(f);
	}
	return out;
}

/// Energy-ordered eigenvectors at each point (channel projection does not need continuity).
RealMatrix sorted_vectors(const Model& model, double r)
{
	RealVector R(1);
	R[0] = r;
	Eigen::SelfAdjointEigenSolver<RealMatrix> es(model.potential(R));
	return es.eigenvectors();
}

double edge_norm(const GridWavefunction& wf)
{
	const Eigen::Index n = wf.grid.size();
	const Eigen::Index edge = std::max<Eigen::Index>(1, n / 20);
	double s = 0.0;
	for (Eigen::Index i = 0; i < edge; i++)
	{
		s += wf.psi.col(i).squaredNorm() + wf.psi.col(n - 1 - i).squaredNorm();
	}
	return s * wf.dR();
}

} // namespace

GridSpec default_grid(const Model& model)
{
	if (model.positive_domain())
	{
		return GridSpec{0.5, 30.0, 8192};
	}
	return GridSpec{-40.0, 40.0, 4096};
}

double GridWavefunction::norm() const
{
	return psi.squaredNorm() * dR();
}

GridWavefunction initial_wavepacket(const Model& model, const GridSpec& spec, double r0, double p0, double alpha, Occupation occ)
{
	if (spec.points < 4 || !(spec.r_max > spec.r_min))
	{
		throw ConfigError("invalid grid specification");
	}
	if (!(alpha > 0.0))
	{
		throw ConfigError("wavepacket width alpha must be positive");
	}
	GridWavefunction wf;
	wf.grid = RealVector::LinSpaced(spec.points, spec.r_min, spec.r_max - (spec.r_max - spec.r_min) / spec.points);
	check_grid(model, wf.grid);
	if (occ.state < 0 || occ.state >= model.n_states())
	{
		throw ConfigError("occupied state index out of range");
	}
	wf.mass = model.masses()[0];
	const int F = model.n_states();
	wf.psi = ComplexMatrix::Zero(F, spec.points);
	std::vector<RealMatrix> T;
	if (occ.representation == Representation::Adiabatic)
	{
		T = adiabatic_vectors(model, wf.grid);
	}
	for (int i = 0; i < spec.points; i++)
	{
		const double x = wf.grid[i] - r0;
		const Complex amp = std::exp(Complex(-0.5 * alpha * x * x, p0 * x));
		if (occ.representation == Representation::Diabatic)
		{
			wf.psi(occ.state, i) = amp;
		}
		else
		{
			wf.psi.col(i) = amp * T[i].col(occ.state).cast<Complex>();
		}
	}
	wf.psi /= std::sqrt(wf.norm());
	return wf;
}

GridWavefunction initial_wavepacket(const ModelDefinition& def, const GridSpec& spec, Occupation occ)
{
	const Model& model = *def.model;
	if (const auto* w = std::get_if<Wavepacket>(&def.nuclear))
	{
		return initial_wavepacket(model, spec, w->r0, w->p0, w->alpha, occ);
	}
	if (const auto* m = std::get_if<MorseGround>(&def.nuclear))
	{
		return initial_wavepacket(model, spec, m->r_eq, 0.0, m->mass * m->omega, occ);
	}
	throw ConfigError("model '" + model.label() + "' has no wavepacket initial condition");
}

struct SplitOperator::Impl
{
	std::vector<ComplexMatrix> half_potential;
	ComplexVector kinetic;
	std::unique_ptr<Fft> fft;
	int states;
};

SplitOperator::SplitOperator(const Model& model, const RealVector& grid, double mass, double dt) : impl(std::make_unique<Impl>())
{
	check_grid(model, grid);
	const int n = static_cast<int>(grid.size());
	const double dR = grid[1] - grid[0];
	impl->states = model.n_states();
	impl->half_potential.resize(n);
	RealVector R(1);
	for (int i = 0; i < n; i++)
	{
		R[0] = grid[i];
		impl->half_potential[i] = symmetric_propagator(model.potential(R), 0.5 * dt);
	}
	const RealVector k = wavenumbers(n, dR);
	impl->kinetic.resize(n);
	for (int j = 0; j < n; j++)
	{
		impl->kinetic[j] = std::exp(Complex(0.0, -dt * k[j] * k[j] / (2.0 * mass))) / static_cast<double>(n);
	}
	impl->fft = std::make_unique<Fft>(n);
}

SplitOperator::~SplitOperator() = default;

void SplitOperator::step(GridWavefunction& wf) const
{
	const Eigen::Index n = wf.grid.size();
	for (Eigen::Index i = 0; i < n; i++)
	{
		wf.psi.col(i) = impl->half_potential[i] * wf.psi.col(i);
	}
	for (int s = 0; s < impl->states; s++)
	{
		std::vector<Complex> r = row(wf.psi, s);
		impl->fft->run_forward(r.data());
		for (Eigen::Index j = 0; j < n; j++)
		{
			r[j] *= impl->kinetic[j];
		}
		impl->fft->run_backward(r.data());
		for (Eigen::Index i = 0; i < n; i++)
		{
			wf.psi(s, i) = r[i];
		}
	}
	for (Eigen::Index i = 0; i < n; i++)
	{
		wf.psi.col(i) = impl->half_potential[i] * wf.psi.col(i);
	}
}

std::vector<GridWavefunction> grid_propagate(const Model& model, const GridWavefunction& psi0, double dt, const std::vector<double>& times, double edge_tolerance)
{
	if (!(dt > 0.0))
	{
		throw ConfigError("time step must be positive");
	}
	if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
	{
		throw ConfigError("snapshot times must be ascending and non-negative");
	}
	const SplitOperator op(model, psi0.grid, psi0.mass, dt);
	std::vector<GridWavefunction> out;
	GridWavefunction wf = psi0;
	long step = 0;
	for (double target : times)
	{
		const long steps = std::lround(target / dt);
		while (step < steps)
		{
			op.step(wf);
			step++;
			if (step % 50 == 0 && edge_norm(wf) > edge_tolerance)
			{
				throw ExtentError("wavepacket reached the grid edge at t = " + std::to_string(step * dt) + " (edge norm " + std::to_string(edge_norm(wf)) + ")");
			}
		}
		if (edge_norm(wf) > edge_tolerance)
		{
			throw ExtentError("wavepacket reached the grid edge at t = " + std::to_string(step * dt));
		}
		out.push_back(wf);
	}
	return out;
}

double grid_energy(const Model& model, const GridWavefunction& wf)
{
	const int n = static_cast<int>(wf.grid.size());
	const Fft fft(n);
	const RealVector k = wavenumbers(n, wf.dR());
	double kinetic = 0.0;
	for (int s = 0; s < wf.psi.rows(); s++)
	{
		std::vector<Complex> r = row(wf.psi, s);
		fft.run_forward(r.data());
		for (int j = 0; j < n; j++)
		{
			kinetic += std::norm(r[j]) * k[j] * k[j] / (2.0 * wf.mass);
		}
	}
	kinetic *= wf.dR() / n;
	double potential = 0.0;
	RealVector R(1);
	for (int i = 0; i < n; i++)
	{
		R[0] = wf.grid[i];
		potential += (wf.psi.col(i).adjoint() * model.potential(R).cast<Complex>() * wf.psi.col(i)).value().real();
	}
	return kinetic + potential * wf.dR();
}

RealVector diabatic_populations(const GridWavefunction& wf)
{
	return wf.psi.cwiseAbs2().rowwise().sum() * wf.dR();
}

ComplexMatrix grid_density(const Model& model, const GridWavefunction& wf, Representation rep)
{
	const int F = static_cast<int>(wf.psi.rows());
	ComplexMatrix rho = ComplexMatrix::Zero(F, F);
	for (Eigen::Index i = 0; i < wf.grid.size(); i++)
	{
		ComplexVector c = wf.psi.col(i);
		if (rep == Representation::Adiabatic)
		{
			c = sorted_vectors(model, wf.grid[i]).transpose().cast<Complex>() * c;
		}
		rho += c * c.adjoint();
	}
	return rho * wf.dR();
}

RealVector adiabatic_populations(const Model& model, const GridWavefunction& wf)
{
	return grid_density(model, wf, Representation::Adiabatic).diagonal().real();
}

ChannelTable grid_channels(const Model& model, const GridWavefunction& wf)
{
	const int F = static_cast<int>(wf.psi.rows());
	ChannelTable t;
	t.transmission.assign(F, 0.0);
	t.reflection.assign(F, 0.0);
	t.transmission_stderr.assign(F, 0.0);
	t.reflection_stderr.assign(F, 0.0);
	for (Eigen::Index i = 0; i < wf.grid.size(); i++)
	{
		const RealVector p = (sorted_vectors(model, wf.grid[i]).transpose().cast<Complex>() * wf.psi.col(i)).cwiseAbs2() * wf.dR();
		auto& side = wf.grid[i] > 0.0 ? t.transmission : t.reflection;
		for (int k = 0; k < F; k++)
		{
			side[k] += p[k];
		}
	}
	t.n_traj = 1;
	return t;
}

std::vector<double> grid_momentum_distribution(const GridWavefunction& wf, const std::vector<double>& p_grid, double a)
{
	if (a < 0.0)
	{
		throw ConfigError("smoothing parameter must be non-negative");
	}
	const int n = static_cast<int>(wf.grid.size());
	const double dR = wf.dR();
	const Fft fft(n);
	const RealVector k = wavenumbers(n, dR);
	RealVector rho = RealVector::Zero(n);
	for (int s = 0; s < wf.psi.rows(); s++)
	{
		std::vector<Complex> r = row(wf.psi, s);
		fft.run_forward(r.data());
		for (int j = 0; j < n; j++)
		{
			rho[j] += std::norm(r[j]) * dR * dR / (2.0 * std::numbers::pi);
		}
	}
	const double dk = 2.0 * std::numbers::pi / (n * dR);
	std::vector<double> out(p_grid.size(), 0.0);
	if (a > 0.0)
	{
		const double norm = 1.0 / (2.0 * std::sqrt(std::numbers::pi * a));
		for (std::size_t q = 0; q < p_grid.size(); q++)
		{
			double s = 0.0;
			for (int j = 0; j < n; j++)
			{
				const double x = p_grid[q] - k[j];
				s += rho[j] * std::exp(-x * x / (4.0 * a));
			}
			out[q] = s * norm * dk;
		}
		return out;
	}
	// ascending wavenumber order
	std::vector<double> ks(n), rs(n);
	for (int j = 0; j < n; j++)
	{
		const int src = (j + n / 2) % n;
		ks[j] = k[src];
		rs[j] = rho[src];
	}
	for (std::size_t q = 0; q < p_grid.size(); q++)
	{
		const double p = p_grid[q];
		if (p < ks.front() || p > ks.back())
		{
			continue;
		}
		const auto it = std::upper_bound(ks.begin(), ks.end(), p);
		const std::size_t hi = std::min<std::size_t>(it - ks.begin(), n - 1);
		const std::size_t lo = hi - 1;
		const double f = (p - ks[lo]) / (ks[hi] - ks[lo]);
		out[q] = (1.0 - f) * rs[lo] + f * rs[hi];
	}
	return out;
}

double grid_mean_R(const GridWavefunction& wf)
{
	double s = 0.0;
	for (Eigen::Index i = 0; i < wf.grid.size(); i++)
	{
		s += wf.grid[i] * wf.psi.col(i).squaredNorm();
	}
	return s * wf.dR();
}

ComplexVector frozen_nuclei_tdse(const HamiltonianPath& H, const ComplexVector& c0, double t0, double t1, double dt, int order)
{
	if (!(dt > 0.0) || t1 < t0)
	{
		throw ConfigError("invalid TDSE time interval");
	}
	if (order != 2 && order != 4)
	{
		throw ConfigError("TDSE order must be 2 or 4");
	}
	const long steps = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / dt - 1e-12)));
	const double h = (t1 - t0) / static_cast<double>(steps);
	const double offset = std::sqrt(3.0) / 6.0;
	ComplexVector c = c0;
	for (long s = 0; s < steps; s++)
	{
		const double t = t0 + static_cast<double>(s) * h;
		if (order == 2)
		{
			c = hermitian_propagator(H(t + 0.5 * h), h) * c;
		}
		else
		{
			const ComplexMatrix H1 = H(t + (0.5 - offset) * h);
			const ComplexMatrix H2 = H(t + (0.5 + offset) * h);
			ComplexMatrix M = 0.5 * h * (H1 + H2) - I * (std::sqrt(3.0) / 12.0 * h * h) * (H2 * H1 - H1 * H2);
			M = 0.5 * (M + M.adjoint()).eval();
			c = hermitian_propagator(M, 1.0) * c;
		}
	}
	return c;
}

double landau_zener_probability(double coupling, double slope_difference, double velocity)
{
	if (!(coupling > 0.0) || !(slope_difference > 0.0) || !(velocity > 0.0))
	{
		throw ConfigError("Landau-Zener parameters must be positive");
	}
	return std::exp(-2.0 * std::numbers::pi * coupling * coupling / (velocity * slope_difference));
}

} // namespace naf
