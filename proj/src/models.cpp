/// @file models.cpp
/// @brief Benchmark Hamiltonians and the model registry.

#include "naf/models.hpp"

#include "naf/errors.hpp"
#include "naf/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace naf {

GradientTensor::GradientTensor(int n_dof, int n_states)
{
	reset(n_dof, n_states);
}

void GradientTensor::reset(int n_dof, int n_states)
{
	shift.setZero(n_dof);
	entries.clear();
	states = n_states;
}

RealMatrix GradientTensor::dense(int J) const
{
	RealMatrix M = RealMatrix::Identity(states, states) * shift[J];
	for (const Entry& e : entries)
	{
		if (e.dof != J)
		{
			continue;
		}
		M(e.row, e.col) += e.value;
		if (e.row != e.col)
		{
			M(e.col, e.row) += e.value;
		}
	}
	return M;
}

RealMatrix GradientTensor::contract(const RealVector& w) const
{
	RealMatrix M = RealMatrix::Identity(states, states) * shift.dot(w);
	for (const Entry& e : entries)
	{
		const double v = e.value * w[e.dof];
		M(e.row, e.col) += v;
		if (e.row != e.col)
		{
			M(e.col, e.row) += v;
		}
	}
	return M;
}

RealVector GradientTensor::trace_with(const RealMatrix& W) const
{
	RealVector f = shift * W.trace();
	for (const Entry& e : entries)
	{
		f[e.dof] += e.row == e.col ? e.value * W(e.row, e.row) : e.value * (W(e.row, e.col) + W(e.col, e.row));
	}
	return f;
}

RealVector GradientTensor::projected(const RealMatrix& T, int k, int l) const
{
	RealVector g = k == l ? RealVector(shift) : RealVector(RealVector::Zero(shift.size()));
	for (const Entry& e : entries)
	{
		double v = T(e.row, k) * T(e.col, l);
		if (e.row != e.col)
		{
			v += T(e.col, k) * T(e.row, l);
		}
		g[e.dof] += e.value * v;
	}
	return g;
}

void Model::check_dimension(const RealVector& R) const
{
	if (R.size() != n_dof())
	{
		throw ConfigError("model " + name + " expects " + std::to_string(n_dof()) + " nuclear coordinates, got " + std::to_string(R.size()));
	}
}

RealMatrix Model::potential(const RealVector& R) const
{
	check_dimension(R);
	RealMatrix V;
	potential_into(R, V);
	return V;
}

GradientTensor Model::gradient(const RealVector& R) const
{
	check_dimension(R);
	GradientTensor G;
	gradient_into(R, G);
	return G;
}

LinearCouplingModel::LinearCouplingModel(std::string label, RealMatrix h0_, RealVector omega, std::vector<GradientTensor::Entry> couplings_, RealVector masses) :
	h0(std::move(h0_)),
	omega2(omega.array().square()),
	couplings(std::move(couplings_))
{
	name = std::move(label);
	states = static_cast<int>(h0.rows());
	mass = masses.size() == 0 ? RealVector(RealVector::Ones(omega.size())) : std::move(masses);
	scale = RealVector::Ones(omega.size());
	block.assign(omega.size(), -1);
	for (auto& e : couplings)
	{
		if (e.row > e.col)
		{
			std::swap(e.row, e.col);
		}
	}
}

void LinearCouplingModel::potential_into(const RealVector& R, RealMatrix& V) const
{
	V = h0;
	const double harmonic = 0.5 * omega2.dot(R.cwiseProduct(R));
	V.diagonal().array() += harmonic;
	for (const auto& e : couplings)
	{
		const double v = e.value * R[e.dof];
		V(e.row, e.col) += v;
		if (e.row != e.col)
		{
			V(e.col, e.row) += v;
		}
	}
}

void LinearCouplingModel::gradient_into(const RealVector& R, GradientTensor& G) const
{
	G.reset(n_dof(), states);
	G.shift = omega2.cwiseProduct(R);
	G.entries = couplings;
}

OneDimensionalModel::OneDimensionalModel(std::string label, int F, double m, Evaluator f, bool positive_domain) :
	eval(std::move(f))
{
	name = std::move(label);
	states = F;
	mass = RealVector::Constant(1, m);
	scale = RealVector::Ones(1);
	block.assign(1, -1);
	positive = positive_domain;
}

void OneDimensionalModel::potential_into(const RealVector& R, RealMatrix& V) const
{
	RealMatrix dV(states, states);
	V.resize(states, states);
	eval(R[0], V, dV);
}

void OneDimensionalModel::gradient_into(const RealVector& R, GradientTensor& G) const
{
	RealMatrix V(states, states), dV(states, states);
	eval(R[0], V, dV);
	G.reset(1, states);
	for (int r = 0; r < states; r++)
	{
		for (int c = r; c < states; c++)
		{
			if (dV(r, c) != 0.0)
			{
				G.entries.push_back({0, r, c, dV(r, c)});
			}
		}
	}
}

BathModes discretize_spectral_density(SpectralDensity kind, double strength, double omega_c, int n_bath)
{
	if (n_bath < 1)
	{
		throw ConfigError("bath mode count must be at least 1");
	}
	if (!(strength > 0.0) || !(omega_c > 0.0))
	{
		throw ConfigError("spectral density parameters must be positive");
	}
	BathModes b;
	b.omega.resize(n_bath);
	b.coupling.resize(n_bath);
	const double nb1 = n_bath + 1.0;
	for (int j = 1; j <= n_bath; j++)
	{
		double w = 0.0;
		double c = 0.0;
		if (kind == SpectralDensity::Ohmic)
		{
			w = -omega_c * std::log(1.0 - j / nb1);
			c = w * std::sqrt(strength * omega_c / nb1);
		}
		else
		{
			// j runs downward in frequency; store ascending
			const int jj = n_bath + 1 - j;
			if (2 * jj == n_bath + 1)
			{
				w = omega_c;
			}
			else
			{
				w = omega_c * std::tan(std::numbers::pi / 2.0 * (1.0 - jj / nb1));
			}
			c = w * std::sqrt(2.0 * strength / nb1);
		}
		b.omega[j - 1] = w;
		b.coupling[j - 1] = c;
	}
	return b;
}

namespace {

/// Reads typed values out of the parameter map and reports keys nobody asked for.
class ParamReader
{
public:
	explicit ParamReader(const ModelSpec& s) :
		spec(s)
	{
	}

	bool has(const std::string& key) const { return spec.params.count(key) > 0; }

	double number(const std::string& key, double fallback)
	{
		used.insert(key);
		auto it = spec.params.find(key);
		if (it == spec.params.end())
		{
			return fallback;
		}
		return parse(key, it->second);
	}

	double required(const std::string& key)
	{
		used.insert(key);
		auto it = spec.params.find(key);
		if (it == spec.params.end())
		{
			throw ConfigError("model " + spec.name + " requires parameter '" + key + "'");
		}
		return parse(key, it->second);
	}

	int integer(const std::string& key, int fallback, int lo, int hi)
	{
		const double v = number(key, fallback);
		if (v != std::floor(v) || v < lo || v > hi)
		{
			throw ConfigError("parameter '" + key + "' of model " + spec.name + " must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
		}
		return static_cast<int>(v);
	}

	std::string text(const std::string& key, const std::string& fallback)
	{
		used.insert(key);
		auto it = spec.params.find(key);
		return it == spec.params.end() ? fallback : it->second;
	}

	void finish() const
	{
		std::vector<std::string> unknown;
		for (const auto& [k, v] : spec.params)
		{
			if (!used.count(k))
			{
				unknown.push_back(k);
			}
		}
		if (!unknown.empty())
		{
			std::string msg = "unknown parameter(s) for model " + spec.name + ":";
			for (const auto& k : unknown)
			{
				msg += " " + k;
			}
			throw ConfigError(msg);
		}
	}

private:
	double parse(const std::string& key, const std::string& text) const
	{
		try
		{
			std::size_t pos = 0;
			const double v = std::stod(text, &pos);
			if (pos != text.size() || !std::isfinite(v))
			{
				throw std::invalid_argument(text);
			}
			return v;
		}
		catch (const std::exception&)
		{
			throw ConfigError("parameter '" + key + "' of model " + spec.name + " is not a number: '" + text + "'");
		}
	}

	const ModelSpec& spec;
	std::set<std::string> used;
};

double positive(double v, const std::string& what)
{
	if (!(v > 0.0))
	{
		throw ConfigError(what + " must be positive");
	}
	return v;
}

/// sin(pi x), exact at integer and half-integer x.
double sin_pi(double x)
{
	const double r = std::fmod(x, 2.0);
	if (r == std::floor(r))
	{
		return 0.0;
	}
	if (r == 0.5 || r == -1.5)
	{
		return 1.0;
	}
	if (r == 1.5 || r == -0.5)
	{
		return -1.0;
	}
	return std::sin(std::numbers::pi * r);
}

/// Every site carries its own copy of the bath, coupled to its diagonal element.
ModelDefinition site_bath_model(const std::string& label, const RealMatrix& hs, const BathModes& bath, double beta)
{
	const int F = static_cast<int>(hs.rows());
	const int nb = bath.count();
	RealVector omega(F * nb);
	std::vector<GradientTensor::Entry> couplings;
	std::vector<int> blocks(F * nb);
	for (int n = 0; n < F; n++)
	{
		for (int j = 0; j < nb; j++)
		{
			const int dof = n * nb + j;
			omega[dof] = bath.omega[j];
			blocks[dof] = n;
			couplings.push_back({dof, n, n, bath.coupling[j]});
		}
	}
	auto model = std::make_shared<LinearCouplingModel>(label, hs, omega, std::move(couplings));
	model->set_blocks(std::move(blocks));
	ModelDefinition def;
	def.nuclear = ThermalHarmonic{omega, beta};
	def.model = std::move(model);
	return def;
}

ModelDefinition spin_boson(ParamReader& p)
{
	const double eps = p.number("epsilon", 1.0);
	const double delta = p.number("delta", 1.0);
	const double omega_c = positive(p.number("omega_c", 1.0), "omega_c");
	const double beta = positive(p.number("beta", 5.0), "beta");
	const int nb = p.integer("n_bath", 300, 1, 100000);
	const std::string kind = p.text("spectral_density", "ohmic");
	BathModes bath;
	if (kind == "ohmic")
	{
		bath = discretize_spectral_density(SpectralDensity::Ohmic, p.number("alpha", 0.1), omega_c, nb);
	}
	else if (kind == "debye")
	{
		bath = discretize_spectral_density(SpectralDensity::Debye, p.required("lambda"), omega_c, nb);
	}
	else
	{
		throw ConfigError("spectral_density must be ohmic or debye");
	}
	RealMatrix hs(2, 2);
	hs << eps, delta, delta, -eps;
	std::vector<GradientTensor::Entry> couplings;
	for (int j = 0; j < nb; j++)
	{
		couplings.push_back({j, 0, 0, bath.coupling[j]});
		couplings.push_back({j, 1, 1, -bath.coupling[j]});
	}
	ModelDefinition def;
	def.model = std::make_shared<LinearCouplingModel>("spin_boson", hs, bath.omega, std::move(couplings));
	def.nuclear = ThermalHarmonic{bath.omega, beta};
	def.occupation = {0, Representation::Diabatic};
	def.default_dt = 0.01;
	def.default_n_traj = 100000;
	return def;
}

ModelDefinition fmo7(ParamReader& p)
{
	RealMatrix hs(7, 7);
	hs << 12410, -87.7, 5.5, -5.9, 6.7, -13.7, -9.9,
		-87.7, 12530, 30.8, 8.2, 0.7, 11.8, 4.3,
		5.5, 30.8, 12210, -53.5, -2.2, -9.6, 6.0,
		-5.9, 8.2, -53.5, 12320, -70.7, -17.0, -63.3,
		6.7, 0.7, -2.2, -70.7, 12480, 81.1, -1.3,
		-13.7, 11.8, -9.6, -17.0, 81.1, 12630, 39.7,
		-9.9, 4.3, 6.0, -63.3, -1.3, 39.7, 12440;
	hs *= units::hartree_per_wavenumber;
	const double lambda = p.number("lambda_cm", 35.0) * units::hartree_per_wavenumber;
	const double omega_c = p.number("omega_c_cm", 106.14) * units::hartree_per_wavenumber;
	const int nb = p.integer("n_bath", 50, 1, 10000);
	const double temperature = positive(p.number("temperature", 77.0), "temperature");
	const int site = p.integer("initial_site", 1, 1, 7);
	const BathModes bath = discretize_spectral_density(SpectralDensity::Debye, lambda, omega_c, nb);
	ModelDefinition def = site_bath_model("fmo7", hs, bath, units::beta_from_kelvin(temperature));
	def.occupation = {site - 1, Representation::Diabatic};
	def.default_dt = 0.1 * units::au_time_per_fs;
	def.default_n_traj = 100000;
	return def;
}

ModelDefinition singlet_fission(ParamReader& p)
{
	RealMatrix hs(3, 3);
	hs << 0.2, -0.05, 0.0,
		-0.05, 0.3, -0.05,
		0.0, -0.05, 0.0;
	hs *= units::hartree_per_ev;
	const double lambda = p.number("lambda_ev", 0.1) * units::hartree_per_ev;
	const double omega_c = p.number("omega_c_ev", 0.18) * units::hartree_per_ev;
	const int nb = p.integer("n_bath", 200, 1, 10000);
	const double temperature = positive(p.number("temperature", 300.0), "temperature");
	const BathModes bath = discretize_spectral_density(SpectralDensity::Debye, lambda, omega_c, nb);
	ModelDefinition def = site_bath_model("singlet_fission", hs, bath, units::beta_from_kelvin(temperature));
	def.occupation = {0, Representation::Diabatic};
	def.default_dt = 0.001 * units::au_time_per_fs;
	def.default_n_traj = 24000;
	return def;
}

ModelDefinition cavity(ParamReader& p, int F)
{
	const int nm = p.integer("n_modes", 400, 1, 100000);
	const double L = positive(p.number("length", 236200.0), "cavity length");
	const double r0 = p.number("r0", 0.5 * L);
	const double eps0 = positive(p.number("epsilon0", 1.0 / (4.0 * std::numbers::pi)), "epsilon0");
	const double levels[3] = {-0.6738, -0.2798, -0.1547};
	RealMatrix dipole = RealMatrix::Zero(3, 3);
	dipole(0, 1) = -1.034;
	dipole(1, 2) = -2.536;
	RealMatrix ha = RealMatrix::Zero(F, F);
	for (int n = 0; n < F; n++)
	{
		ha(n, n) = levels[n];
	}
	RealVector omega(nm);
	std::vector<GradientTensor::Entry> couplings;
	const double amplitude = std::sqrt(2.0 / (eps0 * L));
	for (int j = 1; j <= nm; j++)
	{
		const double w = j * std::numbers::pi * units::speed_of_light / L;
		omega[j - 1] = w;
		const double lam = amplitude * sin_pi(j * r0 / L);
		for (int n = 0; n < F; n++)
		{
			for (int m = n + 1; m < F; m++)
			{
				const double v = w * lam * dipole(n, m);
				if (v != 0.0)
				{
					couplings.push_back({j - 1, n, m, v});
				}
			}
		}
	}
	ModelDefinition def;
	def.model = std::make_shared<LinearCouplingModel>(F == 2 ? "cavity2level" : "cavity3level", ha, omega, std::move(couplings));
	def.nuclear = VacuumHarmonic{omega};
	def.occupation = {F - 1, Representation::Diabatic};
	def.default_dt = 0.1;
	def.default_n_traj = 100000;
	return def;
}

ModelDefinition scattering_model(ParamReader& p, std::string label, double mass, double r0, double alpha, double radius, OneDimensionalModel::Evaluator f)
{
	mass = positive(p.number("mass", mass), "mass");
	ModelDefinition def;
	def.nuclear = Wavepacket{p.number("r0", r0), p.required("p0"), positive(p.number("alpha", alpha), "alpha")};
	def.model = std::make_shared<OneDimensionalModel>(std::move(label), 2, mass, std::move(f));
	def.occupation = {0, Representation::Adiabatic};
	def.default_dt = 0.01 * units::au_time_per_fs;
	def.default_n_traj = 100000;
	def.interaction_radius = p.number("interaction_radius", radius);
	def.momentum_damping = 0.01;
	def.scattering = true;
	return def;
}

ModelDefinition tully_sac(ParamReader& p)
{
	const double A = p.number("a", 0.01), B = p.number("b", 1.6), C = p.number("c", 0.005), D = p.number("d", 1.0);
	return scattering_model(p, "tully_sac", 2000.0, -3.8, 1.0, 4.0, [=](double R, RealMatrix& V, RealMatrix& dV) {
		const double e = std::exp(-B * std::abs(R));
		const double v11 = A * (1.0 - e) * (R > 0 ? 1.0 : (R < 0 ? -1.0 : 0.0));
		const double v12 = C * std::exp(-D * R * R);
		V << v11, v12, v12, -v11;
		dV << A * B * e, -2.0 * D * R * v12, -2.0 * D * R * v12, -A * B * e;
	});
}

ModelDefinition tully_dac(ParamReader& p)
{
	const double A = p.number("a", 0.1), B = p.number("b", 0.28), C = p.number("c", 0.015), D = p.number("d", 0.06), E0 = p.number("e0", 0.05);
	return scattering_model(p, "tully_dac", 2000.0, -10.0, 1.0, 8.0, [=](double R, RealMatrix& V, RealMatrix& dV) {
		const double g = A * std::exp(-B * R * R);
		const double v12 = C * std::exp(-D * R * R);
		V << 0.0, v12, v12, -g + E0;
		dV << 0.0, -2.0 * D * R * v12, -2.0 * D * R * v12, 2.0 * B * R * g;
	});
}

ModelDefinition tully_ecr(ParamReader& p)
{
	const double B = p.number("b", 0.9), C = p.number("c", 0.1), E0 = p.number("e0", -0.0006);
	return scattering_model(p, "tully_ecr", 2000.0, -13.0, 1.0, 8.0, [=](double R, RealMatrix& V, RealMatrix& dV) {
		const double e = std::exp(-B * std::abs(R));
		const double v12 = R < 0 ? C * e : C * (2.0 - e);
		V << E0, v12, v12, -E0;
		dV << 0.0, C * B * e, C * B * e, 0.0;
	});
}

ModelDefinition asym_sac(ParamReader& p)
{
	const double A1 = p.number("a1", 0.04), A2 = p.number("a2", 0.01), B = p.number("b", 1.0), C = p.number("c", 0.005), D = p.number("d", 1.0), Q = p.number("q", 0.7);
	return scattering_model(p, "asym_sac", 1980.0, -5.0, 0.25, 5.0, [=](double R, RealMatrix& V, RealMatrix& dV) {
		const double t = std::tanh(B * R);
		const double s2 = 1.0 - t * t;
		const double v12 = C * std::exp(-D * (R + Q) * (R + Q));
		V << A1 * (1.0 + t), v12, v12, A2 * (1.0 - t);
		dV << A1 * B * s2, -2.0 * D * (R + Q) * v12, -2.0 * D * (R + Q) * v12, -A2 * B * s2;
	});
}

struct MorseParameters
{
	double C[3], D[3], Ri[3], beta[3];
	double A[3], Rij[3], alpha[3]; ///< pairs (1,2), (2,3), (3,1)
	double Re;
};

ModelDefinition photodissociation(ParamReader& p, int which)
{
	static const MorseParameters table[3] = {
		{{0.0, 0.01, 0.006}, {0.003, 0.004, 0.003}, {5.0, 4.0, 6.0}, {0.65, 0.60, 0.65}, {0.002, 0.002, 0.0}, {3.40, 4.80, 0.0}, {16.0, 16.0, 0.0}, 2.9},
		{{0.0, 0.01, 0.02}, {0.020, 0.010, 0.003}, {4.5, 4.0, 4.4}, {0.65, 0.40, 0.65}, {0.005, 0.0, 0.005}, {3.66, 0.0, 3.34}, {32.0, 0.0, 32.0}, 3.3},
		{{0.02, 0.0, 0.02}, {0.020, 0.020, 0.003}, {4.0, 4.5, 6.0}, {0.40, 0.65, 0.65}, {0.005, 0.0, 0.005}, {3.40, 0.0, 4.97}, {32.0, 0.0, 32.0}, 2.1},
	};
	const MorseParameters m = table[which - 1];
	const double mass = positive(p.number("mass", 20000.0), "mass");
	const double omega = positive(p.number("omega", 0.005), "omega");
	auto f = [m](double R, RealMatrix& V, RealMatrix& dV) {
		V.setZero();
		dV.setZero();
		for (int i = 0; i < 3; i++)
		{
			const double e = std::exp(-m.beta[i] * (R - m.Ri[i]));
			V(i, i) = m.D[i] * (1.0 - e) * (1.0 - e) + m.C[i];
			dV(i, i) = 2.0 * m.D[i] * m.beta[i] * (1.0 - e) * e;
		}
		const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
		for (int q = 0; q < 3; q++)
		{
			if (m.A[q] == 0.0)
			{
				continue;
			}
			const double x = R - m.Rij[q];
			const double v = m.A[q] * std::exp(-m.alpha[q] * x * x);
			const int a = pairs[q][0], b = pairs[q][1];
			V(a, b) = V(b, a) = v;
			dV(a, b) = dV(b, a) = -2.0 * m.alpha[q] * x * v;
		}
	};
	ModelDefinition def;
	def.model = std::make_shared<OneDimensionalModel>("photodissociation_" + std::to_string(which), 3, mass, f, true);
	def.nuclear = MorseGround{m.Re, mass, omega};
	def.occupation = {0, Representation::Diabatic};
	def.default_dt = 0.01 * units::au_time_per_fs;
	def.default_n_traj = 100000;
	def.momentum_damping = 0.05;
	return def;
}

/// Vibronic model from eV-valued tables; stored in mass-weighted coordinates.
struct VibronicTerm
{
	int mode;
	int row;
	int col;
	double value_ev;
};

ModelDefinition lvcm(const std::string& label, const std::vector<double>& energies_ev, const std::vector<double>& omega_ev, const std::vector<VibronicTerm>& terms, DimensionlessGaussian init)
{
	const int F = static_cast<int>(energies_ev.size());
	const int N = static_cast<int>(omega_ev.size());
	RealMatrix h0 = RealMatrix::Zero(F, F);
	for (int n = 0; n < F; n++)
	{
		h0(n, n) = energies_ev[n] * units::hartree_per_ev;
	}
	RealVector omega(N);
	for (int k = 0; k < N; k++)
	{
		omega[k] = omega_ev[k] * units::hartree_per_ev;
	}
	std::vector<GradientTensor::Entry> couplings;
	for (const auto& t : terms)
	{
		couplings.push_back({t.mode, t.row, t.col, t.value_ev * units::hartree_per_ev * std::sqrt(omega[t.mode])});
	}
	auto model = std::make_shared<LinearCouplingModel>(label, h0, omega, std::move(couplings));
	model->set_scale(omega.cwiseSqrt());
	init.omega = omega;
	ModelDefinition def;
	def.model = std::move(model);
	def.nuclear = std::move(init);
	def.occupation = {1, Representation::Diabatic};
	def.default_dt = 0.01 * units::au_time_per_fs;
	def.default_n_traj = 100000;
	return def;
}

DimensionlessGaussian ground_state_gaussian(int N)
{
	return DimensionlessGaussian{RealVector::Zero(N), RealVector::Constant(N, std::sqrt(0.5)), RealVector()};
}

ModelDefinition pyrazine3()
{
	return lvcm("lvcm_pyrazine3", {3.94, 4.84}, {0.126, 0.074, 0.118},
		{{0, 0, 0, 0.037}, {1, 0, 0, -0.105}, {0, 1, 1, -0.254}, {1, 1, 1, 0.149}, {2, 0, 1, 0.262}},
		ground_state_gaussian(3));
}

ModelDefinition pyrazine24()
{
	const double table[23][3] = {
		{0.074, -0.0964, 0.1194}, {0.1273, 0.0470, 0.2012}, {0.1568, 0.1594, 0.0484}, {0.1347, 0.0308, -0.0308},
		{0.3431, 0.0782, -0.0782}, {0.1157, 0.0261, -0.0261}, {0.3242, 0.0717, -0.0717}, {0.3621, 0.0780, -0.0780},
		{0.2673, 0.0560, -0.0560}, {0.3052, 0.0625, -0.0625}, {0.0968, 0.0188, -0.0188}, {0.0589, 0.0112, -0.0112},
		{0.0400, 0.0069, -0.0069}, {0.1726, 0.0265, -0.0265}, {0.2863, 0.0433, -0.0433}, {0.2484, 0.0361, -0.0361},
		{0.1536, 0.0210, -0.0210}, {0.2105, 0.0281, -0.0281}, {0.0778, 0.0102, -0.0102}, {0.2294, 0.0284, -0.0284},
		{0.1915, 0.0196, -0.0196}, {0.4000, 0.0306, -0.0306}, {0.3810, 0.0269, -0.0269}};
	std::vector<double> omega{0.0936};
	std::vector<VibronicTerm> terms{{0, 0, 1, 0.1825}};
	for (int k = 0; k < 23; k++)
	{
		omega.push_back(table[k][0]);
		terms.push_back({k + 1, 0, 0, table[k][1]});
		terms.push_back({k + 1, 1, 1, table[k][2]});
	}
	return lvcm("lvcm_pyrazine24", {-0.4617, 0.4617}, omega, terms, ground_state_gaussian(24));
}

ModelDefinition crco5()
{
	RealVector center(2), alpha(2);
	center << 0.0, 14.3514;
	alpha << 0.4501, 0.4586;
	return lvcm("lvcm_crco5", {0.0424, 0.0424, 0.4344}, {0.0129, 0.0129},
		{{1, 0, 0, -0.0328}, {1, 1, 1, 0.0328}, {0, 0, 1, 0.0328}, {0, 1, 2, -0.0978}, {1, 0, 2, -0.0978}},
		DimensionlessGaussian{center, alpha, RealVector()});
}

/// Constant Hamiltonian given row-major as "h = a b; c d"; one inert nuclear DOF.
ModelDefinition constant_model(ParamReader& p)
{
	std::vector<std::vector<double>> rows;
	std::stringstream all(p.text("h", "0 0.01; 0.01 0.02"));
	std::string row;
	while (std::getline(all, row, ';'))
	{
		std::stringstream rs(row);
		std::vector<double> values;
		double v;
		while (rs >> v)
		{
			values.push_back(v);
		}
		if (!rs.eof())
		{
			throw ConfigError("constant model: cannot parse matrix row '" + row + "'");
		}
		rows.push_back(values);
	}
	const int F = static_cast<int>(rows.size());
	RealMatrix h(F, F);
	for (int r = 0; r < F; r++)
	{
		if (static_cast<int>(rows[r].size()) != F)
		{
			throw ConfigError("constant model: matrix must be square");
		}
		for (int c = 0; c < F; c++)
		{
			h(r, c) = rows[r][c];
		}
	}
	if ((h - h.transpose()).cwiseAbs().maxCoeff() > 0.0)
	{
		throw ConfigError("constant model: matrix must be symmetric");
	}
	ModelDefinition def;
	def.model = std::make_shared<LinearCouplingModel>("constant", h, RealVector::Zero(1), std::vector<GradientTensor::Entry>{});
	def.nuclear = FixedPoint{RealVector::Zero(1), RealVector::Zero(1)};
	def.occupation = {p.integer("initial_state", 1, 1, F) - 1, Representation::Diabatic};
	def.default_dt = 0.1;
	def.default_n_traj = 1000;
	return def;
}

/// Two linear diabats crossing at R = 0 with constant coupling.
ModelDefinition landau_zener(ParamReader& p)
{
	const double slope = positive(p.number("slope_difference", 0.02), "slope_difference");
	const double coupling = p.number("coupling", 0.005);
	const double mass = positive(p.number("mass", 1e9), "mass");
	const double r0 = p.number("r0", -400.0);
	const double velocity = positive(p.number("velocity", 1.0), "velocity");
	auto f = [=](double R, RealMatrix& V, RealMatrix& dV) {
		V << 0.5 * slope * R, coupling, coupling, -0.5 * slope * R;
		dV << 0.5 * slope, 0.0, 0.0, -0.5 * slope;
	};
	ModelDefinition def;
	def.model = std::make_shared<OneDimensionalModel>("landau_zener", 2, mass, f);
	def.nuclear = FixedPoint{RealVector::Constant(1, r0), RealVector::Constant(1, mass * velocity)};
	def.occupation = {0, Representation::Diabatic};
	def.default_dt = 0.01;
	def.default_n_traj = 100;
	return def;
}

/// Two uncoupled parallel harmonic surfaces separated by a constant gap.
ModelDefinition harmonic_pair(ParamReader& p)
{
	const double omega = positive(p.number("omega", 1.0), "omega");
	const double gap = positive(p.number("gap", 0.5), "gap");
	const double mass = positive(p.number("mass", 1.0), "mass");
	const double r0 = p.number("r0", 1.0);
	const double p0 = p.number("p0", 0.0);
	const double k = mass * omega * omega;
	auto f = [=](double R, RealMatrix& V, RealMatrix& dV) {
		V << 0.5 * k * R * R, 0.0, 0.0, 0.5 * k * R * R + gap;
		dV << k * R, 0.0, 0.0, k * R;
	};
	ModelDefinition def;
	def.model = std::make_shared<OneDimensionalModel>("harmonic_pair", 2, mass, f);
	def.nuclear = FixedPoint{RealVector::Constant(1, r0), RealVector::Constant(1, p0)};
	def.occupation = {0, Representation::Adiabatic};
	def.default_dt = 0.01;
	def.default_n_traj = 1;
	return def;
}

} // namespace

std::vector<std::string> registered_models()
{
	return {"spin_boson", "fmo7", "cavity2level", "cavity3level", "singlet_fission", "tully_sac", "tully_dac", "tully_ecr", "asym_sac",
		"photodissociation_1", "photodissociation_2", "photodissociation_3", "lvcm_pyrazine3", "lvcm_pyrazine24", "lvcm_crco5",
		"constant", "landau_zener", "harmonic_pair"};
}

ModelDefinition build_model(const ModelSpec& spec)
{
	ParamReader p(spec);
	ModelDefinition def;
	const std::string& n = spec.name;
	if (n == "spin_boson")
	{
		def = spin_boson(p);
	}
	else if (n == "fmo7")
	{
		def = fmo7(p);
	}
	else if (n == "singlet_fission")
	{
		def = singlet_fission(p);
	}
	else if (n == "cavity2level" || n == "cavity3level")
	{
		def = cavity(p, n == "cavity2level" ? 2 : 3);
	}
	else if (n == "tully_sac")
	{
		def = tully_sac(p);
	}
	else if (n == "tully_dac")
	{
		def = tully_dac(p);
	}
	else if (n == "tully_ecr")
	{
		def = tully_ecr(p);
	}
	else if (n == "asym_sac")
	{
		def = asym_sac(p);
	}
	else if (n == "photodissociation_1" || n == "photodissociation_2" || n == "photodissociation_3")
	{
		def = photodissociation(p, n.back() - '0');
	}
	else if (n == "lvcm_pyrazine3")
	{
		def = pyrazine3();
	}
	else if (n == "lvcm_pyrazine24")
	{
		def = pyrazine24();
	}
	else if (n == "lvcm_crco5")
	{
		def = crco5();
	}
	else if (n == "constant")
	{
		def = constant_model(p);
	}
	else if (n == "landau_zener")
	{
		def = landau_zener(p);
	}
	else if (n == "harmonic_pair")
	{
		def = harmonic_pair(p);
	}
	else
	{
		throw ConfigError("unknown model '" + n + "'");
	}
	p.finish();
	return def;
}

} // namespace naf
