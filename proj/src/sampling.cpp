/// @file sampling.cpp
/// @brief Initial-condition samplers.

#include "naf/sampling.hpp"

#include "naf/errors.hpp"

#include <cmath>
#include <numbers>

namespace naf {

double default_gamma(int F)
{
	return (std::sqrt(F + 1.0) - 1.0) / F;
}

ElectronicInit sample_electronic_cps(int F, double gamma, Occupation occ, Representation target, const RealMatrix* T0, RandomStream& rng)
{
	if (!(gamma > -1.0 / F) || !std::isfinite(gamma))
	{
		throw ConfigError("CPS parameter gamma must exceed -1/F");
	}
	if (occ.state < 0 || occ.state >= F)
	{
		throw ConfigError("occupied state out of range");
	}
	ComplexVector g(F);
	for (int n = 0; n < F; n++)
	{
		const double x = rng.normal();
		const double p = rng.normal();
		g[n] = Complex(x, p);
	}
	g *= std::sqrt(2.0 * (1.0 + F * gamma)) / g.norm();
	ComplexMatrix Gamma = ComplexMatrix::Zero(F, F);
	for (int n = 0; n < F; n++)
	{
		Gamma(n, n) = 0.5 * std::norm(g[n]) - (n == occ.state ? 1.0 : 0.0);
	}
	ElectronicInit init{g, Gamma, target, occ.state, gamma, g};
	if (occ.representation != target)
	{
		if (T0 == nullptr)
		{
			throw ConfigError("representation change requested without a transformation matrix");
		}
		const ComplexMatrix T = T0->cast<Complex>();
		if (target == Representation::Adiabatic)
		{
			init.g = T.transpose() * g;
			init.Gamma = T.transpose() * Gamma * T;
		}
		else
		{
			init.g = T * g;
			init.Gamma = T * Gamma * T.transpose();
		}
	}
	return init;
}

double quantum_corrector(double beta, double omega)
{
	const double x = 0.5 * beta * omega;
	if (std::abs(x) < 1e-8)
	{
		return 1.0;
	}
	return x / std::tanh(x);
}

WignerMoments wigner_moments(const Model& model, const NuclearInitSpec& spec)
{
	const int N = model.n_dof();
	WignerMoments w;
	w.mean_R = RealVector::Zero(N);
	w.mean_P = RealVector::Zero(N);
	w.sigma_R = RealVector::Zero(N);
	w.sigma_P = RealVector::Zero(N);
	auto check = [N](Eigen::Index n) {
		if (n != N)
		{
			throw ConfigError("nuclear initial condition does not match the model's DOF count");
		}
	};
	if (const auto* s = std::get_if<ThermalHarmonic>(&spec))
	{
		check(s->omega.size());
		if (!(s->beta > 0.0))
		{
			throw ConfigError("thermal sampling requires beta > 0");
		}
		for (int j = 0; j < N; j++)
		{
			const double q = quantum_corrector(s->beta, s->omega[j]);
			w.sigma_R[j] = std::sqrt(q / (s->beta * s->omega[j] * s->omega[j]));
			w.sigma_P[j] = std::sqrt(q / s->beta);
		}
	}
	else if (const auto* s = std::get_if<VacuumHarmonic>(&spec))
	{
		check(s->omega.size());
		w.sigma_R = (0.5 / s->omega.array()).sqrt();
		w.sigma_P = (0.5 * s->omega.array()).sqrt();
	}
	else if (const auto* s = std::get_if<Wavepacket>(&spec))
	{
		check(1);
		w.mean_R[0] = s->r0;
		w.mean_P[0] = s->p0;
		w.sigma_R[0] = std::sqrt(0.5 / s->alpha);
		w.sigma_P[0] = std::sqrt(0.5 * s->alpha);
	}
	else if (const auto* s = std::get_if<MorseGround>(&spec))
	{
		check(1);
		w.mean_R[0] = s->r_eq;
		w.sigma_R[0] = std::sqrt(0.5 / (s->mass * s->omega));
		w.sigma_P[0] = std::sqrt(0.5 * s->mass * s->omega);
		w.positive_R = true;
	}
	else if (const auto* s = std::get_if<DimensionlessGaussian>(&spec))
	{
		check(s->center.size());
		const RealVector root = s->omega.cwiseSqrt();
		// R_bar = sqrt(w) R, P_bar = P / sqrt(w); var(R_bar) = alpha^2, var(P_bar) = 1/(4 alpha^2)
		w.mean_R = s->center.cwiseQuotient(root);
		w.sigma_R = s->alpha.cwiseQuotient(root);
		w.sigma_P = (0.5 / s->alpha.array()).matrix().cwiseProduct(root);
	}
	else if (const auto* s = std::get_if<FixedPoint>(&spec))
	{
		check(s->R.size());
		w.mean_R = s->R;
		w.mean_P = s->P;
	}
	return w;
}

NuclearInit sample_nuclear(const Model& model, const NuclearInitSpec& spec, RandomStream& rng)
{
	const WignerMoments w = wigner_moments(model, spec);
	const int N = model.n_dof();
	NuclearInit init{RealVector(N), RealVector(N)};
	for (int j = 0; j < N; j++)
	{
		do
		{
			init.R[j] = w.mean_R[j] + w.sigma_R[j] * rng.normal();
		} while (w.positive_R && !(init.R[j] > 0.0));
		init.P[j] = w.mean_P[j] + w.sigma_P[j] * rng.normal();
	}
	return init;
}

ComplexMatrix sample_gdtwa(int F, int jocc, RandomStream& rng)
{
	ComplexMatrix K = ComplexMatrix::Zero(F, F);
	K(jocc, jocc) = 1.0;
	for (int n = 0; n < F; n++)
	{
		if (n == jocc)
		{
			continue;
		}
		const double theta = (2 * rng.index(4) + 1) * std::numbers::pi / 4.0;
		K(jocc, n) = std::polar(std::sqrt(0.5), theta);
		K(n, jocc) = std::conj(K(jocc, n));
	}
	return K;
}

AmplitudeInit sample_fssh_initial(int F, Occupation occ, const RealMatrix& T0, RandomStream& rng)
{
	const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
	AmplitudeInit init{ComplexVector::Zero(F), occ.state};
	if (occ.representation == Representation::Adiabatic)
	{
		init.c[occ.state] = phase;
		return init;
	}
	init.c = phase * T0.row(occ.state).transpose().cast<Complex>();
	const double xi = rng.uniform();
	double cumulative = 0.0;
	init.active = F - 1;
	for (int k = 0; k < F; k++)
	{
		cumulative += T0(occ.state, k) * T0(occ.state, k);
		if (xi < cumulative)
		{
			init.active = k;
			break;
		}
	}
	return init;
}

} // namespace naf
