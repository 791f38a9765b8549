/// @file sampling.hpp
/// @brief Initial conditions: nuclear Wigner samples, CPS mapping variables, GDTWA kernels, surface-hopping amplitudes.

#pragma once

#include "naf/linalg.hpp"
#include "naf/models.hpp"
#include "naf/rng.hpp"

namespace naf {

/// @brief Lower end of the recommended CPS parameter range, (sqrt(F+1)-1)/F.
double default_gamma(int F);

/// @brief Mapping variables on the constraint sphere plus the commutator matrix.
struct ElectronicInit
{
	ComplexVector g;           ///< in @ref representation
	ComplexMatrix Gamma;       ///< in @ref representation
	Representation representation;
	int jocc;
	double gamma;
	ComplexVector g_occupied;  ///< g in the representation where jocc is occupied
};

/// @brief Uniform point on sum_n |g_n|^2/2 = 1 + F gamma with Gamma_nn = |g_n|^2/2 - delta_{n,jocc}.
///
/// The sample is drawn in the occupation representation and transformed with T0
/// (diabatic -> adiabatic: g~ = T0^T g, Gamma~ = T0^T Gamma T0) when @p target differs.
/// @throws ConfigError if gamma <= -1/F or T0 is needed but missing
ElectronicInit sample_electronic_cps(int F, double gamma, Occupation occ, Representation target, const RealMatrix* T0, RandomStream& rng);

struct NuclearInit
{
	RealVector R;
	RealVector P;
};

/// @brief Means and standard deviations of the (independent, Gaussian) Wigner distribution.
struct WignerMoments
{
	RealVector mean_R;
	RealVector mean_P;
	RealVector sigma_R;
	RealVector sigma_P;
	bool positive_R = false;
};

/// @brief (beta omega / 2) / tanh(beta omega / 2).
double quantum_corrector(double beta, double omega);

/// @throws ConfigError for non-positive beta or a size mismatch with the model
WignerMoments wigner_moments(const Model& model, const NuclearInitSpec& spec);

/// @brief One Wigner sample; positive-domain distributions are truncated to R > 0 by rejection.
NuclearInit sample_nuclear(const Model& model, const NuclearInitSpec& spec, RandomStream& rng);

/// @brief Discrete-phase kernel: K[j][j] = 1, K[j][n] = exp(i theta_n)/sqrt(2), theta_n in {pi/4, 3pi/4, 5pi/4, 7pi/4}.
ComplexMatrix sample_gdtwa(int F, int jocc, RandomStream& rng);

struct AmplitudeInit
{
	ComplexVector c; ///< adiabatic amplitudes
	int active;
};

/// @brief Random global phase; diabatic occupation projected with T0 and the active state drawn from |T0[jocc][k]|^2.
AmplitudeInit sample_fssh_initial(int F, Occupation occ, const RealMatrix& T0, RandomStream& rng);

} // namespace naf
