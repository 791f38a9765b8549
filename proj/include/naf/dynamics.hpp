/// @file dynamics.hpp
/// @brief Per-trajectory propagation for NAF and the baseline trajectory methods.

#pragma once

#include "naf/adiabatic.hpp"
#include "naf/errors.hpp"
#include "naf/linalg.hpp"
#include "naf/models.hpp"
#include "naf/rng.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace naf {

enum class Method
{
	Naf,          ///< dominant single-state force + non-adiabatic force on CPS
	NafS,         ///< stochastic single-state choice
	NafEhrenfest, ///< NAF equations of motion with pure-state amplitudes
	NafGdtwa,     ///< NAF equations of motion with discrete-phase kernels
	Gdtwa,        ///< mean-field force with discrete-phase kernels
	MeanFieldCps, ///< mean-field force on CPS (commutator-variable mapping dynamics)
	Ehrenfest,
	Fssh,
	FsNaf,
	ExactGrid ///< grid wavepacket reference, not a trajectory method
};

std::string method_name(Method m);
/// @throws ConfigError for unknown names
Method parse_method(const std::string& name);

bool uses_cps(Method m);
bool uses_kernel(Method m);
bool uses_amplitudes(Method m);
/// @brief Single-state force, switch selection and momentum rescaling.
bool uses_naf_force(Method m);
bool is_surface_hopping(Method m);

enum class ElectronicPropagation
{
	AdiabaticDirect,  ///< exp(-i dt V^eff) in the adiabatic basis
	DiabaticTransform ///< T(R_{t+dt})^T exp(-i dt V(R_{t+dt})) T(R_t)
};

struct MethodOptions
{
	Method method = Method::Naf;
	double gamma = 0.0;
	ElectronicPropagation propagation = ElectronicPropagation::AdiabaticDirect;
	bool hard_wall = false;
	/// Ehrenfest only: propagate diabatic amplitudes with the diabatic force.
	bool diabatic_amplitudes = false;
	int halving_limit = 25;
};

struct CpsPayload
{
	ComplexVector g;
	ComplexMatrix Gamma;
};
struct AmplitudePayload
{
	ComplexVector c;
};
struct KernelPayload
{
	ComplexMatrix K;
};
using ElectronicPayload = std::variant<CpsPayload, AmplitudePayload, KernelPayload>;

/// @brief Everything one trajectory carries between steps.
///
/// The electronic payload lives in the adiabatic basis of @ref frame, except for
/// diabatic-amplitude Ehrenfest where it is diabatic.
struct TrajectoryState
{
	double t = 0.0;
	RealVector R;
	RealVector P; ///< kinematic momentum
	ElectronicPayload electronic;
	int active = 0;         ///< force state (NAF family) or active surface (hopping)
	double H0 = 0.0;        ///< conserved mapping energy
	double weight = 1.0;    ///< estimator weight w0
	AdiabaticFrame frame;   ///< at R
	RealVector force;       ///< at (R, electronic), reused by the next half-kick
};

enum class StepEvent
{
	SwitchAccepted,
	SwitchFrustrated,
	SubstepHalving,
	HardWallReflection
};

/// @brief Result of one step; the state is advanced in place.
struct StepOutcome
{
	std::vector<StepEvent> events;
	int count(StepEvent e) const;
};

/// @brief Raised when the step-halving limit is exhausted.
class TrajectoryFailure : public NumericalError
{
public:
	using NumericalError::NumericalError;
};

/// @brief Apply U: g <- U g, Gamma <- U Gamma U^dag, c <- U c, K <- U K U^dag.
void electronic_step(ElectronicPayload& payload, const ComplexMatrix& U);

/// @brief exp(-i dt V^eff(frame, P)).
ComplexMatrix adiabatic_propagator(const AdiabaticFrame& frame, const RealVector& P, const RealVector& M, double dt);

/// @brief T_to^T exp(-i dt V) T_from.
ComplexMatrix diabatic_transform_propagator(const AdiabaticFrame& from, const RealMatrix& V, const AdiabaticFrame& to, double dt);

/// @brief Real symmetric weight matrix rho~ entering the force.
///
/// CPS: Re(g g^dag / 2 - Gamma); amplitudes: Re(c c^dag); kernel: Re K; hopping: off-diagonal Re(c c^dag), diagonal delta_{k,active}.
RealMatrix force_weights(const TrajectoryState& state, Method method);

enum class ForceMode
{
	MeanField,
	SingleState,  ///< -grad E_j plus the non-adiabatic term
	AdiabaticOnly ///< -grad E_j
};

/// @brief -sum_k grad E_k rho_kk - sum_{k!=l} (E_k - E_l) d_lk rho_kl, with the first sum replaced per @p mode.
RealVector force_assembly(const AdiabaticFrame& frame, const RealMatrix& rho, ForceMode mode, int j = 0);

struct Selection
{
	int state;
	bool attempted = false;
	bool frustrated = false;
};

/// @brief Candidate = argmax rho_kk (ties keep @p current) or, if @p stochastic is given, a draw with
/// probability |rho_kk| / sum |rho|. A switch is frustrated if @p energy < E[candidate].
Selection select_force_state(const RealVector& rho_diag, int current, double energy, const RealVector& E, RandomStream* stochastic = nullptr);

/// @brief P * sqrt(target / KE(P)); nullopt if frustrated (target < -tol, or zero KE with positive target).
std::optional<RealVector> rescale_along_momentum(const RealVector& P, const RealVector& M, double target_ke, double tol = 0.0);

/// @brief P + lambda d solving KE(P + lambda d) = KE(P) - delta_e with the smaller |lambda|; nullopt without a real root.
std::optional<RealVector> adjust_along_coupling(const RealVector& P, const RealVector& M, const RealVector& d, double delta_e);

double kinetic_energy(const RealVector& P, const RealVector& M);

/// @brief Build the initial trajectory state from independent per-trajectory randomness.
TrajectoryState initialize_trajectory(const ModelDefinition& def, const MethodOptions& options, Occupation occupation, RandomStream& rng);

/// @brief One step of length @p dt, halving and retrying from the saved state when the final rescale is infeasible.
/// @throws TrajectoryFailure when the halving limit is exceeded; DegenerateFrameError on exact degeneracy
StepOutcome advance_trajectory(TrajectoryState& state, const Model& model, const MethodOptions& options, double dt, RandomStream& rng);

} // namespace naf
