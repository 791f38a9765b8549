/// @file models.hpp
/// @brief Diabatic model Hamiltonians: potential matrix, analytic gradient, masses, bath discretization and registry.

#pragma once

#include "naf/linalg.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace naf {

enum class Representation
{
	Diabatic,
	Adiabatic
};

/// @brief Derivative of the diabatic potential with respect to every nuclear DOF.
///
/// Stored sparsely: dV/dR_J = shift[J]*I + sum of symmetric entries tagged with J.
class GradientTensor
{
public:
	struct Entry
	{
		int dof;
		int row; ///< row <= col; off-diagonal entries stand for both (row,col) and (col,row)
		int col;
		double value;
	};

	GradientTensor() = default;
	GradientTensor(int n_dof, int n_states);

	void reset(int n_dof, int n_states);
	int n_dof() const { return static_cast<int>(shift.size()); }
	int n_states() const { return states; }

	/// @brief Dense F-by-F matrix dV/dR_J.
	RealMatrix dense(int J) const;
	/// @brief sum_J w_J dV/dR_J.
	RealMatrix contract(const RealVector& w) const;
	/// @brief f_J = Tr(dV/dR_J W) for symmetric W.
	RealVector trace_with(const RealMatrix& W) const;
	/// @brief g_J = (T^T dV/dR_J T)_{kl}.
	RealVector projected(const RealMatrix& T, int k, int l) const;

	RealVector shift;
	std::vector<Entry> entries;

private:
	int states = 0;
};

/// @brief Independent Gaussian Wigner distributions for every DOF.
struct ThermalHarmonic
{
	RealVector omega;
	double beta;
};
struct VacuumHarmonic
{
	RealVector omega;
};
struct Wavepacket
{
	double r0;
	double p0;
	double alpha;
};
struct MorseGround
{
	double r_eq;
	double mass;
	double omega;
};
struct DimensionlessGaussian
{
	RealVector center; ///< dimensionless coordinate centers
	RealVector alpha;  ///< dimensionless widths
	RealVector omega;  ///< mode frequencies used by the dimensionless conversion
};
/// @brief Deterministic nuclear initial condition.
struct FixedPoint
{
	RealVector R;
	RealVector P;
};
using NuclearInitSpec = std::variant<ThermalHarmonic, VacuumHarmonic, Wavepacket, MorseGround, DimensionlessGaussian, FixedPoint>;

/// @brief Immutable diabatic model.
class Model
{
public:
	virtual ~Model() = default;

	const std::string& label() const { return name; }
	int n_states() const { return states; }
	int n_dof() const { return static_cast<int>(mass.size()); }
	const RealVector& masses() const { return mass; }
	/// @brief Coordinates restricted to R > 0 (Morse bond lengths).
	bool positive_domain() const { return positive; }
	/// @brief R_bar = scale * R and P_bar = P / scale (ones except for vibronic models).
	const RealVector& coordinate_scale() const { return scale; }
	/// @brief Block (site or state) each DOF belongs to; -1 for system coordinates.
	const std::vector<int>& dof_block() const { return block; }

	/// @brief V(R), validated dimensions.
	RealMatrix potential(const RealVector& R) const;
	/// @brief dV/dR, validated dimensions.
	GradientTensor gradient(const RealVector& R) const;

	virtual void potential_into(const RealVector& R, RealMatrix& V) const = 0;
	virtual void gradient_into(const RealVector& R, GradientTensor& G) const = 0;

protected:
	void check_dimension(const RealVector& R) const;

	std::string name;
	int states = 0;
	RealVector mass;
	RealVector scale;
	std::vector<int> block;
	bool positive = false;
};

/// @brief V(R) = H0 + sum_J R_J K_J + sum_J omega_J^2 R_J^2 / 2 * I with sparse constant K_J.
class LinearCouplingModel : public Model
{
public:
	LinearCouplingModel(std::string label, RealMatrix h0, RealVector omega, std::vector<GradientTensor::Entry> couplings, RealVector masses = {});

	void potential_into(const RealVector& R, RealMatrix& V) const override;
	void gradient_into(const RealVector& R, GradientTensor& G) const override;

	void set_scale(RealVector s) { scale = std::move(s); }
	void set_blocks(std::vector<int> b) { block = std::move(b); }

private:
	RealMatrix h0;
	RealVector omega2;
	std::vector<GradientTensor::Entry> couplings;
};

/// @brief Single nuclear DOF with closed-form V(R) and dV/dR.
class OneDimensionalModel : public Model
{
public:
	using Evaluator = std::function<void(double R, RealMatrix& V, RealMatrix& dV)>;

	OneDimensionalModel(std::string label, int F, double mass, Evaluator f, bool positive_domain = false);

	void potential_into(const RealVector& R, RealMatrix& V) const override;
	void gradient_into(const RealVector& R, GradientTensor& G) const override;

private:
	Evaluator eval;
};

struct BathModes
{
	RealVector omega;
	RealVector coupling;
	int count() const { return static_cast<int>(omega.size()); }
};

enum class SpectralDensity
{
	Ohmic,
	Debye
};

/// @brief Ohmic: strength = alpha (Kondo); Debye: strength = lambda (reorganization).
BathModes discretize_spectral_density(SpectralDensity kind, double strength, double omega_c, int n_bath);

/// @brief Model name plus string-valued parameter overrides.
struct ModelSpec
{
	std::string name;
	std::map<std::string, std::string> params;
	bool operator==(const ModelSpec&) const = default;
};

struct Occupation
{
	int state = 0; ///< zero-based
	Representation representation = Representation::Diabatic;
};

/// @brief A built model with its default simulation setup.
struct ModelDefinition
{
	std::shared_ptr<const Model> model;
	NuclearInitSpec nuclear;
	Occupation occupation;
	double default_dt = 0.0;   ///< a.u.
	long default_n_traj = 100000;
	double interaction_radius = 0.0; ///< scattering models; 0 otherwise
	double momentum_damping = 0.0;   ///< Gaussian damping a for momentum distributions
	bool scattering = false;
};

/// @brief Build a registered model.
/// @throws ConfigError for unknown names, unknown or invalid parameters, or missing required parameters
ModelDefinition build_model(const ModelSpec& spec);

/// @brief Names accepted by build_model.
std::vector<std::string> registered_models();

} // namespace naf
