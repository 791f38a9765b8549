/// @file reference.hpp
/// @brief Exact reference solutions: 1-D multi-state split-operator grid, frozen-nuclei TDSE, Landau-Zener.

#pragma once

#include "naf/estimators.hpp"
#include "naf/linalg.hpp"
#include "naf/models.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace naf {

struct GridSpec
{
	double r_min = -40.0;
	double r_max = 40.0;
	int points = 4096;
};

/// @brief Default grid for a registered one-dimensional model.
GridSpec default_grid(const Model& model);

/// @brief Diabatic components psi(n, i) on a uniform grid, normalized to sum |psi|^2 dR = 1.
struct GridWavefunction
{
	RealVector grid;
	ComplexMatrix psi; ///< F x points
	double mass = 1.0;

	double dR() const { return grid[1] - grid[0]; }
	double norm() const;
};

/// @brief Gaussian exp(-alpha (R-r0)^2 / 2 + i p0 (R-r0)) on diabatic state @p state, or on adiabatic state @p state
/// (eigenvector signs kept continuous along the grid).
GridWavefunction initial_wavepacket(const Model& model, const GridSpec& grid, double r0, double p0, double alpha, Occupation occupation);

/// @brief Initial wavepacket from a model definition (Wavepacket or MorseGround nuclear spec).
/// @throws ConfigError for other nuclear specs or multi-dimensional models
GridWavefunction initial_wavepacket(const ModelDefinition& def, const GridSpec& grid, Occupation occupation);

/// @brief Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2) with FFT kinetic steps.
class SplitOperator
{
public:
	SplitOperator(const Model& model, const RealVector& grid, double mass, double dt);
	~SplitOperator();
	SplitOperator(const SplitOperator&) = delete;
	SplitOperator& operator=(const SplitOperator&) = delete;

	void step(GridWavefunction& wf) const;

private:
	struct Impl;
	std::unique_ptr<Impl> impl;
};

/// @brief Propagate and return one snapshot per entry of @p times (ascending, >= 0).
/// @throws ExtentError if the norm within the outer 5% of the grid exceeds @p edge_tolerance
std::vector<GridWavefunction> grid_propagate(const Model& model, const GridWavefunction& psi0, double dt, const std::vector<double>& times, double edge_tolerance = 1e-6);

/// @brief <H> with the kinetic part evaluated spectrally.
double grid_energy(const Model& model, const GridWavefunction& wf);

RealVector diabatic_populations(const GridWavefunction& wf);
RealVector adiabatic_populations(const Model& model, const GridWavefunction& wf);
/// @brief Full diabatic or adiabatic density matrix (integrated over R).
ComplexMatrix grid_density(const Model& model, const GridWavefunction& wf, Representation rep);
/// @brief Adiabatic channels split by the sign of R.
ChannelTable grid_channels(const Model& model, const GridWavefunction& wf);
/// @brief sum_n |psi_n(P)|^2 convolved with a Gaussian of variance 2a (a = 0: interpolated raw density).
std::vector<double> grid_momentum_distribution(const GridWavefunction& wf, const std::vector<double>& p_grid, double a);
/// @brief Position expectation.
double grid_mean_R(const GridWavefunction& wf);

using HamiltonianPath = std::function<ComplexMatrix(double t)>;

/// @brief Prescribed-path TDSE: order 2 uses exp(-i dt H(t + dt/2)); order 4 uses the two-point Gauss-Magnus step.
ComplexVector frozen_nuclei_tdse(const HamiltonianPath& H, const ComplexVector& c0, double t0, double t1, double dt, int order = 4);

/// @brief exp(-2 pi coupling^2 / (velocity |slope_difference|)).
/// @throws ConfigError unless all arguments are positive
double landau_zener_probability(double coupling, double slope_difference, double velocity);

} // namespace naf
