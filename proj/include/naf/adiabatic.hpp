/// @file adiabatic.hpp
/// @brief Adiabatic frame at a nuclear configuration: energies, smooth eigenvectors, couplings.

#pragma once

#include "naf/linalg.hpp"
#include "naf/models.hpp"

#include <vector>

namespace naf {

/// @brief Energies closer than this (hartree) are treated as degenerate.
inline constexpr double degeneracy_threshold = 1e-10;

/// @brief Eigen-decomposition of the diabatic potential with its gradient.
///
/// Column k of T is adiabatic state k in the diabatic basis. The coupling tensor
/// d^(J)_kl = (T^T dV/dR_J T)_kl / (E_l - E_k) is evaluated on demand from the stored gradient.
struct AdiabaticFrame
{
	RealVector E;
	RealMatrix T;
	GradientTensor grad;
	double min_gap = 0.0;

	int n_states() const { return static_cast<int>(E.size()); }
	int n_dof() const { return grad.n_dof(); }

	/// @brief Projected gradient (T^T dV/dR_J T)_kl for all J.
	RealVector projected_gradient(int k, int l) const { return grad.projected(T, k, l); }
	/// @brief dE_k/dR.
	RealVector energy_gradient(int k) const { return grad.projected(T, k, k); }
	/// @brief d_kl over all J.
	RealVector nac_vector(int k, int l) const;
	/// @brief d^(J) as an antisymmetric F-by-F matrix.
	RealMatrix nac_matrix(int J) const;
	/// @brief sum_J v_J d^(J).
	RealMatrix nac_contracted(const RealVector& v) const;
};

/// @brief Diagonalize V and align the eigenvectors with @p prev (order, then sign).
/// @throws DegenerateFrameError if two energies are closer than degeneracy_threshold
AdiabaticFrame adiabatic_frame(const RealMatrix& V, GradientTensor grad, const AdiabaticFrame* prev = nullptr);

/// @brief Convenience: evaluate the model and build the frame.
AdiabaticFrame adiabatic_frame(const Model& model, const RealVector& R, const AdiabaticFrame* prev = nullptr);

/// @brief V^eff_nk = E_n delta_nk - i sum_J (P_J/M_J) d^(J)_nk.
ComplexMatrix effective_potential(const AdiabaticFrame& frame, const RealVector& P, const RealVector& M);

/// @brief Canonical momentum in the adiabatic representation from the kinematic one.
/// @throws InternalConsistencyError if the imaginary residue exceeds 1e-10 relative to the scale of the sum
RealVector canonical_adiabatic_momentum(const RealVector& P, const ComplexVector& g, const ComplexMatrix& Gamma, const AdiabaticFrame& frame);

/// @brief Finite-difference evaluation of the gauge-field tensor.
///
/// Entry [I][J] is the F-by-F matrix dA^(J)/dR_I - dA^(I)/dR_J + i[A^(I), A^(J)] with A = -i d.
std::vector<std::vector<ComplexMatrix>> gauge_tensor_diagnostic(const Model& model, const RealVector& R, double h);

} // namespace naf
