/// @file adiabatic.cpp
/// @brief Adiabatic frames, coupling vectors and the effective potential.

#include "naf/adiabatic.hpp"

#include "naf/errors.hpp"

#include <cmath>
#include <limits>

namespace naf {

ComplexMatrix hermitian_propagator(const ComplexMatrix& H, double dt)
{
	const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
	if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
	{
		throw InternalConsistencyError("propagator input is not Hermitian");
	}
	Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
	const ComplexVector phase = (-I * dt * es.eigenvalues().cast<Complex>()).array().exp();
	return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix symmetric_propagator(const RealMatrix& H, double dt)
{
	Eigen::SelfAdjointEigenSolver<RealMatrix> es(H);
	const ComplexVector phase = (-I * dt * es.eigenvalues().cast<Complex>()).array().exp();
	const ComplexMatrix Q = es.eigenvectors().cast<Complex>();
	return Q * phase.asDiagonal() * Q.transpose();
}

namespace {

/// Largest-magnitude component of every column made positive.
void canonical_signs(RealMatrix& T)
{
	for (int k = 0; k < T.cols(); k++)
	{
		Eigen::Index imax = 0;
		T.col(k).cwiseAbs().maxCoeff(&imax);
		if (T(imax, k) < 0.0)
		{
			T.col(k) *= -1.0;
		}
	}
}

void align(RealVector& E, RealMatrix& T, const AdiabaticFrame& prev)
{
	const int F = static_cast<int>(E.size());
	const RealMatrix overlap = T.transpose() * prev.T;
	std::vector<int> source(F, -1);
	std::vector<bool> taken(F, false);
	for (int step = 0; step < F; step++)
	{
		double best = -1.0;
		int bi = -1, bj = -1;
		for (int i = 0; i < F; i++)
		{
			if (taken[i])
			{
				continue;
			}
			for (int j = 0; j < F; j++)
			{
				if (source[j] >= 0)
				{
					continue;
				}
				if (std::abs(overlap(i, j)) > best)
				{
					best = std::abs(overlap(i, j));
					bi = i;
					bj = j;
				}
			}
		}
		taken[bi] = true;
		source[bj] = bi;
	}
	RealVector E2(F);
	RealMatrix T2(F, F);
	for (int j = 0; j < F; j++)
	{
		E2[j] = E[source[j]];
		T2.col(j) = T.col(source[j]);
		if (overlap(source[j], j) < 0.0)
		{
			T2.col(j) *= -1.0;
		}
	}
	E = std::move(E2);
	T = std::move(T2);
}

} // namespace

AdiabaticFrame adiabatic_frame(const RealMatrix& V, GradientTensor grad, const AdiabaticFrame* prev)
{
	const int F = static_cast<int>(V.rows());
	const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
	if ((V - V.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
	{
		throw InternalConsistencyError("diabatic potential is not symmetric");
	}
	AdiabaticFrame f;
	if (F == 1)
	{
		f.E = V.diagonal();
		f.T = RealMatrix::Ones(1, 1);
	}
	else if (F == 2)
	{
		// closed form avoids the iterative solver on the hot path
		const double a = V(0, 0), b = V(0, 1), c = V(1, 1);
		const double mean = 0.5 * (a + c);
		const double half = 0.5 * (a - c);
		const double r = std::hypot(half, b);
		f.E.resize(2);
		f.E << mean - r, mean + r;
		f.T.resize(2, 2);
		if (r == 0.0)
		{
			f.T.setIdentity();
		}
		else if (half <= 0.0)
		{
			// lower state dominated by diabat 1
			const double x = r - half;
			const double n = std::hypot(x, b);
			f.T << x / n, b / n, -b / n, x / n;
		}
		else
		{
			const double x = r + half;
			const double n = std::hypot(x, b);
			f.T << -b / n, x / n, x / n, b / n;
		}
		canonical_signs(f.T);
	}
	else
	{
		Eigen::SelfAdjointEigenSolver<RealMatrix> es(V);
		f.E = es.eigenvalues();
		f.T = es.eigenvectors();
		canonical_signs(f.T);
	}
	if (prev != nullptr && prev->n_states() == F)
	{
		align(f.E, f.T, *prev);
	}
	f.min_gap = std::numeric_limits<double>::infinity();
	for (int k = 0; k < F; k++)
	{
		for (int l = k + 1; l < F; l++)
		{
			const double gap = std::abs(f.E[l] - f.E[k]);
			if (gap < degeneracy_threshold)
			{
				throw DegenerateFrameError(k, l, gap);
			}
			f.min_gap = std::min(f.min_gap, gap);
		}
	}
	f.grad = std::move(grad);
	return f;
}

AdiabaticFrame adiabatic_frame(const Model& model, const RealVector& R, const AdiabaticFrame* prev)
{
	return adiabatic_frame(model.potential(R), model.gradient(R), prev);
}

RealVector AdiabaticFrame::nac_vector(int k, int l) const
{
	if (k == l)
	{
		return RealVector::Zero(n_dof());
	}
	return grad.projected(T, k, l) / (E[l] - E[k]);
}

RealMatrix AdiabaticFrame::nac_matrix(int J) const
{
	RealMatrix A = T.transpose() * grad.dense(J) * T;
	for (int k = 0; k < n_states(); k++)
	{
		A(k, k) = 0.0;
		for (int l = 0; l < n_states(); l++)
		{
			if (l != k)
			{
				A(k, l) /= E[l] - E[k];
			}
		}
	}
	return A;
}

RealMatrix AdiabaticFrame::nac_contracted(const RealVector& v) const
{
	RealMatrix A = T.transpose() * grad.contract(v) * T;
	for (int k = 0; k < n_states(); k++)
	{
		A(k, k) = 0.0;
		for (int l = 0; l < n_states(); l++)
		{
			if (l != k)
			{
				A(k, l) /= E[l] - E[k];
			}
		}
	}
	return A;
}

ComplexMatrix effective_potential(const AdiabaticFrame& frame, const RealVector& P, const RealVector& M)
{
	const RealMatrix D = frame.nac_contracted(P.cwiseQuotient(M));
	ComplexMatrix V = -I * D.cast<Complex>();
	V.diagonal() += frame.E.cast<Complex>();
	return V;
}

RealVector canonical_adiabatic_momentum(const RealVector& P, const ComplexVector& g, const ComplexMatrix& Gamma, const AdiabaticFrame& frame)
{
	const int F = frame.n_states();
	const ComplexMatrix W = 0.5 * g * g.adjoint() - Gamma;
	// sum_mn W_nm d_mn = Tr(dV Y) with Y = T B T^T and B_mn = W_nm / (E_n - E_m)
	ComplexMatrix B = ComplexMatrix::Zero(F, F);
	RealMatrix Babs = RealMatrix::Zero(F, F);
	for (int m = 0; m < F; m++)
	{
		for (int n = 0; n < F; n++)
		{
			if (m != n)
			{
				B(m, n) = W(n, m) / (frame.E[n] - frame.E[m]);
				Babs(m, n) = std::abs(B(m, n));
			}
		}
	}
	const ComplexMatrix Y = frame.T.cast<Complex>() * B * frame.T.transpose().cast<Complex>();
	const RealVector re = frame.grad.trace_with(Y.real());
	const RealVector im = frame.grad.trace_with(Y.imag());
	// magnitude scale for the cancellation check
	const RealMatrix Tabs = frame.T.cwiseAbs();
	const RealMatrix Yabs = Tabs * Babs * Tabs.transpose();
	GradientTensor gabs = frame.grad;
	gabs.shift = gabs.shift.cwiseAbs();
	for (auto& e : gabs.entries)
	{
		e.value = std::abs(e.value);
	}
	const RealVector scale = gabs.trace_with(Yabs);
	for (int J = 0; J < P.size(); J++)
	{
		if (std::abs(re[J]) > 1e-10 * std::max(scale[J], std::numeric_limits<double>::min()) && std::abs(re[J]) > 1e-300)
		{
			throw InternalConsistencyError("canonical momentum has a non-vanishing imaginary part");
		}
	}
	// P + i (re + i im)
	return P - im;
}

std::vector<std::vector<ComplexMatrix>> gauge_tensor_diagnostic(const Model& model, const RealVector& R, double h)
{
	const int N = model.n_dof();
	const AdiabaticFrame center = adiabatic_frame(model, R);
	std::vector<RealMatrix> d0(N);
	for (int J = 0; J < N; J++)
	{
		d0[J] = center.nac_matrix(J);
	}
	// derivative[a][b] = d(d^(b))/dR_a
	std::vector<std::vector<RealMatrix>> derivative(N, std::vector<RealMatrix>(N));
	for (int a = 0; a < N; a++)
	{
		RealVector Rp = R, Rm = R;
		Rp[a] += h;
		Rm[a] -= h;
		const AdiabaticFrame fp = adiabatic_frame(model, Rp, &center);
		const AdiabaticFrame fm = adiabatic_frame(model, Rm, &center);
		for (int b = 0; b < N; b++)
		{
			derivative[a][b] = (fp.nac_matrix(b) - fm.nac_matrix(b)) / (2.0 * h);
		}
	}
	std::vector<std::vector<ComplexMatrix>> out(N, std::vector<ComplexMatrix>(N));
	for (int a = 0; a < N; a++)
	{
		for (int b = 0; b < N; b++)
		{
			const RealMatrix s = derivative[a][b] - derivative[b][a] + d0[a] * d0[b] - d0[b] * d0[a];
			out[a][b] = -I * s.cast<Complex>();
		}
	}
	return out;
}

} // namespace naf
