#include "naf/adiabatic.hpp"
#include "naf/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace naf;

namespace {

ModelDefinition make(const std::string& name, std::map<std::string, std::string> params = {})
{
	return build_model(ModelSpec{name, std::move(params)});
}

GradientTensor one_dof(int F, const RealMatrix& dV)
{
	GradientTensor G(1, F);
	for (int r = 0; r < F; r++)
	{
		for (int c = r; c < F; c++)
		{
			if (dV(r, c) != 0.0)
			{
				G.entries.push_back({0, r, c, dV(r, c)});
			}
		}
	}
	return G;
}

} // namespace

TEST(Adiabatic, TwoStateSymmetric)
{
	const double D = 0.3;
	RealMatrix V(2, 2);
	V << 0.0, D, D, 0.0;
	const AdiabaticFrame f = adiabatic_frame(V, one_dof(2, RealMatrix::Zero(2, 2)));
	EXPECT_NEAR(f.E[0], -D, 1e-15);
	EXPECT_NEAR(f.E[1], D, 1e-15);
	const double s = 1.0 / std::sqrt(2.0);
	EXPECT_NEAR(std::abs(f.T(0, 0)), s, 1e-15);
	EXPECT_NEAR(f.T(0, 0), -f.T(1, 0), 1e-15);
	EXPECT_NEAR(f.T(0, 1), f.T(1, 1), 1e-15);
}

TEST(Adiabatic, FrameInvariantsRandom)
{
	std::mt19937_64 gen(5);
	std::normal_distribution<double> n(0.0, 1.0);
	for (int F : {2, 3, 5, 7})
	{
		for (int trial = 0; trial < 50; trial++)
		{
			RealMatrix V(F, F);
			for (int r = 0; r < F; r++)
			{
				for (int c = 0; c <= r; c++)
				{
					V(r, c) = V(c, r) = n(gen);
				}
			}
			GradientTensor G(3, F);
			for (int J = 0; J < 3; J++)
			{
				for (int r = 0; r < F; r++)
				{
					for (int c = r; c < F; c++)
					{
						G.entries.push_back({J, r, c, n(gen)});
					}
				}
			}
			const AdiabaticFrame f = adiabatic_frame(V, G);
			EXPECT_LT((f.T.transpose() * f.T - RealMatrix::Identity(F, F)).cwiseAbs().maxCoeff(), 1e-12);
			const RealMatrix D = f.T.transpose() * V * f.T;
			EXPECT_LT((D - RealMatrix(f.E.asDiagonal())).cwiseAbs().maxCoeff(), 1e-10);
			for (int k = 1; k < F; k++)
			{
				EXPECT_LT(f.E[k - 1], f.E[k]);
			}
			for (int J = 0; J < 3; J++)
			{
				const RealMatrix d = f.nac_matrix(J);
				EXPECT_LE((d + d.transpose()).cwiseAbs().maxCoeff(), 1e-10);
			}
			RealVector P(3), M(3);
			P << n(gen), n(gen), n(gen);
			M << 1.0, 2.0, 3.0;
			const ComplexMatrix Veff = effective_potential(f, P, M);
			EXPECT_LE((Veff - Veff.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
			const ComplexMatrix V0 = effective_potential(f, RealVector::Zero(3), M);
			EXPECT_LE((V0 - ComplexMatrix(f.E.cast<Complex>().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
			const Eigen::ComplexEigenSolver<ComplexMatrix> es(Veff);
			EXPECT_LT(es.eigenvalues().imag().cwiseAbs().maxCoeff(), 1e-10);
		}
	}
}

TEST(Adiabatic, EffectivePotentialTwoState)
{
	const auto def = make("tully_sac", {{"p0", "20"}});
	const RealVector R = RealVector::Constant(1, 0.3);
	const AdiabaticFrame f = adiabatic_frame(*def.model, R);
	const double v = 0.01;
	const RealVector P = RealVector::Constant(1, v * 2000.0);
	const ComplexMatrix Veff = effective_potential(f, P, def.model->masses());
	const double d12 = f.nac_vector(0, 1)[0];
	EXPECT_NEAR(std::abs(Veff(0, 1) - Complex(0.0, -v * d12)), 0.0, 1e-15);
}

TEST(Adiabatic, SacCouplingMatchesFiniteDifference)
{
	const auto def = make("tully_sac", {{"p0", "20"}});
	const double h = 1e-5;
	for (int i = 0; i < 200; i++)
	{
		const double r = -5.0 + 10.0 * (i + 0.5) / 200.0;
		const AdiabaticFrame c = adiabatic_frame(*def.model, RealVector::Constant(1, r));
		const AdiabaticFrame p = adiabatic_frame(*def.model, RealVector::Constant(1, r + h), &c);
		const AdiabaticFrame m = adiabatic_frame(*def.model, RealVector::Constant(1, r - h), &c);
		// d_12 = <phi_1 | d phi_2 / dR>
		const double fd = c.T.col(0).dot((p.T.col(1) - m.T.col(1)) / (2.0 * h));
		EXPECT_NEAR(c.nac_vector(0, 1)[0], fd, 1e-5) << "R = " << r;
	}
}

TEST(Adiabatic, HellmannFeynmanTwoStateFormula)
{
	for (const char* name : {"tully_sac", "tully_dac", "tully_ecr", "asym_sac"})
	{
		const auto def = make(name, {{"p0", "20"}});
		for (int i = 0; i < 100; i++)
		{
			const double r = -6.0 + 12.0 * i / 99.0;
			const RealVector R = RealVector::Constant(1, r);
			const RealMatrix V = def.model->potential(R);
			const RealMatrix dV = def.model->gradient(R).dense(0);
			const double dv = V(0, 0) - V(1, 1);
			const double ddv = dV(0, 0) - dV(1, 1);
			const double formula = (dV(0, 1) * dv - V(0, 1) * ddv) / (dv * dv + 4.0 * V(0, 1) * V(0, 1));
			const AdiabaticFrame f = adiabatic_frame(*def.model, R);
			// the formula fixes the sign convention up to the eigenvector orientation
			EXPECT_NEAR(std::abs(f.nac_vector(0, 1)[0]), std::abs(formula), 1e-8) << name << " R = " << r;
		}
	}
}

TEST(Adiabatic, FrameContinuityAlongPath)
{
	const auto def = make("tully_dac", {{"p0", "20"}});
	AdiabaticFrame prev = adiabatic_frame(*def.model, RealVector::Constant(1, -8.0));
	const double step = 1e-3;
	for (double r = -8.0 + step; r < 8.0; r += step)
	{
		const AdiabaticFrame f = adiabatic_frame(*def.model, RealVector::Constant(1, r), &prev);
		const RealMatrix overlap = f.T.transpose() * prev.T;
		for (int k = 0; k < 2; k++)
		{
			EXPECT_GE(overlap(k, k), 0.0);
		}
		EXPECT_LT((f.T - prev.T).cwiseAbs().maxCoeff(), 200.0 * step) << r;
		prev = f;
	}
}

TEST(Adiabatic, DegeneracyRaises)
{
	RealMatrix V = RealMatrix::Identity(2, 2);
	EXPECT_THROW(adiabatic_frame(V, one_dof(2, RealMatrix::Zero(2, 2))), DegenerateFrameError);
	try
	{
		adiabatic_frame(V, one_dof(2, RealMatrix::Zero(2, 2)));
	}
	catch (const DegenerateFrameError& e)
	{
		EXPECT_EQ(e.k, 0);
		EXPECT_EQ(e.l, 1);
	}
}

TEST(Adiabatic, CanonicalMomentumLimits)
{
	const auto def = make("tully_sac", {{"p0", "20"}});
	const RealVector P = RealVector::Constant(1, 17.0);
	ComplexVector g(2);
	g << Complex(0.8, 0.3), Complex(-0.4, 0.9);
	ComplexMatrix Gamma = 0.5 * g * g.adjoint();
	Gamma(0, 0) -= 1.0;
	// asymptotic region: d = 0
	const AdiabaticFrame far = adiabatic_frame(*def.model, RealVector::Constant(1, -12.0));
	EXPECT_NEAR(canonical_adiabatic_momentum(P, g, Gamma, far)[0], 17.0, 1e-12);
	// diagonal weight matrix: d_nn = 0
	const AdiabaticFrame near = adiabatic_frame(*def.model, RealVector::Constant(1, 0.2));
	ComplexVector gd = ComplexVector::Zero(2);
	gd[0] = 1.5;
	ComplexMatrix Gd = ComplexMatrix::Zero(2, 2);
	Gd(1, 1) = 0.3;
	EXPECT_NEAR(canonical_adiabatic_momentum(P, gd, Gd, near)[0], 17.0, 1e-14);
}

TEST(Adiabatic, CanonicalMomentumMatchesDirectSum)
{
	std::mt19937_64 gen(9);
	std::normal_distribution<double> n(0.0, 1.0);
	const auto def = make("lvcm_crco5");
	const RealVector R = (RealVector(2) << 3.0, 10.0).finished();
	const AdiabaticFrame f = adiabatic_frame(*def.model, R);
	for (int trial = 0; trial < 20; trial++)
	{
		ComplexVector g(3);
		for (int k = 0; k < 3; k++)
		{
			g[k] = Complex(n(gen), n(gen));
		}
		ComplexMatrix A(3, 3);
		for (int r = 0; r < 3; r++)
		{
			for (int c = 0; c < 3; c++)
			{
				A(r, c) = Complex(n(gen), n(gen));
			}
		}
		const ComplexMatrix Gamma = 0.5 * (A + A.adjoint());
		const ComplexMatrix W = 0.5 * g * g.adjoint() - Gamma;
		const RealVector P = (RealVector(2) << 1.0, -2.0).finished();
		const RealVector got = canonical_adiabatic_momentum(P, g, Gamma, f);
		for (int J = 0; J < 2; J++)
		{
			const RealMatrix d = f.nac_matrix(J);
			Complex sum = 0.0;
			for (int m = 0; m < 3; m++)
			{
				for (int k = 0; k < 3; k++)
				{
					sum += W(k, m) * d(m, k);
				}
			}
			// P~ = P + i sum
			const Complex expected = Complex(P[J], 0.0) + I * sum;
			EXPECT_LE(std::abs(expected.imag()), 1e-12);
			EXPECT_NEAR(got[J], expected.real(), 1e-10);
		}
	}
}

TEST(Adiabatic, GaugeTensorVanishesForCompleteModels)
{
	{
		const auto def = make("tully_sac", {{"p0", "20"}});
		const auto t = gauge_tensor_diagnostic(*def.model, RealVector::Constant(1, 0.4), 1e-4);
		EXPECT_LT(t[0][0].cwiseAbs().maxCoeff(), 1e-14);
	}
	{
		// complete F-state diabatic model: the tensor vanishes up to finite-difference error
		const auto def = make("lvcm_crco5");
		const RealVector R = (RealVector(2) << 4.0, 9.0).finished();
		const auto t = gauge_tensor_diagnostic(*def.model, R, 1e-3);
		double scale = 0.0;
		const AdiabaticFrame f = adiabatic_frame(*def.model, R);
		for (int J = 0; J < 2; J++)
		{
			scale = std::max(scale, f.nac_matrix(J).cwiseAbs().maxCoeff());
		}
		for (int a = 0; a < 2; a++)
		{
			for (int b = 0; b < 2; b++)
			{
				EXPECT_LT(t[a][b].cwiseAbs().maxCoeff(), 1e-4 * scale * scale + 1e-12);
				EXPECT_LT((t[a][b] + t[b][a]).cwiseAbs().maxCoeff(), 1e-12);
			}
		}
	}
}

TEST(Adiabatic, PropagatorsUnitary)
{
	std::mt19937_64 gen(2);
	std::normal_distribution<double> n(0.0, 1.0);
	for (int trial = 0; trial < 20; trial++)
	{
		ComplexMatrix A(4, 4);
		for (int r = 0; r < 4; r++)
		{
			for (int c = 0; c < 4; c++)
			{
				A(r, c) = Complex(n(gen), n(gen));
			}
		}
		const ComplexMatrix H = 0.5 * (A + A.adjoint());
		const ComplexMatrix U = hermitian_propagator(H, 0.7);
		EXPECT_LE((U * U.adjoint() - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
	}
	ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
	bad(0, 1) = 1.0;
	EXPECT_THROW(hermitian_propagator(bad, 0.1), InternalConsistencyError);
}
