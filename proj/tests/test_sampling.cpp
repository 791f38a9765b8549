#include "naf/adiabatic.hpp"
#include "naf/errors.hpp"
#include "naf/estimators.hpp"
#include "naf/rng.hpp"
#include "naf/sampling.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace naf;

TEST(Rng, PhiloxKnownAnswers)
{
	using A4 = std::array<std::uint32_t, 4>;
	using A2 = std::array<std::uint32_t, 2>;
	EXPECT_EQ(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}), (A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
	EXPECT_EQ(philox4x32(A4{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, A2{0xffffffffu, 0xffffffffu}), (A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
	EXPECT_EQ(philox4x32(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, A2{0xa4093822u, 0x299f31d0u}), (A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Rng, StreamsDeterministicAndIndependent)
{
	RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
	bool differs_c = false, differs_d = false;
	for (int i = 0; i < 100; i++)
	{
		const double x = a.uniform();
		EXPECT_EQ(x, b.uniform());
		differs_c |= x != c.uniform();
		differs_d |= x != d.uniform();
		EXPECT_GE(x, 0.0);
		EXPECT_LT(x, 1.0);
	}
	EXPECT_TRUE(differs_c);
	EXPECT_TRUE(differs_d);
}

TEST(Rng, NormalMoments)
{
	RandomStream r(1, 0);
	const int n = 400000;
	double s = 0.0, s2 = 0.0;
	for (int i = 0; i < n; i++)
	{
		const double x = r.normal();
		s += x;
		s2 += x * x;
	}
	EXPECT_NEAR(s / n, 0.0, 4.0 / std::sqrt(n));
	EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(Sampling, DefaultGamma)
{
	EXPECT_NEAR(default_gamma(2), (std::sqrt(3.0) - 1.0) / 2.0, 1e-15);
	EXPECT_NEAR(default_gamma(2), 0.366, 5e-4);
	EXPECT_NEAR(default_gamma(7), 0.261, 5e-4);
	EXPECT_NEAR(default_gamma(3), 1.0 / 3.0, 1e-15);
}

TEST(Sampling, CpsConstraintAndCommutator)
{
	for (int F : {2, 3, 7})
	{
		const double gamma = default_gamma(F);
		for (int i = 0; i < 200; i++)
		{
			RandomStream r(5, i);
			const ElectronicInit e = sample_electronic_cps(F, gamma, Occupation{F - 1, Representation::Diabatic}, Representation::Diabatic, nullptr, r);
			EXPECT_NEAR(0.5 * e.g.squaredNorm(), 1.0 + F * gamma, 1e-12);
			EXPECT_LE((e.Gamma - e.Gamma.adjoint()).cwiseAbs().maxCoeff(), 0.0);
			for (int n = 0; n < F; n++)
			{
				for (int m = 0; m < F; m++)
				{
					if (n != m)
					{
						EXPECT_EQ(e.Gamma(n, m), Complex(0.0));
					}
				}
				EXPECT_NEAR(e.Gamma(n, n).real(), 0.5 * std::norm(e.g[n]) - (n == F - 1 ? 1.0 : 0.0), 1e-14);
			}
			EXPECT_NEAR(e.Gamma.trace().real(), F * gamma, 1e-12);
		}
	}
	RandomStream r(1, 1);
	const ElectronicInit e = sample_electronic_cps(2, default_gamma(2), Occupation{0, Representation::Diabatic}, Representation::Diabatic, nullptr, r);
	EXPECT_NEAR(0.5 * e.g.squaredNorm(), std::sqrt(3.0), 1e-12);
}

TEST(Sampling, CpsTransformToAdiabatic)
{
	const auto def = build_model(ModelSpec{"lvcm_crco5", {}});
	const AdiabaticFrame f = adiabatic_frame(*def.model, (RealVector(2) << 1.0, 12.0).finished());
	RandomStream a(3, 4), b(3, 4);
	const double gamma = default_gamma(3);
	const ElectronicInit dia = sample_electronic_cps(3, gamma, Occupation{1, Representation::Diabatic}, Representation::Diabatic, nullptr, a);
	const ElectronicInit adi = sample_electronic_cps(3, gamma, Occupation{1, Representation::Diabatic}, Representation::Adiabatic, &f.T, b);
	const ComplexMatrix T = f.T.cast<Complex>();
	EXPECT_LT((adi.g - T.transpose() * dia.g).cwiseAbs().maxCoeff(), 1e-14);
	EXPECT_LT((adi.Gamma - T.transpose() * dia.Gamma * T).cwiseAbs().maxCoeff(), 1e-14);
	EXPECT_LT((adi.g_occupied - dia.g).cwiseAbs().maxCoeff(), 0.0 + 1e-300);
	RandomStream c(3, 4);
	EXPECT_THROW(sample_electronic_cps(3, gamma, Occupation{1, Representation::Diabatic}, Representation::Adiabatic, nullptr, c), ConfigError);
	EXPECT_THROW(sample_electronic_cps(3, -0.5, Occupation{1, Representation::Diabatic}, Representation::Diabatic, nullptr, c), ConfigError);
}

TEST(Sampling, SphereMoments)
{
	// E[|g_n|^2/2] = (1+F gamma)/F and E[a_j a_n] = (1+F gamma)^2 (1+delta_jn) / (F(F+1)) for a_n = |g_n|^2/2
	const int F = 3;
	const double gamma = default_gamma(F);
	const double radius = 1.0 + F * gamma;
	const int n = 1000000;
	RealVector m1 = RealVector::Zero(F);
	RealMatrix m2 = RealMatrix::Zero(F, F);
	RealVector sq = RealVector::Zero(F);
	for (int i = 0; i < n; i++)
	{
		RandomStream r(17, i);
		const ElectronicInit e = sample_electronic_cps(F, gamma, Occupation{0, Representation::Diabatic}, Representation::Diabatic, nullptr, r);
		const RealVector a = 0.5 * e.g.cwiseAbs2();
		m1 += a;
		sq += a.cwiseProduct(a);
		m2 += a * a.transpose();
	}
	m1 /= n;
	m2 /= n;
	for (int k = 0; k < F; k++)
	{
		const double var = sq[k] / n - m1[k] * m1[k];
		EXPECT_NEAR(m1[k], radius / F, 3.0 * std::sqrt(var / n));
		for (int l = 0; l < F; l++)
		{
			const double expected = radius * radius * (1.0 + (k == l)) / (F * (F + 1.0));
			EXPECT_NEAR(m2(k, l), expected, 5e-3 * expected);
		}
	}
}

TEST(Sampling, ExchangeSymmetricComponents)
{
	// two-sample Kolmogorov-Smirnov statistic between |g_1|^2 and |g_2|^2
	const int n = 100000;
	std::vector<double> a(n), b(n);
	for (int i = 0; i < n; i++)
	{
		RandomStream r(23, i);
		const ElectronicInit e = sample_electronic_cps(3, 1.0 / 3.0, Occupation{0, Representation::Diabatic}, Representation::Diabatic, nullptr, r);
		a[i] = std::norm(e.g[0]);
		b[i] = std::norm(e.g[1]);
	}
	std::sort(a.begin(), a.end());
	std::sort(b.begin(), b.end());
	double d = 0.0;
	std::size_t i = 0, j = 0;
	while (i < a.size() && j < b.size())
	{
		if (a[i] <= b[j])
		{
			i++;
		}
		else
		{
			j++;
		}
		d = std::max(d, std::abs(static_cast<double>(i) - static_cast<double>(j)) / n);
	}
	// 99.9% critical value 1.95 sqrt(2/n)
	EXPECT_LT(d, 1.95 * std::sqrt(2.0 / n));
}

TEST(Sampling, WeightMeanIsOne)
{
	for (int F : {2, 3, 7})
	{
		const double gamma = default_gamma(F);
		const int n = 400000;
		double s = 0.0, s2 = 0.0;
		for (int i = 0; i < n; i++)
		{
			RandomStream r(29, i);
			const ElectronicInit e = sample_electronic_cps(F, gamma, Occupation{0, Representation::Diabatic}, Representation::Diabatic, nullptr, r);
			const double w = electronic_weight0(e.g_occupied, 0, gamma);
			s += w;
			s2 += w * w;
		}
		const double mean = s / n;
		const double se = std::sqrt((s2 / n - mean * mean) / n);
		EXPECT_NEAR(mean, 1.0, 4.0 * se) << "F = " << F;
	}
}

TEST(Sampling, QuantumCorrector)
{
	EXPECT_NEAR(quantum_corrector(2.0, 1.0), 1.0 / std::tanh(1.0), 1e-15);
	EXPECT_NEAR(quantum_corrector(2.0, 1.0), 1.31304, 1e-5);
	EXPECT_NEAR(quantum_corrector(1e-8, 1.0), 1.0, 1e-12);
}

TEST(Sampling, WavepacketVariance)
{
	const auto def = build_model(ModelSpec{"tully_sac", {{"p0", "20"}}});
	const int n = 1000000;
	double s = 0.0, s2 = 0.0, p = 0.0, p2 = 0.0;
	for (int i = 0; i < n; i++)
	{
		RandomStream r(31, i);
		const NuclearInit x = sample_nuclear(*def.model, def.nuclear, r);
		s += x.R[0];
		s2 += x.R[0] * x.R[0];
		p += x.P[0];
		p2 += x.P[0] * x.P[0];
	}
	const double varR = s2 / n - (s / n) * (s / n);
	const double varP = p2 / n - (p / n) * (p / n);
	EXPECT_NEAR(s / n, -3.8, 4.0 * std::sqrt(0.5 / n));
	EXPECT_NEAR(varR, 0.5, 4.0 * 0.5 * std::sqrt(2.0 / n));
	EXPECT_NEAR(p / n, 20.0, 4.0 * std::sqrt(0.5 / n));
	EXPECT_NEAR(varP, 0.5, 4.0 * 0.5 * std::sqrt(2.0 / n));
}

TEST(Sampling, ThermalMomentumVariance)
{
	const auto def = build_model(ModelSpec{"spin_boson", {{"n_bath", "4"}}});
	const auto& th = std::get<ThermalHarmonic>(def.nuclear);
	const int n = 1000000;
	RealVector p2 = RealVector::Zero(4), p4 = RealVector::Zero(4);
	for (int i = 0; i < n; i++)
	{
		RandomStream r(37, i);
		const NuclearInit x = sample_nuclear(*def.model, def.nuclear, r);
		p2 += x.P.cwiseAbs2();
		p4 += x.P.cwiseAbs2().cwiseAbs2();
	}
	for (int j = 0; j < 4; j++)
	{
		const double expected = quantum_corrector(th.beta, th.omega[j]) / th.beta;
		const double mean = p2[j] / n;
		const double se = std::sqrt((p4[j] / n - mean * mean) / n);
		EXPECT_NEAR(mean, expected, 3.0 * se);
	}
}

TEST(Sampling, PositiveDomainTruncation)
{
	const auto def = build_model(ModelSpec{"photodissociation_1", {}});
	for (int i = 0; i < 10000; i++)
	{
		RandomStream r(41, i);
		EXPECT_GT(sample_nuclear(*def.model, def.nuclear, r).R[0], 0.0);
	}
}

TEST(Sampling, DiscretePhaseKernel)
{
	bool seen_first = false;
	ComplexVector mean = ComplexVector::Zero(3);
	const int n = 40000;
	for (int i = 0; i < n; i++)
	{
		RandomStream r(43, i);
		const ComplexMatrix K = sample_gdtwa(3, 1, r);
		EXPECT_NEAR(std::abs(K.trace() - Complex(1.0)), 0.0, 1e-15);
		EXPECT_LE((K - K.adjoint()).cwiseAbs().maxCoeff(), 0.0);
		mean += K.col(1);
		RandomStream r2(43, i);
		const ComplexMatrix K2 = sample_gdtwa(2, 0, r2);
		if (std::abs(K2(0, 1) - Complex(0.5, 0.5)) < 1e-15)
		{
			seen_first = true;
			EXPECT_NEAR(std::abs(K2(1, 0) - Complex(0.5, -0.5)), 0.0, 1e-15);
			EXPECT_EQ(K2(0, 0), Complex(1.0));
			EXPECT_EQ(K2(1, 1), Complex(0.0));
		}
	}
	EXPECT_TRUE(seen_first);
	mean /= n;
	EXPECT_LT(std::abs(mean[0]), 0.02);
	EXPECT_LT(std::abs(mean[2]), 0.02);
}

TEST(Sampling, SurfaceHoppingInitial)
{
	const RealMatrix I3 = RealMatrix::Identity(3, 3);
	for (int i = 0; i < 100; i++)
	{
		RandomStream r(47, i);
		const AmplitudeInit a = sample_fssh_initial(3, Occupation{2, Representation::Adiabatic}, I3, r);
		EXPECT_NEAR(std::abs(a.c[2]), 1.0, 1e-15);
		EXPECT_EQ(a.c[0], Complex(0.0));
		EXPECT_EQ(a.active, 2);
		RandomStream r2(47, i);
		EXPECT_EQ(sample_fssh_initial(3, Occupation{1, Representation::Diabatic}, I3, r2).active, 1);
	}
	const double c = std::cos(0.4), s = std::sin(0.4);
	RealMatrix T(2, 2);
	T << c, -s, s, c;
	int count1 = 0;
	const int n = 100000;
	for (int i = 0; i < n; i++)
	{
		RandomStream r(53, i);
		const AmplitudeInit a = sample_fssh_initial(2, Occupation{0, Representation::Diabatic}, T, r);
		EXPECT_NEAR(a.c.squaredNorm(), 1.0, 1e-14);
		count1 += a.active == 1;
	}
	const double p = s * s;
	EXPECT_NEAR(static_cast<double>(count1) / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
}
