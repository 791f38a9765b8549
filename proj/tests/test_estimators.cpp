#include "naf/adiabatic.hpp"
#include "naf/dynamics.hpp"
#include "naf/errors.hpp"
#include "naf/estimators.hpp"
#include "naf/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace naf;

namespace {

ModelDefinition make(const std::string& name, std::map<std::string, std::string> params = {})
{
	return build_model(ModelSpec{name, std::move(params)});
}

ObservableRequest population(Representation rep, int k)
{
	ObservableRequest r;
	r.kind = ObservableKind::Population;
	r.representation = rep;
	r.indices = {k};
	return r;
}

/// (1/2 pi) int ds exp(-a s^2) exp(i s x) by the trapezoid rule on a wide s grid
double fourier_kernel(double x, double a)
{
	const double smax = std::sqrt(40.0 / a);
	const int n = 20001;
	const double ds = 2.0 * smax / (n - 1);
	double sum = 0.0;
	for (int i = 0; i < n; i++)
	{
		const double s = -smax + i * ds;
		sum += std::exp(-a * s * s) * std::cos(s * x) * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
	}
	return sum * ds / (2.0 * std::numbers::pi);
}

} // namespace

TEST(Estimators, CpsDensityTraceIsOne)
{
	for (int F : {2, 3, 7})
	{
		const double gamma = default_gamma(F);
		for (int i = 0; i < 50; i++)
		{
			RandomStream r(1, i);
			const ElectronicInit e = sample_electronic_cps(F, gamma, Occupation{0, Representation::Diabatic}, Representation::Diabatic, nullptr, r);
			const ComplexMatrix rho = cps_density(e.g, gamma);
			EXPECT_NEAR(rho.trace().real(), 1.0, 1e-13);
			EXPECT_NEAR(rho.trace().imag(), 0.0, 1e-15);
			EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
		}
	}
}

TEST(Estimators, TwoStateCoefficients)
{
	// F = 2 with gamma = (sqrt 3 - 1)/2: (1+F)/(2(1+F gamma)^2) = 1/2 and (1-gamma)/(1+F gamma) = gamma
	const double gamma = default_gamma(2);
	ComplexVector g = ComplexVector::Zero(2);
	EXPECT_LT((cps_density(g, gamma) + gamma * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
	g << Complex(1.0, 0.0), Complex(0.0, 0.0);
	EXPECT_NEAR(cps_density(g, gamma)(0, 0).real(), 0.5 - gamma, 1e-15);
	g << Complex(0.3, 0.2), Complex(-0.5, 0.7);
	const ComplexMatrix expected = 0.5 * g * g.adjoint() - gamma * ComplexMatrix::Identity(2, 2);
	EXPECT_LT((cps_density(g, gamma) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Estimators, WeightedInitialPopulationIsOccupied)
{
	// mean of w0 * rho_nn over the sphere equals delta_{n, jocc}
	for (int F : {2, 3})
	{
		const double gamma = default_gamma(F);
		const int jocc = F - 1;
		const int n = 400000;
		std::vector<RunningStat> stat(F);
		for (int i = 0; i < n; i++)
		{
			RandomStream r(2, i);
			const ElectronicInit e = sample_electronic_cps(F, gamma, Occupation{jocc, Representation::Diabatic}, Representation::Diabatic, nullptr, r);
			const double w = electronic_weight0(e.g_occupied, jocc, gamma);
			const ComplexMatrix rho = cps_density(e.g, gamma);
			for (int k = 0; k < F; k++)
			{
				stat[k].add(w * rho(k, k).real());
			}
		}
		for (int k = 0; k < F; k++)
		{
			EXPECT_NEAR(stat[k].mean, k == jocc ? 1.0 : 0.0, 4.0 * stat[k].standard_error()) << "F = " << F << " k = " << k;
		}
	}
}

TEST(Estimators, WeightFormula)
{
	ComplexVector g(3);
	g << Complex(1.0, 1.0), Complex(0.5, 0.0), Complex(0.0, 0.0);
	EXPECT_NEAR(electronic_weight0(g, 0, 0.2), 3.0 * (1.0 - 0.2), 1e-15);
	EXPECT_NEAR(electronic_weight0(g, 1, 0.2), 3.0 * (0.125 - 0.2), 1e-15);
}

TEST(Estimators, DensityRepresentations)
{
	const auto def = make("lvcm_crco5");
	MethodOptions o;
	o.method = Method::Naf;
	o.gamma = default_gamma(3);
	RandomStream r(4, 4);
	const TrajectoryState s = initialize_trajectory(def, o, def.occupation, r);
	const ComplexMatrix adi = estimate_density(s, o, Representation::Adiabatic);
	const ComplexMatrix dia = estimate_density(s, o, Representation::Diabatic);
	const ComplexMatrix T = s.frame.T.cast<Complex>();
	EXPECT_LT((dia - T * adi * T.transpose()).cwiseAbs().maxCoeff(), 1e-14);
	EXPECT_NEAR(dia.trace().real(), 1.0, 1e-13);

	MethodOptions f;
	f.method = Method::Fssh;
	RandomStream r2(4, 5);
	const TrajectoryState h = initialize_trajectory(def, f, Occupation{1, Representation::Adiabatic}, r2);
	const ComplexMatrix ha = estimate_density(h, f, Representation::Adiabatic);
	EXPECT_EQ(ha(1, 1), Complex(1.0));
	EXPECT_EQ(ha(0, 0), Complex(0.0));
}

TEST(Estimators, KernelDensityIntegratesToOne)
{
	const std::vector<double> samples = {-3.0, 0.5, 2.0, 7.5};
	const std::vector<double> weights = {1.0, 1.0, 1.0, 1.0};
	std::vector<double> grid;
	for (int i = 0; i <= 4000; i++)
	{
		grid.push_back(-30.0 + 60.0 * i / 4000.0);
	}
	for (double a : {0.01, 0.5, 2.0})
	{
		const auto d = momentum_distribution(samples, weights, a, grid);
		double integral = 0.0;
		for (std::size_t i = 1; i < grid.size(); i++)
		{
			integral += 0.5 * (d[i] + d[i - 1]) * (grid[i] - grid[i - 1]);
		}
		EXPECT_NEAR(integral, 1.0, 1e-6) << "a = " << a;
	}
}

TEST(Estimators, KernelDensityMatchesFourierQuadrature)
{
	std::mt19937_64 gen(5);
	std::normal_distribution<double> nd(10.0, 2.0);
	std::vector<double> samples, weights;
	for (int i = 0; i < 50; i++)
	{
		samples.push_back(nd(gen));
		weights.push_back(1.0 + 0.1 * (i % 3));
	}
	const double a = 0.3;
	std::vector<double> grid;
	for (int i = 0; i <= 40; i++)
	{
		grid.push_back(2.0 + 0.4 * i);
	}
	const auto d = momentum_distribution(samples, weights, a, grid);
	for (std::size_t k = 0; k < grid.size(); k++)
	{
		double q = 0.0;
		for (std::size_t i = 0; i < samples.size(); i++)
		{
			q += weights[i] * fourier_kernel(grid[k] - samples[i], a);
		}
		q /= static_cast<double>(samples.size());
		EXPECT_NEAR(d[k], q, 1e-6);
	}
}

TEST(Estimators, ChannelsSumToOneForProbabilisticMethods)
{
	const auto def = make("tully_sac", {{"p0", "10"}});
	for (Method m : {Method::Fssh, Method::Ehrenfest})
	{
		MethodOptions o;
		o.method = m;
		std::vector<ChannelSample> samples;
		for (int i = 0; i < 20; i++)
		{
			RandomStream r(6, i);
			TrajectoryState s = initialize_trajectory(def, o, def.occupation, r);
			for (int k = 0; k < 3000; k++)
			{
				advance_trajectory(s, *def.model, o, 1.0, r);
			}
			const ComplexMatrix rho = estimate_density(s, o, Representation::Adiabatic);
			samples.push_back(ChannelSample{s.R[0], rho.diagonal().real(), s.weight});
		}
		const ChannelTable t = scattering_channels(samples, def.interaction_radius);
		EXPECT_NEAR(t.total(), 1.0, 1e-12) << method_name(m);
		EXPECT_EQ(t.inside_interaction_region, 0);
		EXPECT_EQ(t.n_traj, 20);
	}
}

TEST(Estimators, ChannelsAssignBySignOfR)
{
	std::vector<ChannelSample> s = {
		{5.0, (RealVector(2) << 0.25, 0.75).finished(), 1.0},
		{-5.0, (RealVector(2) << 1.0, 0.0).finished(), 1.0},
		{0.5, (RealVector(2) << 0.0, 1.0).finished(), 1.0},
	};
	const ChannelTable t = scattering_channels(s, 1.0);
	EXPECT_NEAR(t.transmission[0], 0.25 / 3.0, 1e-15);
	EXPECT_NEAR(t.transmission[1], 1.75 / 3.0, 1e-15);
	EXPECT_NEAR(t.reflection[0], 1.0 / 3.0, 1e-15);
	EXPECT_EQ(t.reflection[1], 0.0);
	EXPECT_EQ(t.inside_interaction_region, 1);
}

TEST(Estimators, RunningStatStandardError)
{
	RunningStat same;
	for (int i = 0; i < 10; i++)
	{
		same.add(0.37);
	}
	EXPECT_EQ(same.standard_error(), 0.0);
	EXPECT_NEAR(same.mean, 0.37, 1e-16);
	RunningStat one;
	one.add(2.0);
	EXPECT_EQ(one.standard_error(), 0.0);

	std::mt19937_64 gen(7);
	std::normal_distribution<double> nd(0.0, 1.0);
	RunningStat small, large;
	for (int i = 0; i < 1000; i++)
	{
		small.add(nd(gen));
	}
	for (int i = 0; i < 100000; i++)
	{
		large.add(nd(gen));
	}
	EXPECT_NEAR(small.standard_error() * std::sqrt(1000.0), 1.0, 0.1);
	EXPECT_NEAR(large.standard_error() * std::sqrt(100000.0), 1.0, 0.01);
	EXPECT_NEAR(small.standard_error() / large.standard_error(), 10.0, 1.0);
}

TEST(Estimators, ChanMergeEqualsSequential)
{
	std::mt19937_64 gen(8);
	std::uniform_real_distribution<double> u(-5.0, 5.0);
	std::vector<double> x(997);
	for (auto& v : x)
	{
		v = u(gen);
	}
	RunningStat all;
	for (double v : x)
	{
		all.add(v);
	}
	RunningStat merged;
	for (std::size_t start = 0; start < x.size(); start += 64)
	{
		RunningStat chunk;
		for (std::size_t i = start; i < std::min(x.size(), start + 64); i++)
		{
			chunk.add(x[i]);
		}
		merged.merge(chunk);
	}
	EXPECT_EQ(merged.n, all.n);
	EXPECT_NEAR(merged.mean, all.mean, 1e-14);
	EXPECT_NEAR(merged.m2, all.m2, 1e-10 * all.m2);
	RunningStat empty;
	merged.merge(empty);
	EXPECT_EQ(merged.n, all.n);
	empty.merge(all);
	EXPECT_EQ(empty.mean, all.mean);
}

TEST(Estimators, RequestNamesAndValidation)
{
	const auto def = make("lvcm_crco5");
	EXPECT_EQ(population(Representation::Diabatic, 0).name(), "pop_dia_1");
	EXPECT_EQ(population(Representation::Adiabatic, 2).name(), "pop_adi_3");
	ObservableRequest c;
	c.kind = ObservableKind::Coherence;
	c.indices = {0, 1};
	c.part = CoherencePart::Re;
	EXPECT_EQ(c.name(), "coh_dia_1_2_re");
	ObservableRequest d;
	d.kind = ObservableKind::PopulationDifference;
	d.indices = {0, 1};
	EXPECT_EQ(d.name(), "diff_dia_1_2");
	ObservableRequest mr;
	mr.kind = ObservableKind::MeanR;
	mr.indices = {1};
	EXPECT_EQ(mr.name(), "mean_R_2");
	EXPECT_NO_THROW(mr.validate(*def.model));
	mr.indices = {2};
	EXPECT_THROW(mr.validate(*def.model), ConfigError);
	EXPECT_THROW(population(Representation::Diabatic, 3).validate(*def.model), ConfigError);
	c.indices = {1, 1};
	EXPECT_THROW(c.validate(*def.model), ConfigError);
}

TEST(Estimators, AccumulatorChunkedMergeMatchesSequential)
{
	const auto def = make("tully_sac", {{"p0", "15"}});
	MethodOptions o;
	o.method = Method::Naf;
	o.gamma = default_gamma(2);
	ObservableRequest mom;
	mom.kind = ObservableKind::MomentumDistribution;
	mom.indices = {0};
	mom.damping = 0.01;
	mom.grid = RealVector::LinSpaced(21, 10.0, 20.0);
	ObservableRequest sc;
	sc.kind = ObservableKind::Scattering;
	const ObservableLayout layout({population(Representation::Diabatic, 0), population(Representation::Adiabatic, 1), mom, sc}, *def.model, 3, def.interaction_radius);
	Accumulator seq(layout), total(layout), chunk(layout);
	std::vector<double> buffer(layout.slots());
	for (int i = 0; i < 150; i++)
	{
		RandomStream r(9, i);
		TrajectoryState s = initialize_trajectory(def, o, def.occupation, r);
		for (int k = 0; k < 3; k++)
		{
			layout.record(buffer, k, s, o);
			for (int q = 0; q < 200; q++)
			{
				advance_trajectory(s, *def.model, o, 1.0, r);
			}
		}
		layout.record_final(buffer, s, o);
		seq.add(buffer);
		chunk.add(buffer);
		if (chunk.count() == 64 || i == 149)
		{
			total.merge(chunk);
			chunk = Accumulator(layout);
		}
	}
	const TimeSeries a = seq.time_series({0.0, 200.0, 400.0});
	const TimeSeries b = total.time_series({0.0, 200.0, 400.0});
	ASSERT_EQ(a.columns.size(), 2u);
	EXPECT_EQ(a.columns[0].name, "pop_dia_1");
	EXPECT_EQ(a.n_traj, 150);
	EXPECT_TRUE(a.stderr_defined);
	for (std::size_t c = 0; c < a.columns.size(); c++)
	{
		for (int k = 0; k < 3; k++)
		{
			EXPECT_NEAR(a.columns[c].mean[k], b.columns[c].mean[k], 1e-13);
			EXPECT_NEAR(a.columns[c].stderr_[k], b.columns[c].stderr_[k], 1e-13);
		}
	}
	// weighted estimator reproduces the initial occupation on average
	EXPECT_NEAR(a.columns[0].mean[0], 1.0, 4.0 * a.columns[0].stderr_[0]);
	const auto dist = seq.distributions();
	ASSERT_EQ(dist.size(), 1u);
	EXPECT_EQ(dist[0].grid.size(), 21u);
	ASSERT_TRUE(seq.channels());
	EXPECT_EQ(seq.channels()->n_traj, 150);

	Accumulator empty(layout);
	EXPECT_THROW(empty.time_series({0.0, 1.0, 2.0}), NumericalError);
}
