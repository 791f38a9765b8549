/// @file estimators.hpp
/// @brief Per-trajectory estimators and their deterministic ensemble reduction.

#pragma once

#include "naf/dynamics.hpp"
#include "naf/linalg.hpp"
#include "naf/models.hpp"

#include <optional>
#include <string>
#include <vector>

namespace naf {

/// @brief w0 = F (|g_jocc|^2 / 2 - gamma), with g in the representation where jocc is occupied.
double electronic_weight0(const ComplexVector& g_occupied, int jocc, double gamma);

/// @brief Unweighted CPS estimator (1+F)/(2(1+F gamma)^2) g g^dag - (1-gamma)/(1+F gamma) I.
ComplexMatrix cps_density(const ComplexVector& g, double gamma);

/// @brief Per-trajectory density matrix (without w0) in the requested representation.
ComplexMatrix estimate_density(const TrajectoryState& state, const MethodOptions& options, Representation rep);

enum class ObservableKind
{
	Population,
	Coherence,
	PopulationDifference,
	MeanR,
	MeanP,
	MomentumDistribution,
	Scattering
};

enum class CoherencePart
{
	Abs,
	Re,
	Im
};

struct ObservableRequest
{
	ObservableKind kind = ObservableKind::Population;
	Representation representation = Representation::Diabatic;
	std::vector<int> indices; ///< zero-based states (density kinds) or DOF (nuclear kinds)
	CoherencePart part = CoherencePart::Abs;
	double damping = 0.0;     ///< momentum distribution: a
	RealVector grid;          ///< momentum distribution: P grid

	/// @brief Column name used in output files.
	std::string name() const;
	/// @brief Time-resolved scalar (as opposed to a final-time table).
	bool time_resolved() const;
	/// @throws ConfigError if indices or damping are invalid for the model
	void validate(const Model& model) const;
};

/// @brief Count, mean and sum of squared deviations; merging is associative.
struct RunningStat
{
	long n = 0;
	double mean = 0.0;
	double m2 = 0.0;

	void add(double x);
	void merge(const RunningStat& other);
	/// @brief sqrt(sample variance / n); 0 for n < 2.
	double standard_error() const;
};

struct Column
{
	std::string name;
	std::vector<double> mean;
	std::vector<double> stderr_;
};

struct TimeSeries
{
	std::vector<double> times;
	std::vector<Column> columns;
	long n_traj = 0;
	long n_failed = 0;
	bool stderr_defined = false;
};

struct Distribution
{
	std::string name;
	std::vector<double> grid;
	std::vector<double> density;
	std::vector<double> stderr_;
};

/// @brief Adiabatic channel probabilities; index k is adiabatic state k.
struct ChannelTable
{
	std::vector<double> transmission;
	std::vector<double> reflection;
	std::vector<double> transmission_stderr;
	std::vector<double> reflection_stderr;
	long inside_interaction_region = 0;
	long n_traj = 0;

	double total() const;
};

/// @brief Gaussian kernel density: sum_i w_i exp(-(P-P_i)^2/(4a)) / (n 2 sqrt(pi a)).
std::vector<double> momentum_distribution(const std::vector<double>& samples, const std::vector<double>& weights, double a, const std::vector<double>& grid);

/// @brief Per-trajectory final data entering the channel table.
struct ChannelSample
{
	double R;
	RealVector adiabatic_population; ///< diagonal of the adiabatic density estimate
	double weight;
};

/// @brief Weighted channel means over all samples; samples with |R| < radius are counted as still inside.
ChannelTable scattering_channels(const std::vector<ChannelSample>& samples, double interaction_radius);

/// @brief Per-trajectory values laid out in fixed slots for one set of requests.
class ObservableLayout
{
public:
	ObservableLayout(std::vector<ObservableRequest> requests, const Model& model, int n_times, double interaction_radius);

	int slots() const { return total; }
	int n_times() const { return times; }
	const std::vector<ObservableRequest>& requests() const { return reqs; }

	/// @brief Write the weighted time-resolved values for time index @p k.
	void record(std::vector<double>& buffer, int k, const TrajectoryState& state, const MethodOptions& options) const;
	/// @brief Write final-time values (distributions, channels).
	void record_final(std::vector<double>& buffer, const TrajectoryState& state, const MethodOptions& options) const;

	int scalar_count() const { return scalars; }
	int final_offset(int request) const { return final_slot[request]; }
	/// @brief Slot holding the inside-interaction-region indicator, or -1.
	int inside_slot() const { return inside; }

private:
	std::vector<ObservableRequest> reqs;
	int times;
	int scalars = 0;
	int total = 0;
	int inside = -1;
	int states;
	double radius;
	std::vector<int> scalar_request;
	std::vector<int> final_slot;
	RealVector scale;
};

/// @brief Ensemble reduction: one RunningStat per slot, merged in trajectory-index order.
class Accumulator
{
public:
	explicit Accumulator(const ObservableLayout& layout);

	void add(const std::vector<double>& buffer);
	void merge(const Accumulator& other);
	void count_failure(long k = 1) { failed += k; }
	long count() const { return n; }
	long failures() const { return failed; }

	/// @throws NumericalError for an empty ensemble
	TimeSeries time_series(const std::vector<double>& times) const;
	std::vector<Distribution> distributions() const;
	std::optional<ChannelTable> channels() const;

private:
	const ObservableLayout* layout;
	std::vector<RunningStat> stats;
	long n = 0;
	long failed = 0;
};

} // namespace naf
