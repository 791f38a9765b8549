/// @file dynamics.cpp
/// @brief Velocity-Verlet style splitting with electronic propagation, force-state switching and rescaling.

#include "naf/dynamics.hpp"

#include "naf/estimators.hpp"
#include "naf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace naf {

std::string method_name(Method m)
{
	switch (m)
	{
	case Method::Naf: return "naf";
	case Method::NafS: return "naf_s";
	case Method::NafEhrenfest: return "naf_ehrenfest";
	case Method::NafGdtwa: return "naf_gdtwa";
	case Method::Gdtwa: return "gdtwa";
	case Method::MeanFieldCps: return "mean_field_cps";
	case Method::Ehrenfest: return "ehrenfest";
	case Method::Fssh: return "fssh";
	case Method::FsNaf: return "fs_naf";
	case Method::ExactGrid: return "exact_grid";
	}
	return "unknown";
}

Method parse_method(const std::string& name)
{
	for (Method m : {Method::Naf, Method::NafS, Method::NafEhrenfest, Method::NafGdtwa, Method::Gdtwa, Method::MeanFieldCps, Method::Ehrenfest, Method::Fssh, Method::FsNaf, Method::ExactGrid})
	{
		if (method_name(m) == name)
		{
			return m;
		}
	}
	throw ConfigError("unknown method '" + name + "'");
}

bool uses_cps(Method m)
{
	return m == Method::Naf || m == Method::NafS || m == Method::MeanFieldCps;
}

bool uses_kernel(Method m)
{
	return m == Method::NafGdtwa || m == Method::Gdtwa;
}

bool uses_amplitudes(Method m)
{
	return m == Method::NafEhrenfest || m == Method::Ehrenfest || m == Method::Fssh || m == Method::FsNaf;
}

bool uses_naf_force(Method m)
{
	return m == Method::Naf || m == Method::NafS || m == Method::NafEhrenfest || m == Method::NafGdtwa;
}

bool is_surface_hopping(Method m)
{
	return m == Method::Fssh || m == Method::FsNaf;
}

int StepOutcome::count(StepEvent e) const
{
	int n = 0;
	for (StepEvent x : events)
	{
		n += x == e;
	}
	return n;
}

void electronic_step(ElectronicPayload& payload, const ComplexMatrix& U)
{
	if (auto* p = std::get_if<CpsPayload>(&payload))
	{
		p->g = U * p->g;
		p->Gamma = U * p->Gamma * U.adjoint();
	}
	else if (auto* p = std::get_if<AmplitudePayload>(&payload))
	{
		p->c = U * p->c;
	}
	else if (auto* p = std::get_if<KernelPayload>(&payload))
	{
		p->K = U * p->K * U.adjoint();
	}
}

ComplexMatrix adiabatic_propagator(const AdiabaticFrame& frame, const RealVector& P, const RealVector& M, double dt)
{
	return hermitian_propagator(effective_potential(frame, P, M), dt);
}

ComplexMatrix diabatic_transform_propagator(const AdiabaticFrame& from, const RealMatrix& V, const AdiabaticFrame& to, double dt)
{
	return to.T.transpose().cast<Complex>() * symmetric_propagator(V, dt) * from.T.cast<Complex>();
}

RealMatrix force_weights(const TrajectoryState& state, Method method)
{
	RealMatrix rho;
	if (const auto* p = std::get_if<CpsPayload>(&state.electronic))
	{
		rho = (0.5 * p->g * p->g.adjoint() - p->Gamma).real();
	}
	else if (const auto* p = std::get_if<AmplitudePayload>(&state.electronic))
	{
		rho = (p->c * p->c.adjoint()).real();
		if (is_surface_hopping(method))
		{
			rho.diagonal().setZero();
			rho(state.active, state.active) = 1.0;
		}
	}
	else if (const auto* p = std::get_if<KernelPayload>(&state.electronic))
	{
		rho = p->K.real();
	}
	return 0.5 * (rho + rho.transpose());
}

RealVector force_assembly(const AdiabaticFrame& frame, const RealMatrix& rho, ForceMode mode, int j)
{
	RealMatrix W = 0.5 * (rho + rho.transpose());
	switch (mode)
	{
	case ForceMode::MeanField:
		break;
	case ForceMode::SingleState:
		W.diagonal().setZero();
		W(j, j) = 1.0;
		break;
	case ForceMode::AdiabaticOnly:
		W.setZero();
		W(j, j) = 1.0;
		break;
	}
	// -sum_kl G_lk W_kl with G = T^T dV T, evaluated as -Tr(dV T W T^T)
	return -frame.grad.trace_with(frame.T * W * frame.T.transpose());
}

Selection select_force_state(const RealVector& rho_diag, int current, double energy, const RealVector& E, RandomStream* stochastic)
{
	const int F = static_cast<int>(rho_diag.size());
	int candidate = current;
	if (stochastic != nullptr)
	{
		const double total = rho_diag.cwiseAbs().sum();
		const double xi = stochastic->uniform() * total;
		double cumulative = 0.0;
		candidate = F - 1;
		for (int k = 0; k < F; k++)
		{
			cumulative += std::abs(rho_diag[k]);
			if (xi < cumulative)
			{
				candidate = k;
				break;
			}
		}
	}
	else
	{
		for (int k = 0; k < F; k++)
		{
			if (rho_diag[k] > rho_diag[candidate])
			{
				candidate = k;
			}
		}
	}
	Selection s{current};
	if (candidate == current)
	{
		return s;
	}
	s.attempted = true;
	if (energy < E[candidate])
	{
		s.frustrated = true;
		return s;
	}
	s.state = candidate;
	return s;
}

double kinetic_energy(const RealVector& P, const RealVector& M)
{
	return 0.5 * P.cwiseProduct(P).cwiseQuotient(M).sum();
}

std::optional<RealVector> rescale_along_momentum(const RealVector& P, const RealVector& M, double target_ke, double tol)
{
	if (target_ke < -tol)
	{
		return std::nullopt;
	}
	if (target_ke <= 0.0)
	{
		return RealVector(RealVector::Zero(P.size()));
	}
	const double ke = kinetic_energy(P, M);
	if (ke <= 0.0)
	{
		return std::nullopt;
	}
	return RealVector(P * std::sqrt(target_ke / ke));
}

std::optional<RealVector> adjust_along_coupling(const RealVector& P, const RealVector& M, const RealVector& d, double delta_e)
{
	const RealVector dm = d.cwiseQuotient(M);
	const double a = 0.5 * d.dot(dm);
	const double b = P.dot(dm);
	const double c = delta_e;
	if (a <= 0.0)
	{
		return std::nullopt;
	}
	const double disc = b * b - 4.0 * a * c;
	if (disc < 0.0)
	{
		return std::nullopt;
	}
	const double sq = std::sqrt(disc);
	double lambda = 0.0;
	if (b == 0.0 && c == 0.0)
	{
		lambda = 0.0;
	}
	else
	{
		// stable pair of roots q/a and c/q
		const double q = -0.5 * (b + std::copysign(sq, b));
		const double r1 = q / a;
		const double r2 = q != 0.0 ? c / q : r1;
		lambda = std::abs(r1) < std::abs(r2) ? r1 : r2;
	}
	return RealVector(P + lambda * d);
}

namespace {

RealVector compute_force(const TrajectoryState& s, const Model& model, const MethodOptions& o)
{
	const Method m = o.method;
	if (m == Method::Ehrenfest && o.diabatic_amplitudes)
	{
		const auto& c = std::get<AmplitudePayload>(s.electronic).c;
		return -s.frame.grad.trace_with((c * c.adjoint()).real());
	}
	(void)model;
	const RealMatrix rho = force_weights(s, m);
	if (uses_naf_force(m) || m == Method::FsNaf)
	{
		return force_assembly(s.frame, rho, ForceMode::SingleState, s.active);
	}
	if (m == Method::Fssh)
	{
		return force_assembly(s.frame, rho, ForceMode::AdiabaticOnly, s.active);
	}
	return force_assembly(s.frame, rho, ForceMode::MeanField);
}

/// One attempt; false if the closing rescale is infeasible at this step size.
bool try_step(TrajectoryState& s, const Model& model, const MethodOptions& o, double dt, RandomStream& rng, std::vector<StepEvent>& events)
{
	const Method m = o.method;
	const RealVector& M = model.masses();
	RealVector P = s.P + 0.5 * dt * s.force;
	const RealVector R = s.R + dt * P.cwiseQuotient(M);

	RealMatrix V;
	model.potential_into(R, V);
	GradientTensor grad;
	model.gradient_into(R, grad);
	AdiabaticFrame frame = adiabatic_frame(V, std::move(grad), &s.frame);

	ComplexMatrix U;
	if (m == Method::Ehrenfest && o.diabatic_amplitudes)
	{
		U = symmetric_propagator(V, dt);
	}
	else if (o.propagation == ElectronicPropagation::DiabaticTransform)
	{
		U = diabatic_transform_propagator(s.frame, V, frame, dt);
	}
	else
	{
		U = adiabatic_propagator(frame, P, M, dt);
	}
	ElectronicPayload electronic = s.electronic;
	electronic_step(electronic, U);

	TrajectoryState next;
	next.t = s.t + dt;
	next.R = R;
	next.electronic = std::move(electronic);
	next.active = s.active;
	next.H0 = s.H0;
	next.weight = s.weight;
	next.frame = std::move(frame);

	if (uses_naf_force(m))
	{
		const RealMatrix rho = force_weights(next, m);
		const double energy = kinetic_energy(P, M) + next.frame.E[s.active];
		const Selection sel = select_force_state(rho.diagonal(), s.active, energy, next.frame.E, m == Method::NafS ? &rng : nullptr);
		if (sel.attempted && !sel.frustrated)
		{
			auto rescaled = rescale_along_momentum(P, M, energy - next.frame.E[sel.state]);
			if (rescaled)
			{
				P = *rescaled;
				next.active = sel.state;
				events.push_back(StepEvent::SwitchAccepted);
			}
			else
			{
				events.push_back(StepEvent::SwitchFrustrated);
			}
		}
		else if (sel.frustrated)
		{
			events.push_back(StepEvent::SwitchFrustrated);
		}
	}
	else if (is_surface_hopping(m))
	{
		const auto& c = std::get<AmplitudePayload>(next.electronic).c;
		const int j = s.active;
		const double pj = std::norm(c[j]);
		const RealVector v = P.cwiseQuotient(M);
		const double xi = rng.uniform();
		double cumulative = 0.0;
		for (int k = 0; k < next.frame.n_states(); k++)
		{
			if (k == j)
			{
				continue;
			}
			const RealVector d = next.frame.nac_vector(j, k);
			double prob = pj > 0.0 ? 2.0 * dt * (c[k] * std::conj(c[j])).real() * v.dot(d) / pj : 0.0;
			prob = std::clamp(prob, 0.0, 1.0);
			if (xi >= cumulative && xi < cumulative + prob)
			{
				auto adjusted = adjust_along_coupling(P, M, d, next.frame.E[k] - next.frame.E[j]);
				if (adjusted)
				{
					P = *adjusted;
					next.active = k;
					events.push_back(StepEvent::SwitchAccepted);
				}
				else
				{
					events.push_back(StepEvent::SwitchFrustrated);
				}
				break;
			}
			cumulative += prob;
		}
	}

	next.force = compute_force(next, model, o);
	P += 0.5 * dt * next.force;

	if (uses_naf_force(m) || m == Method::FsNaf)
	{
		auto rescaled = rescale_along_momentum(P, M, s.H0 - next.frame.E[next.active], 1e-12 * std::abs(s.H0));
		if (!rescaled)
		{
			return false;
		}
		P = *rescaled;
	}
	if (o.hard_wall && model.positive_domain())
	{
		for (int J = 0; J < P.size(); J++)
		{
			if (next.R[J] <= 0.0 && P[J] <= 0.0)
			{
				P[J] = -P[J];
				events.push_back(StepEvent::HardWallReflection);
			}
		}
	}
	next.P = std::move(P);
	s = std::move(next);
	return true;
}

void advance_recursive(TrajectoryState& s, const Model& model, const MethodOptions& o, double dt, RandomStream& rng, int depth, StepOutcome& out)
{
	std::vector<StepEvent> events;
	if (!(uses_naf_force(o.method) || o.method == Method::FsNaf))
	{
		try_step(s, model, o, dt, rng, events);
		out.events.insert(out.events.end(), events.begin(), events.end());
		return;
	}
	if (try_step(s, model, o, dt, rng, events))
	{
		out.events.insert(out.events.end(), events.begin(), events.end());
		return;
	}
	if (depth >= o.halving_limit)
	{
		throw TrajectoryFailure("step halving limit exceeded at t = " + std::to_string(s.t));
	}
	out.events.push_back(StepEvent::SubstepHalving);
	advance_recursive(s, model, o, 0.5 * dt, rng, depth + 1, out);
	advance_recursive(s, model, o, 0.5 * dt, rng, depth + 1, out);
}

} // namespace

StepOutcome advance_trajectory(TrajectoryState& state, const Model& model, const MethodOptions& options, double dt, RandomStream& rng)
{
	if (!(dt > 0.0))
	{
		throw ConfigError("time step must be positive");
	}
	StepOutcome out;
	advance_recursive(state, model, options, dt, rng, 0, out);
	return out;
}

TrajectoryState initialize_trajectory(const ModelDefinition& def, const MethodOptions& o, Occupation occ, RandomStream& rng)
{
	const Model& model = *def.model;
	const int F = model.n_states();
	if (occ.state < 0 || occ.state >= F)
	{
		throw ConfigError("occupied state index out of range");
	}
	const Method m = o.method;
	if (m == Method::ExactGrid)
	{
		throw ConfigError("exact_grid is not a trajectory method");
	}
	TrajectoryState s;
	const NuclearInit nuc = sample_nuclear(model, def.nuclear, rng);
	s.R = nuc.R;
	s.P = nuc.P;
	s.frame = adiabatic_frame(model, s.R);
	const RealMatrix& T0 = s.frame.T;

	if (uses_cps(m))
	{
		const ElectronicInit e = sample_electronic_cps(F, o.gamma, occ, Representation::Adiabatic, &T0, rng);
		s.electronic = CpsPayload{e.g, e.Gamma};
		s.weight = electronic_weight0(e.g_occupied, occ.state, o.gamma);
	}
	else if (uses_kernel(m))
	{
		ComplexMatrix K = sample_gdtwa(F, occ.state, rng);
		if (occ.representation == Representation::Diabatic)
		{
			K = T0.transpose().cast<Complex>() * K * T0.cast<Complex>();
		}
		s.electronic = KernelPayload{K};
	}
	else
	{
		const AmplitudeInit a = sample_fssh_initial(F, occ, T0, rng);
		ComplexVector c = a.c;
		if (m == Method::Ehrenfest && o.diabatic_amplitudes)
		{
			c = T0.cast<Complex>() * c;
		}
		s.electronic = AmplitudePayload{c};
		s.active = a.active;
	}

	if (uses_naf_force(m))
	{
		const RealMatrix rho = force_weights(s, m);
		s.active = occ.state;
		const Selection sel = select_force_state(rho.diagonal(), 0, std::numeric_limits<double>::infinity(), s.frame.E, m == Method::NafS ? &rng : nullptr);
		s.active = sel.state;
	}
	if (uses_naf_force(m) || is_surface_hopping(m))
	{
		s.H0 = kinetic_energy(s.P, model.masses()) + s.frame.E[s.active];
	}
	s.force = compute_force(s, model, o);
	return s;
}

} // namespace naf
