/// @file config.cpp
/// @brief INI run specification.

#include "naf/config.hpp"

#include "naf/errors.hpp"
#include "naf/sampling.hpp"
#include "naf/units.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace naf {

namespace pt = boost::property_tree;

std::string format_double(double x)
{
	char buf[64];
	const auto r = std::to_chars(buf, buf + sizeof buf, x);
	return std::string(buf, r.ptr);
}

long RunSpec::steps() const
{
	return std::lround(t_final / dt);
}

std::vector<double> RunSpec::record_times() const
{
	std::vector<double> t;
	const long n = steps();
	for (long s = 0; s <= n; s += record_every)
	{
		t.push_back(static_cast<double>(s) * dt);
	}
	return t;
}

bool operator==(const ObservableRequest& a, const ObservableRequest& b)
{
	return a.kind == b.kind && a.representation == b.representation && a.indices == b.indices && a.part == b.part && a.damping == b.damping && a.grid.size() == b.grid.size() && a.grid == b.grid;
}

bool operator==(const RunSpec& a, const RunSpec& b)
{
	const auto& ma = a.method;
	const auto& mb = b.method;
	return a.model == b.model && ma.method == mb.method && ma.gamma == mb.gamma && ma.propagation == mb.propagation && ma.hard_wall == mb.hard_wall && ma.diabatic_amplitudes == mb.diabatic_amplitudes && ma.halving_limit == mb.halving_limit && a.dt == b.dt && a.t_final == b.t_final && a.record_every == b.record_every && a.n_traj == b.n_traj && a.seed == b.seed && a.occupation.state == b.occupation.state && a.occupation.representation == b.occupation.representation && a.observables == b.observables && a.output == b.output && a.workers == b.workers && a.grid.r_min == b.grid.r_min && a.grid.r_max == b.grid.r_max && a.grid.points == b.grid.points;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
	std::vector<std::string> out;
	std::string cur;
	std::istringstream in(s);
	while (std::getline(in, cur, sep))
	{
		out.push_back(cur);
	}
	return out;
}

std::vector<std::string> words(const std::string& s)
{
	std::vector<std::string> out;
	std::istringstream in(s);
	std::string w;
	while (in >> w)
	{
		out.push_back(w);
	}
	return out;
}

double to_number(const std::string& key, const std::string& text)
{
	double v = 0.0;
	const char* b = text.data();
	const char* e = b + text.size();
	while (b < e && *b == ' ')
	{
		b++;
	}
	while (e > b && e[-1] == ' ')
	{
		e--;
	}
	if (b < e && *b == '+')
	{
		b++;
	}
	const auto r = std::from_chars(b, e, v);
	if (r.ec != std::errc() || r.ptr != e || !std::isfinite(v))
	{
		throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
	}
	return v;
}

long to_integer(const std::string& key, const std::string& text, long lo)
{
	const double v = to_number(key, text);
	if (v != std::floor(v) || v < static_cast<double>(lo) || v > 9.0e15)
	{
		throw ConfigError("'" + key + "' expects an integer >= " + std::to_string(lo) + ", got '" + text + "'");
	}
	return static_cast<long>(v);
}

bool to_bool(const std::string& key, const std::string& text)
{
	if (text == "true" || text == "yes" || text == "1")
	{
		return true;
	}
	if (text == "false" || text == "no" || text == "0")
	{
		return false;
	}
	throw ConfigError("'" + key + "' expects true or false, got '" + text + "'");
}

Representation to_representation(const std::string& key, const std::string& text)
{
	if (text == "diabatic")
	{
		return Representation::Diabatic;
	}
	if (text == "adiabatic")
	{
		return Representation::Adiabatic;
	}
	throw ConfigError("'" + key + "' expects diabatic or adiabatic, got '" + text + "'");
}

std::string rep_name(Representation r)
{
	return r == Representation::Diabatic ? "diabatic" : "adiabatic";
}

/// Section reader that remembers consumed keys.
class Section
{
public:
	Section(const pt::ptree* tree, std::string name) : tree(tree), name(std::move(name)) {}

	std::optional<std::string> get(const std::string& key)
	{
		used.insert(key);
		if (tree == nullptr)
		{
			return std::nullopt;
		}
		auto child = tree->get_child_optional(pt::ptree::path_type(key, '\0'));
		if (!child)
		{
			return std::nullopt;
		}
		return child->data();
	}

	void unknown(std::vector<std::string>& out) const
	{
		if (tree == nullptr)
		{
			return;
		}
		for (const auto& [k, v] : *tree)
		{
			if (!used.count(k))
			{
				out.push_back("[" + name + "] " + k);
			}
		}
	}

private:
	const pt::ptree* tree;
	std::string name;
	std::set<std::string> used;
};

std::pair<int, int> index_pair(const std::string& key, const std::string& text)
{
	const auto parts = split(text, '-');
	if (parts.size() != 2)
	{
		throw ConfigError("'" + key + "' expects a state pair like 1-2, got '" + text + "'");
	}
	return {static_cast<int>(to_integer(key, parts[0], 1)) - 1, static_cast<int>(to_integer(key, parts[1], 1)) - 1};
}

void parse_observables(Section& s, RunSpec& spec, const ModelDefinition& def)
{
	const int F = def.model->n_states();
	if (auto v = s.get("population"))
	{
		for (const auto& item : split(*v, ','))
		{
			const auto w = words(item);
			if (w.empty())
			{
				continue;
			}
			const Representation rep = to_representation("population", w[0]);
			std::vector<int> states;
			if (w.size() == 1 || (w.size() == 2 && w[1] == "all"))
			{
				for (int k = 0; k < F; k++)
				{
					states.push_back(k);
				}
			}
			else
			{
				for (std::size_t i = 1; i < w.size(); i++)
				{
					states.push_back(static_cast<int>(to_integer("population", w[i], 1)) - 1);
				}
			}
			for (int k : states)
			{
				ObservableRequest r;
				r.kind = ObservableKind::Population;
				r.representation = rep;
				r.indices = {k};
				spec.observables.push_back(r);
			}
		}
	}
	if (auto v = s.get("coherence"))
	{
		for (const auto& item : split(*v, ','))
		{
			const auto w = words(item);
			if (w.empty())
			{
				continue;
			}
			if (w.size() != 3)
			{
				throw ConfigError("'coherence' entries take the form '<representation> <i>-<j> <abs|re|im>', got '" + item + "'");
			}
			ObservableRequest r;
			r.kind = ObservableKind::Coherence;
			r.representation = to_representation("coherence", w[0]);
			const auto [i, j] = index_pair("coherence", w[1]);
			r.indices = {i, j};
			if (w[2] == "abs")
			{
				r.part = CoherencePart::Abs;
			}
			else if (w[2] == "re")
			{
				r.part = CoherencePart::Re;
			}
			else if (w[2] == "im")
			{
				r.part = CoherencePart::Im;
			}
			else
			{
				throw ConfigError("'coherence' part must be abs, re or im, got '" + w[2] + "'");
			}
			spec.observables.push_back(r);
		}
	}
	if (auto v = s.get("population_difference"))
	{
		for (const auto& item : split(*v, ','))
		{
			const auto w = words(item);
			if (w.empty())
			{
				continue;
			}
			if (w.size() != 2)
			{
				throw ConfigError("'population_difference' entries take the form '<representation> <i>-<j>', got '" + item + "'");
			}
			ObservableRequest r;
			r.kind = ObservableKind::PopulationDifference;
			r.representation = to_representation("population_difference", w[0]);
			const auto [i, j] = index_pair("population_difference", w[1]);
			r.indices = {i, j};
			spec.observables.push_back(r);
		}
	}
	for (const char* key : {"mean_R", "mean_P"})
	{
		if (auto v = s.get(key))
		{
			for (const auto& w : words(*v))
			{
				ObservableRequest r;
				r.kind = std::string(key) == "mean_R" ? ObservableKind::MeanR : ObservableKind::MeanP;
				r.indices = {static_cast<int>(to_integer(key, w, 1)) - 1};
				spec.observables.push_back(r);
			}
		}
	}
	const auto damping = s.get("momentum_damping");
	const auto grid = s.get("momentum_grid");
	if (auto v = s.get("momentum_distribution"))
	{
		const double a = damping ? to_number("momentum_damping", *damping) : def.momentum_damping;
		if (!grid)
		{
			throw ConfigError("'momentum_distribution' requires 'momentum_grid = <min> <max> <points>'");
		}
		const auto g = words(*grid);
		if (g.size() != 3)
		{
			throw ConfigError("'momentum_grid' expects '<min> <max> <points>'");
		}
		const double lo = to_number("momentum_grid", g[0]);
		const double hi = to_number("momentum_grid", g[1]);
		const long n = to_integer("momentum_grid", g[2], 2);
		if (!(hi > lo))
		{
			throw ConfigError("'momentum_grid' maximum must exceed its minimum");
		}
		for (const auto& w : words(*v))
		{
			ObservableRequest r;
			r.kind = ObservableKind::MomentumDistribution;
			r.indices = {static_cast<int>(to_integer("momentum_distribution", w, 1)) - 1};
			r.damping = a;
			r.grid = RealVector::LinSpaced(n, lo, hi);
			spec.observables.push_back(r);
		}
	}
	else if (damping || grid)
	{
		throw ConfigError("'momentum_damping' and 'momentum_grid' require 'momentum_distribution'");
	}
	if (auto v = s.get("scattering"))
	{
		if (to_bool("scattering", *v))
		{
			ObservableRequest r;
			r.kind = ObservableKind::Scattering;
			spec.observables.push_back(r);
		}
	}
	for (const auto& r : spec.observables)
	{
		r.validate(*def.model);
	}
}

} // namespace

RunSpec parse_run_spec(const std::string& text)
{
	pt::ptree tree;
	try
	{
		std::istringstream in(text);
		pt::read_ini(in, tree);
	}
	catch (const pt::ini_parser_error& e)
	{
		throw ConfigError(std::string("config parse error: ") + e.what());
	}
	std::vector<std::string> unknown;
	const std::set<std::string> sections{"model", "method", "run", "observables"};
	for (const auto& [k, v] : tree)
	{
		if (!sections.count(k))
		{
			unknown.push_back("[" + k + "]");
		}
		else if (v.empty() && !v.data().empty())
		{
			unknown.push_back(k);
		}
	}
	auto section = [&](const std::string& name) { return Section(tree.get_child_optional(name) ? &tree.get_child(name) : nullptr, name); };

	RunSpec spec;

	// model: every key except 'name' is a model parameter, checked by the model builder
	const auto model_tree = tree.get_child_optional("model");
	if (!model_tree)
	{
		throw ConfigError("missing [model] section");
	}
	for (const auto& [k, v] : *model_tree)
	{
		if (k == "name")
		{
			spec.model.name = v.data();
		}
		else
		{
			spec.model.params[k] = v.data();
		}
	}
	if (spec.model.name.empty())
	{
		throw ConfigError("[model] requires 'name'");
	}

	Section method = section("method");
	Section run = section("run");
	Section obs = section("observables");

	const auto method_name_value = method.get("name");
	if (!method_name_value)
	{
		throw ConfigError("[method] requires 'name'");
	}
	spec.method.method = parse_method(*method_name_value);
	const auto gamma = method.get("gamma");
	const auto propagation = method.get("propagation");
	const auto hard_wall = method.get("hard_wall");
	const auto diabatic_amplitudes = method.get("diabatic_amplitudes");
	const auto halving = method.get("halving_limit");

	const auto dt = run.get("dt");
	const auto dt_unit = run.get("time_unit");
	const auto t_final = run.get("t_final");
	const auto record_every = run.get("record_every");
	const auto n_traj = run.get("n_traj");
	const auto seed = run.get("seed");
	const auto occ_state = run.get("occupied_state");
	const auto occ_rep = run.get("occupied_representation");
	const auto output = run.get("output");
	const auto workers = run.get("workers");
	const auto grid_min = run.get("grid_min");
	const auto grid_max = run.get("grid_max");
	const auto grid_points = run.get("grid_points");

	ModelDefinition def = build_model(spec.model);
	const int F = def.model->n_states();

	// observables are parsed before the unknown-key report so their keys count as used
	parse_observables(obs, spec, def);
	method.unknown(unknown);
	run.unknown(unknown);
	obs.unknown(unknown);
	if (!unknown.empty())
	{
		std::string msg = "unknown config key(s):";
		for (const auto& k : unknown)
		{
			msg += " " + k;
		}
		throw ConfigError(msg);
	}

	const Method m = spec.method.method;
	if (gamma)
	{
		if (!uses_cps(m))
		{
			throw ConfigError("'gamma' applies only to CPS methods (naf, naf_s, mean_field_cps)");
		}
		spec.method.gamma = to_number("gamma", *gamma);
		if (!(spec.method.gamma > -1.0 / F))
		{
			throw ConfigError("gamma must exceed -1/F = " + format_double(-1.0 / F));
		}
	}
	else
	{
		spec.method.gamma = uses_cps(m) ? default_gamma(F) : 0.0;
	}
	if (propagation)
	{
		if (*propagation == "adiabatic_direct")
		{
			spec.method.propagation = ElectronicPropagation::AdiabaticDirect;
		}
		else if (*propagation == "diabatic_transform")
		{
			spec.method.propagation = ElectronicPropagation::DiabaticTransform;
		}
		else
		{
			throw ConfigError("'propagation' must be adiabatic_direct or diabatic_transform");
		}
	}
	if (hard_wall)
	{
		spec.method.hard_wall = to_bool("hard_wall", *hard_wall);
		if (spec.method.hard_wall && (uses_naf_force(m) || is_surface_hopping(m)))
		{
			throw ConfigError("hard_wall is not available for " + method_name(m) + ": its closing momentum rescale enforces the mapping energy along P, and a reflection of one component would break that conservation; only mean-field methods (mean_field_cps, ehrenfest, gdtwa) take a hard wall");
		}
		if (spec.method.hard_wall && !def.model->positive_domain())
		{
			throw ConfigError("hard_wall requires a model restricted to R > 0");
		}
	}
	if (diabatic_amplitudes)
	{
		spec.method.diabatic_amplitudes = to_bool("diabatic_amplitudes", *diabatic_amplitudes);
		if (spec.method.diabatic_amplitudes && m != Method::Ehrenfest)
		{
			throw ConfigError("'diabatic_amplitudes' applies only to ehrenfest");
		}
	}
	if (halving)
	{
		spec.method.halving_limit = static_cast<int>(to_integer("halving_limit", *halving, 0));
	}

	const double tf = dt_unit ? units::time_factor(*dt_unit) : 1.0;
	spec.dt = dt ? to_number("dt", *dt) * tf : def.default_dt;
	if (!(spec.dt > 0.0))
	{
		throw ConfigError("'dt' must be positive");
	}
	if (!t_final)
	{
		throw ConfigError("[run] requires 't_final'");
	}
	spec.t_final = to_number("t_final", *t_final) * tf;
	if (spec.t_final < 0.0)
	{
		throw ConfigError("'t_final' must be non-negative");
	}
	spec.record_every = record_every ? static_cast<int>(to_integer("record_every", *record_every, 1)) : 1;
	spec.n_traj = n_traj ? to_integer("n_traj", *n_traj, 1) : def.default_n_traj;
	spec.seed = seed ? static_cast<std::uint64_t>(to_integer("seed", *seed, 0)) : 0;
	spec.occupation = def.occupation;
	if (occ_state)
	{
		spec.occupation.state = static_cast<int>(to_integer("occupied_state", *occ_state, 1)) - 1;
		if (spec.occupation.state >= F)
		{
			throw ConfigError("'occupied_state' exceeds the number of states " + std::to_string(F));
		}
	}
	if (occ_rep)
	{
		spec.occupation.representation = to_representation("occupied_representation", *occ_rep);
	}
	if (output)
	{
		spec.output = *output;
	}
	if (workers)
	{
		spec.workers = static_cast<int>(to_integer("workers", *workers, 0));
	}
	if (def.model->n_dof() == 1)
	{
		spec.grid = default_grid(*def.model);
	}
	if (grid_min || grid_max || grid_points)
	{
		if (m != Method::ExactGrid)
		{
			throw ConfigError("grid settings apply only to exact_grid");
		}
		if (grid_min)
		{
			spec.grid.r_min = to_number("grid_min", *grid_min);
		}
		if (grid_max)
		{
			spec.grid.r_max = to_number("grid_max", *grid_max);
		}
		if (grid_points)
		{
			spec.grid.points = static_cast<int>(to_integer("grid_points", *grid_points, 4));
		}
		if (!(spec.grid.r_max > spec.grid.r_min))
		{
			throw ConfigError("'grid_max' must exceed 'grid_min'");
		}
	}
	if (m == Method::ExactGrid && def.model->n_dof() != 1)
	{
		throw ConfigError("exact_grid requires a one-dimensional model");
	}
	return spec;
}

RunSpec load_run_spec(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
	{
		throw ConfigError("cannot read config file '" + path + "'");
	}
	std::ostringstream s;
	s << in.rdbuf();
	return parse_run_spec(s.str());
}

std::string echo_run_spec(const RunSpec& spec)
{
	std::ostringstream o;
	o << "[model]\nname = " << spec.model.name << "\n";
	for (const auto& [k, v] : spec.model.params)
	{
		o << k << " = " << v << "\n";
	}
	const Method m = spec.method.method;
	o << "\n[method]\nname = " << method_name(m) << "\n";
	if (uses_cps(m))
	{
		o << "gamma = " << format_double(spec.method.gamma) << "\n";
	}
	o << "propagation = " << (spec.method.propagation == ElectronicPropagation::AdiabaticDirect ? "adiabatic_direct" : "diabatic_transform") << "\n";
	o << "hard_wall = " << (spec.method.hard_wall ? "true" : "false") << "\n";
	if (m == Method::Ehrenfest)
	{
		o << "diabatic_amplitudes = " << (spec.method.diabatic_amplitudes ? "true" : "false") << "\n";
	}
	o << "halving_limit = " << spec.method.halving_limit << "\n";
	o << "\n[run]\ntime_unit = au\n";
	o << "dt = " << format_double(spec.dt) << "\n";
	o << "t_final = " << format_double(spec.t_final) << "\n";
	o << "record_every = " << spec.record_every << "\n";
	o << "n_traj = " << spec.n_traj << "\n";
	o << "seed = " << spec.seed << "\n";
	o << "occupied_state = " << spec.occupation.state + 1 << "\n";
	o << "occupied_representation = " << rep_name(spec.occupation.representation) << "\n";
	o << "output = " << spec.output << "\n";
	o << "workers = " << spec.workers << "\n";
	if (m == Method::ExactGrid)
	{
		o << "grid_min = " << format_double(spec.grid.r_min) << "\n";
		o << "grid_max = " << format_double(spec.grid.r_max) << "\n";
		o << "grid_points = " << spec.grid.points << "\n";
	}
	o << "\n[observables]\n";
	std::vector<std::string> pops, cohs, diffs, mr, mp, mom;
	const ObservableRequest* momentum = nullptr;
	bool scattering = false;
	for (const auto& r : spec.observables)
	{
		const auto idx = [&](std::size_t i) { return std::to_string(r.indices[i] + 1); };
		switch (r.kind)
		{
		case ObservableKind::Population: pops.push_back(rep_name(r.representation) + " " + idx(0)); break;
		case ObservableKind::Coherence:
			cohs.push_back(rep_name(r.representation) + " " + idx(0) + "-" + idx(1) + " " + (r.part == CoherencePart::Abs ? "abs" : r.part == CoherencePart::Re ? "re" : "im"));
			break;
		case ObservableKind::PopulationDifference: diffs.push_back(rep_name(r.representation) + " " + idx(0) + "-" + idx(1)); break;
		case ObservableKind::MeanR: mr.push_back(idx(0)); break;
		case ObservableKind::MeanP: mp.push_back(idx(0)); break;
		case ObservableKind::MomentumDistribution:
			mom.push_back(idx(0));
			momentum = &r;
			break;
		case ObservableKind::Scattering: scattering = true; break;
		}
	}
	auto join = [](const std::vector<std::string>& v, const char* sep) {
		std::string s;
		for (std::size_t i = 0; i < v.size(); i++)
		{
			s += (i ? sep : "") + v[i];
		}
		return s;
	};
	if (!pops.empty())
	{
		o << "population = " << join(pops, ", ") << "\n";
	}
	if (!cohs.empty())
	{
		o << "coherence = " << join(cohs, ", ") << "\n";
	}
	if (!diffs.empty())
	{
		o << "population_difference = " << join(diffs, ", ") << "\n";
	}
	if (!mr.empty())
	{
		o << "mean_R = " << join(mr, " ") << "\n";
	}
	if (!mp.empty())
	{
		o << "mean_P = " << join(mp, " ") << "\n";
	}
	if (momentum != nullptr)
	{
		o << "momentum_distribution = " << join(mom, " ") << "\n";
		o << "momentum_damping = " << format_double(momentum->damping) << "\n";
		o << "momentum_grid = " << format_double(momentum->grid[0]) << " " << format_double(momentum->grid[momentum->grid.size() - 1]) << " " << momentum->grid.size() << "\n";
	}
	if (scattering)
	{
		o << "scattering = true\n";
	}
	return o.str();
}

ModelDefinition build_run_model(const RunSpec& spec)
{
	ModelDefinition def = build_model(spec.model);
	def.occupation = spec.occupation;
	return def;
}

} // namespace naf
