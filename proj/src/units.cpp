#include "naf/units.hpp"

#include "naf/errors.hpp"

#include <string>

namespace naf::units {

double energy_factor(std::string_view unit)
{
	if (unit == "au" || unit == "hartree")
	{
		return 1.0;
	}
	if (unit == "ev" || unit == "eV")
	{
		return hartree_per_ev;
	}
	if (unit == "cm-1" || unit == "wavenumber")
	{
		return hartree_per_wavenumber;
	}
	throw ConfigError("unknown energy unit '" + std::string(unit) + "'");
}

double time_factor(std::string_view unit)
{
	if (unit == "au")
	{
		return 1.0;
	}
	if (unit == "fs")
	{
		return au_time_per_fs;
	}
	throw ConfigError("unknown time unit '" + std::string(unit) + "'");
}

} // namespace naf::units
