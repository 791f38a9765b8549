/// @file errors.hpp
/// @brief Exception types raised by the engine.

#pragma once

#include <stdexcept>
#include <string>

namespace naf {

/// @brief Invalid or inconsistent user input (maps to CLI exit code 2).
class ConfigError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// @brief A numerical failure during propagation (maps to CLI exit code 3).
class NumericalError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// @brief Two adiabatic energies closer than the degeneracy threshold.
class DegenerateFrameError : public NumericalError
{
public:
	DegenerateFrameError(int k, int l, double gap);
	int k;
	int l;
	double gap;
};

/// @brief A quantity that must vanish by construction did not.
class InternalConsistencyError : public std::logic_error
{
public:
	using std::logic_error::logic_error;
};

/// @brief Wavepacket density reached the edge of the propagation grid.
class ExtentError : public NumericalError
{
public:
	using NumericalError::NumericalError;
};

inline DegenerateFrameError::DegenerateFrameError(int k_, int l_, double gap_) :
	NumericalError("degenerate adiabatic states " + std::to_string(k_) + " and " + std::to_string(l_) + " (gap " + std::to_string(gap_) + ")"),
	k(k_),
	l(l_),
	gap(gap_)
{
}

} // namespace naf
