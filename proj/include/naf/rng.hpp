/// @file rng.hpp
/// @brief Counter-based random streams: one independent stream per (seed, trajectory index).

#pragma once

#include <array>
#include <cstdint>

namespace naf {

/// @brief Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// @brief Random stream keyed by the global seed and addressed by the trajectory index.
///
/// Draws depend only on (seed, stream, draw number), so results do not depend on scheduling.
class RandomStream
{
public:
	using result_type = std::uint32_t;

	RandomStream(std::uint64_t seed, std::uint64_t stream);

	static constexpr result_type min() { return 0; }
	static constexpr result_type max() { return 0xffffffffu; }
	result_type operator()();

	/// @brief Uniform on [0, 1) with 53 random bits.
	double uniform();
	/// @brief Standard normal (Box-Muller).
	double normal();
	/// @brief Uniform integer in [0, n).
	int index(int n);

private:
	std::array<std::uint32_t, 2> key;
	std::array<std::uint32_t, 4> counter;
	std::array<std::uint32_t, 4> block{};
	int used = 4;
	bool have_spare = false;
	double spare = 0.0;
};

} // namespace naf
