#include "naf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace naf {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k)
{
	constexpr std::uint64_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
	constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
	for (int round = 0; round < 10; round++)
	{
		const std::uint64_t p0 = m0 * c[0];
		const std::uint64_t p1 = m1 * c[2];
		c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
			static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
		k[0] += w0;
		k[1] += w1;
	}
	return c;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) :
	key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
	counter{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)}
{
}

RandomStream::result_type RandomStream::operator()()
{
	if (used == 4)
	{
		block = philox4x32(counter, key);
		if (++counter[0] == 0)
		{
			++counter[1];
		}
		used = 0;
	}
	return block[used++];
}

double RandomStream::uniform()
{
	const std::uint64_t hi = (*this)() >> 5;
	const std::uint64_t lo = (*this)() >> 6;
	return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

double RandomStream::normal()
{
	if (have_spare)
	{
		have_spare = false;
		return spare;
	}
	double u1 = 0.0;
	do
	{
		u1 = uniform();
	} while (u1 == 0.0);
	const double u2 = uniform();
	const double r = std::sqrt(-2.0 * std::log(u1));
	spare = r * std::sin(2.0 * std::numbers::pi * u2);
	have_spare = true;
	return r * std::cos(2.0 * std::numbers::pi * u2);
}

int RandomStream::index(int n)
{
	return std::min(n - 1, static_cast<int>(uniform() * n));
}

} // namespace naf
