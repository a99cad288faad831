#pragma once

#include <cmath>
#include <cstdint>

#include "cmv/rat.hpp"

namespace cmv {

// Splittable deterministic generator (splitmix64 core). All randomness in
// the CLI and the test suites flows through this so runs are reproducible
// bit-for-bit across platforms; std::random distributions are not portable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Independent child stream; used for per-start generators in multistart.
    Rng child(std::uint64_t index) const
    {
        Rng r(state_);
        std::uint64_t mix = r.next_u64() ^ (0x632be59bd9b4e019ULL * (index + 1));
        return Rng(mix);
    }

    // Uniform on [lo, hi], inclusive.
    long uniform_int(long lo, long hi)
    {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next_u64() % span);
    }

    Rat rat_int(long lo = -9, long hi = 9) { return Rat(uniform_int(lo, hi)); }

    double uniform01()
    {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    // Box-Muller, fixed algorithm for portability.
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 1e-300) u1 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cmv
