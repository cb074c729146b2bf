#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crlb {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Seeding. One master seed per run; every block/draw/restart derives its own
// subseed from (master, tag, counters) so parallel generation stays
// reproducible and independent of scheduling.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = master ^ 0xD1B54A32D192ED03ull;
    for (std::uint64_t v : {a, b, c}) {
        s ^= v;
        s = splitmix64(s);
        (void)splitmix64(s);
    }
    return s;
}

namespace seedtag {
inline constexpr std::uint64_t kBlock = 1;
inline constexpr std::uint64_t kDraw = 2;
inline constexpr std::uint64_t kRestart = 3;
inline constexpr std::uint64_t kMeans = 4;
inline constexpr std::uint64_t kSigns = 5;
inline constexpr std::uint64_t kAscent = 6;
inline constexpr std::uint64_t kSweep = 7;
inline constexpr std::uint64_t kTask = 8;
inline constexpr std::uint64_t kClassMean = 9;
inline constexpr std::uint64_t kBatch = 10;
inline constexpr std::uint64_t kInit = 11;
}  // namespace seedtag

// xoshiro256++ with splitmix-filled state; self-contained so draws do not
// depend on standard-library distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller (two uniforms per draw, no cached spare)
    double gaussian() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    int sign() { return (next() >> 63) ? 1 : -1; }

    // uniform integer in [0, n)
    int below(int n) {
        if (n <= 0) throw std::invalid_argument("Rng::below: n must be positive");
        return static_cast<int>(next() % static_cast<std::uint64_t>(n));
    }

    // index drawn from a probability vector (entries nonnegative, sum ~ 1)
    int discrete(const VectorXd& probs) {
        const double u = uniform();
        double acc = 0.0;
        for (int i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return i;
        }
        return static_cast<int>(probs.size()) - 1;
    }

    VectorXd gaussian_vector(int dim) {
        VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = gaussian();
        return v;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

// ---------------------------------------------------------------------------
// Exhaustive sign-pattern enumeration (Gray-code order). The callback receives
// the current +/-1 vector and the index flipped relative to the previous call
// (-1 on the first call), so per-pattern state can be updated incrementally.
// Budget guard: at most 22 sign variables.
// ---------------------------------------------------------------------------

inline constexpr int kMaxExactSigns = 22;

template <typename F>
void for_each_sign_pattern(int n, F&& fn) {
    if (n < 0 || n > kMaxExactSigns)
        throw std::invalid_argument("for_each_sign_pattern: sign budget exceeded (n=" +
                                    std::to_string(n) + ", max " +
                                    std::to_string(kMaxExactSigns) + ")");
    std::vector<int> signs(static_cast<std::size_t>(n), 1);
    fn(signs, -1);
    const std::uint64_t total = 1ull << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        const int bit = __builtin_ctzll(i);
        signs[static_cast<std::size_t>(bit)] = -signs[static_cast<std::size_t>(bit)];
        fn(signs, bit);
    }
}

}  // namespace crlb
