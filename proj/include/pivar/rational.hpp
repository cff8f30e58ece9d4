#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pivar {

// Exact arithmetic only: every quantity in the engine is a rational with
// arbitrary-precision numerator/denominator. No floating point anywhere.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_zero(const Rat& q) { return q.is_zero(); }

/// Parses "p/q" or "p" (optional sign, decimal digits).
inline Rat rat_from_string(std::string_view s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rat(Int(std::string(s)));
        }
        Int num{std::string(s.substr(0, slash))};
        Int den{std::string(s.substr(slash + 1))};
        if (den == 0) throw StructuralError("rational with zero denominator: " + std::string(s));
        return Rat(num, den);
    } catch (const std::exception& e) {
        throw StructuralError("malformed rational \"" + std::string(s) + "\": " + e.what());
    }
}

/// Canonical "p/q" form (denominator always printed, always positive).
inline std::string rat_to_string(const Rat& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

inline std::size_t hash_rat(const Rat& q) {
    std::size_t h = hash_value(numerator(q));
    h ^= hash_value(denominator(q)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

/// Deterministic, platform-independent PRNG for seeded sampling.
/// (splitmix64; the seed is echoed in every report that uses it.)
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform-ish value in [0, bound); bound must be > 0.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
    /// Small signed rational with numerator in [-max_num, max_num] and
    /// denominator in [1, max_den].
    Rat small_rational(int max_num, int max_den) {
        const std::int64_t num =
            static_cast<std::int64_t>(below(2 * static_cast<std::uint64_t>(max_num) + 1)) - max_num;
        const std::int64_t den = static_cast<std::int64_t>(below(static_cast<std::uint64_t>(max_den))) + 1;
        return Rat(num, den);
    }
};

}  // namespace pivar
