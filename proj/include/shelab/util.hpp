#pragma once

#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shelab {

/// Numerical failure that should abort a run (overflow, non-finite values,
/// linear-solve breakdown). Carries a short machine-readable tag.
class NumericError : public std::runtime_error {
public:
    NumericError(std::string tag, const std::string& what)
        : std::runtime_error(what), tag_(std::move(tag)) {}
    const std::string& tag() const { return tag_; }

private:
    std::string tag_;
};

/// Invalid user input (bad grid size, out-of-range parameter, unknown key).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic pairwise summation. The reduction tree depends only on the
/// element order, so results are identical regardless of who produced the
/// array or how many workers filled it.
double pairwise_sum(std::span<const double> xs);

/// Sample mean / stderr / min / max of a column of per-path values.
/// stderr uses the (n-1)-normalized standard deviation and is 0 for n == 1.
struct Summary {
    double mean = 0.0;
    double stderr_ = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};
Summary summarize(std::span<const double> xs);

/// Quintic smoothstep: 0 at u<=0, 1 at u>=1, C^2 join.
inline double smoothstep5(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

/// FNV-1a 64-bit digest (non-cryptographic, used for config and file hashes).
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Shortest round-trip-exact decimal rendering of a double.
std::string fmt_double(double v);

} // namespace shelab
