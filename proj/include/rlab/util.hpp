#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlab {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Error taxonomy used across modules.  The CLI maps ConfigError to exit
// code 2 and the numerical errors to exit code 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Raised when a grid fails its anti-aliasing / resolution bound.
struct RefinementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double sqr(double x) { return x * x; }

// Ordinary least squares y = a + b*x; returns the slope b.
// Throws PreconditionError with fewer than two points.
double ls_slope(std::span<const double> x, std::span<const double> y);

// Slope and intercept.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
};
LineFit ls_fit(std::span<const double> x, std::span<const double> y);

// FNV-1a 64-bit hash, used to fingerprint configs in output artifacts.
std::uint64_t fnv1a(std::string_view s);
std::string fnv1a_hex(std::string_view s);

// Shortest round-trip decimal formatting (std::to_chars).  All numeric
// output funnels through this so artifacts are byte-stable.
std::string format_double(double v);

// Relative difference |a-b| / max(|a|,|b|,floor).
inline double rel_diff(double a, double b, double floor = 1e-300) {
    double denom = std::max({std::abs(a), std::abs(b), floor});
    return std::abs(a - b) / denom;
}

}  // namespace rlab
