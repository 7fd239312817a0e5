#include "rlab/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "rlab/util.hpp"

namespace rlab::oracles {

double bessel_j0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m <= 80; ++m) {
        term *= -q / (static_cast<double>(m) * m);
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

double bessel_j0_integral(double z) {
    const double az = std::abs(z);
    const int n = std::max(64, 2 * static_cast<int>(std::ceil(az)) + 32);
    const double h = (kTwoPi / 2.0) / n;
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        const double t = (j + 0.5) * h;
        s += std::cos(az * std::sin(t));
    }
    return s / n;
}

double bessel_j0(double z) {
    return std::abs(z) < 10.0 ? bessel_j0_series(z) : bessel_j0_integral(z);
}

}  // namespace rlab::oracles
