#pragma once

namespace rlab::oracles {

// J0 by its power series; accurate for |z| <= 12.
double bessel_j0_series(double z);

// J0 as (1/pi) int_0^pi cos(z sin t) dt with a periodic midpoint rule
// (node count grows with z, error decays spectrally).
double bessel_j0_integral(double z);

// Dispatch: series for small |z|, integral otherwise.
double bessel_j0(double z);

}  // namespace rlab::oracles
