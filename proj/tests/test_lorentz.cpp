#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "rlab/lorentz.hpp"
#include "rlab/rng.hpp"

using namespace rlab;
using namespace rlab::lorentz;

namespace {

WeightedSamples random_samples(Rng& rng, std::size_t n) {
    std::vector<cplx> v(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = rng.normal() * rng.unit_complex();
        w[i] = std::exp(rng.uniform(-2.0, 1.0));
    }
    return WeightedSamples(std::move(v), std::move(w));
}

WeightedSamples indicator(double measure) {
    return WeightedSamples({cplx{1.0, 0.0}}, {measure});
}

ProductGridFunction random_grid(Rng& rng, std::size_t nx, std::size_t ny) {
    std::vector<cplx> v(nx * ny);
    for (auto& z : v) z = rng.normal() * rng.unit_complex();
    std::vector<double> wx(nx), wy(ny);
    for (auto& w : wx) w = std::exp(rng.uniform(-1.0, 1.0));
    for (auto& w : wy) w = std::exp(rng.uniform(-1.0, 1.0));
    return ProductGridFunction(nx, ny, std::move(v), std::move(wx), std::move(wy));
}

}  // namespace

TEST_SUITE_BEGIN("lorentz");

TEST_CASE("distribution function on indicators and steps") {
    CHECK(distribution_function(indicator(1.0), 0.5) == doctest::Approx(1.0));
    CHECK(distribution_function(indicator(1.0), 1.5) == doctest::Approx(0.0));
    WeightedSamples f = WeightedSamples::real({3.0, 2.0, 1.0}, {1.0, 1.0, 1.0});
    CHECK(distribution_function(f, 2.0) == doctest::Approx(2.0));

    // nonincreasing in lambda
    double prev = distribution_function(f, 0.0);
    for (double lam = 0.25; lam < 4.0; lam += 0.25) {
        const double cur = distribution_function(f, lam);
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
}

TEST_CASE("indicator norms: L^{a,a} anchor and (2,1) closed form") {
    for (double m : {0.3, 1.0, 7.5}) {
        for (double a : {1.2, 2.0, 3.7}) {
            CHECK(lorentz_norm(indicator(m), LorentzParams(a, a)) ==
                  doctest::Approx(std::pow(m, 1.0 / a)).epsilon(1e-13));
        }
    }
    // int_0^1 t^{1/2} dt/t = 2
    CHECK(lorentz_norm(indicator(1.0), LorentzParams(2.0, 1.0)) == doctest::Approx(2.0));
}

TEST_CASE("L^{a,a} equals the plain L^a norm on random sample sets") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        auto f = random_samples(rng, 1 + static_cast<std::size_t>(rng.uniform_int(0, 60)));
        for (double a : {1.2, 2.0, 3.7}) {
            const double ln = lorentz_norm(f, LorentzParams(a, a));
            const double lp = lp_norm(f, a);
            CHECK(rel_diff(ln, lp) < 1e-12);
        }
    }
}

TEST_CASE("weak norm of the scale-invariant power weight") {
    // F(r) = r^{-1/alpha} on [r0, r1], Lebesgue dr; alpha = 3 matches the
    // (p', q) = (6, 2) pair via 1/alpha = 1/p - 1/q'.
    const double alpha = 3.0;
    auto build = [&](double r0, double r1, std::size_t n) {
        std::vector<cplx> v(n);
        std::vector<double> w(n);
        const double lr = std::log(r1 / r0);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = r0 * std::exp(lr * static_cast<double>(i) / static_cast<double>(n));
            const double b = r0 * std::exp(lr * static_cast<double>(i + 1) / static_cast<double>(n));
            const double mid = std::sqrt(a * b);
            v[i] = std::pow(mid, -1.0 / alpha);
            w[i] = b - a;
        }
        return WeightedSamples(std::move(v), std::move(w));
    };
    const double w1 = lorentz_norm(build(1e-3, 1e3, 4000), LorentzParams::weak(alpha));
    CHECK(std::abs(w1 - 1.0) < 1e-3);  // pure power normalization -> 1

    // truncation (dilation) invariance: rescaled ring gives the same norm
    const double wa = lorentz_norm(build(0.5, 2.0, 512), LorentzParams::weak(alpha));
    const double wb = lorentz_norm(build(4.0, 16.0, 512), LorentzParams::weak(alpha));
    CHECK(rel_diff(wa, wb) < 1e-12);
}

TEST_CASE("rearrangement invariance and homogeneous scaling") {
    Rng rng(7);
    auto f = random_samples(rng, 40);
    auto g = f;
    // deterministic shuffle of the (value, weight) pairs
    for (std::size_t i = g.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i)));
        std::swap(g.values[i], g.values[j]);
        std::swap(g.weights[i], g.weights[j]);
    }
    for (auto lp : {LorentzParams(1.5, 1.0), LorentzParams(2.0, 2.0), LorentzParams(3.0, 0.7),
                    LorentzParams::weak(2.5)}) {
        CHECK(lorentz_norm(f, lp) == lorentz_norm(g, lp));  // exact
        const double c = 3.7;
        WeightedSamples cf = f;
        for (auto& v : cf.values) v *= c;
        CHECK(rel_diff(lorentz_norm(cf, lp), c * lorentz_norm(f, lp)) < 1e-12);
    }
}

TEST_CASE("weak norm is controlled by every (a,b) norm at the sharp constant") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto f = random_samples(rng, 30);
        const double a = rng.uniform(1.1, 4.0);
        const double b = rng.uniform(0.5, 5.0);
        const double weak = lorentz_norm(f, LorentzParams::weak(a));
        const double strong = lorentz_norm(f, LorentzParams(a, b));
        // ||f||_{a,inf} <= (b/a)^{1/b} ||f||_{a,b}; constant <= 1 iff b <= a
        const double c = std::pow(b / a, 1.0 / b);
        CHECK(weak <= c * strong * (1.0 + 1e-12));
        if (b <= a) CHECK(weak <= strong * (1.0 + 1e-12));
    }
    // indicators attain the constant when b > a
    const double a = 2.0, b = 4.0;
    const double weak = lorentz_norm(indicator(1.0), LorentzParams::weak(a));
    const double strong = lorentz_norm(indicator(1.0), LorentzParams(a, b));
    CHECK(weak == doctest::Approx(std::pow(b / a, 1.0 / b) * strong).epsilon(1e-12));
}

TEST_CASE("mixed norms: separability, constants, Fubini swap") {
    Rng rng(3);
    const std::size_t nx = 12, ny = 9;
    std::vector<cplx> gx(nx), hy(ny);
    for (auto& z : gx) z = rng.normal() * rng.unit_complex();
    for (auto& z : hy) z = rng.normal() * rng.unit_complex();
    std::vector<double> wx(nx), wy(ny);
    for (auto& w : wx) w = std::exp(rng.uniform(-1.0, 1.0));
    for (auto& w : wy) w = std::exp(rng.uniform(-1.0, 1.0));
    std::vector<cplx> v(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) v[i * ny + j] = gx[i] * hy[j];
    ProductGridFunction f(nx, ny, v, wx, wy);

    const LorentzParams outer(2.5, 2.5), inner(1.5, 1.5);
    const double m = mixed_lorentz_norm(f, outer, inner, InnerAxis::Y);
    const double ng = lorentz_norm(WeightedSamples(gx, wx), outer);
    const double nh = lorentz_norm(WeightedSamples(hy, wy), inner);
    CHECK(rel_diff(m, ng * nh) < 1e-12);

    // constant 1 on unit-measure x unit-measure grid
    std::vector<cplx> ones(nx * ny, cplx{1.0, 0.0});
    ProductGridFunction one(nx, ny, ones, std::vector<double>(nx, 1.0 / nx),
                            std::vector<double>(ny, 1.0 / ny));
    CHECK(mixed_lorentz_norm(one, LorentzParams(3.0, 3.0), LorentzParams(1.7, 1.7),
                             InnerAxis::Y) == doctest::Approx(1.0).epsilon(1e-12));

    // Fubini for pure powers: L^{p'}_x L^{p'}_y = L^{p'}_y L^{p'}_x
    auto r = random_grid(rng, 16, 16);
    const LorentzParams pp(3.0, 3.0);
    CHECK(rel_diff(mixed_lorentz_norm(r, pp, pp, InnerAxis::Y),
                   mixed_lorentz_norm(r, pp, pp, InnerAxis::X)) < 1e-12);
}

TEST_CASE("Hoelder checker: equality case, censuses, zero convention") {
    auto f = indicator(1.0);
    CHECK(check_holder(f, f, LorentzParams(2, 2), LorentzParams(2, 2), LorentzParams(1, 1)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // power law (weak L^2) against an indicator on a shared sample set
    const std::size_t n = 1000;
    std::vector<cplx> pv(n), iv(n);
    std::vector<double> w(n, 0.1);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (static_cast<double>(i) + 0.5) * 0.1;
        pv[i] = std::pow(r, -0.5);
        iv[i] = r <= 1.0 ? 1.0 : 0.0;
    }
    WeightedSamples pw(pv, w), ind(iv, w);
    const double ratio = check_holder(pw, ind, LorentzParams::weak(2.0), LorentzParams(2, 2),
                                      LorentzParams(1, 2));
    CHECK(ratio > 0.0);
    CHECK(ratio <= 3.0);  // empirical constant census

    WeightedSamples zero = WeightedSamples::real({0.0, 0.0}, {1.0, 1.0});
    WeightedSamples some = WeightedSamples::real({1.0, 2.0}, {1.0, 1.0});
    CHECK(check_holder(zero, some, LorentzParams(2, 2), LorentzParams(2, 2),
                       LorentzParams(1, 1)) == 0.0);

    CHECK_THROWS_AS(check_holder(f, f, LorentzParams(2, 2), LorentzParams(3, 3),
                                 LorentzParams(1, 1)),
                    PreconditionError);
}

namespace {

Sampled1D gaussian_bump(std::size_t n, double span, double center, double width) {
    Sampled1D u;
    u.dx = span / static_cast<double>(n);
    u.x0 = 0.5 * u.dx;
    u.u.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = u.x0 + static_cast<double>(j) * u.dx;
        u.u[j] = std::exp(-0.5 * sqr((x - center) / width));
    }
    return u;
}

}  // namespace

TEST_CASE("Hausdorff-Young checker: Plancherel, refinement, dilation") {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        Sampled1D u;
        u.dx = 1.0 / 128.0;
        u.x0 = 0.5 * u.dx;
        u.u.resize(128);
        for (auto& z : u.u) z = rng.normal() * rng.unit_complex();
        CHECK(std::abs(check_hausdorff_young(u, 2.0) - 1.0) < 1e-8);
    }

    // Gaussian at p = 3/2: refine until two successive grids agree to 1e-4
    double prev = check_hausdorff_young(gaussian_bump(128, 1.0, 0.5, 0.08), 1.5);
    bool settled = false;
    for (std::size_t n = 256; n <= 2048; n *= 2) {
        const double cur = check_hausdorff_young(gaussian_bump(n, 1.0, 0.5, 0.08), 1.5);
        if (std::abs(cur - prev) < 1e-4) {
            settled = true;
            break;
        }
        prev = cur;
    }
    CHECK(settled);
    CHECK(prev > 0.0);

    // dilation sweep: bump of width w, ratio scale-invariant to 1e-3
    const double base = check_hausdorff_young(gaussian_bump(256, 1.0, 0.5, 0.05), 1.5);
    for (double s : {2.0, 0.5}) {
        const double d = check_hausdorff_young(gaussian_bump(256, s * 1.0, s * 0.5, s * 0.05), 1.5);
        CHECK(std::abs(d - base) < 1e-3 * base);
    }

    Sampled1D banded = gaussian_bump(32, 1.0, 0.5, 0.05);
    banded.declared_band = 64.0;  // needs dx <= 1/128
    CHECK_THROWS_AS(check_hausdorff_young(banded, 1.5), RefinementError);
}

TEST_CASE("Minkowski ratio is an exact inequality; interchange census is bounded") {
    Rng rng(23);
    double max_inter = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto u = random_grid(rng, 8, 8);
        for (double p : {4.0 / 3.0, 1.5}) {
            CHECK(check_minkowski(u, p) <= 1.0 + 1e-12);
            const double ic = check_interchange(u, p);
            CHECK(std::isfinite(ic));
            max_inter = std::max(max_inter, ic);
        }
    }
    CHECK(max_inter <= 10.0);

    // rank-one equality for both checkers
    Rng rng2(5);
    std::vector<cplx> gx(8), hy(8);
    for (auto& z : gx) z = rng2.normal();
    for (auto& z : hy) z = rng2.normal();
    std::vector<cplx> v(64);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) v[i * 8 + j] = gx[i] * hy[j];
    ProductGridFunction sep(8, 8, v, std::vector<double>(8, 0.125),
                            std::vector<double>(8, 0.125));
    CHECK(std::abs(check_minkowski(sep, 1.5) - 1.0) < 1e-10);
    CHECK(std::abs(check_interchange(sep, 1.5) - 1.0) < 1e-10);
}

TEST_SUITE_END();
