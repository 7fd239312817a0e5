#include <doctest.h>

#include <cmath>

#include "rlab/poly.hpp"
#include "rlab/rng.hpp"
#include "rlab/surface.hpp"

using namespace rlab;
using namespace rlab::surfaces;

namespace {

GraphFn from_poly(const Poly2& p) {
    GraphFn g;
    g.f = [p](double x, double y) { return p(x, y); };
    return g;
}

GraphFn from_poly_analytic(const Poly2& p) {
    GraphFn g = from_poly(p);
    const Poly2 px = p.dx(), py = p.dy();
    const Poly2 pxx = px.dx(), pxy = px.dy(), pyy = py.dy();
    g.f1 = [px](double x, double y) { return px(x, y); };
    g.f2 = [py](double x, double y) { return py(x, y); };
    g.f11 = [pxx](double x, double y) { return pxx(x, y); };
    g.f12 = [pxy](double x, double y) { return pxy(x, y); };
    g.f22 = [pyy](double x, double y) { return pyy(x, y); };
    return g;
}

}  // namespace

TEST_SUITE_BEGIN("surface");

TEST_CASE("measure weights of the four named surfaces") {
    Vec zero;
    zero.dim = 1;
    zero[0] = 0.0;
    CHECK(measure_weight(SurfaceDescriptor::hyperboloid(2, 1.0), zero) == doctest::Approx(1.0));
    CHECK(measure_weight(SurfaceDescriptor::paraboloid(2, 1.0), zero) == doctest::Approx(1.0));

    Vec xi(2.0, 0.0);
    CHECK(measure_weight(SurfaceDescriptor::cone(2), xi) == doctest::Approx(0.5));

    // sphere: trivial Jacobian for n=2, sin(theta) factor for n=3
    Vec th;
    th.dim = 1;
    th[0] = 1.234;
    CHECK(measure_weight(SurfaceDescriptor::sphere(2), th) == doctest::Approx(1.0));
    Vec ang(0.7, 1.0);
    CHECK(measure_weight(SurfaceDescriptor::sphere(3), ang) == doctest::Approx(std::sin(0.7)));

    CHECK_THROWS_AS(measure_weight(SurfaceDescriptor::paraboloid(2, 1.0), Vec(3.0, 0.0)),
                    DomainError);
    Vec origin(0.0, 0.0);
    CHECK_THROWS_AS(measure_weight(SurfaceDescriptor::cone(2), origin), SingularPointError);
    Vec outside(3.0, 0.0);
    CHECK_THROWS_AS(measure_weight(SurfaceDescriptor::cone(2), outside), DomainError);
    CHECK_THROWS_AS(SurfaceDescriptor::cone(2, 0.0, 1.0), PreconditionError);
}

TEST_CASE("gaussian curvature: cylinder, paraboloid, sphere chart") {
    GraphFn cyl;
    cyl.f = [](double x, double) { return x * x; };
    CHECK(gaussian_curvature(cyl, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-8));

    GraphFn par;
    par.f = [](double x, double y) { return 0.5 * (x * x + y * y); };
    CHECK(gaussian_curvature(par, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-8));

    // unit sphere graph chart has K = 1 everywhere
    GraphFn hemi;
    hemi.f = [](double x, double y) { return std::sqrt(1.0 - x * x - y * y); };
    FdOptions o;
    o.scale = 1.4;
    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        const double r = 0.7 * std::sqrt(rng.uniform());
        const double th = kTwoPi * rng.uniform();
        const double k = gaussian_curvature(hemi, r * std::cos(th), r * std::sin(th), o);
        CHECK(std::abs(k - 1.0) < 1e-6);
    }

    // cylinders f = g(x1) have identically zero curvature
    GraphFn wavy;
    wavy.f = [](double x, double) { return std::sin(3.0 * x) + x * x * x; };
    for (double x : {-0.5, -0.1, 0.0, 0.3, 0.8})
        CHECK(std::abs(gaussian_curvature(wavy, x, 0.0)) < 1e-7);
}

TEST_CASE("finite differences against exact polynomial derivatives") {
    // f = x^3 (1 + y): developable exactly where x = 0
    const Poly2 p({{0.0}, {0.0}, {0.0}, {1.0, 1.0}});
    GraphFn fd_only = from_poly(p);
    GraphFn exact = from_poly_analytic(p);
    FdOptions o;
    o.scale = 0.6;
    double max_rel = 0.0;
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) {
            const double x = -0.3 + 0.6 * (i + 0.5) / 100.0;
            const double y = -0.3 + 0.6 * (j + 0.5) / 100.0;
            const auto hn = fd::hessian(fd_only, x, y, o);
            const auto ha = fd::hessian(exact, x, y, o);
            const double dn = hn.f11 * hn.f22 - hn.f12 * hn.f12;
            const double da = ha.f11 * ha.f22 - ha.f12 * ha.f12;
            max_rel = std::max(max_rel, std::abs(dn - da) / (1.0 + std::abs(da)));
            // zero exactly on the x = 0 line (never hit by this midpoint mesh)
            CHECK(std::abs(da - (-9.0 * std::pow(x, 4))) < 1e-12);
        }
    CHECK(max_rel < 1e-5);
}

TEST_CASE("contact order: monomials, amplitudes, flat plane, affine invariance") {
    GraphFn sq;
    sq.f = [](double x, double) { return x * x; };
    auto c = contact_order(sq, 0.0, 0.0, 8);
    CHECK(!c.at_least);
    CHECK(c.k == 2);

    // f = a(x,y) x^4 with a(0,0) = 2
    GraphFn quart;
    quart.f = [](double x, double y) { return (2.0 + x + 0.5 * y) * std::pow(x, 4); };
    c = contact_order(quart, 0.0, 0.0, 8);
    CHECK(!c.at_least);
    CHECK(c.k == 4);

    GraphFn zero;
    zero.f = [](double, double) { return 0.0; };
    c = contact_order(zero, 0.0, 0.0, 6);
    CHECK(c.at_least);
    CHECK(c.k == 6);

    // adding an affine function must not change the order
    GraphFn cube;
    cube.f = [](double x, double) { return x * x * x; };
    GraphFn affine;
    affine.f = [](double x, double y) { return x * x * x + 2.0 + 0.3 * x - 0.2 * y; };
    CHECK(contact_order(cube, 0.0, 0.0, 8).k == contact_order(affine, 0.0, 0.0, 8).k);
    CHECK(contact_order(cube, 0.0, 0.0, 8).k == 3);

    GraphFn quint;
    quint.f = [](double x, double y) { return std::pow(x, 5) * (1.0 + y * y); };
    CHECK(contact_order(quint, 0.0, 0.0, 8).k == 5);
}

TEST_CASE("grids: cone samples sit on the cone and measures match closed forms") {
    auto ring = build_grid(SurfaceDescriptor::cone(2, 0.5, 2.0), 64);
    for (std::size_t j = 0; j < ring.size(); ++j) {
        const auto& p = ring.points[j];
        const double r = std::sqrt(p[0] * p[0] + p[1] * p[1]);
        CHECK(std::abs(p[2] - r) < 1e-12);
    }
    // int over the ring of dxi/|xi| = 2 pi (r1 - r0) = 3 pi
    CHECK(rel_diff(ring.total_measure(), 3.0 * kTwoPi / 2.0) < 1e-10);

    auto circle = build_grid(SurfaceDescriptor::sphere(2), 256);
    CHECK(rel_diff(circle.total_measure(), kTwoPi) < 1e-12);

    auto sph = build_grid(SurfaceDescriptor::sphere(3), 48);
    CHECK(rel_diff(sph.total_measure(), 2.0 * kTwoPi) < 1e-12);

    auto par = build_grid(SurfaceDescriptor::paraboloid(3, 1.0), 32);
    CHECK(rel_diff(par.total_measure(), 4.0) < 1e-12);

    auto hyp = build_grid(SurfaceDescriptor::hyperboloid(2, 1.0), 8192);
    CHECK(std::abs(hyp.total_measure() - 2.0 * std::asinh(1.0)) < 1e-8);

    auto ring3 = build_grid(SurfaceDescriptor::cone(3, 0.5, 2.0), 32);
    // int r^{n-2} dr dS = (r1^2 - r0^2)/2 * 4 pi
    CHECK(rel_diff(ring3.total_measure(), (4.0 - 0.25) / 2.0 * 2.0 * kTwoPi) < 1e-10);
}

TEST_SUITE_END();
