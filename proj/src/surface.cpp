#include "rlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rlab/util.hpp"

namespace rlab::surfaces {

std::string kind_name(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::Sphere: return "sphere";
        case SurfaceKind::Paraboloid: return "paraboloid";
        case SurfaceKind::Hyperboloid: return "hyperboloid";
        case SurfaceKind::Cone: return "cone";
        case SurfaceKind::GraphFiniteType: return "graph";
    }
    return "unknown";
}

int SurfaceDescriptor::chart_dim() const {
    switch (kind) {
        case SurfaceKind::Sphere: return n - 1;
        case SurfaceKind::Paraboloid:
        case SurfaceKind::Hyperboloid: return n - 1;
        case SurfaceKind::Cone: return n;
        case SurfaceKind::GraphFiniteType: return n - 1;
    }
    return 0;
}

Vec SurfaceDescriptor::embed(const Vec& c) const {
    Vec p;
    switch (kind) {
        case SurfaceKind::Sphere: {
            // iterated angular coordinates: x1 = cos t1, x2 = sin t1 cos t2, ...
            p.dim = n;
            double s = 1.0;
            for (int j = 0; j < n - 1; ++j) {
                p[static_cast<std::size_t>(j)] = s * std::cos(c[static_cast<std::size_t>(j)]);
                s *= std::sin(c[static_cast<std::size_t>(j)]);
            }
            p[static_cast<std::size_t>(n - 1)] = s;
            return p;
        }
        case SurfaceKind::Paraboloid: {
            p.dim = n;
            double r2 = 0.0;
            for (int j = 0; j < n - 1; ++j) {
                p[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
                r2 += sqr(c[static_cast<std::size_t>(j)]);
            }
            p[static_cast<std::size_t>(n - 1)] = 0.5 * r2;
            return p;
        }
        case SurfaceKind::Hyperboloid: {
            p.dim = n;
            double r2 = 0.0;
            for (int j = 0; j < n - 1; ++j) {
                p[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
                r2 += sqr(c[static_cast<std::size_t>(j)]);
            }
            p[static_cast<std::size_t>(n - 1)] = std::sqrt(1.0 + r2);
            return p;
        }
        case SurfaceKind::Cone: {
            p.dim = n + 1;
            double r2 = 0.0;
            for (int j = 0; j < n; ++j) {
                p[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
                r2 += sqr(c[static_cast<std::size_t>(j)]);
            }
            p[static_cast<std::size_t>(n)] = std::sqrt(r2);
            return p;
        }
        case SurfaceKind::GraphFiniteType: {
            p.dim = n;
            if (n == 2) {
                p[0] = c[0];
                p[1] = graph.f(c[0], 0.0);
            } else {
                p[0] = c[0];
                p[1] = c[1];
                p[2] = graph.f(c[0], c[1]);
            }
            return p;
        }
    }
    return p;
}

bool SurfaceDescriptor::in_patch(const Vec& c) const {
    switch (kind) {
        case SurfaceKind::Sphere:
            for (int j = 0; j + 1 < n - 1; ++j)
                if (c[static_cast<std::size_t>(j)] < 0.0 || c[static_cast<std::size_t>(j)] > kTwoPi / 2.0)
                    return false;
            return true;  // last angle is periodic
        case SurfaceKind::Paraboloid:
        case SurfaceKind::Hyperboloid:
        case SurfaceKind::GraphFiniteType:
            for (int j = 0; j < chart_dim(); ++j)
                if (std::abs(c[static_cast<std::size_t>(j)]) > half_width) return false;
            return true;
        case SurfaceKind::Cone: {
            double r2 = 0.0;
            for (int j = 0; j < n; ++j) r2 += sqr(c[static_cast<std::size_t>(j)]);
            const double r = std::sqrt(r2);
            return r >= r0 && r <= r1;
        }
    }
    return false;
}

SurfaceDescriptor SurfaceDescriptor::sphere(int n) {
    if (n < 2 || n > 4) throw PreconditionError("sphere: n must be in [2,4]");
    SurfaceDescriptor s;
    s.kind = SurfaceKind::Sphere;
    s.n = n;
    return s;
}

SurfaceDescriptor SurfaceDescriptor::paraboloid(int n, double hw) {
    if (n < 2 || n > 3) throw PreconditionError("paraboloid: n must be 2 or 3");
    SurfaceDescriptor s;
    s.kind = SurfaceKind::Paraboloid;
    s.n = n;
    s.half_width = hw;
    return s;
}

SurfaceDescriptor SurfaceDescriptor::hyperboloid(int n, double hw) {
    if (n < 2 || n > 3) throw PreconditionError("hyperboloid: n must be 2 or 3");
    SurfaceDescriptor s;
    s.kind = SurfaceKind::Hyperboloid;
    s.n = n;
    s.half_width = hw;
    return s;
}

SurfaceDescriptor SurfaceDescriptor::cone(int n, double r0, double r1) {
    if (n < 2 || n > 3) throw PreconditionError("cone: n must be 2 or 3");
    if (!(r0 > 0.0) || !(r1 > r0))
        throw PreconditionError("cone: need 0 < r0 < r1 (the patch excludes xi = 0)");
    SurfaceDescriptor s;
    s.kind = SurfaceKind::Cone;
    s.n = n;
    s.r0 = r0;
    s.r1 = r1;
    return s;
}

SurfaceDescriptor SurfaceDescriptor::graph2(GraphFn f, int k, double hw, GraphMeasure m) {
    SurfaceDescriptor s;
    s.kind = SurfaceKind::GraphFiniteType;
    s.n = 2;
    s.half_width = hw;
    s.graph = std::move(f);
    s.graph_k = k;
    s.graph_measure = m;
    return s;
}

SurfaceDescriptor SurfaceDescriptor::graph3(GraphFn f, int k, double hw, GraphMeasure m) {
    SurfaceDescriptor s = graph2(std::move(f), k, hw, m);
    s.n = 3;
    return s;
}

double measure_weight(const SurfaceDescriptor& s, const Vec& c) {
    if (s.kind == SurfaceKind::Cone) {
        double r2 = 0.0;
        for (int j = 0; j < s.n; ++j) r2 += sqr(c[static_cast<std::size_t>(j)]);
        const double r = std::sqrt(r2);
        if (r < 1e-14) throw SingularPointError("measure_weight: cone chart at xi = 0");
        if (!s.in_patch(c)) throw DomainError("measure_weight: point outside patch");
        return 1.0 / r;
    }
    if (!s.in_patch(c)) throw DomainError("measure_weight: point outside patch");
    switch (s.kind) {
        case SurfaceKind::Sphere: {
            // angular Jacobian prod_{j<n-1} sin^{n-1-j}(t_j); empty for n=2
            double w = 1.0;
            for (int j = 0; j < s.n - 2; ++j)
                w *= std::pow(std::sin(c[static_cast<std::size_t>(j)]), s.n - 1 - (j + 1));
            return w;
        }
        case SurfaceKind::Paraboloid: return 1.0;
        case SurfaceKind::Hyperboloid: {
            double r2 = 0.0;
            for (int j = 0; j < s.n - 1; ++j) r2 += sqr(c[static_cast<std::size_t>(j)]);
            return 1.0 / std::sqrt(1.0 + r2);
        }
        case SurfaceKind::GraphFiniteType: {
            if (s.graph_measure == GraphMeasure::ChartLebesgue) return 1.0;
            FdOptions o;
            o.scale = s.half_width * 2.0;
            const double x = c[0], y = s.n == 3 ? c[1] : 0.0;
            const double g1 = fd::gradient1(s.graph, x, y, o);
            const double g2 = s.n == 3 ? fd::gradient2(s.graph, x, y, o) : 0.0;
            return std::sqrt(1.0 + g1 * g1 + g2 * g2);
        }
        default: break;
    }
    throw DomainError("measure_weight: unsupported surface kind");
}

namespace fd {

double gradient1(const GraphFn& f, double x, double y, const FdOptions& o) {
    if (f.f1) return f.f1(x, y);
    const double h = o.step();
    return (f.f(x + h, y) - f.f(x - h, y)) / (2.0 * h);
}

double gradient2(const GraphFn& f, double x, double y, const FdOptions& o) {
    if (f.f2) return f.f2(x, y);
    const double h = o.step();
    return (f.f(x, y + h) - f.f(x, y - h)) / (2.0 * h);
}

Hess hessian(const GraphFn& f, double x, double y, const FdOptions& o) {
    if (f.has_analytic_derivs()) return {f.f11(x, y), f.f12(x, y), f.f22(x, y)};
    const double h = o.step();
    const double f0 = f.f(x, y);
    Hess hs;
    hs.f11 = (f.f(x + h, y) - 2.0 * f0 + f.f(x - h, y)) / (h * h);
    hs.f22 = (f.f(x, y + h) - 2.0 * f0 + f.f(x, y - h)) / (h * h);
    hs.f12 = (f.f(x + h, y + h) - f.f(x + h, y - h) - f.f(x - h, y + h) + f.f(x - h, y - h)) /
             (4.0 * h * h);
    return hs;
}

}  // namespace fd

double gaussian_curvature(const GraphFn& f, double x, double y, const FdOptions& o) {
    const double g1 = fd::gradient1(f, x, y, o);
    const double g2 = fd::gradient2(f, x, y, o);
    const auto h = fd::hessian(f, x, y, o);
    const double det = h.f11 * h.f22 - h.f12 * h.f12;
    const double denom = sqr(1.0 + g1 * g1 + g2 * g2);
    const double k = det / denom;
    if (!std::isfinite(k)) throw NumericalError("gaussian_curvature: non-finite derivative estimate");
    return k;
}

ContactOrder contact_order(const GraphFn& f, double x, double y, int max_k, const FdOptions& o) {
    if (max_k < 2) throw PreconditionError("contact_order: max_k must be >= 2");
    const double reach = 0.5 * o.scale;
    const double f0 = f.f(x, y);
    const double g1 = fd::gradient1(f, x, y, o);
    const double g2 = fd::gradient2(f, x, y, o);

    constexpr int kDirs = 32;
    constexpr int kLevels = 6;
    double probes[kDirs][kLevels];
    double gmax = 0.0;
    for (int i = 0; i < kDirs; ++i) {
        const double th = kTwoPi * static_cast<double>(i) / kDirs;
        const double d1 = std::cos(th), d2 = std::sin(th);
        for (int m = 0; m < kLevels; ++m) {
            const double t = reach * std::ldexp(1.0, -m);
            // contact function: subtract the tangent plane
            const double v = f.f(x + t * d1, y + t * d2) - f0 - t * (d1 * g1 + d2 * g2);
            probes[i][m] = v;
            gmax = std::max(gmax, std::abs(v));
        }
    }
    const double tol = 1e-7 * gmax + 1e-12 * (1.0 + std::abs(f0) + (std::abs(g1) + std::abs(g2)) * reach);

    int best = max_k + 1;
    std::vector<double> lt, lv;
    for (int i = 0; i < kDirs; ++i) {
        lt.clear();
        lv.clear();
        for (int m = 0; m < kLevels; ++m) {
            if (std::abs(probes[i][m]) > tol) {
                lt.push_back(std::log(reach * std::ldexp(1.0, -m)));
                lv.push_back(std::log(std::abs(probes[i][m])));
            }
        }
        if (lt.size() < 3) continue;  // dead (or nearly dead) direction
        const double slope = ls_slope(lt, lv);
        int k = static_cast<int>(std::lround(slope));
        if (k < 2) k = 2;  // tangent plane removed, so the break is at order >= 2
        best = std::min(best, k);
    }
    if (best > max_k) return {max_k, true};
    return {best, false};
}

double SurfaceGrid::total_measure() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

namespace {

std::vector<double> midpoints(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    const double h = (hi - lo) / n;
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (i + 0.5) * h;
    return v;
}

// Unit-sphere quadrature nodes in R^n (n = 2 or 3) with weights summing to
// the sphere measure.  n=3 places nodes uniformly in cos(theta) so the
// total is exact.
void sphere_nodes(int n, int res, std::vector<Vec>& pts, std::vector<Vec>& chart,
                  std::vector<double>& w, double& spacing) {
    if (n == 2) {
        const double dth = kTwoPi / res;
        for (int j = 0; j < res; ++j) {
            const double th = (j + 0.5) * dth;
            pts.emplace_back(std::cos(th), std::sin(th));
            Vec c;
            c.dim = 1;
            c[0] = th;
            chart.push_back(c);
            w.push_back(dth);
        }
        spacing = 2.0 * std::sin(0.5 * dth);
        return;
    }
    if (n == 3) {
        const int nc = res, nphi = 2 * res;
        const double dc = 2.0 / nc, dphi = kTwoPi / nphi;
        for (int i = 0; i < nc; ++i) {
            const double c0 = -1.0 + (i + 0.5) * dc;
            const double th = std::acos(c0);
            const double s = std::sqrt(std::max(0.0, 1.0 - c0 * c0));
            for (int j = 0; j < nphi; ++j) {
                const double ph = (j + 0.5) * dphi;
                // chart order matches the iterated angular convention
                pts.emplace_back(c0, s * std::cos(ph), s * std::sin(ph));
                Vec c;
                c.dim = 2;
                c[0] = th;
                c[1] = ph;
                chart.push_back(c);
                w.push_back(dc * dphi);
            }
        }
        // polar rings nearest the poles are sqrt(dc) apart in angle
        spacing = std::max(std::sqrt(2.0 * dc), dphi);
        return;
    }
    throw PreconditionError("sphere grid: only n = 2 or 3 supported");
}

}  // namespace

SurfaceGrid build_grid(const SurfaceDescriptor& s, int res) {
    if (res < 2) throw PreconditionError("build_grid: res must be >= 2");
    SurfaceGrid g;
    g.desc = s;
    g.ambient_dim = s.ambient_dim();
    switch (s.kind) {
        case SurfaceKind::Sphere: {
            sphere_nodes(s.n, res, g.points, g.chart, g.weights, g.max_spacing);
            break;
        }
        case SurfaceKind::Paraboloid:
        case SurfaceKind::Hyperboloid:
        case SurfaceKind::GraphFiniteType: {
            const int cd = s.chart_dim();
            const double h = 2.0 * s.half_width / res;
            const auto xs = midpoints(-s.half_width, s.half_width, res);
            double max_grad = 0.0;
            auto push_node = [&](double c1, double c2, double cell) {
                Vec c;
                c.dim = cd;
                c[0] = c1;
                if (cd > 1) c[1] = c2;
                g.chart.push_back(c);
                g.points.push_back(s.embed(c));
                g.weights.push_back(measure_weight(s, c) * cell);
                if (s.kind != SurfaceKind::Hyperboloid) {
                    // track the chart->ambient stretch for the spacing bound
                    FdOptions o;
                    o.scale = 2.0 * s.half_width;
                    double g1 = 0, g2 = 0;
                    if (s.kind == SurfaceKind::Paraboloid) {
                        g1 = c1;
                        g2 = cd > 1 ? c2 : 0.0;
                    } else {
                        g1 = fd::gradient1(s.graph, c1, cd > 1 ? c2 : 0.0, o);
                        g2 = cd > 1 ? fd::gradient2(s.graph, c1, c2, o) : 0.0;
                    }
                    max_grad = std::max(max_grad, std::sqrt(g1 * g1 + g2 * g2));
                } else {
                    max_grad = std::max(max_grad, std::sqrt(c1 * c1 + (cd > 1 ? c2 * c2 : 0.0)));
                }
            };
            if (cd == 1) {
                for (double c1 : xs) push_node(c1, 0.0, h);
            } else {
                for (double c1 : xs)
                    for (double c2 : xs) push_node(c1, c2, h * h);
            }
            g.max_spacing = h * std::sqrt(1.0 + max_grad * max_grad);
            break;
        }
        case SurfaceKind::Cone: {
            const int nr = res;
            const double dr = (s.r1 - s.r0) / nr;
            std::vector<Vec> om_pts, om_chart;
            std::vector<double> om_w;
            double om_spacing = 0.0;
            const int nom = std::max(8, static_cast<int>(std::ceil(kTwoPi * s.r1 / dr)));
            sphere_nodes(s.n, s.n == 2 ? nom : std::max(8, nom / 4), om_pts, om_chart, om_w,
                         om_spacing);
            for (int i = 0; i < nr; ++i) {
                const double r = s.r0 + (i + 0.5) * dr;
                for (std::size_t j = 0; j < om_pts.size(); ++j) {
                    Vec c;
                    c.dim = s.n;
                    for (int d = 0; d < s.n; ++d) c[static_cast<std::size_t>(d)] = r * om_pts[j][static_cast<std::size_t>(d)];
                    g.chart.push_back(c);
                    g.points.push_back(s.embed(c));
                    g.weights.push_back(std::pow(r, s.n - 2) * dr * om_w[j]);
                }
            }
            g.max_spacing = std::max(dr * std::sqrt(2.0), s.r1 * om_spacing);
            break;
        }
    }
    for (const auto& p : g.points) g.max_freq = std::max(g.max_freq, p.norm());
    return g;
}

}  // namespace rlab::surfaces
