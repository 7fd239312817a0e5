#include "rlab/extension.hpp"

#include <algorithm>
#include <cmath>

#include "rlab/parallel.hpp"
#include "rlab/rng.hpp"

namespace rlab::extension {

using surfaces::SurfaceGrid;

SampledDensity::SampledDensity(SurfaceGrid g, std::vector<cplx> values)
    : grid(std::move(g)), u(std::move(values)) {
    if (grid.size() != u.size())
        throw PreconditionError("SampledDensity: value count does not match the grid");
}

SampledDensity SampledDensity::constant(SurfaceGrid g, cplx value) {
    std::vector<cplx> v(g.size(), value);
    return SampledDensity(std::move(g), std::move(v));
}

std::vector<cplx> SampledDensity::amplitudes() const {
    std::vector<cplx> a(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) a[j] = u[j] * grid.weights[j];
    return a;
}

double SampledDensity::lq_norm(double q) const {
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
        s += std::pow(std::abs(u[j]), q) * grid.weights[j];
    return std::pow(s, 1.0 / q);
}

EvalGrid EvalGrid::centered_box(int dim, double half_width, int res_per_axis) {
    if (dim < 1 || dim > 4) throw PreconditionError("EvalGrid: dim must be in [1,4]");
    EvalGrid g;
    g.dim = dim;
    for (int d = 0; d < dim; ++d) {
        g.lo[static_cast<std::size_t>(d)] = -half_width;
        g.hi[static_cast<std::size_t>(d)] = half_width;
        g.res[static_cast<std::size_t>(d)] = res_per_axis;
    }
    return g;
}

std::size_t EvalGrid::size() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(res[static_cast<std::size_t>(d)]);
    return n;
}

Vec EvalGrid::point(std::size_t flat) const {
    Vec p;
    p.dim = dim;
    for (int d = dim - 1; d >= 0; --d) {
        const auto sd = static_cast<std::size_t>(d);
        const auto r = static_cast<std::size_t>(res[sd]);
        const std::size_t i = flat % r;
        flat /= r;
        const double h = (hi[sd] - lo[sd]) / static_cast<double>(res[sd]);
        p[sd] = lo[sd] + (static_cast<double>(i) + 0.5) * h;
    }
    return p;
}

std::vector<Vec> EvalGrid::points() const {
    std::vector<Vec> pts(size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = point(i);
    return pts;
}

double EvalGrid::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) {
        const auto sd = static_cast<std::size_t>(d);
        v *= (hi[sd] - lo[sd]) / static_cast<double>(res[sd]);
    }
    return v;
}

double EvalGrid::max_abs() const {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
        const auto sd = static_cast<std::size_t>(d);
        s += sqr(std::max(std::abs(lo[sd]), std::abs(hi[sd])));
    }
    return std::sqrt(s);
}

double EvalGrid::max_spacing() const {
    double h = 0.0;
    for (int d = 0; d < dim; ++d) {
        const auto sd = static_cast<std::size_t>(d);
        h = std::max(h, (hi[sd] - lo[sd]) / static_cast<double>(res[sd]));
    }
    return h;
}

void require_alias_bound(const SurfaceGrid& g, double max_abs_point) {
    if (g.max_spacing * max_abs_point * kTwoPi > 0.25 + 1e-12)
        throw RefinementError(
            "surface grid too coarse for this evaluation box: spacing * max|x| * 2pi = " +
            format_double(g.max_spacing * max_abs_point * kTwoPi) + " > 1/4");
}

std::vector<cplx> eval_field(std::span<const Vec> pts, std::span<const Vec> nodes,
                             std::span<const cplx> amp, int workers) {
    if (nodes.size() != amp.size()) throw PreconditionError("eval_field: node/amp mismatch");
    std::vector<cplx> out(pts.size());
    const int w = resolve_workers(workers);
    parallel_for(pts.size(), w, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const Vec& p = pts[i];
            double re = 0.0, im = 0.0;
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                const double ph = kTwoPi * p.dot(nodes[j]);
                const double c = std::cos(ph), s = std::sin(ph);
                re += amp[j].real() * c - amp[j].imag() * s;
                im += amp[j].real() * s + amp[j].imag() * c;
            }
            out[i] = {re, im};
        }
    });
    return out;
}

std::vector<cplx> extend(const SampledDensity& d, const EvalGrid& g, int workers) {
    if (g.size() == 0 || d.size() == 0) throw DomainError("extend: empty grid");
    require_alias_bound(d.grid, g.max_abs());
    const auto pts = g.points();
    const auto amp = d.amplitudes();
    return eval_field(pts, d.grid.points, amp, workers);
}

std::vector<cplx> extend_at(const SampledDensity& d, std::span<const Vec> pts, int workers) {
    if (pts.empty() || d.size() == 0) throw DomainError("extend_at: empty grid");
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, p.norm());
    require_alias_bound(d.grid, m);
    return eval_field(pts, d.grid.points, d.amplitudes(), workers);
}

double field_lp_norm(std::span<const cplx> field, double p, double cell_volume) {
    double s = 0.0;
    for (const auto& v : field) s += std::pow(std::abs(v), p);
    return std::pow(s * cell_volume, 1.0 / p);
}

namespace {

// smooth edge taper: 1 inside, C^1 roll-off over the outer `rel` fraction
double taper(double rho, double rel = 0.1) {
    const double a = std::abs(rho);
    if (a >= 1.0) return 0.0;
    if (a <= 1.0 - rel) return 1.0;
    const double t = (1.0 - a) / rel;
    return t * t * (3.0 - 2.0 * t);
}

}  // namespace

std::vector<TrialDensity> make_trial_family(const SurfaceGrid& g, const TrialFamily& fam) {
    std::vector<TrialDensity> out;
    Rng rng(fam.seed);
    const auto& desc = g.desc;
    const int cd = desc.chart_dim();

    // chart bounding box (center + half widths) for cap placement
    std::array<double, 4> clo{}, chi{};
    for (int d = 0; d < cd; ++d) {
        const auto sd = static_cast<std::size_t>(d);
        clo[sd] = 1e300;
        chi[sd] = -1e300;
    }
    for (const auto& c : g.chart)
        for (int d = 0; d < cd; ++d) {
            const auto sd = static_cast<std::size_t>(d);
            clo[sd] = std::min(clo[sd], c[sd]);
            chi[sd] = std::max(chi[sd], c[sd]);
        }

    auto chart_profile = [&](const Vec& c, const std::array<double, 4>& center,
                             const std::array<double, 4>& width) {
        double v = 1.0;
        for (int d = 0; d < cd; ++d) {
            const auto sd = static_cast<std::size_t>(d);
            v *= taper((c[sd] - center[sd]) / width[sd]);
        }
        return v;
    };

    std::array<double, 4> center{}, base{};
    for (int d = 0; d < cd; ++d) {
        const auto sd = static_cast<std::size_t>(d);
        center[sd] = 0.5 * (clo[sd] + chi[sd]);
        base[sd] = 0.5 * (chi[sd] - clo[sd]);
    }

    for (int c = 0; c < fam.caps; ++c) {
        TrialDensity t;
        t.desc = "cap_w" + format_double(std::ldexp(1.0, -c));
        std::array<double, 4> width = base;
        for (int d = 0; d < cd; ++d) width[static_cast<std::size_t>(d)] *= std::ldexp(1.0, -c);
        t.u.resize(g.size());
        for (std::size_t j = 0; j < g.size(); ++j)
            t.u[j] = chart_profile(g.chart[j], center, width);
        out.push_back(std::move(t));
    }

    auto random_bump = [&](Rng& r) {
        std::vector<cplx> u(g.size(), cplx{0, 0});
        const int modes = 3;
        for (int m = 0; m < modes; ++m) {
            std::array<double, 4> c0{};
            double sig = 0.0;
            for (int d = 0; d < cd; ++d) {
                const auto sd = static_cast<std::size_t>(d);
                c0[sd] = center[sd] + base[sd] * r.uniform(-0.6, 0.6);
                sig = base[sd] * r.uniform(0.15, 0.45);
            }
            const cplx coef = r.unit_complex() * r.uniform(0.3, 1.0);
            for (std::size_t j = 0; j < g.size(); ++j) {
                double d2 = 0.0;
                for (int d = 0; d < cd; ++d) {
                    const auto sd = static_cast<std::size_t>(d);
                    d2 += sqr(g.chart[j][sd] - c0[sd]);
                }
                u[j] += coef * std::exp(-0.5 * d2 / (sig * sig));
            }
        }
        // keep support inside the patch
        for (std::size_t j = 0; j < g.size(); ++j)
            u[j] *= chart_profile(g.chart[j], center, base);
        return u;
    };

    for (int b = 0; b < fam.bumps; ++b) {
        TrialDensity t;
        t.desc = "bump_" + std::to_string(b);
        t.u = random_bump(rng);
        out.push_back(std::move(t));
    }

    for (int m = 0; m < fam.modulations; ++m) {
        TrialDensity t;
        t.desc = "modulated_" + std::to_string(m);
        t.u = random_bump(rng);
        Vec x0;
        x0.dim = g.ambient_dim;
        for (int d = 0; d < g.ambient_dim; ++d)
            x0[static_cast<std::size_t>(d)] = fam.modulation_radius * rng.uniform(-1.0, 1.0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double ph = kTwoPi * x0.dot(g.points[j]);
            t.u[j] *= cplx{std::cos(ph), std::sin(ph)};
        }
        out.push_back(std::move(t));
    }
    return out;
}

double extension_ratio_single(const SampledDensity& d, double pprime, double qprime,
                              const EvalGrid& box, int workers) {
    const double un = d.lq_norm(qprime);
    if (un < 1e-14) return 0.0;  // skipped by convention
    const auto field = extend(d, box, workers);
    return field_lp_norm(field, pprime, box.cell_volume()) / un;
}

RatioReport extension_ratio(const SurfaceGrid& g, const TrialFamily& fam, double pprime,
                            double qprime, const EvalGrid& box, int workers) {
    require_alias_bound(g, box.max_abs());
    if (box.max_spacing() * g.max_freq * kTwoPi > 0.25 + 1e-12)
        throw RefinementError("extension_ratio: evaluation grid too coarse for the surface band");
    const auto family = make_trial_family(g, fam);
    RatioReport rep;
    const auto pts = box.points();
    for (std::size_t i = 0; i < family.size(); ++i) {
        SampledDensity d(g, family[i].u);
        const double un = d.lq_norm(qprime);
        double ratio = 0.0;
        if (un >= 1e-14) {
            const auto field = eval_field(pts, g.points, d.amplitudes(), workers);
            ratio = field_lp_norm(field, pprime, box.cell_volume()) / un;
        }
        rep.ratios.push_back(ratio);
        rep.descs.push_back(family[i].desc);
        if (ratio > rep.best) {
            rep.best = ratio;
            rep.best_index = i;
            rep.best_desc = family[i].desc;
        }
    }
    return rep;
}

DecayFit decay_fit(const SampledDensity& d, const Vec& dir, double r_lo, double r_hi,
                   int windows, int per_window, int workers) {
    if (!(r_hi > r_lo) || !(r_lo > 0.0)) throw PreconditionError("decay_fit: bad radius range");
    if (windows * per_window < 20) throw PreconditionError("decay_fit: need >= 20 radii");
    require_alias_bound(d.grid, r_hi);
    Vec w = dir;
    const double nn = w.norm();
    if (nn == 0.0) throw PreconditionError("decay_fit: zero direction");
    for (int i = 0; i < w.dim; ++i) w[static_cast<std::size_t>(i)] /= nn;

    // log-spaced windows, uniform sampling inside each
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(windows * per_window));
    const double lr = std::log(r_hi / r_lo);
    for (int k = 0; k < windows; ++k) {
        const double a = r_lo * std::exp(lr * k / windows);
        const double b = r_lo * std::exp(lr * (k + 1) / windows);
        for (int j = 0; j < per_window; ++j) {
            const double r = a + (b - a) * (j + 0.5) / per_window;
            Vec p = w;
            for (int i = 0; i < w.dim; ++i) p[static_cast<std::size_t>(i)] *= r;
            pts.push_back(p);
        }
    }
    const auto field = eval_field(pts, d.grid.points, d.amplitudes(), workers);

    DecayFit fit;
    std::vector<double> lx, ly;
    for (int k = 0; k < windows; ++k) {
        const double a = r_lo * std::exp(lr * k / windows);
        const double b = r_lo * std::exp(lr * (k + 1) / windows);
        double env = 0.0;
        for (int j = 0; j < per_window; ++j)
            env = std::max(env, std::abs(field[static_cast<std::size_t>(k * per_window + j)]));
        const double c = std::sqrt(a * b);
        fit.window_center.push_back(c);
        fit.envelope.push_back(env);
        if (env > 0.0) {
            lx.push_back(std::log(c));
            ly.push_back(std::log(env));
        }
    }
    if (lx.size() < 2) throw NumericalError("decay_fit: envelope vanished everywhere");
    // a constant envelope (flat direction) has slope exactly 0
    const double vmax = *std::max_element(ly.begin(), ly.end());
    const double vmin = *std::min_element(ly.begin(), ly.end());
    fit.slope = (vmax - vmin < 1e-12) ? 0.0 : ls_slope(lx, ly);
    return fit;
}

}  // namespace rlab::extension
