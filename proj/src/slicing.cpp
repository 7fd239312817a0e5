#include "rlab/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rlab/knapp.hpp"
#include "rlab/lorentz.hpp"
#include "rlab/parallel.hpp"
#include "rlab/rng.hpp"

namespace rlab::slicing {

using lorentz::LorentzParams;
using lorentz::lorentz_norm;
using lorentz::WeightedSamples;
using surfaces::SurfaceDescriptor;
using surfaces::SurfaceGrid;

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

// ---------------------------------------------------------------------------
// Null coordinates
// ---------------------------------------------------------------------------

NullCoords to_null(const Vec& xi, double tau) {
    NullCoords nc;
    nc.a.dim = xi.dim;
    for (int i = 0; i + 1 < xi.dim; ++i) nc.a[static_cast<std::size_t>(i)] = xi[static_cast<std::size_t>(i)];
    const double xin = xi[static_cast<std::size_t>(xi.dim - 1)];
    nc.a[static_cast<std::size_t>(xi.dim - 1)] = (tau + xin) / kSqrt2;
    nc.b = (tau - xin) / kSqrt2;
    return nc;
}

std::pair<Vec, double> from_null(const NullCoords& nc) {
    Vec xi;
    xi.dim = nc.a.dim;
    for (int i = 0; i + 1 < nc.a.dim; ++i) xi[static_cast<std::size_t>(i)] = nc.a[static_cast<std::size_t>(i)];
    const double an = nc.an();
    xi[static_cast<std::size_t>(nc.a.dim - 1)] = (an - nc.b) / kSqrt2;
    const double tau = (an + nc.b) / kSqrt2;
    return {xi, tau};
}

// ---------------------------------------------------------------------------
// Polar grids and slices
// ---------------------------------------------------------------------------

PolarConeGrid polar_cone_grid(int n, double r0, double r1, int nr, int nomega) {
    if (!(r0 > 0.0) || !(r1 > r0)) throw PreconditionError("polar_cone_grid: need 0 < r0 < r1");
    if (nr < 2 || nomega < 4) throw PreconditionError("polar_cone_grid: grid too small");
    PolarConeGrid g;
    g.n = n;
    g.r0 = r0;
    g.r1 = r1;
    g.dr = (r1 - r0) / nr;
    g.r.resize(static_cast<std::size_t>(nr));
    for (int i = 0; i < nr; ++i) g.r[static_cast<std::size_t>(i)] = r0 + (i + 0.5) * g.dr;
    auto sph = surfaces::build_grid(SurfaceDescriptor::sphere(n), nomega);
    g.omega = sph.points;
    g.womega = sph.weights;
    return g;
}

SurfaceGrid PolarConeGrid::to_surface_grid() const {
    SurfaceGrid s;
    s.desc = SurfaceDescriptor::cone(n, r0, r1);
    s.ambient_dim = n + 1;
    double om_spacing = 0.0;
    for (std::size_t j = 1; j < omega.size(); ++j) {
        double d2 = 0.0;
        for (int d = 0; d < n; ++d)
            d2 += sqr(omega[j][static_cast<std::size_t>(d)] - omega[j - 1][static_cast<std::size_t>(d)]);
        om_spacing = std::max(om_spacing, std::sqrt(d2));
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = 0; j < omega.size(); ++j) {
            Vec p;
            p.dim = n + 1;
            Vec c;
            c.dim = n;
            for (int d = 0; d < n; ++d) {
                c[static_cast<std::size_t>(d)] = r[i] * omega[j][static_cast<std::size_t>(d)];
                p[static_cast<std::size_t>(d)] = c[static_cast<std::size_t>(d)];
            }
            p[static_cast<std::size_t>(n)] = r[i];
            s.points.push_back(p);
            s.chart.push_back(c);
            s.weights.push_back(std::pow(r[i], n - 2) * dr * womega[j]);
        }
    }
    s.max_spacing = std::max(dr * kSqrt2, r1 * om_spacing);
    for (const auto& p : s.points) s.max_freq = std::max(s.max_freq, p.norm());
    return s;
}

PolarConeGrid PolarConeGrid::scaled(double lambda) const {
    PolarConeGrid g = *this;
    g.r0 *= lambda;
    g.r1 *= lambda;
    g.dr *= lambda;
    for (double& ri : g.r) ri *= lambda;
    return g;
}

PolarSlices polar_slices(const PolarConeGrid& g, std::vector<cplx> u) {
    if (u.size() != g.size())
        throw DomainError("polar_slices: density is not sampled on this product grid");
    PolarSlices s;
    s.grid = &g;
    s.u = std::move(u);
    return s;
}

std::vector<cplx> reassemble_at(const PolarConeGrid& g, std::span<const cplx> u,
                                std::span<const Vec> pts, int workers) {
    if (u.size() != g.size()) throw DomainError("reassemble_at: density/grid mismatch");
    const std::size_t nw = g.angular_count();
    std::vector<cplx> out(pts.size());
    parallel_for(pts.size(), resolve_workers(workers), [&](std::size_t b, std::size_t e) {
        for (std::size_t m = b; m < e; ++m) {
            const Vec& p = pts[m];  // (x, t), dim n+1
            const double t = p[static_cast<std::size_t>(g.n)];
            cplx total{0.0, 0.0};
            for (std::size_t i = 0; i < g.radial_count(); ++i) {
                cplx inner{0.0, 0.0};
                for (std::size_t j = 0; j < nw; ++j) {
                    double dot = 0.0;
                    for (int d = 0; d < g.n; ++d)
                        dot += p[static_cast<std::size_t>(d)] * g.omega[j][static_cast<std::size_t>(d)];
                    const double ph = kTwoPi * g.r[i] * dot;
                    inner += u[g.flat(i, j)] * g.womega[j] * cplx{std::cos(ph), std::sin(ph)};
                }
                const double ph_t = kTwoPi * t * g.r[i];
                total += std::pow(g.r[i], g.n - 2) * g.dr * inner *
                         cplx{std::cos(ph_t), std::sin(ph_t)};
            }
            out[m] = total;
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Chain machinery
// ---------------------------------------------------------------------------

std::string chain_name(ChainId id) {
    switch (id) {
        case ChainId::Sphere: return "sphere:g0";
        case ChainId::Parab: return "parab:g02";
        case ChainId::Hyperb: return "hyperb:g03";
        case ChainId::FiniteType: return "finite-type:a7";
    }
    return "unknown";
}

bool ChainReport::any_violation() const {
    for (const auto& l : links)
        if (l.violated) return true;
    return false;
}

double ChainReport::bound_factor() const {
    double prod = 1.0;
    for (const auto& l : links) prod *= l.ratio;
    return prod;
}

namespace {

ChainLink make_link(std::string name, double lhs, double rhs, bool exact = false) {
    ChainLink l;
    l.name = std::move(name);
    l.lhs = lhs;
    l.rhs = rhs;
    l.exact_identity = exact;
    if (rhs > 0.0) {
        l.ratio = lhs / rhs;
    } else if (lhs > 0.0) {
        l.ratio = std::numeric_limits<double>::infinity();
        l.violated = true;
    } else {
        l.ratio = 0.0;
    }
    return l;
}

// Shared transverse stage: slice fields S[i*M+m] with slice coordinates
// s_i and cell ds, transverse 1-D FT onto a t-grid, and the first four
// chain quantities.
struct TransverseCore {
    double L0 = 0.0;   // || F ||_{L^{p'}(product box)}
    double L0b = 0.0;  // iterated form of the same norm
    double R1 = 0.0;   // || inner-slice norm of S ||_{L^{p'}_x}
    double R2 = 0.0;   // slice norm of || S ||_{L^{p'}_x}
    std::vector<double> D;  // per-slice L^{p'}(x box) norms
};

TransverseCore transverse_core(std::span<const cplx> S, std::span<const double> coords,
                               double ds, std::size_t M, double vx, double t_half, int t_res,
                               double pprime, bool lorentz_inner, int workers) {
    const double p = ExponentPair::dual(pprime);
    const std::size_t ns = coords.size();
    const double dt = 2.0 * t_half / t_res;

    std::vector<double> A_pow(M, 0.0);  // per-x sum over t of |F|^{p'} dt
    std::vector<double> B(M, 0.0);      // per-x inner slice norm of S
    parallel_for(M, resolve_workers(workers), [&](std::size_t b, std::size_t e) {
        std::vector<cplx> slice_vals(ns);
        std::vector<double> slice_w(ns, ds);
        for (std::size_t m = b; m < e; ++m) {
            double acc = 0.0;
            for (int k = 0; k < t_res; ++k) {
                const double t = -t_half + (k + 0.5) * dt;
                double re = 0.0, im = 0.0;
                for (std::size_t i = 0; i < ns; ++i) {
                    const double ph = kTwoPi * t * coords[i];
                    const double c = std::cos(ph), s = std::sin(ph);
                    const cplx& v = S[i * M + m];
                    re += v.real() * c - v.imag() * s;
                    im += v.real() * s + v.imag() * c;
                }
                acc += std::pow((re * re + im * im) * ds * ds, 0.5 * pprime) * dt;
            }
            A_pow[m] = acc;
            for (std::size_t i = 0; i < ns; ++i) slice_vals[i] = S[i * M + m];
            WeightedSamples ws(slice_vals, slice_w);
            B[m] = lorentz_inner ? lorentz_norm(ws, LorentzParams(p, pprime))
                                 : lorentz::lp_norm(ws, p);
        }
    });

    TransverseCore core;
    double l0_sum = 0.0, l0b_sum = 0.0, r1_sum = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        l0_sum += A_pow[m] * vx;
        l0b_sum += std::pow(std::pow(A_pow[m], 1.0 / pprime), pprime) * vx;
        r1_sum += std::pow(B[m], pprime) * vx;
    }
    core.L0 = std::pow(l0_sum, 1.0 / pprime);
    core.L0b = std::pow(l0b_sum, 1.0 / pprime);
    core.R1 = std::pow(r1_sum, 1.0 / pprime);

    core.D.assign(ns, 0.0);
    for (std::size_t i = 0; i < ns; ++i) {
        double s = 0.0;
        for (std::size_t m = 0; m < M; ++m) s += std::pow(std::abs(S[i * M + m]), pprime);
        core.D[i] = std::pow(s * vx, 1.0 / pprime);
    }
    {
        WeightedSamples dws(std::vector<cplx>(core.D.begin(), core.D.end()),
                            std::vector<double>(ns, ds));
        core.R2 = lorentz_inner ? lorentz_norm(dws, LorentzParams(p, pprime))
                                : lorentz::lp_norm(dws, p);
    }
    return core;
}

// Finishing stage shared by the sphere/parab/hyperb chains: slice link,
// power regroup, embedding and the Hoelder endgame.
struct LorentzTail {
    std::vector<ChainLink> links;
    double slice_ratio_max = 0.0;
    double weak_weight_norm = 0.0;
    double final_rhs = 0.0;
};

LorentzTail lorentz_tail(const TransverseCore& core, std::span<const double> slice_w,
                         std::span<const double> wfactor, std::span<const double> gfactor,
                         std::span<const double> nu, double ds, double pprime, double q,
                         double c_input, bool compact_mode, double surface_norm,
                         double measure_norm) {
    const double p = ExponentPair::dual(pprime);
    const double qprime = ExponentPair::dual(q);
    const std::size_t ns = nu.size();
    const LorentzParams Lpp(p, pprime);

    LorentzTail tail;
    double c_max = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        if (nu[i] * slice_w[i] > 1e-14) c_max = std::max(c_max, core.D[i] / (slice_w[i] * nu[i]));
    }
    tail.slice_ratio_max = c_max;
    const double C = c_input > 0.0 ? c_input : c_max;

    std::vector<double> ws(ns, ds);
    auto lor = [&](std::span<const double> vals, const LorentzParams& lp) {
        return lorentz_norm(WeightedSamples(std::vector<cplx>(vals.begin(), vals.end()), ws), lp);
    };

    // power_regroup compares the single-power form against the W*G split
    std::vector<double> slice_rhs(ns), wg(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        slice_rhs[i] = slice_w[i] * nu[i];
        wg[i] = wfactor[i] * (gfactor[i] * nu[i]);
    }

    const double R3 = C * lor(slice_rhs, Lpp);
    tail.links.push_back(make_link("slice_restriction", core.R2, R3));
    const double R4 = C * lor(wg, Lpp);
    tail.links.push_back(make_link("power_regroup", R3, R4, true));

    std::vector<double> g_prof(ns);
    for (std::size_t i = 0; i < ns; ++i) g_prof[i] = gfactor[i] * nu[i];
    double gq_sum = 0.0;
    for (std::size_t i = 0; i < ns; ++i) gq_sum += std::pow(g_prof[i], qprime) * ds;
    const double GN = std::pow(gq_sum, 1.0 / qprime);

    if (!compact_mode) {
        const double R5 = C * lor(wg, LorentzParams(p, qprime));
        tail.links.push_back(make_link("lorentz_embedding", R4, R5));
        const double alpha = 1.0 / (1.0 / p - 1.0 / qprime);
        const double WF = lor(wfactor, LorentzParams::weak(alpha));
        tail.weak_weight_norm = WF;
        const double R6 = C * WF * GN;
        tail.links.push_back(make_link("lorentz_holder", R5, R6));
        tail.final_rhs = C * WF * measure_norm * surface_norm;
        tail.links.push_back(make_link("surface_norm", R6, tail.final_rhs, true));
    } else {
        const double R5 = C * lor(wg, LorentzParams(p, p));
        tail.links.push_back(make_link("lp_embedding", R4, R5));
        double supw = 0.0, mu = ds * static_cast<double>(ns);
        for (std::size_t i = 0; i < ns; ++i) supw = std::max(supw, wfactor[i]);
        tail.weak_weight_norm = supw;
        const double ring = supw * std::pow(mu, 1.0 / p - 1.0 / qprime);
        const double R6 = C * ring * GN;
        tail.links.push_back(make_link("holder_lp", R5, R6));
        tail.final_rhs = C * ring * measure_norm * surface_norm;
        tail.links.push_back(make_link("surface_norm", R6, tail.final_rhs, true));
    }
    (void)regroup;
    return tail;
}

void check_chain_exponents(const ChainOptions& opts, int n) {
    if (!(opts.pprime > 2.0) || !(opts.q >= 1.0))
        throw PreconditionError("verify_chain: need p' > 2 and q >= 1");
    if (!opts.compact_mode && !knapp::scale_invariant(n + 1, opts.pprime, opts.q))
        throw PreconditionError(
            "verify_chain: whole-cone mode needs scale-invariant exponents (mode error)");
}

}  // namespace

ChainReport verify_chain_sphere(const PolarConeGrid& g, std::span<const cplx> u,
                                const ChainOptions& opts) {
    if (u.size() != g.size()) throw DomainError("verify_chain_sphere: density/grid mismatch");
    check_chain_exponents(opts, g.n);
    const double pprime = opts.pprime, q = opts.q;
    const double qprime = ExponentPair::dual(q);
    const int n = g.n;

    ChainReport rep;
    rep.id = ChainId::Sphere;
    rep.n = n;
    rep.pprime = pprime;
    rep.q = q;
    rep.u_desc = opts.u_desc;

    const std::size_t nr = g.radial_count(), nw = g.angular_count();

    // || u ||_{L^{q'}(dsigma)} on the polar quadrature
    double uq = 0.0;
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nw; ++j)
            uq += std::pow(std::abs(u[g.flat(i, j)]), qprime) * std::pow(g.r[i], n - 2) * g.dr *
                  g.womega[j];
    rep.surface_norm = std::pow(uq, 1.0 / qprime);
    if (rep.surface_norm == 0.0) {
        rep.trivial = true;
        return rep;
    }

    // slice fields H(x, r_i) = r^{n-2} int_{S^{n-1}} e^{2pi i r x.w} u(r w) dw
    const auto xg = extension::EvalGrid::centered_box(n, opts.x_half, opts.x_res);
    const auto xs = xg.points();
    const std::size_t M = xs.size();
    std::vector<cplx> S(nr * M);
    parallel_for(M, resolve_workers(opts.workers), [&](std::size_t b, std::size_t e) {
        std::vector<double> dots(nw);
        for (std::size_t m = b; m < e; ++m) {
            for (std::size_t j = 0; j < nw; ++j) dots[j] = xs[m].dot(g.omega[j]);
            for (std::size_t i = 0; i < nr; ++i) {
                const double rpow = std::pow(g.r[i], n - 2);
                double re = 0.0, im = 0.0;
                for (std::size_t j = 0; j < nw; ++j) {
                    const double ph = kTwoPi * g.r[i] * dots[j];
                    const double c = std::cos(ph), s = std::sin(ph);
                    const cplx& v = u[g.flat(i, j)];
                    const double w = g.womega[j];
                    re += (v.real() * c - v.imag() * s) * w;
                    im += (v.real() * s + v.imag() * c) * w;
                }
                S[i * M + m] = cplx{re * rpow, im * rpow};
            }
        }
    });

    auto core = transverse_core(S, g.r, g.dr, M, xg.cell_volume(), opts.t_half, opts.t_res,
                                pprime, /*lorentz_inner=*/true, opts.workers);
    rep.extension_norm = core.L0;
    rep.extension_ratio = core.L0 / rep.surface_norm;
    rep.links.push_back(make_link("fubini", core.L0, core.L0b, true));
    rep.links.push_back(make_link("hausdorff_young", core.L0b, core.R1));
    rep.links.push_back(make_link("interchange", core.R1, core.R2));

    // per-slice data: nu_i = ||u(r_i .)||_{L^{q'}(S^{n-1})}, display weight
    // r^{n-2-n/p'}; the chain's W*G split uses the scale-invariant power.
    std::vector<double> nu(nr), slice_w(nr), wfac(nr), gfac(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < nw; ++j)
            s += std::pow(std::abs(u[g.flat(i, j)]), qprime) * g.womega[j];
        nu[i] = std::pow(s, 1.0 / qprime);
        slice_w[i] = std::pow(g.r[i], n - 2 - static_cast<double>(n) / pprime);
        wfac[i] = std::pow(g.r[i], (n - 2) / q - static_cast<double>(n) / pprime);
        gfac[i] = std::pow(g.r[i], (n - 2) / qprime);
    }
    auto tail = lorentz_tail(core, slice_w, wfac, gfac, nu, g.dr, pprime, q,
                             opts.slice_constant, opts.compact_mode, rep.surface_norm, 1.0);
    for (auto& l : tail.links) rep.links.push_back(l);
    rep.slice_ratio_max = tail.slice_ratio_max;
    rep.slice_constant_used = opts.slice_constant > 0.0 ? opts.slice_constant
                                                        : tail.slice_ratio_max;
    rep.weak_weight_norm = tail.weak_weight_norm;
    rep.final_rhs = tail.final_rhs;
    return rep;
}

NullProductGrid null_product_grid(int n, double aprime_half, int na, double an0, double an1,
                                  int nan) {
    if (n != 2 && n != 3) throw PreconditionError("null_product_grid: n must be 2 or 3");
    if (!(an0 > 0.0) || !(an1 > an0))
        throw PreconditionError("null_product_grid: need 0 < an0 < an1 (a_n > 0 on the cone)");
    NullProductGrid g;
    g.n = n;
    const int cd = n - 1;
    const double h = 2.0 * aprime_half / na;
    if (cd == 1) {
        for (int i = 0; i < na; ++i) {
            Vec v;
            v.dim = 1;
            v[0] = -aprime_half + (i + 0.5) * h;
            g.aprime.push_back(v);
        }
        g.daprime = h;
    } else {
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < na; ++j) {
                Vec v;
                v.dim = 2;
                v[0] = -aprime_half + (i + 0.5) * h;
                v[1] = -aprime_half + (j + 0.5) * h;
                g.aprime.push_back(v);
            }
        g.daprime = h * h;
    }
    g.dan = (an1 - an0) / nan;
    for (int i = 0; i < nan; ++i) g.an.push_back(an0 + (i + 0.5) * g.dan);
    return g;
}

ChainReport verify_chain_parab(const NullProductGrid& g, std::span<const cplx> u,
                               const ChainOptions& opts) {
    const std::size_t na = g.aprime.size(), nan = g.an.size();
    if (u.size() != na * nan) throw DomainError("verify_chain_parab: density/grid mismatch");
    check_chain_exponents(opts, g.n);
    const double pprime = opts.pprime, q = opts.q;
    const double qprime = ExponentPair::dual(q);

    ChainReport rep;
    rep.id = ChainId::Parab;
    rep.n = g.n;
    rep.pprime = pprime;
    rep.q = q;
    rep.u_desc = opts.u_desc;

    // || u ||_{L^{q'}(dsigma)}, dsigma = da / (sqrt2 a_n)
    double uq = 0.0;
    for (std::size_t i = 0; i < nan; ++i)
        for (std::size_t j = 0; j < na; ++j)
            uq += std::pow(std::abs(u[i * na + j]), qprime) * g.daprime * g.dan /
                  (kSqrt2 * g.an[i]);
    rep.surface_norm = std::pow(uq, 1.0 / qprime);
    if (rep.surface_norm == 0.0) {
        rep.trivial = true;
        return rep;
    }

    // slice fields over (x', t): S_i(x', t) =
    //   (1/sqrt2) sum_j e^{2pi i (x'.a' + t |a'|^2/(2 a_n))} u / a_n da'
    const auto xg = extension::EvalGrid::centered_box(g.n, opts.x_half, opts.x_res);
    const auto xs = xg.points();  // (x', t) with t in the last slot
    const std::size_t M = xs.size();
    std::vector<double> b2(na);
    for (std::size_t j = 0; j < na; ++j) {
        double s = 0.0;
        for (int d = 0; d < g.n - 1; ++d) s += sqr(g.aprime[j][static_cast<std::size_t>(d)]);
        b2[j] = s;
    }
    std::vector<cplx> S(nan * M);
    parallel_for(M, resolve_workers(opts.workers), [&](std::size_t bb, std::size_t ee) {
        std::vector<double> dots(na);
        for (std::size_t m = bb; m < ee; ++m) {
            const double t = xs[m][static_cast<std::size_t>(g.n - 1)];
            for (std::size_t j = 0; j < na; ++j) {
                double s = 0.0;
                for (int d = 0; d < g.n - 1; ++d)
                    s += xs[m][static_cast<std::size_t>(d)] * g.aprime[j][static_cast<std::size_t>(d)];
                dots[j] = s;
            }
            for (std::size_t i = 0; i < nan; ++i) {
                const double an = g.an[i];
                const double amp = g.daprime / (kSqrt2 * an);
                double re = 0.0, im = 0.0;
                for (std::size_t j = 0; j < na; ++j) {
                    const double ph = kTwoPi * (dots[j] + t * b2[j] / (2.0 * an));
                    const double c = std::cos(ph), s = std::sin(ph);
                    const cplx& v = u[i * na + j];
                    re += v.real() * c - v.imag() * s;
                    im += v.real() * s + v.imag() * c;
                }
                S[i * M + m] = cplx{re * amp, im * amp};
            }
        }
    });

    // the transverse cell is d a_n; slice norms use Lebesgue da' inside S
    auto core = transverse_core(S, g.an, g.dan, M, xg.cell_volume(), opts.t_half, opts.t_res,
                                pprime, true, opts.workers);
    rep.extension_norm = core.L0;
    rep.extension_ratio = core.L0 / rep.surface_norm;
    rep.links.push_back(make_link("fubini", core.L0, core.L0b, true));
    rep.links.push_back(make_link("hausdorff_young", core.L0b, core.R1));
    rep.links.push_back(make_link("interchange", core.R1, core.R2));

    std::vector<double> nu(nan), slice_w(nan), wfac(nan), gfac(nan);
    for (std::size_t i = 0; i < nan; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < na; ++j)
            s += std::pow(std::abs(u[i * na + j]), qprime) * g.daprime;
        nu[i] = std::pow(s, 1.0 / qprime);
        slice_w[i] = std::pow(g.an[i], 1.0 / pprime - 1.0) / kSqrt2;
        wfac[i] = std::pow(g.an[i], 1.0 / qprime - 1.0 / ExponentPair::dual(pprime));
        gfac[i] = std::pow(g.an[i], -1.0 / qprime) / kSqrt2;
    }
    // exact normalization: ||G||_{q'} = 2^{-1/(2q)} ||u||_{L^{q'}(dsigma)}
    const double mn = std::pow(2.0, -0.5 / q);
    rep.measure_norm_constant = mn;
    auto tail = lorentz_tail(core, slice_w, wfac, gfac, nu, g.dan, pprime, q,
                             opts.slice_constant, opts.compact_mode, rep.surface_norm, mn);
    for (auto& l : tail.links) rep.links.push_back(l);
    rep.slice_ratio_max = tail.slice_ratio_max;
    rep.slice_constant_used = opts.slice_constant > 0.0 ? opts.slice_constant
                                                        : tail.slice_ratio_max;
    rep.weak_weight_norm = tail.weak_weight_norm;
    rep.final_rhs = tail.final_rhs;
    return rep;
}

HyperbProductGrid hyperb_product_grid(int n, double xiprime_half, int nxi, double xin0,
                                      double xin1, int nxin) {
    if (n != 2 && n != 3) throw PreconditionError("hyperb_product_grid: n must be 2 or 3");
    if (!(xin0 > 0.0) || !(xin1 > xin0))
        throw PreconditionError("hyperb_product_grid: need 0 < xin0 < xin1");
    HyperbProductGrid g;
    g.n = n;
    const int cd = n - 1;
    const double h = 2.0 * xiprime_half / nxi;
    if (cd == 1) {
        for (int i = 0; i < nxi; ++i) {
            Vec v;
            v.dim = 1;
            v[0] = -xiprime_half + (i + 0.5) * h;
            g.xiprime.push_back(v);
        }
        g.dxiprime = h;
    } else {
        for (int i = 0; i < nxi; ++i)
            for (int j = 0; j < nxi; ++j) {
                Vec v;
                v.dim = 2;
                v[0] = -xiprime_half + (i + 0.5) * h;
                v[1] = -xiprime_half + (j + 0.5) * h;
                g.xiprime.push_back(v);
            }
        g.dxiprime = h * h;
    }
    g.dxin = (xin1 - xin0) / nxin;
    for (int i = 0; i < nxin; ++i) g.xin.push_back(xin0 + (i + 0.5) * g.dxin);
    return g;
}

ChainReport verify_chain_hyperb(const HyperbProductGrid& g, std::span<const cplx> u,
                                const ChainOptions& opts) {
    const std::size_t nxi = g.xiprime.size(), nxn = g.xin.size();
    if (u.size() != nxi * nxn) throw DomainError("verify_chain_hyperb: density/grid mismatch");
    check_chain_exponents(opts, g.n);
    const double pprime = opts.pprime, q = opts.q;
    const double qprime = ExponentPair::dual(q);
    const int n = g.n;

    ChainReport rep;
    rep.id = ChainId::Hyperb;
    rep.n = n;
    rep.pprime = pprime;
    rep.q = q;
    rep.u_desc = opts.u_desc;

    std::vector<double> rho(nxi * nxn);  // |xi|
    for (std::size_t i = 0; i < nxn; ++i)
        for (std::size_t j = 0; j < nxi; ++j) {
            double s = sqr(g.xin[i]);
            for (int d = 0; d < n - 1; ++d) s += sqr(g.xiprime[j][static_cast<std::size_t>(d)]);
            rho[i * nxi + j] = std::sqrt(s);
        }

    double uq = 0.0;
    for (std::size_t i = 0; i < nxn; ++i)
        for (std::size_t j = 0; j < nxi; ++j)
            uq += std::pow(std::abs(u[i * nxi + j]), qprime) * g.dxiprime * g.dxin /
                  rho[i * nxi + j];
    rep.surface_norm = std::pow(uq, 1.0 / qprime);
    if (rep.surface_norm == 0.0) {
        rep.trivial = true;
        return rep;
    }

    const auto xg = extension::EvalGrid::centered_box(n, opts.x_half, opts.x_res);
    const auto xs = xg.points();  // (x', t)
    const std::size_t M = xs.size();
    std::vector<cplx> S(nxn * M);
    parallel_for(M, resolve_workers(opts.workers), [&](std::size_t bb, std::size_t ee) {
        std::vector<double> dots(nxi);
        for (std::size_t m = bb; m < ee; ++m) {
            const double t = xs[m][static_cast<std::size_t>(n - 1)];
            for (std::size_t j = 0; j < nxi; ++j) {
                double s = 0.0;
                for (int d = 0; d < n - 1; ++d)
                    s += xs[m][static_cast<std::size_t>(d)] * g.xiprime[j][static_cast<std::size_t>(d)];
                dots[j] = s;
            }
            for (std::size_t i = 0; i < nxn; ++i) {
                double re = 0.0, im = 0.0;
                for (std::size_t j = 0; j < nxi; ++j) {
                    const double rr = rho[i * nxi + j];
                    const double ph = kTwoPi * (dots[j] + t * rr);
                    const double c = std::cos(ph), s = std::sin(ph);
                    const cplx v = u[i * nxi + j] * (g.dxiprime / rr);
                    re += v.real() * c - v.imag() * s;
                    im += v.real() * s + v.imag() * c;
                }
                S[i * M + m] = cplx{re, im};
            }
        }
    });

    auto core = transverse_core(S, g.xin, g.dxin, M, xg.cell_volume(), opts.t_half, opts.t_res,
                                pprime, true, opts.workers);
    rep.extension_norm = core.L0;
    rep.extension_ratio = core.L0 / rep.surface_norm;
    rep.links.push_back(make_link("fubini", core.L0, core.L0b, true));
    rep.links.push_back(make_link("hausdorff_young", core.L0b, core.R1));
    rep.links.push_back(make_link("interchange", core.R1, core.R2));

    // h_i = || u(., xi_n) |xi|^{-1/q'} ||_{L^{q'}(dxi')}
    std::vector<double> nu(nxn), slice_w(nxn), wfac(nxn), gfac(nxn, 1.0);
    for (std::size_t i = 0; i < nxn; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < nxi; ++j)
            s += std::pow(std::abs(u[i * nxi + j]), qprime) * g.dxiprime / rho[i * nxi + j];
        nu[i] = std::pow(s, 1.0 / qprime);
        slice_w[i] = std::pow(g.xin[i], n - 2 - static_cast<double>(n) / pprime) *
                     std::pow(g.xin[i], -static_cast<double>(n - 2) / qprime);
        wfac[i] = std::pow(g.xin[i], (n - 2) / q - static_cast<double>(n) / pprime);
    }
    auto tail = lorentz_tail(core, slice_w, wfac, gfac, nu, g.dxin, pprime, q,
                             opts.slice_constant, opts.compact_mode, rep.surface_norm, 1.0);
    for (auto& l : tail.links) rep.links.push_back(l);
    rep.slice_ratio_max = tail.slice_ratio_max;
    rep.slice_constant_used = opts.slice_constant > 0.0 ? opts.slice_constant
                                                        : tail.slice_ratio_max;
    rep.weak_weight_norm = tail.weak_weight_norm;
    rep.final_rhs = tail.final_rhs;
    return rep;
}

FiniteTypeGrid finite_type_grid(surfaces::GraphFn f, double delta, int res) {
    if (!(delta > 0.0)) throw PreconditionError("finite_type_grid: delta must be positive");
    FiniteTypeGrid g;
    g.f = std::move(f);
    g.delta = delta;
    g.d1 = g.d2 = 2.0 * delta / res;
    for (int i = 0; i < res; ++i) {
        g.xi1.push_back(-delta + (i + 0.5) * g.d1);
        g.xi2.push_back(-delta + (i + 0.5) * g.d2);
    }
    return g;
}

ChainReport verify_chain_finite_type(const FiniteTypeGrid& g, std::span<const cplx> u,
                                     const ChainOptions& opts) {
    const std::size_t n1 = g.xi1.size(), n2 = g.xi2.size();
    if (u.size() != n1 * n2)
        throw DomainError("verify_chain_finite_type: density/grid mismatch");
    if (!(opts.pprime > 2.0)) throw PreconditionError("verify_chain_finite_type: need p' > 2");
    const double pprime = opts.pprime, q = opts.q;
    const double p = ExponentPair::dual(pprime);
    const double qprime = ExponentPair::dual(q);

    ChainReport rep;
    rep.id = ChainId::FiniteType;
    rep.n = 3;
    rep.pprime = pprime;
    rep.q = q;
    rep.u_desc = opts.u_desc;

    surfaces::FdOptions fdo;
    fdo.scale = 2.0 * g.delta;
    std::vector<double> fval(n1 * n2), phi(n1 * n2);
    double phi_sup = 0.0;
    for (std::size_t i2 = 0; i2 < n2; ++i2)
        for (std::size_t i1 = 0; i1 < n1; ++i1) {
            const double x = g.xi1[i1], y = g.xi2[i2];
            fval[i2 * n1 + i1] = g.f.f(x, y);
            const double g1 = surfaces::fd::gradient1(g.f, x, y, fdo);
            const double g2 = surfaces::fd::gradient2(g.f, x, y, fdo);
            phi[i2 * n1 + i1] = std::sqrt(1.0 + g1 * g1 + g2 * g2);
            phi_sup = std::max(phi_sup, phi[i2 * n1 + i1]);
        }

    double uq = 0.0;  // || u ||_{q'(dsigma)}^{q'}, dsigma = phi dxi
    double upq = 0.0; // || u phi ||_{q'(dxi)}^{q'}
    for (std::size_t idx = 0; idx < n1 * n2; ++idx) {
        uq += std::pow(std::abs(u[idx]), qprime) * phi[idx] * g.d1 * g.d2;
        upq += std::pow(std::abs(u[idx]) * phi[idx], qprime) * g.d1 * g.d2;
    }
    rep.surface_norm = std::pow(uq, 1.0 / qprime);
    if (rep.surface_norm == 0.0) {
        rep.trivial = true;
        return rep;
    }

    // slice fields over (x1, x3): h_i(x1, x3) =
    //   sum_{xi1} e^{2pi i (x1 xi1 + x3 f(xi1, xi2_i))} u phi dxi1
    const auto xg = extension::EvalGrid::centered_box(2, opts.x_half, opts.x_res);
    const auto xs = xg.points();
    const std::size_t M = xs.size();
    std::vector<cplx> S(n2 * M);
    parallel_for(M, resolve_workers(opts.workers), [&](std::size_t bb, std::size_t ee) {
        for (std::size_t m = bb; m < ee; ++m) {
            const double x1 = xs[m][0], x3 = xs[m][1];
            for (std::size_t i = 0; i < n2; ++i) {
                double re = 0.0, im = 0.0;
                for (std::size_t j = 0; j < n1; ++j) {
                    const std::size_t idx = i * n1 + j;
                    const double ph = kTwoPi * (x1 * g.xi1[j] + x3 * fval[idx]);
                    const double c = std::cos(ph), s = std::sin(ph);
                    const cplx v = u[idx] * (phi[idx] * g.d1);
                    re += v.real() * c - v.imag() * s;
                    im += v.real() * s + v.imag() * c;
                }
                S[i * M + m] = cplx{re, im};
            }
        }
    });

    auto core = transverse_core(S, g.xi2, g.d2, M, xg.cell_volume(), opts.t_half, opts.t_res,
                                pprime, /*lorentz_inner=*/false, opts.workers);
    rep.extension_norm = core.L0;
    rep.extension_ratio = core.L0 / rep.surface_norm;
    rep.links.push_back(make_link("fubini", core.L0, core.L0b, true));
    rep.links.push_back(make_link("hausdorff_young_lp", core.L0b, core.R1));
    rep.links.push_back(make_link("minkowski_interchange", core.R1, core.R2));

    std::vector<double> nu(n2);
    double c_max = 0.0;
    for (std::size_t i = 0; i < n2; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n1; ++j)
            s += std::pow(std::abs(u[i * n1 + j]) * phi[i * n1 + j], qprime) * g.d1;
        nu[i] = std::pow(s, 1.0 / qprime);
        if (nu[i] > 1e-14) c_max = std::max(c_max, core.D[i] / nu[i]);
    }
    rep.slice_ratio_max = c_max;
    const double C = opts.slice_constant > 0.0 ? opts.slice_constant : c_max;
    rep.slice_constant_used = C;

    double nup_sum = 0.0;
    for (std::size_t i = 0; i < n2; ++i) nup_sum += std::pow(nu[i], p) * g.d2;
    const double R3 = C * std::pow(nup_sum, 1.0 / p);
    rep.links.push_back(make_link("sogge_slice", core.R2, R3));

    const double embed = std::pow(2.0 * g.delta, 1.0 / p - 1.0 / qprime);
    const double R4 = C * embed * std::pow(upq, 1.0 / qprime);
    rep.links.push_back(make_link("lq_lp_embedding", R3, R4));

    const double absorb = std::pow(phi_sup, 1.0 - 1.0 / qprime);
    rep.weak_weight_norm = embed * absorb;
    rep.final_rhs = C * embed * absorb * rep.surface_norm;
    rep.links.push_back(make_link("amplitude_absorption", R4, rep.final_rhs));
    return rep;
}

// ---------------------------------------------------------------------------
// Seeded densities and sector cutoffs
// ---------------------------------------------------------------------------

namespace {

double plateau(double s, double edge = 0.15) {
    const double a = std::abs(s);
    if (a >= 1.0) return 0.0;
    if (a <= 1.0 - edge) return 1.0;
    const double t = (1.0 - a) / edge;
    return t * t * (3.0 - 2.0 * t);
}

}  // namespace

double sector_cut_plus(double s, double overlap) {
    if (s <= -overlap) return 0.0;
    if (s >= overlap) return 1.0;
    const double t = (s + overlap) / (2.0 * overlap);
    return t * t * (3.0 - 2.0 * t);
}

double sector_cut_minus(double s, double overlap) { return 1.0 - sector_cut_plus(s, overlap); }

std::vector<cplx> random_polar_density(const PolarConeGrid& g, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t nw = g.angular_count();
    // two rank-one layers -> generically full rank
    std::array<Vec, 2> v{};
    std::array<double, 2> kap{};
    std::array<cplx, 2> coef{};
    for (int l = 0; l < 2; ++l) {
        v[static_cast<std::size_t>(l)].dim = g.n;
        for (int d = 0; d < g.n; ++d)
            v[static_cast<std::size_t>(l)][static_cast<std::size_t>(d)] = rng.uniform(-1.0, 1.0);
        kap[static_cast<std::size_t>(l)] = rng.uniform(0.5, 2.5);
        coef[static_cast<std::size_t>(l)] = rng.unit_complex() * rng.uniform(0.4, 1.0);
    }
    const double rc = rng.uniform(0.3, 0.7);
    std::vector<cplx> u(g.size());
    for (std::size_t i = 0; i < g.radial_count(); ++i) {
        const double s = (g.r[i] - g.r0) / (g.r1 - g.r0);  // 0..1 across the ring
        const double rad = plateau(2.0 * s - 1.0);
        const cplx swirl = std::exp(cplx{0.0, kTwoPi * rc * s});
        for (std::size_t j = 0; j < nw; ++j) {
            cplx ang{0.0, 0.0};
            for (std::size_t l = 0; l < 2; ++l) {
                const double d = g.omega[j].dot(v[l]);
                ang += coef[l] * std::exp(cplx{0.0, kTwoPi * kap[l] * d}) *
                       (l == 1 ? swirl : cplx{1.0, 0.0});
            }
            u[g.flat(i, j)] = rad * ang;
        }
    }
    return u;
}

std::vector<cplx> sector_null_density(const NullProductGrid& g, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t na = g.aprime.size(), nan = g.an.size();
    const double an0 = g.an.front() - 0.5 * g.dan, an1 = g.an.back() + 0.5 * g.dan;
    const double kap = rng.uniform(0.5, 2.0);
    const cplx c1 = rng.unit_complex();
    std::vector<cplx> u(na * nan);
    for (std::size_t i = 0; i < nan; ++i) {
        const double an = g.an[i];
        const double s_an = 2.0 * (an - an0) / (an1 - an0) - 1.0;
        const double envn = plateau(s_an);
        for (std::size_t j = 0; j < na; ++j) {
            double ap2 = 0.0;
            for (int d = 0; d < g.n - 1; ++d) ap2 += sqr(g.aprime[j][static_cast<std::size_t>(d)]);
            const double ap = std::sqrt(ap2);
            const double s = ap / an;  // sector variable |a'| / a_n
            const double sector = sector_cut_plus(s - 0.25) * sector_cut_minus(s - 0.75);
            const cplx osc = std::exp(cplx{0.0, kTwoPi * kap * (ap + 0.3 * an)});
            u[i * na + j] = envn * sector * (c1 + 0.4 * osc);
        }
    }
    return u;
}

std::vector<cplx> sector_hyperb_density(const HyperbProductGrid& g, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t nxi = g.xiprime.size(), nxn = g.xin.size();
    const double x0 = g.xin.front() - 0.5 * g.dxin, x1 = g.xin.back() + 0.5 * g.dxin;
    double half = 0.0;
    for (const auto& v : g.xiprime)
        for (int d = 0; d < g.n - 1; ++d) half = std::max(half, std::abs(v[static_cast<std::size_t>(d)]));
    const double kap = rng.uniform(0.5, 2.0);
    const cplx c1 = rng.unit_complex();
    std::vector<cplx> u(nxi * nxn);
    for (std::size_t i = 0; i < nxn; ++i) {
        const double s_n = 2.0 * (g.xin[i] - x0) / (x1 - x0) - 1.0;
        const double envn = plateau(s_n);
        for (std::size_t j = 0; j < nxi; ++j) {
            double prof = envn;
            double phase = 0.3 * g.xin[i];
            for (int d = 0; d < g.n - 1; ++d) {
                const double c = g.xiprime[j][static_cast<std::size_t>(d)];
                prof *= plateau(c / (half / (1.0 - 1e-9)));
                phase += kap * c;
            }
            u[i * nxi + j] = prof * (c1 + 0.4 * std::exp(cplx{0.0, kTwoPi * phase}));
        }
    }
    return u;
}

// ---------------------------------------------------------------------------
// Slice oracle
// ---------------------------------------------------------------------------

SliceOracleResult slice_oracle(const SliceProblem& sp) {
    if (!(sp.delta < sp.a)) throw PreconditionError("slice_oracle: delta must be < a");
    if (!sp.psi) throw PreconditionError("slice_oracle: missing phase");

    SliceOracleResult res;
    res.inside_theorem = sp.pprime > 4.0 && sp.pprime >= static_cast<double>(sp.k) + 2.0 - 1e-12 &&
                         sp.pprime >= (static_cast<double>(sp.k) + 1.0) * sp.q - 1e-12;

    surfaces::GraphFn f;
    auto psi = sp.psi;
    f.f = [psi](double x, double) { return psi(x); };

    // psi'(0) = 0 and contact of order exactly k
    surfaces::FdOptions fdo;
    fdo.scale = sp.a;
    const double d1 = surfaces::fd::gradient1(f, 0.0, 0.0, fdo);
    double scale_f = 1.0;
    for (double t = -sp.a; t <= sp.a; t += sp.a / 8.0) scale_f = std::max(scale_f, std::abs(psi(t)));
    const auto order = surfaces::contact_order(f, 0.0, 0.0, sp.k + 2, fdo);
    res.psi_valid = std::abs(d1) <= 1e-6 * scale_f && !order.at_least && order.k == sp.k;

    auto desc = SurfaceDescriptor::graph2(f, sp.k, sp.delta, surfaces::GraphMeasure::ChartLebesgue);
    auto grid = surfaces::build_grid(desc, sp.res);

    int box_res = sp.box_res;
    if (box_res <= 0) {
        // eval-side alias rule: dx * max|xi| * 2pi <= 1/4
        const double dx_max = 0.25 / (kTwoPi * std::max(grid.max_freq, 1e-9));
        box_res = static_cast<int>(std::ceil(2.0 * sp.box_half / dx_max)) + 1;
    }
    extension::EvalGrid box = extension::EvalGrid::centered_box(2, sp.box_half, box_res);
    res.report = extension::extension_ratio(grid, sp.family, sp.pprime,
                                            ExponentPair::dual(sp.q), box, sp.workers);
    res.constant = res.report.best;
    return res;
}

std::vector<double> slice_oracle_sweep(const std::function<double(double, double)>& psi_s,
                                       std::span<const double> s_values,
                                       const SliceProblem& base) {
    std::vector<double> constants;
    for (double s : s_values) {
        SliceProblem sp = base;
        sp.psi = [psi_s, s](double t) { return psi_s(t, s); };
        constants.push_back(slice_oracle(sp).constant);
    }
    return constants;
}

// ---------------------------------------------------------------------------
// Transfer
// ---------------------------------------------------------------------------

LinkConstants collect_link_constants(std::span<const ChainReport> reports) {
    LinkConstants lc;
    lc.hausdorff_young = 0.0;
    lc.interchange = 0.0;
    lc.embedding = 0.0;
    lc.holder = 0.0;
    lc.weak_weight = 0.0;
    lc.measure_norm = 0.0;
    lc.slice_link = 0.0;
    double identity = 0.0;
    bool any = false;
    for (const auto& rep : reports) {
        if (rep.trivial) continue;
        any = true;
        double id_prod = 1.0;
        for (const auto& l : rep.links) {
            if (l.name == "hausdorff_young" || l.name == "hausdorff_young_lp")
                lc.hausdorff_young = std::max(lc.hausdorff_young, l.ratio);
            else if (l.name == "interchange" || l.name == "minkowski_interchange")
                lc.interchange = std::max(lc.interchange, l.ratio);
            else if (l.name == "lorentz_embedding" || l.name == "lp_embedding" ||
                     l.name == "lq_lp_embedding")
                lc.embedding = std::max(lc.embedding, l.ratio);
            else if (l.name == "lorentz_holder" || l.name == "holder_lp" ||
                     l.name == "amplitude_absorption")
                lc.holder = std::max(lc.holder, l.ratio);
            else if (l.name == "sogge_slice" || l.name == "slice_restriction")
                lc.slice_link = std::max(lc.slice_link, l.ratio);
            else if (l.exact_identity)
                id_prod *= l.ratio;
        }
        identity = std::max(identity, id_prod);
        lc.weak_weight = std::max(lc.weak_weight, rep.weak_weight_norm);
        lc.measure_norm = std::max(lc.measure_norm, rep.measure_norm_constant);
    }
    if (!any) return LinkConstants{};
    lc.identity_slack = std::max(identity, 1.0);
    return lc;
}

TransferResult transfer_constant(double slice_constant, const ExponentPair& exps, ChainId id,
                                 const LinkConstants& lc, bool compact_mode, int n, double r0,
                                 double r1) {
    if (!(slice_constant > 0.0))
        throw PreconditionError("transfer_constant: slice constant must be positive");
    const double pprime = exps.pprime(), q = exps.q;
    TransferResult out;
    out.compact_mode = compact_mode;
    out.slice_constant = slice_constant;
    out.links = lc;
    if (!compact_mode) {
        if (!knapp::scale_invariant(n + 1, pprime, q))
            throw PreconditionError(
                "transfer_constant: whole-cone mode needs scale-invariant exponents (mode "
                "error)");
        out.bound = slice_constant * lc.slice_link * lc.hausdorff_young * lc.interchange *
                    lc.embedding * lc.holder * lc.weak_weight * lc.measure_norm *
                    lc.identity_slack;
        out.ring_factor = lc.weak_weight;
        return out;
    }
    if (!knapp::admissible_compact(n + 1, pprime, q))
        throw PreconditionError("transfer_constant: exponents outside the admissible range");
    const double e = (static_cast<double>(n) - 2.0) / q - static_cast<double>(n) / pprime;
    const double supw = std::max(std::pow(r0, e), std::pow(r1, e));
    const double p = exps.p, qprime = exps.qprime();
    out.ring_factor = supw * std::pow(r1 - r0, 1.0 / p - 1.0 / qprime);
    (void)id;
    out.bound = slice_constant * lc.slice_link * lc.hausdorff_young * lc.interchange *
                lc.embedding * out.ring_factor * lc.measure_norm * lc.identity_slack;
    return out;
}

}  // namespace rlab::slicing
