#include "rlab/knapp.hpp"

#include <algorithm>
#include <cmath>

#include "rlab/extension.hpp"
#include "rlab/util.hpp"

namespace rlab::knapp {

bool admissible_compact(int n, double pprime, double q) {
    if (n < 2 || !(pprime > 1.0) || !(q >= 1.0))
        throw PreconditionError("admissible_compact: need n >= 2, p' > 1, q >= 1");
    const double nn = static_cast<double>(n);
    return pprime / (nn + 1.0) >= q / (nn - 1.0) && pprime > 2.0 * nn / (nn - 1.0);
}

bool scale_invariant(int n, double pprime, double q) {
    if (n < 2 || !(pprime > 1.0) || !(q >= 1.0))
        throw PreconditionError("scale_invariant: need n >= 2, p' > 1, q >= 1");
    const double nn = static_cast<double>(n);
    const double lhs = pprime / (nn + 1.0), rhs = q / (nn - 1.0);
    return std::abs(lhs - rhs) <= 1e-12 * std::max(lhs, rhs) &&
           pprime > 2.0 * nn / (nn - 1.0);
}

double knapp_exponent(const KnappParams& kp) {
    return (1.0 + kp.eps) / kp.q - (1.0 + kp.k + kp.eps) / kp.pprime;
}

Necessity necessity_verdict(int k, double pprime, double q) {
    if (k < 2) throw PreconditionError("necessity_verdict: k must be >= 2");
    return pprime < (static_cast<double>(k) + 1.0) * q ? Necessity::Violated
                                                       : Necessity::Consistent;
}

namespace {

// a(x,y) * x^k as a polynomial (row shift by k)
Poly2 graph_poly(const Poly2& a, int k) {
    const auto& c = a.coefficients();
    std::vector<std::vector<double>> shifted(c.size() + static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) shifted[i] = {0.0};
    for (std::size_t i = 0; i < c.size(); ++i) shifted[i + static_cast<std::size_t>(k)] = c[i];
    return Poly2(std::move(shifted));
}

double smooth_plateau(double s) {
    const double a = std::abs(s);
    if (a >= 1.0) return 0.0;
    if (a <= 0.7) return 1.0;
    const double t = (1.0 - a) / 0.3;
    return t * t * (3.0 - 2.0 * t);
}

}  // namespace

double rescaled_graph_deviation(const Poly2& a, int k, double lambda, double eps,
                                double support_half) {
    const Poly2 f = graph_poly(a, k);
    const double a00 = a(0.0, 0.0);
    const double lk = std::pow(lambda, k);
    const double le = std::pow(lambda, eps);
    double dev = 0.0;
    const int m = 64;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double x = support_half * (-1.0 + 2.0 * (i + 0.5) / m);
            const double y = support_half * (-1.0 + 2.0 * (j + 0.5) / m);
            dev = std::max(dev, std::abs(lk * f(x / lambda, y / le) - a00 * std::pow(x, k)));
        }
    return dev;
}

SlopeFit knapp_slope_fit(const Poly2& a, int k, double pprime, double q,
                         const SlopeFitOptions& opts) {
    if (opts.lambdas.size() < 4)
        throw PreconditionError("knapp_slope_fit: need at least 4 lambda values");
    if (opts.box_half < 1.0)
        throw RefinementError("knapp_slope_fit: box too small to capture the dilated phase");
    const double qprime = ExponentPair::dual(q);
    const Poly2 f = graph_poly(a, k);
    const Poly2 f1 = f.dx(), f2 = f.dy();

    // fixed smooth test bump on the unit chart square
    const int res = opts.surface_res;
    const double h = 2.0 / res;
    std::vector<double> xs(static_cast<std::size_t>(res));
    for (int i = 0; i < res; ++i) xs[static_cast<std::size_t>(i)] = -1.0 + (i + 0.5) * h;

    SlopeFit fit;
    fit.predicted = knapp_exponent(KnappParams(k, opts.lambdas[0], opts.eps, pprime, q));

    const auto box = extension::EvalGrid::centered_box(3, opts.box_half, opts.box_res);
    const auto pts = box.points();

    std::vector<double> loglam, logratio;
    for (double lambda : opts.lambdas) {
        if (!(lambda > 1.0)) throw PreconditionError("knapp_slope_fit: lambda must be > 1");
        const double le = std::pow(lambda, opts.eps);
        const double lk = std::pow(lambda, static_cast<double>(k));

        std::vector<Vec> nodes;
        std::vector<cplx> amp;
        nodes.reserve(static_cast<std::size_t>(res) * static_cast<std::size_t>(res));
        double uq_sum = 0.0, u_max = 0.0;
        for (double x : xs)
            for (double y : xs) {
                const double uval = smooth_plateau(x) * smooth_plateau(y);
                const double g1 = f1(x / lambda, y / le);
                const double g2 = f2(x / lambda, y / le);
                const double phi = std::sqrt(1.0 + g1 * g1 + g2 * g2);
                nodes.emplace_back(x, y, lk * f(x / lambda, y / le));
                amp.emplace_back(uval * phi * h * h, 0.0);
                uq_sum += std::pow(uval, qprime) * phi * h * h;
                u_max = std::max(u_max, uval);
            }
        if (u_max == 0.0) throw NumericalError("knapp_slope_fit: u vanishes, fit undefined");

        const auto field = extension::eval_field(pts, nodes, amp, opts.workers);
        const double m_lambda = extension::field_lp_norm(field, pprime, box.cell_volume());
        if (!(m_lambda > 0.0))
            throw NumericalError("knapp_slope_fit: vanishing norm, fit undefined");

        // exact substitution factors linking the rescaled frame back to the
        // original two sides
        const double lhs = std::pow(lambda, -(1.0 + opts.eps) + (1.0 + opts.eps + k) / pprime) *
                           m_lambda;
        const double rhs_u = std::pow(lambda, -(1.0 + opts.eps) / qprime) *
                             std::pow(uq_sum, 1.0 / qprime);
        const double ratio = lhs / rhs_u;

        fit.lambdas.push_back(lambda);
        fit.lhs_norms.push_back(m_lambda);
        fit.ratios.push_back(ratio);
        fit.log_ratios.push_back(std::log(ratio));
        loglam.push_back(std::log(lambda));
        logratio.push_back(std::log(ratio));
    }
    fit.fitted = -ls_slope(loglam, logratio);
    return fit;
}

}  // namespace rlab::knapp
