#include "rlab/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rlab::lorentz {

WeightedSamples::WeightedSamples(std::vector<cplx> v, std::vector<double> w)
    : values(std::move(v)), weights(std::move(w)) {
    if (values.size() != weights.size())
        throw PreconditionError("WeightedSamples: value/weight length mismatch");
    for (double wi : weights)
        if (!(wi > 0.0)) throw PreconditionError("WeightedSamples: weights must be positive");
}

WeightedSamples WeightedSamples::real(const std::vector<double>& v, std::vector<double> w) {
    std::vector<cplx> cv(v.begin(), v.end());
    return WeightedSamples(std::move(cv), std::move(w));
}

double WeightedSamples::total_weight() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double distribution_function(const WeightedSamples& f, double lambda) {
    if (!(lambda >= 0.0)) throw PreconditionError("distribution_function: lambda must be >= 0");
    double mu = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f.values[i]) >= lambda) mu += f.weights[i];
    return mu;
}

namespace {

// Indices sorted by |value| descending, zero values dropped (they do not
// contribute to any Lorentz norm).
std::vector<std::size_t> rearrangement_order(const WeightedSamples& f) {
    std::vector<std::size_t> idx;
    idx.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f.values[i]) > 0.0) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&f](std::size_t a, std::size_t b) {
        return std::abs(f.values[a]) > std::abs(f.values[b]);
    });
    return idx;
}

}  // namespace

double lorentz_norm(const WeightedSamples& f, const LorentzParams& lp) {
    const auto idx = rearrangement_order(f);
    if (idx.empty()) return 0.0;
    const double alpha = lp.alpha;
    if (lp.beta_infinite()) {
        double best = 0.0, t = 0.0;
        for (std::size_t i : idx) {
            t += f.weights[i];
            best = std::max(best, std::pow(t, 1.0 / alpha) * std::abs(f.values[i]));
        }
        return best;
    }
    // integral of t^{beta/alpha - 1} over each step, in closed form
    const double beta = lp.beta;
    const double e = beta / alpha;
    double sum = 0.0, t_prev = 0.0, pow_prev = 0.0, t = 0.0;
    for (std::size_t i : idx) {
        t += f.weights[i];
        const double pow_t = std::pow(t, e);
        sum += std::pow(std::abs(f.values[i]), beta) * (alpha / beta) * (pow_t - pow_prev);
        t_prev = t;
        pow_prev = pow_t;
    }
    (void)t_prev;
    return std::pow(sum, 1.0 / beta);
}

double lp_norm(const WeightedSamples& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p > 0.0)) throw PreconditionError("lp_norm: p must be positive");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        s += std::pow(std::abs(f.values[i]), p) * f.weights[i];
    return std::pow(s, 1.0 / p);
}

ProductGridFunction::ProductGridFunction(std::size_t nx_, std::size_t ny_, std::vector<cplx> v,
                                         std::vector<double> wx_, std::vector<double> wy_)
    : nx(nx_), ny(ny_), values(std::move(v)), wx(std::move(wx_)), wy(std::move(wy_)) {
    if (values.size() != nx * ny || wx.size() != nx || wy.size() != ny)
        throw PreconditionError("ProductGridFunction: shape mismatch");
    for (double w : wx)
        if (!(w > 0.0)) throw PreconditionError("ProductGridFunction: wx must be positive");
    for (double w : wy)
        if (!(w > 0.0)) throw PreconditionError("ProductGridFunction: wy must be positive");
}

double mixed_lorentz_norm(const ProductGridFunction& f, const LorentzParams& outer,
                          const LorentzParams& inner, InnerAxis inner_axis) {
    WeightedSamples slice, profile;
    if (inner_axis == InnerAxis::Y) {
        slice.values.resize(f.ny);
        slice.weights = f.wy;
        profile.values.resize(f.nx);
        profile.weights = f.wx;
        for (std::size_t i = 0; i < f.nx; ++i) {
            for (std::size_t j = 0; j < f.ny; ++j) slice.values[j] = f.at(i, j);
            profile.values[i] = lorentz_norm(slice, inner);
        }
    } else {
        slice.values.resize(f.nx);
        slice.weights = f.wx;
        profile.values.resize(f.ny);
        profile.weights = f.wy;
        for (std::size_t j = 0; j < f.ny; ++j) {
            for (std::size_t i = 0; i < f.nx; ++i) slice.values[i] = f.at(i, j);
            profile.values[j] = lorentz_norm(slice, inner);
        }
    }
    return lorentz_norm(profile, outer);
}

namespace {

double inv_or_zero(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

void require_split(double whole, double part1, double part2, const char* what) {
    const double lhs = inv_or_zero(whole);
    const double rhs = inv_or_zero(part1) + inv_or_zero(part2);
    if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(lhs)))
        throw PreconditionError(std::string("check_holder: exponent split violated for ") + what);
}

}  // namespace

double check_holder(const WeightedSamples& f, const WeightedSamples& g,
                    const LorentzParams& lp1, const LorentzParams& lp2,
                    const LorentzParams& lp) {
    if (f.size() != g.size())
        throw PreconditionError("check_holder: f and g must share the sample set");
    require_split(lp.alpha, lp1.alpha, lp2.alpha, "alpha");
    require_split(lp.beta, lp1.beta, lp2.beta, "beta");
    const double nf = lorentz_norm(f, lp1);
    const double ng = lorentz_norm(g, lp2);
    if (nf == 0.0 || ng == 0.0) return 0.0;  // vacuous inequality
    WeightedSamples prod;
    prod.weights = f.weights;
    prod.values.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) prod.values[i] = f.values[i] * g.values[i];
    return lorentz_norm(prod, lp) / (nf * ng);
}

double check_hausdorff_young(const Sampled1D& u, double p) {
    if (!(p > 1.0 && p <= 2.0)) throw PreconditionError("check_hausdorff_young: need 1 < p <= 2");
    if (!(u.dx > 0.0) || u.u.empty()) throw PreconditionError("check_hausdorff_young: empty grid");
    const std::size_t n = u.u.size();
    if (u.declared_band > 0.0 && 1.0 / (2.0 * u.dx) < u.declared_band)
        throw RefinementError("check_hausdorff_young: grid does not resolve the declared band");

    const double pprime = ExponentPair::dual(p);
    const double dxi = 1.0 / (static_cast<double>(n) * u.dx);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = (static_cast<double>(k) - static_cast<double>(n) / 2.0) * dxi;
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double x = u.x0 + static_cast<double>(j) * u.dx;
            const double ph = -kTwoPi * x * xi;
            acc += u.u[j] * cplx{std::cos(ph), std::sin(ph)};
        }
        sum += std::pow(std::abs(acc) * u.dx, pprime) * dxi;
    }
    const double num = std::pow(sum, 1.0 / pprime);

    WeightedSamples ws(u.u, std::vector<double>(n, u.dx));
    const double den = lorentz_norm(ws, LorentzParams(p, pprime));
    if (den == 0.0) return 0.0;
    return num / den;
}

double minkowski_ratio(const ProductGridFunction& u, double outer_s, double inner_r) {
    if (!(inner_r >= 1.0) || !(outer_s >= inner_r))
        throw PreconditionError("minkowski_ratio: need 1 <= r <= s");
    // || x -> ||u(x,.)||_{L^r_y} ||_{L^s_x}
    double lhs_sum = 0.0;
    for (std::size_t i = 0; i < u.nx; ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < u.ny; ++j)
            inner += std::pow(std::abs(u.at(i, j)), inner_r) * u.wy[j];
        lhs_sum += std::pow(std::pow(inner, 1.0 / inner_r), outer_s) * u.wx[i];
    }
    const double lhs = std::pow(lhs_sum, 1.0 / outer_s);
    // || y -> ||u(.,y)||_{L^s_x} ||_{L^r_y}
    double rhs_sum = 0.0;
    for (std::size_t j = 0; j < u.ny; ++j) {
        double inner = 0.0;
        for (std::size_t i = 0; i < u.nx; ++i)
            inner += std::pow(std::abs(u.at(i, j)), outer_s) * u.wx[i];
        rhs_sum += std::pow(std::pow(inner, 1.0 / outer_s), inner_r) * u.wy[j];
    }
    const double rhs = std::pow(rhs_sum, 1.0 / inner_r);
    if (rhs == 0.0) return 0.0;
    return lhs / rhs;
}

double check_minkowski(const ProductGridFunction& u, double p) {
    if (!(p > 1.0 && p <= 2.0)) throw PreconditionError("check_minkowski: need 1 < p <= 2");
    return minkowski_ratio(u, ExponentPair::dual(p), 1.0);
}

double check_interchange(const ProductGridFunction& u, double p) {
    if (!(p > 1.0 && p <= 2.0)) throw PreconditionError("check_interchange: need 1 < p <= 2");
    const double pprime = ExponentPair::dual(p);
    const LorentzParams plain(pprime, pprime);
    const LorentzParams sharp(p, pprime);
    const double lhs = mixed_lorentz_norm(u, plain, sharp, InnerAxis::Y);
    const double rhs = mixed_lorentz_norm(u, sharp, plain, InnerAxis::X);
    if (rhs == 0.0) return 0.0;
    return lhs / rhs;
}

}  // namespace rlab::lorentz
