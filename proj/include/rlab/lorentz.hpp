#pragma once

#include <vector>

#include "rlab/types.hpp"
#include "rlab/util.hpp"

namespace rlab::lorentz {

// Discretized function on a measure space: sample values with the measure
// of the cell each sample represents.
struct WeightedSamples {
    std::vector<cplx> values;
    std::vector<double> weights;

    WeightedSamples() = default;
    WeightedSamples(std::vector<cplx> v, std::vector<double> w);
    static WeightedSamples real(const std::vector<double>& v, std::vector<double> w);

    std::size_t size() const { return values.size(); }
    double total_weight() const;
};

// mu({|f| >= lambda}).
double distribution_function(const WeightedSamples& f, double lambda);

// || t^{1/alpha} f*(t) ||_{L^beta(dt/t)}, computed in closed form on the
// step-function rearrangement.  beta = inf gives sup_t t^{1/alpha} f*(t).
// With beta = alpha this is exactly the plain L^alpha norm.
double lorentz_norm(const WeightedSamples& f, const LorentzParams& lp);

// Plain L^p norm (p = inf supported); equals lorentz_norm(f, (p,p)).
double lp_norm(const WeightedSamples& f, double p);

// Function on an X-grid x Y-grid with separable cell weights.
// values are row-major: index (i,j) -> i*ny + j.
struct ProductGridFunction {
    std::size_t nx = 0, ny = 0;
    std::vector<cplx> values;
    std::vector<double> wx, wy;

    ProductGridFunction() = default;
    ProductGridFunction(std::size_t nx, std::size_t ny, std::vector<cplx> v,
                        std::vector<double> wx, std::vector<double> wy);
    cplx at(std::size_t i, std::size_t j) const { return values[i * ny + j]; }
};

enum class InnerAxis { X, Y };

// Iterated norm: inner Lorentz norm along `inner_axis` per outer slice,
// then outer Lorentz norm of the profile.
double mixed_lorentz_norm(const ProductGridFunction& f, const LorentzParams& outer,
                          const LorentzParams& inner, InnerAxis inner_axis);

// ||fg||_{alpha,beta} / (||f||_{a1,b1} ||g||_{a2,b2}) on a shared sample
// set.  Exponent splits must satisfy 1/a = 1/a1 + 1/a2, 1/b = 1/b1 + 1/b2.
// Returns 0 when either factor has zero norm.
double check_holder(const WeightedSamples& f, const WeightedSamples& g,
                    const LorentzParams& lp1, const LorentzParams& lp2,
                    const LorentzParams& lp);

// Compactly supported samples on a uniform 1-D grid x_j = x0 + j*dx.
// declared_band, when positive, is the resolution the grid must provide
// (the dual window is [-1/(2dx), 1/(2dx))).
struct Sampled1D {
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<cplx> u;
    double declared_band = 0.0;
};

// ||u^||_{p'} / ||u||_{L^{p,p'}} with u^ the direct-sum approximation of
// the Fourier integral, evaluated on the dual grid of the sampling grid.
double check_hausdorff_young(const Sampled1D& u, double p);

// ||u||_{L^{p'}_x L^1_y} / ||u||_{L^1_y L^{p'}_x}; an exact inequality
// (<= 1) after discretization.
double check_minkowski(const ProductGridFunction& u, double p);

// Generalized Minkowski ratio ||u||_{L^s_x L^r_y} / ||u||_{L^r_y L^s_x},
// exact (<= 1) whenever r <= s.
double minkowski_ratio(const ProductGridFunction& u, double outer_s, double inner_r);

// ||u||_{L^{p'}_x L^{p,p'}_y} / ||u||_{L^{p,p'}_y L^{p'}_x}.
double check_interchange(const ProductGridFunction& u, double p);

}  // namespace rlab::lorentz
