#pragma once

#include <cstdint>
#include <vector>

#include "rlab/poly.hpp"
#include "rlab/surface.hpp"
#include "rlab/types.hpp"

namespace rlab::knapp {

// Anisotropic cap scaling data: support shrinks like [0,1/lambda] x
// [0,1/lambda^eps] on a type-k graph surface.
struct KnappParams {
    int k = 2;
    double lambda = 2.0;
    double eps = 1.0;
    double pprime = 6.0;
    double q = 2.0;

    KnappParams() = default;
    KnappParams(int k_, double lambda_, double eps_, double pprime_, double q_)
        : k(k_), lambda(lambda_), eps(eps_), pprime(pprime_), q(q_) {
        if (k < 2) throw PreconditionError("KnappParams: k must be >= 2");
        if (!(lambda > 1.0)) throw PreconditionError("KnappParams: lambda must be > 1");
        if (!(eps > 0.0)) throw PreconditionError("KnappParams: eps must be > 0");
    }
};

// p'/(n+1) >= q/(n-1) and p' > 2n/(n-1), strict where stated.
bool admissible_compact(int n, double pprime, double q);

// p'/(n+1) = q/(n-1) to 1e-12 relative, with the same strict bound.
bool scale_invariant(int n, double pprime, double q);

// (1+eps)/q - (1+k+eps)/p'.
double knapp_exponent(const KnappParams& kp);

enum class Necessity { Consistent, Violated };

// "Violated" iff p' < (k+1) q, i.e. some eps > 0 makes the exponent
// negative.
Necessity necessity_verdict(int k, double pprime, double q);

// Anisotropic cap sweep on the graph xi3 = a(xi1,xi2) xi1^k.  For each
// lambda the two sides of the rescaled estimate are evaluated and the
// lambda-exponent of their ratio is fitted.
struct SlopeFitOptions {
    double eps = 1.0;
    std::vector<double> lambdas{4.0, 8.0, 16.0, 32.0};
    int surface_res = 32;   // nodes per chart axis on the u-support
    double box_half = 4.0;  // fixed rescaled-frame box
    int box_res = 20;
    int workers = 0;
};

struct SlopeFit {
    double fitted = 0.0;
    double predicted = 0.0;
    std::vector<double> lambdas;
    std::vector<double> lhs_norms;   // rescaled-frame L^{p'} norms
    std::vector<double> ratios;      // original-sides ratio per lambda
    std::vector<double> log_ratios;
};

// a: amplitude with a(0,0) != 0; u is a fixed smooth test bump on the
// unit chart square (supplied internally, seeded).
SlopeFit knapp_slope_fit(const Poly2& a, int k, double pprime, double q,
                         const SlopeFitOptions& opts);

// max_{support} | lambda^k f(x/lambda, y/lambda^eps) - a(0,0) x^k |,
// used by the pointwise-limit checks.
double rescaled_graph_deviation(const Poly2& a, int k, double lambda, double eps,
                                double support_half);

}  // namespace rlab::knapp
