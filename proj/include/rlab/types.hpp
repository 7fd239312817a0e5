#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "rlab/util.hpp"

namespace rlab {

// Ambient points live in at most 4 dimensions (cone over R^3).
struct Vec {
    std::array<double, 4> c{0, 0, 0, 0};
    int dim = 0;

    Vec() = default;
    Vec(double x, double y) : c{x, y, 0, 0}, dim(2) {}
    Vec(double x, double y, double z) : c{x, y, z, 0}, dim(3) {}
    Vec(double x, double y, double z, double w) : c{x, y, z, w}, dim(4) {}

    double& operator[](std::size_t i) { return c[i]; }
    double operator[](std::size_t i) const { return c[i]; }

    double dot(const Vec& o) const {
        double s = 0;
        for (int i = 0; i < dim; ++i) s += c[static_cast<std::size_t>(i)] * o.c[static_cast<std::size_t>(i)];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

// Exponent pair (p, q) with duals; construct from either side.
struct ExponentPair {
    double p = 2.0;
    double q = 2.0;

    static ExponentPair from_pq(double p, double q) {
        if (!(p > 1.0 && p <= 2.0)) throw PreconditionError("ExponentPair: p must lie in (1,2]");
        if (!(q >= 1.0)) throw PreconditionError("ExponentPair: q must be >= 1");
        return ExponentPair{p, q};
    }
    static ExponentPair from_duals(double pprime, double qprime) {
        if (!(pprime >= 2.0)) throw PreconditionError("ExponentPair: p' must be >= 2");
        if (!(qprime > 1.0)) throw PreconditionError("ExponentPair: q' must be > 1");
        return ExponentPair{dual(pprime), dual(qprime)};
    }
    // p' / (p'-1); maps p <-> p', handles the p=1 <-> p'=inf edge.
    static double dual(double e) {
        if (std::isinf(e)) return 1.0;
        if (e == 1.0) return std::numeric_limits<double>::infinity();
        return e / (e - 1.0);
    }

    double pprime() const { return dual(p); }
    double qprime() const { return dual(q); }
};

// Lorentz space indices (alpha, beta); beta may be infinite.
struct LorentzParams {
    double alpha = 2.0;
    double beta = 2.0;

    LorentzParams() = default;
    LorentzParams(double a, double b) : alpha(a), beta(b) {
        if (!(alpha > 0.0) || std::isinf(alpha))
            throw PreconditionError("LorentzParams: alpha must be finite and positive");
        if (!(beta > 0.0)) throw PreconditionError("LorentzParams: beta must be positive");
    }
    static LorentzParams weak(double a) {
        return LorentzParams(a, std::numeric_limits<double>::infinity());
    }
    bool beta_infinite() const { return std::isinf(beta); }
};

}  // namespace rlab
