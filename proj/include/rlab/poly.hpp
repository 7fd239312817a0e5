#pragma once

#include <vector>

#include "rlab/util.hpp"

namespace rlab {

// Dense bivariate polynomial sum c[i][j] x^i y^j.  Small degrees only;
// used for the amplitude factors of graph surfaces and for test oracles
// (its derivatives are exact).
class Poly2 {
public:
    Poly2() : coef_(1, std::vector<double>(1, 0.0)) {}
    explicit Poly2(std::vector<std::vector<double>> coef) : coef_(std::move(coef)) {
        if (coef_.empty()) coef_.assign(1, std::vector<double>(1, 0.0));
    }
    static Poly2 constant(double c) {
        return Poly2(std::vector<std::vector<double>>{{c}});
    }

    double operator()(double x, double y) const {
        double s = 0.0;
        double xp = 1.0;
        for (const auto& row : coef_) {
            double yp = 1.0, r = 0.0;
            for (double c : row) {
                r += c * yp;
                yp *= y;
            }
            s += xp * r;
            xp *= x;
        }
        return s;
    }

    Poly2 dx() const {
        if (coef_.size() <= 1) return Poly2();
        std::vector<std::vector<double>> d(coef_.size() - 1);
        for (std::size_t i = 1; i < coef_.size(); ++i) {
            d[i - 1] = coef_[i];
            for (double& c : d[i - 1]) c *= static_cast<double>(i);
        }
        return Poly2(std::move(d));
    }

    Poly2 dy() const {
        std::vector<std::vector<double>> d(coef_.size());
        bool any = false;
        for (std::size_t i = 0; i < coef_.size(); ++i) {
            if (coef_[i].size() <= 1) {
                d[i] = {0.0};
                continue;
            }
            d[i].resize(coef_[i].size() - 1);
            for (std::size_t j = 1; j < coef_[i].size(); ++j) {
                d[i][j - 1] = coef_[i][j] * static_cast<double>(j);
                any = true;
            }
        }
        if (!any) return Poly2();
        return Poly2(std::move(d));
    }

    const std::vector<std::vector<double>>& coefficients() const { return coef_; }

private:
    std::vector<std::vector<double>> coef_;
};

}  // namespace rlab
