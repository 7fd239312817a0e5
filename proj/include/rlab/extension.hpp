#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rlab/surface.hpp"
#include "rlab/types.hpp"
#include "rlab/util.hpp"

namespace rlab::extension {

// A density u on a surface quadrature grid; the grid weights already carry
// the measure d(sigma).
struct SampledDensity {
    surfaces::SurfaceGrid grid;
    std::vector<cplx> u;

    SampledDensity() = default;
    SampledDensity(surfaces::SurfaceGrid g, std::vector<cplx> values);
    static SampledDensity constant(surfaces::SurfaceGrid g, cplx value = {1.0, 0.0});

    std::size_t size() const { return u.size(); }
    // u_j * w_j, the quadrature amplitudes of (u dsigma)^.
    std::vector<cplx> amplitudes() const;
    // || u ||_{L^q(S, dsigma)}
    double lq_norm(double q) const;
};

// Uniform midpoint grid over a box in the ambient physical variables.
struct EvalGrid {
    int dim = 0;
    std::array<double, 4> lo{}, hi{};
    std::array<int, 4> res{};

    static EvalGrid centered_box(int dim, double half_width, int res_per_axis);

    std::size_t size() const;
    Vec point(std::size_t flat) const;
    std::vector<Vec> points() const;
    double cell_volume() const;
    double max_abs() const;      // sup |corner|
    double max_spacing() const;  // largest cell edge
};

// Surface-grid anti-aliasing rule: spacing * max|eval point| * 2pi <= 1/4.
// Throws RefinementError when violated.
void require_alias_bound(const surfaces::SurfaceGrid& g, double max_abs_point);

// Sum_j exp(2pi i <p, X_j>) u_j w_j, one deterministic sequential
// reduction per point (parallel over points only).
std::vector<cplx> eval_field(std::span<const Vec> pts, std::span<const Vec> nodes,
                             std::span<const cplx> amp, int workers = 0);

// (u dsigma)^ on the grid (alias rule enforced on both sides).
std::vector<cplx> extend(const SampledDensity& d, const EvalGrid& g, int workers = 0);
// Pointwise variant for scattered evaluation sets (surface-side rule only).
std::vector<cplx> extend_at(const SampledDensity& d, std::span<const Vec> pts, int workers = 0);

double field_lp_norm(std::span<const cplx> field, double p, double cell_volume);

// Seeded trial densities: Knapp caps at dyadic widths, smooth random
// bumps, modulated bumps.
struct TrialFamily {
    int caps = 5;
    int bumps = 20;
    int modulations = 10;
    std::uint64_t seed = 1;
    double modulation_radius = 4.0;  // ambient |x0| scale for modulations
};

struct TrialDensity {
    std::string desc;
    std::vector<cplx> u;
};

std::vector<TrialDensity> make_trial_family(const surfaces::SurfaceGrid& g,
                                            const TrialFamily& fam);

struct RatioReport {
    double best = 0.0;
    std::size_t best_index = 0;
    std::string best_desc;
    std::vector<double> ratios;
    std::vector<std::string> descs;
};

// max over the family of ||(u dsigma)^||_{L^{p'}(box)} / ||u||_{L^{q'}(dsigma)};
// a certified lower bound for the truncated operator norm.
RatioReport extension_ratio(const surfaces::SurfaceGrid& g, const TrialFamily& fam,
                            double pprime, double qprime, const EvalGrid& box,
                            int workers = 0);

double extension_ratio_single(const SampledDensity& d, double pprime, double qprime,
                              const EvalGrid& box, int workers = 0);

// Least-squares slope of log envelope(|field|) against log R along a ray,
// with the envelope taken over log-spaced radial windows.
struct DecayFit {
    double slope = 0.0;
    std::vector<double> window_center;
    std::vector<double> envelope;
};

DecayFit decay_fit(const SampledDensity& d, const Vec& direction, double r_lo, double r_hi,
                   int windows = 20, int per_window = 32, int workers = 0);

}  // namespace rlab::extension
