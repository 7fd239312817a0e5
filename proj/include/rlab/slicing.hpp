#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rlab/extension.hpp"
#include "rlab/surface.hpp"
#include "rlab/types.hpp"

namespace rlab::slicing {

// ---------------------------------------------------------------------------
// Null coordinates: a' = (xi_1..xi_{n-1}), a_n = (tau+xi_n)/sqrt2,
// b = (tau-xi_n)/sqrt2.  The map is orthogonal; the cone becomes the graph
// b = |a'|^2 / (2 a_n), a_n > 0.
// ---------------------------------------------------------------------------
struct NullCoords {
    Vec a;  // (a', a_n), dim n
    double b = 0.0;

    double an() const { return a[static_cast<std::size_t>(a.dim - 1)]; }
    double aprime_norm2() const {
        double s = 0.0;
        for (int i = 0; i + 1 < a.dim; ++i) s += sqr(a[static_cast<std::size_t>(i)]);
        return s;
    }
    // |b - |a'|^2/(2 a_n)|, zero on the cone
    double cone_residual() const { return std::abs(b - aprime_norm2() / (2.0 * an())); }
};

NullCoords to_null(const Vec& xi, double tau);
std::pair<Vec, double> from_null(const NullCoords& nc);

// ---------------------------------------------------------------------------
// Polar product grid on a truncated cone ring and its slice decomposition.
// Node (i,j) carries weight r_i^{n-2} dr * w_omega_j, the quadrature form
// of the iterated integral in r and omega.
// ---------------------------------------------------------------------------
struct PolarConeGrid {
    int n = 2;
    double r0 = 0.5, r1 = 2.0;
    std::vector<double> r;  // radial midpoints
    double dr = 0.0;
    std::vector<Vec> omega;  // unit sphere nodes
    std::vector<double> womega;

    std::size_t radial_count() const { return r.size(); }
    std::size_t angular_count() const { return omega.size(); }
    std::size_t size() const { return r.size() * omega.size(); }
    std::size_t flat(std::size_t i, std::size_t j) const { return i * omega.size() + j; }

    // Equivalent single-stage cone quadrature (shares nodes and weights).
    surfaces::SurfaceGrid to_surface_grid() const;
    // Exact dilation: radii and cell sizes scale by lambda.
    PolarConeGrid scaled(double lambda) const;
};

PolarConeGrid polar_cone_grid(int n, double r0, double r1, int nr, int nomega);

// Slice view of a density sampled on a polar product grid.
struct PolarSlices {
    const PolarConeGrid* grid = nullptr;
    std::vector<cplx> u;  // flattened, radial-major

    std::span<const cplx> slice(std::size_t i) const {
        return {u.data() + i * grid->angular_count(), grid->angular_count()};
    }
    double radial_weight(std::size_t i) const {
        return std::pow(grid->r[i], grid->n - 2) * grid->dr;
    }
};

PolarSlices polar_slices(const PolarConeGrid& g, std::vector<cplx> u);

// Two-stage (slice-then-transverse) evaluation of (u dsigma_cone)^ at
// scattered (x, t) points; regroups the same quadrature sum as the direct
// evaluation on to_surface_grid().
std::vector<cplx> reassemble_at(const PolarConeGrid& g, std::span<const cplx> u,
                                std::span<const Vec> pts, int workers = 0);

// ---------------------------------------------------------------------------
// Inequality chains.
// ---------------------------------------------------------------------------
enum class ChainId { Sphere, Parab, Hyperb, FiniteType };
std::string chain_name(ChainId id);

struct ChainLink {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool exact_identity = false;  // equality link, held to 1e-10
    bool violated = false;        // rhs == 0 while lhs > 0
};

struct ChainReport {
    ChainId id = ChainId::Sphere;
    int n = 2;
    double pprime = 6.0, q = 2.0;
    std::string u_desc;
    bool trivial = false;  // u identically zero
    std::vector<ChainLink> links;

    double extension_norm = 0.0;   // ||(u dsigma)^||_{L^{p'}(box)}
    double surface_norm = 0.0;     // ||u||_{L^{q'}(S, dsigma)}
    double extension_ratio = 0.0;  // their quotient
    double slice_ratio_max = 0.0;  // max measured per-slice constant
    double slice_constant_used = 0.0;
    double weak_weight_norm = 0.0;  // ||F||_{alpha,inf} (or the ring factor)
    double measure_norm_constant = 1.0;
    double final_rhs = 0.0;

    bool any_violation() const;
    // product of link ratios: extension_norm == bound_factor * final_rhs
    double bound_factor() const;
};

struct ChainOptions {
    double pprime = 6.0;
    double q = 2.0;
    // slice restriction constant fed into the slice link; <= 0 means "use
    // the measured per-slice maximum of this run"
    double slice_constant = 0.0;
    bool compact_mode = false;  // L^p route instead of the Lorentz route
    double x_half = 4.0;
    int x_res = 40;
    double t_half = 4.0;
    int t_res = 48;
    int workers = 0;
    std::string u_desc;
};

// (g0): sphere slices of the cone, u on a polar product grid.
ChainReport verify_chain_sphere(const PolarConeGrid& g, std::span<const cplx> u,
                                const ChainOptions& opts);

// Product grid in null coordinates (a', a_n) for the parabolic chain.
struct NullProductGrid {
    int n = 2;
    std::vector<Vec> aprime;  // dim n-1 nodes
    double daprime = 0.0;     // chart cell measure
    std::vector<double> an;   // midpoints, positive
    double dan = 0.0;
};
NullProductGrid null_product_grid(int n, double aprime_half, int na, double an0, double an1,
                                  int nan);

// (g02): paraboloid slices in null coordinates.
ChainReport verify_chain_parab(const NullProductGrid& g, std::span<const cplx> u,
                               const ChainOptions& opts);

// Product grid in (xi', xi_n) for the hyperbolic chain.
struct HyperbProductGrid {
    int n = 2;
    std::vector<Vec> xiprime;  // dim n-1 nodes
    double dxiprime = 0.0;
    std::vector<double> xin;  // midpoints, positive
    double dxin = 0.0;
};
HyperbProductGrid hyperb_product_grid(int n, double xiprime_half, int nxi, double xin0,
                                      double xin1, int nxin);

// (g03): hyperboloid slices in graph coordinates.
ChainReport verify_chain_hyperb(const HyperbProductGrid& g, std::span<const cplx> u,
                                const ChainOptions& opts);

// (a7): 1-D finite-type slices of a zero-curvature graph in R^3;
// u given on an (xi1, xi2) product grid over [-delta, delta]^2.
struct FiniteTypeGrid {
    surfaces::GraphFn f;
    double delta = 0.5;
    std::vector<double> xi1, xi2;  // midpoints
    double d1 = 0.0, d2 = 0.0;
};
FiniteTypeGrid finite_type_grid(surfaces::GraphFn f, double delta, int res);

ChainReport verify_chain_finite_type(const FiniteTypeGrid& g, std::span<const cplx> u,
                                     const ChainOptions& opts);

// Seeded smooth test densities for the chain verifiers.
std::vector<cplx> random_polar_density(const PolarConeGrid& g, std::uint64_t seed);
std::vector<cplx> sector_null_density(const NullProductGrid& g, std::uint64_t seed);
std::vector<cplx> sector_hyperb_density(const HyperbProductGrid& g, std::uint64_t seed);

// Two-piece smooth partition of unity (10% overlap) used for the sector
// reductions: chi_plus(s) + chi_minus(s) = 1, chi_plus supported in
// s > -overlap, chi_minus in s < overlap.
double sector_cut_plus(double s, double overlap = 0.1);
double sector_cut_minus(double s, double overlap = 0.1);

// ---------------------------------------------------------------------------
// Per-slice oracle: measured restriction constant of a 1-D phase.
// ---------------------------------------------------------------------------
struct SliceProblem {
    std::function<double(double)> psi;
    int k = 2;
    double a = 1.0;      // psi is given on [-a, a]
    double delta = 0.5;  // density support half-width, must be < a
    double pprime = 6.0;
    double q = 2.0;
    int res = 512;
    double box_half = 6.0;
    int box_res = 96;
    extension::TrialFamily family;
    int workers = 0;
};

struct SliceOracleResult {
    bool psi_valid = false;      // psi^{(j)}(0)=0 for j<k, psi^{(k)}(0)!=0
    bool inside_theorem = false; // p'>4, p'>=k+2, p'>=(k+1)q
    double constant = 0.0;       // measured max family ratio
    extension::RatioReport report;
};

SliceOracleResult slice_oracle(const SliceProblem& sp);

// Uniformity probe: measured constants across a parametrized psi family.
std::vector<double> slice_oracle_sweep(
    const std::function<double(double, double)>& psi_s, std::span<const double> s_values,
    const SliceProblem& base);

// ---------------------------------------------------------------------------
// Transfer of a measured slice constant to a cone constant bound.
// ---------------------------------------------------------------------------
struct LinkConstants {
    double hausdorff_young = 1.0;
    double interchange = 1.0;
    double embedding = 1.0;
    double holder = 1.0;         // Hoelder-type endgame measured ratio
    double weak_weight = 1.0;    // ||F||_{alpha,inf} on the truncated range
    double measure_norm = 1.0;   // exact surface-norm normalization constant
    double slice_link = 1.0;     // measured slice-link ratio (<= 1 when the
                                 // supplied slice constant covers the family)
    double identity_slack = 1.0; // product of exact-identity link ratios
};

// Largest per-link ratios over a family of chain reports, suitable as
// LinkConstants for transfer_constant.
LinkConstants collect_link_constants(std::span<const ChainReport> reports);

struct TransferResult {
    double bound = 0.0;
    bool compact_mode = false;
    double slice_constant = 0.0;
    LinkConstants links;
    double ring_factor = 0.0;  // sup-weight * measure^{1/p-1/q'} (compact)
};

// Multiplies the slice constant with the measured link constants.  Whole-
// cone mode demands scale-invariant exponents (mode error otherwise).
TransferResult transfer_constant(double slice_constant, const ExponentPair& exps, ChainId id,
                                 const LinkConstants& lc, bool compact_mode, int n,
                                 double r0 = 0.5, double r1 = 2.0);

}  // namespace rlab::slicing
