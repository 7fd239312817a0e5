#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rlab/types.hpp"
#include "rlab/util.hpp"

namespace rlab {

struct SingularPointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace surfaces {

enum class SurfaceKind { Sphere, Paraboloid, Hyperboloid, Cone, GraphFiniteType };

std::string kind_name(SurfaceKind k);

// Graph function with optional analytic partials; missing partials fall
// back to central finite differences.
struct GraphFn {
    std::function<double(double, double)> f;
    std::function<double(double, double)> f1, f2, f11, f12, f22;

    double operator()(double x, double y) const { return f(x, y); }
    bool has_analytic_derivs() const { return static_cast<bool>(f11); }
};

enum class GraphMeasure {
    Area,           // sqrt(1 + |grad f|^2) d(chart)
    ChartLebesgue,  // plain d(chart); used by the 1-D slice estimates
};

// Parametrized hypersurface patch.  Chart conventions:
//   Sphere       angles; n=2: theta in [0,2pi); n=3: (theta,phi) polar/azimuth;
//                n>3: iterated angular coordinates.
//   Paraboloid   xi' in a centered box, point (xi', |xi'|^2/2).
//   Hyperboloid  xi' in a centered box, point (xi', sqrt(1+|xi'|^2)).
//   Cone         xi in the annulus r0 <= |xi| <= r1 of R^n, point (xi, |xi|).
//   Graph        n=3: (xi1,xi2) box, point (xi1,xi2,f); n=2: xi1 interval.
struct SurfaceDescriptor {
    SurfaceKind kind = SurfaceKind::Sphere;
    int n = 2;  // slice-convention dimension; the cone is ambient n+1

    // graph patch half-widths per chart axis (also parab/hyperb charts)
    double half_width = 1.0;
    // cone truncation radii
    double r0 = 0.5, r1 = 2.0;
    // finite-type graph data
    GraphFn graph;
    int graph_k = 0;
    GraphMeasure graph_measure = GraphMeasure::Area;

    int chart_dim() const;
    int ambient_dim() const { return kind == SurfaceKind::Cone ? n + 1 : n; }

    // Chart point -> ambient point.
    Vec embed(const Vec& chart_pt) const;
    bool in_patch(const Vec& chart_pt) const;

    static SurfaceDescriptor sphere(int n);
    static SurfaceDescriptor paraboloid(int n, double half_width);
    static SurfaceDescriptor hyperboloid(int n, double half_width);
    static SurfaceDescriptor cone(int n, double r0 = 0.5, double r1 = 2.0);
    static SurfaceDescriptor graph2(GraphFn f, int k, double half_width,
                                    GraphMeasure m = GraphMeasure::Area);
    static SurfaceDescriptor graph3(GraphFn f, int k, double half_width,
                                    GraphMeasure m = GraphMeasure::Area);
};

// Density of d(sigma) against the chart's coordinate measure.
// Throws DomainError outside the patch, SingularPointError at the cone tip.
double measure_weight(const SurfaceDescriptor& s, const Vec& chart_pt);

// Finite-difference configuration.  The step is step_rel * scale with
// scale defaulting to the patch diameter.
struct FdOptions {
    double step_rel = 1e-4;
    double scale = 1.0;
    double step() const { return step_rel * scale; }
};

namespace fd {
double gradient1(const GraphFn& f, double x, double y, const FdOptions& o);
double gradient2(const GraphFn& f, double x, double y, const FdOptions& o);
struct Hess {
    double f11, f12, f22;
};
Hess hessian(const GraphFn& f, double x, double y, const FdOptions& o);
}  // namespace fd

// K = (f11 f22 - f12^2) / (1 + |grad f|^2)^2.
double gaussian_curvature(const GraphFn& f, double x, double y, const FdOptions& o = {});

// Type of a point: smallest order of tangency breaking, probed along a
// fan of 32 chart directions with a dyadic step ladder.
struct ContactOrder {
    int k = 0;
    bool at_least = false;  // true -> "type >= max_k", no break detected
};
ContactOrder contact_order(const GraphFn& f, double x, double y, int max_k,
                           const FdOptions& o = {});

// Quadrature grid over a surface patch.
struct SurfaceGrid {
    SurfaceDescriptor desc;
    int ambient_dim = 0;
    std::vector<Vec> points;   // ambient coordinates
    std::vector<Vec> chart;    // chart coordinates
    std::vector<double> weights;
    double max_spacing = 0.0;  // max ambient node spacing (aliasing rule)
    double max_freq = 0.0;     // max |ambient point|

    std::size_t size() const { return points.size(); }
    double total_measure() const;
};

// Midpoint product grids; `res` is the node count along the leading chart
// axis (other axes are scaled to keep spacings comparable).
SurfaceGrid build_grid(const SurfaceDescriptor& s, int res);

}  // namespace surfaces
}  // namespace rlab
