#pragma once

#include <optional>
#include <vector>

#include "anisomin/integrand.hpp"
#include "anisomin/surface.hpp"

namespace anisomin {

struct CriticalPoint {
    Vec2 location = Vec2::Zero();  // (u, v)
    Vec3 nu = Vec3::UnitZ();
    int branch_order = 0;
    double detection_radius = 0.0;
};

struct CriticalSet {
    std::vector<CriticalPoint> points;
    int boundary_clusters = 0;  // flat clusters touching a non-periodic side, not classified
    double flat_tol = 0.0;
};

/// Gaussian curvature of the chart at an arbitrary parameter point.
double gauss_curvature_at(const SurfacePatch& patch, double u, double v);

/// Clusters of nodes with |K| < flat_tol (8-connected, periodic in u), each
/// reduced to its centroid with its branch order attached. flat_tol <= 0 picks
/// 1e-5 max|K|. A cluster spanning 5 or more grid spacings throws
/// NonDiscreteCriticalSet.
CriticalSet critical_set(const CurvatureField& field, double flat_tol = 0.0);

/// Local degree of the Gauss map on a parameter circle around the point,
/// through stereographic projection from -nu(p), minus one. Uses
/// `point.detection_radius` (three grid spacings when zero). Throws
/// AmbiguousWinding.
int branch_order(const SurfacePatch& patch, const CriticalPoint& point, int samples = 64);

struct Degrees {
    double total_curvature = 0.0;        // int -K
    double total_gamma_curvature = 0.0;  // int -K_gamma
    double wulff_area = 0.0;
    double raw_nu = 0.0;
    double raw_nu_gamma = 0.0;
    int deg_nu = 0;
    int deg_nu_gamma = 0;
    double residue_nu = 0.0;
    double residue_nu_gamma = 0.0;
    bool orientation_reversed = false;   // raw_nu < 0: positive curvature dominates
};

Degrees degrees(const CurvatureField& field, const WulffMesh& wulff);

struct PseudographVertex {
    enum class Kind { Critical, End, Boundary, Artificial };
    Kind kind = Kind::Artificial;
    Vec2 uv = Vec2::Zero();
    int branch_order = 0;
    int end = -1;
};

struct PseudographEdge {
    int a = 0;
    int b = 0;
    std::vector<Vec2> polyline;
    bool closed = false;
};

struct Pseudograph {
    Vec3 axis = Vec3::UnitZ();
    std::vector<PseudographVertex> vertices;
    std::vector<PseudographEdge> edges;
    std::vector<Vec2> nodal_points;  // every traced zero crossing
    int n_components_complement = 0;
    int genus = 0;
    double band_tol = 0.0;
    bool degenerate = false;         // empty nodal set or no discrete critical set
};

struct PseudographOptions {
    double band_tol = 0.0;  // <= 0: 2 h max|grad phi|
    double flat_tol = 0.0;  // <= 0: critical_set default
};

/// Zero set of phi = <nu, axis> traced by marching squares. Curves are cut at
/// the detection disks of critical points lying on the nodal set; curves that
/// reach a side mapped to an end attach to that end; closed loops with no
/// vertex get one artificial vertex. Throws GrazingCircle when more than 20%
/// of nodes have |phi| < band_tol.
Pseudograph pseudograph_extract(const SurfacePatch& patch, const IntegrandSpec& spec, const Vec3& axis, int genus,
                                const PseudographOptions& options = {});

/// Sign-domain count of phi = <nu, axis> over the grid (4-connected, periodic in u).
int nodal_domains(const SurfacePatch& patch, const Vec3& axis);

/// sum b + 1 - 2 g
int index_lower_bound(const Pseudograph& pg);

/// chi - 2 deg + sum b
double riemann_hurwitz_defect(int euler_characteristic, int deg_nu, const std::vector<int>& branch_orders);

struct EulerCount {
    int v = 0;
    int e = 0;
    int n = 0;
    int slack = 0;
    bool degenerate = false;
};

EulerCount euler_inequality_check(const Pseudograph& pg);

struct GaussReport {
    Degrees degrees;
    std::vector<CriticalPoint> branch_points;
    int boundary_clusters = 0;
    std::vector<int> end_branch_orders;
    double rh_defect = 0.0;
    std::vector<Pseudograph> pseudographs;  // one per axis that produced one
    std::vector<int> lower_bounds;          // per entry of `pseudographs`
    int lower_bound = 0;                    // largest of `lower_bounds`
    struct {
        int neg_Lgamma = 0;
        int deg_nu_gamma = 0;
        double c_prime = 0.0;
    } upper_chain;
    bool degenerate = false;
};

/// Degrees, branch points, Riemann-Hurwitz defect and one pseudograph per
/// axis. A non-discrete critical set (planar patch) gives a degenerate report;
/// pseudograph errors propagate. `upper_chain.neg_Lgamma` is left at zero.
GaussReport gauss_report(const SurfacePatch& patch, const IntegrandSpec& spec, const std::vector<Vec3>& axes,
                         int genus, const PseudographOptions& options = {});

}  // namespace anisomin
