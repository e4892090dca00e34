#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "anisomin/integrand.hpp"
#include "anisomin/types.hpp"

namespace anisomin {

/// Position and first/second partial derivatives of a chart at (u, v).
struct ChartJet {
    Vec3 x = Vec3::Zero();
    Vec3 xu = Vec3::Zero();
    Vec3 xv = Vec3::Zero();
    Vec3 xuu = Vec3::Zero();
    Vec3 xuv = Vec3::Zero();
    Vec3 xvv = Vec3::Zero();
};

class Chart {
public:
    virtual ~Chart() = default;
    virtual ChartJet jet(double u, double v) const = 0;
};

struct ParamRect {
    double u0 = 0.0;
    double u1 = 1.0;
    double v0 = 0.0;
    double v1 = 1.0;
};

enum class Side { UMin = 0, UMax = 1, VMin = 2, VMax = 3 };

/// What the patch stands for once its ends are compactified. Ends are the
/// points added at infinity; each non-periodic side of the parameter rectangle
/// is assigned to one end (or -1 when the side is not an end).
struct PatchTopology {
    std::string name;
    int genus = 0;
    int euler_characteristic = 2;
    bool planar = false;
    std::array<int, 4> side_end{-1, -1, -1, -1};
    std::vector<int> end_branch_orders;
    std::vector<Vec3> end_normals;
};

/// A chart sampled on a regular (Nu x Nv) grid over a parameter rectangle.
///
/// Nodes are stored row-major with v as the slow index: node(i, j) = j * Nu + i.
/// With `periodic_u` the u-direction wraps: Nu distinct columns span one period.
/// The unit normal is orientation * (X_u x X_v) / |X_u x X_v|.
class SurfacePatch {
public:
    SurfacePatch(std::shared_ptr<const Chart> chart, ParamRect domain, int nu, int nv, bool periodic_u,
                 int orientation, PatchTopology topology);

    const Chart& chart() const { return *chart_; }
    std::shared_ptr<const Chart> chart_ptr() const { return chart_; }
    ChartJet jet(double u, double v) const { return chart_->jet(u, v); }

    const ParamRect& domain() const noexcept { return domain_; }
    const PatchTopology& topology() const noexcept { return topology_; }
    int nu() const noexcept { return nu_; }
    int nv() const noexcept { return nv_; }
    int node_count() const noexcept { return nu_ * nv_; }
    int node(int i, int j) const noexcept { return j * nu_ + i; }
    bool periodic_u() const noexcept { return periodic_u_; }
    int orientation() const noexcept { return orientation_; }
    double hu() const noexcept { return hu_; }
    double hv() const noexcept { return hv_; }
    double u_at(int i) const noexcept { return domain_.u0 + i * hu_; }
    double v_at(int j) const noexcept { return domain_.v0 + j * hv_; }

    /// True for nodes on a non-periodic side of the rectangle.
    bool on_boundary(int i, int j) const noexcept;
    bool on_boundary(int node) const noexcept { return on_boundary(node % nu_, node / nu_); }

    Vec3 normal(double u, double v) const;

    /// Two triangles per grid cell (diagonal from (i,j) to (i+1,j+1)); periodic
    /// columns wrap. Indices are node ids.
    std::vector<std::array<int, 3>> triangles() const;

    /// Composite trapezoid weights in parameter space (du dv), per node.
    std::vector<double> parameter_weights() const;

    /// Throws DegenerateImmersion if |X_u x X_v| <= 1e-10 at any node.
    void validate() const;

    /// Same chart and topology on a different grid.
    SurfacePatch regridded(int nu, int nv) const;

private:
    std::shared_ptr<const Chart> chart_;
    ParamRect domain_;
    int nu_;
    int nv_;
    bool periodic_u_;
    int orientation_;
    PatchTopology topology_;
    double hu_;
    double hv_;
};

/// First-order frame data of a chart at one point.
struct LocalFrame {
    Vec3 nu = Vec3::UnitZ();
    Vec3 e1 = Vec3::UnitX();
    Vec3 e2 = Vec3::UnitY();
    Mat32 jacobian = Mat32::Zero();
    Mat2 metric = Mat2::Identity();
    double area_element = 1.0;
};

LocalFrame local_frame(const ChartJet& jet, int orientation);

struct CurvatureNode {
    Vec3 position = Vec3::Zero();
    Vec3 nu = Vec3::UnitZ();
    Vec3 e1 = Vec3::UnitX();
    Vec3 e2 = Vec3::UnitY();
    Mat2 S = Mat2::Zero();        // shape operator in (e1, e2)
    Mat2 A = Mat2::Identity();    // A_gamma(nu) in (e1, e2)
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double H_gamma = 0.0;
    double K_sigma = 0.0;
    double K_gamma = 0.0;
    double aniso_pairing = 0.0;   // tr(A S S)
    double norm_A_sq = 0.0;       // tr(S S)
    double a1 = 1.0;              // <A e, e> along the kappa1 direction
    double a2 = 1.0;              // <A e, e> along the kappa2 direction
    double area_weight = 0.0;     // trapezoid weight times area element
};

struct CurvatureField {
    std::shared_ptr<const SurfacePatch> patch;
    std::vector<CurvatureNode> nodes;
    double curvature_scale = 1.0;  // max |kappa| (1 for flat patches)

    // |H_gamma| below tol_rel * curvature_scale.
    bool is_minimal_node(std::size_t k, double tol_rel = 1e-6) const {
        return std::abs(nodes[k].H_gamma) < tol_rel * curvature_scale;
    }
    double sup_abs_H_gamma() const;
    double total_curvature() const;  // integral of -K_sigma
};

/// Node-wise shape operator, principal curvatures and anisotropic curvatures.
/// Principal-frame ties resolve to the direction of X_u.
CurvatureField curvature_field(const SurfacePatch& patch, const IntegrandSpec& spec);

/// Trapezoid quadrature of gamma(nu) dSigma over the grid.
double anisotropic_energy(const SurfacePatch& patch, const IntegrandSpec& spec);

struct FirstVariation {
    double numeric_derivative = 0.0;
    double minus_integral_Hu = 0.0;
    double discrepancy = 0.0;
};

/// Central difference in t of the energy of X + t u nu against -int H_gamma u.
/// `u_field` is given on the patch nodes and must vanish on the boundary.
FirstVariation first_variation_check(const SurfacePatch& patch, const IntegrandSpec& spec,
                                     const std::vector<double>& u_field, double dt);

/// Smooth bump supported in the middle of the parameter rectangle (periodic
/// directions get a full-period factor of 1). Vanishes on every boundary node.
std::vector<double> interior_bump(const SurfacePatch& patch, double extent = 0.6);

}  // namespace anisomin
