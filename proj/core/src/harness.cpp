#include "anisomin/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "anisomin/error.hpp"
#include "anisomin/fixtures.hpp"
#include "anisomin/io.hpp"

namespace anisomin {

namespace {

// Anchor strings name the statement each check exercises.
constexpr const char* kMinimality = "anisotropic mean curvature vanishes";
constexpr const char* kSignLaw = "Gauss curvature is nonpositive";
constexpr const char* kMetricBounds = "inverse graph metric between I/W^2 and I";
constexpr const char* kGraphEstimate = "graph curvature bounded by the Hessian";
constexpr const char* kTangency = "Cahn-Hoffman map differential is tangent";
constexpr const char* kSandwich = "pairing between -2K_gamma/Lambda and -2K_gamma/lambda";
constexpr const char* kFormComparison = "Q bounded below by lambda Q_gamma";
constexpr const char* kUpperChain = "index bounded by the anisotropic Gauss map degree";
constexpr const char* kCourant = "index bounded below by nodal domains";
constexpr const char* kJacobi = "normal components are Jacobi fields";
constexpr const char* kRiemannHurwitz = "Riemann-Hurwitz for the Gauss map";
constexpr const char* kEuler = "nodal pseudograph satisfies v - e + n >= 2 - 2g";
constexpr const char* kLowerBound = "index bounded below by branching";
constexpr const char* kLowGenus = "genus 0 and 1 surfaces are unstable";
constexpr const char* kInertia = "index counted by inertia";

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Check make_check(std::string name, const char* anchor) {
    Check c;
    c.name = std::move(name);
    c.anchor = anchor;
    return c;
}

Check degenerate(Check c, std::string note) {
    c.status = Check::Status::Degenerate;
    c.note = std::move(note);
    return c;
}

// lhs <= rhs + tolerance
void verdict_le(Check& c, double lhs, double rhs, double tol) {
    c.lhs = lhs;
    c.rhs = rhs;
    c.tolerance = tol;
    c.status = (lhs <= rhs + tol) ? Check::Status::Pass : Check::Status::Fail;
}

// Runs `body` on a fresh check; an exception becomes a failure (or a
// degenerate verdict for the errors that mean "not applicable here").
template <class F>
void guarded(std::vector<Check>& out, Check c, F&& body) {
    try {
        body(c);
    } catch (const Error& e) {
        const bool benign = e.code() == ErrorCode::GrazingCircle || e.code() == ErrorCode::NonDiscreteCriticalSet;
        c.status = benign ? Check::Status::Degenerate : Check::Status::Fail;
        c.note = e.what();
    } catch (const std::exception& e) {
        c.status = Check::Status::Fail;
        c.note = e.what();
    }
    out.push_back(std::move(c));
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Every non-periodic side is an end: the patch stands for a complete surface.
bool represents_complete_surface(const SurfacePatch& p) {
    const auto& se = p.topology().side_end;
    for (int s = 0; s < 4; ++s) {
        if (p.periodic_u() && s < 2) continue;
        if (se[static_cast<std::size_t>(s)] < 0) return false;
    }
    return true;
}

// Near a node the surface is a graph over the coordinate plane orthogonal to
// the largest normal component.
struct LocalGraph {
    double w2 = 1.0;  // 1 + |grad u|^2
    Mat2 hess = Mat2::Zero();
    Mat2 ginv = Mat2::Identity();
};

LocalGraph local_graph(const CurvatureNode& n) {
    int k = 0;
    n.nu.cwiseAbs().maxCoeff(&k);
    const int a = (k + 1) % 3;
    const int b = (k + 2) % 3;
    const double nk = n.nu(k);
    const Vec2 grad(-n.nu(a) / nk, -n.nu(b) / nk);
    LocalGraph g;
    g.w2 = 1.0 + grad.squaredNorm();
    const Mat2 metric = Mat2::Identity() + grad * grad.transpose();
    g.ginv = metric.inverse();
    Mat32 e;
    e.col(0) = n.e1;
    e.col(1) = n.e2;
    const Mat3 s_amb = e * n.S * e.transpose();
    Vec3 ta = Vec3::Zero();
    Vec3 tb = Vec3::Zero();
    ta(a) = 1.0;
    ta(k) = grad(0);
    tb(b) = 1.0;
    tb(k) = grad(1);
    const double w = std::sqrt(g.w2);
    g.hess(0, 0) = w * ta.dot(s_amb * ta);
    g.hess(0, 1) = g.hess(1, 0) = w * ta.dot(s_amb * tb);
    g.hess(1, 1) = w * tb.dot(s_amb * tb);
    return g;
}

double max_abs_k(const CurvatureField& field) {
    double m = 0.0;
    for (const auto& n : field.nodes) m = std::max(m, std::abs(n.K_sigma));
    return m;
}

}  // namespace

ordered_json to_json(const ExperimentConfig& c) {
    ordered_json j;
    j["surface"] = c.surface;
    j["integrand"] = c.integrand;
    j["grid"] = c.grid;
    ordered_json domains = ordered_json::array();
    for (const auto& d : c.domains) domains.push_back({d.u0, d.u1, d.v0, d.v1});
    j["domains"] = domains;
    ordered_json axes = ordered_json::array();
    for (const auto& a : c.axes) axes.push_back({a(0), a(1), a(2)});
    j["axes"] = axes;
    j["genus"] = c.genus ? ordered_json(*c.genus) : ordered_json(nullptr);
    j["tolerances"] = {{"minimal_accept", c.tolerances.minimal_accept},
                       {"residual", c.tolerances.residual},
                       {"flat_tol", c.tolerances.flat_tol},
                       {"band_tol", c.tolerances.band_tol},
                       {"jacobi", c.tolerances.jacobi}};
    j["output"] = c.output;
    j["seed"] = c.seed;
    j["k"] = c.k;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
    ExperimentConfig c;
    try {
        c.surface = j.value("surface", c.surface);
        c.integrand = j.value("integrand", c.integrand);
        c.grid = j.value("grid", c.grid);
        if (j.contains("domains")) {
            for (const auto& d : j.at("domains")) {
                if (d.size() != 4) throw Error(ErrorCode::InvalidArgument, "a domain needs 4 numbers");
                c.domains.push_back({d[0].get<double>(), d[1].get<double>(), d[2].get<double>(), d[3].get<double>()});
            }
        }
        if (j.contains("axes")) {
            c.axes.clear();
            for (const auto& a : j.at("axes")) {
                if (a.size() != 3) throw Error(ErrorCode::InvalidArgument, "an axis needs 3 numbers");
                const Vec3 v(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
                if (v.norm() < 1e-12) throw Error(ErrorCode::InvalidArgument, "zero axis");
                c.axes.push_back(std::abs(v.norm() - 1.0) < 1e-14 ? v : v.normalized());
            }
        }
        if (j.contains("genus") && !j.at("genus").is_null()) c.genus = j.at("genus").get<int>();
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            c.tolerances.minimal_accept = t.value("minimal_accept", c.tolerances.minimal_accept);
            c.tolerances.residual = t.value("residual", c.tolerances.residual);
            c.tolerances.flat_tol = t.value("flat_tol", c.tolerances.flat_tol);
            c.tolerances.band_tol = t.value("band_tol", c.tolerances.band_tol);
            c.tolerances.jacobi = t.value("jacobi", c.tolerances.jacobi);
        }
        c.output = j.value("output", c.output);
        c.seed = j.value("seed", c.seed);
        c.k = j.value("k", c.k);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("bad config: ") + e.what());
    }
    if (c.grid < 8) throw Error(ErrorCode::InvalidArgument, "grid must be at least 8");
    if (c.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    return c;
}

SurfacePatch load_surface(const std::string& surface, int grid) {
    if (ends_with(surface, ".json")) {
        const GraphSolution sol = solution_from_json(nlohmann::json::parse(read_text_file(surface)));
        return lift(sol);
    }
    return make_fixture(surface, grid);
}

std::vector<ParamRect> default_domains(const SurfacePatch& patch) {
    const ParamRect& d = patch.domain();
    const double cu = 0.5 * (d.u0 + d.u1), wu = 0.5 * (d.u1 - d.u0);
    const double cv = 0.5 * (d.v0 + d.v1), wv = 0.5 * (d.v1 - d.v0);
    std::vector<ParamRect> out;
    for (double f : {0.5, 0.8}) {
        ParamRect r = d;
        if (!patch.periodic_u()) {
            r.u0 = cu - f * wu;
            r.u1 = cu + f * wu;
        }
        r.v0 = cv - f * wv;
        r.v1 = cv + f * wv;
        out.push_back(r);
    }
    out.push_back(d);
    return out;
}

Acceptance accept_candidate(const SurfacePatch& patch, const IntegrandSpec& spec, double minimal_accept) {
    const CurvatureField field = curvature_field(patch, spec);
    Acceptance a;
    a.sup_H_gamma = field.sup_abs_H_gamma();
    a.curvature_scale = field.curvature_scale;
    a.relative = a.sup_H_gamma / a.curvature_scale;
    a.accepted = a.relative <= minimal_accept;
    return a;
}

std::string_view to_string(Check::Status s) {
    switch (s) {
        case Check::Status::Pass: return "pass";
        case Check::Status::Fail: return "fail";
        case Check::Status::Degenerate: return "degenerate";
    }
    return "fail";
}

bool VerdictReport::all_pass() const {
    if (!acceptance.accepted) return false;
    return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Check::Status::Fail; });
}

const std::vector<std::string>& required_anchors() {
    static const std::vector<std::string> anchors{
        kMinimality, kSignLaw, kMetricBounds, kGraphEstimate, kTangency, kSandwich, kFormComparison,
        kCourant,    kJacobi,  kRiemannHurwitz, kEuler,       kLowerBound, kLowGenus};
    return anchors;
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

VerdictReport verify_bounds(const ExperimentConfig& config, const VerifyOptions& options) {
    VerdictReport r;
    r.surface = config.surface;
    r.integrand = config.integrand;
    ExperimentConfig hashed = config;
    hashed.output.clear();  // where the report goes is not part of the experiment
    r.config_hash = fnv1a_hex(to_json(hashed).dump() + std::string(kVersion));

    const IntegrandSpec spec = IntegrandSpec::parse(config.integrand);
    const SurfacePatch patch = load_surface(config.surface, config.grid);
    patch.validate();
    r.surface = patch.topology().name.empty() ? config.surface : patch.topology().name;
    r.integrand = spec.to_string();
    r.constants = anisotropy_constants(spec);
    r.genus = config.genus.value_or(patch.topology().genus);

    const CurvatureField field = curvature_field(patch, spec);
    const double scale = field.curvature_scale;
    r.acceptance.sup_H_gamma = field.sup_abs_H_gamma();
    r.acceptance.curvature_scale = scale;
    r.acceptance.relative = r.acceptance.sup_H_gamma / scale;
    r.acceptance.accepted = r.acceptance.relative <= config.tolerances.minimal_accept;
    r.planar = patch.topology().planar || max_abs_k(field) <= 1e-14 * scale * scale;
    const bool complete = represents_complete_surface(patch);
    auto& checks = r.checks;

    {
        Check c = make_check("candidate-acceptance", kMinimality);
        verdict_le(c, r.acceptance.relative, config.tolerances.minimal_accept, 0.0);
        c.note = "sup|H_gamma| / curvature scale";
        checks.push_back(c);
    }
    if (!r.acceptance.accepted) return r;

    guarded(checks, make_check("first-variation", kMinimality), [&](Check& c) {
        const std::vector<double> bump = interior_bump(patch);
        const FirstVariation fv = first_variation_check(patch, spec, bump, 1e-3);
        double mass = 0.0;
        for (std::size_t k = 0; k < bump.size(); ++k) mass += std::abs(bump[k]) * field.nodes[k].area_weight;
        verdict_le(c, std::abs(fv.discrepancy), 0.0, 1e-3 * scale * mass);
        c.note = "|dE/dt + int H_gamma u|";
    });

    guarded(checks, make_check("gauss-curvature-sign", kSignLaw), [&](Check& c) {
        double kmax = -std::numeric_limits<double>::infinity();
        for (const auto& n : field.nodes) kmax = std::max(kmax, n.K_sigma / (scale * scale));
        verdict_le(c, kmax, 0.0, 1e-6);
        c.note = "max K / scale^2";
    });

    guarded(checks, make_check("graph-metric-bounds", kMetricBounds), [&](Check& c) {
        double worst = 0.0;
        for (const auto& n : field.nodes) {
            const LocalGraph g = local_graph(n);
            Eigen::SelfAdjointEigenSolver<Mat2> es(g.ginv);
            worst = std::max(worst, 1.0 / g.w2 - es.eigenvalues()(0));
            worst = std::max(worst, es.eigenvalues()(1) - 1.0);
        }
        verdict_le(c, worst, 0.0, 1e-10);
        c.note = "largest eigenvalue excursion of g^-1 outside [1/W^2, 1]";
    });

    guarded(checks, make_check("graph-curvature-estimate", kGraphEstimate), [&](Check& c) {
        double worst = 0.0;
        for (const auto& n : field.nodes) {
            const LocalGraph g = local_graph(n);
            const double hess2 = g.hess.squaredNorm();
            const double a2 = n.norm_A_sq;
            const double floor = 1e-14 * scale * scale;
            const double lower = hess2 / (g.w2 * g.w2 * g.w2);
            const double upper = hess2 / g.w2;
            worst = std::max(worst, (lower - a2) / std::max(a2, floor));
            worst = std::max(worst, (a2 - upper) / std::max(upper, floor));
        }
        verdict_le(c, worst, 0.0, 1e-8);
        c.note = "relative excursion of |A|^2 outside [|Hess|^2/W^6, |Hess|^2/W^2]";
    });

    guarded(checks, make_check("cahn-hoffman-tangency", kTangency), [&](Check& c) {
        std::mt19937 rng(config.seed);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
        const double h = 1e-6;
        const std::size_t stride = std::max<std::size_t>(1, field.nodes.size() / 2000);
        double worst = 0.0;
        for (std::size_t k = 0; k < field.nodes.size(); k += stride) {
            const Vec3 nu = field.nodes[k].nu;
            const auto [e1, e2] = tangent_frame(nu);
            const double t = angle(rng);
            const Vec3 x = std::cos(t) * e1 + std::sin(t) * e2;
            const Vec3 d = (cahn_hoffman(spec, (nu + h * x).normalized()) -
                            cahn_hoffman(spec, (nu - h * x).normalized())) / (2.0 * h);
            worst = std::max(worst, std::abs(d.dot(nu)));
        }
        verdict_le(c, worst, 0.0, 1e-5);
        c.note = "max |<d xi(X), nu>| at node normals";
    });

    guarded(checks, make_check("pairing-sandwich", kSandwich), [&](Check& c) {
        const double lam = r.constants.lambda_gamma, Lam = r.constants.Lambda_gamma;
        double worst = 0.0;
        int used = 0;
        for (std::size_t k = 0; k < field.nodes.size(); ++k) {
            if (!field.is_minimal_node(k)) continue;
            const auto& n = field.nodes[k];
            const double lo = -2.0 / Lam * n.K_gamma, hi = -2.0 / lam * n.K_gamma;
            worst = std::max({worst, (lo - n.aniso_pairing) / (scale * scale), (n.aniso_pairing - hi) / (scale * scale)});
            ++used;
        }
        verdict_le(c, worst, 0.0, 1e-8);
        c.note = std::to_string(used) + " gamma-minimal nodes";
    });

    // Spectral stage.
    std::vector<ParamRect> domains = config.domains.empty() ? default_domains(patch) : config.domains;
    std::optional<JacobiDiscretization> disc;
    std::string spectral_error;
    try {
        disc = assemble(patch, spec, options.potential_sign);
        r.spectral = morse_index_exhaustion(*disc, domains, config.k);
        r.comparison = comparison_operator_counts(*disc, domains, config.k);
    } catch (const std::exception& e) {
        spectral_error = e.what();
    }
    std::optional<int> index;
    std::string index_note;
    if (r.spectral) {
        if (r.spectral->stabilized_index) {
            index = *r.spectral->stabilized_index;
            index_note = "stabilized index";
        } else {
            index = r.spectral->morse_index.back();
            index_note = "index on the largest domain (not stabilized)";
        }
    }
    auto need_spectrum = [&]() {
        if (!r.spectral) throw Error(ErrorCode::SolverFailure, "spectral stage failed: " + spectral_error);
    };

    guarded(checks, make_check("comparison-form", kFormComparison), [&](Check& c) {
        if (!disc) throw Error(ErrorCode::SolverFailure, "assembly failed: " + spectral_error);
        std::mt19937 rng(config.seed);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        const Eigen::Index n = disc->mass.size();
        double worst = std::numeric_limits<double>::infinity();
        for (int s = 0; s < 100; ++s) {
            Eigen::VectorXd u(n);
            for (Eigen::Index i = 0; i < n; ++i) u(i) = disc->dirichlet_mask[static_cast<std::size_t>(i)] ? 0.0 : uni(rng);
            const double m = mass_norm_sq(*disc, u);
            worst = std::min(worst, (q_form(*disc, u) - disc->lambda_gamma * q_gamma_form(*disc, u)) / m);
        }
        c.lhs = worst;
        c.rhs = 0.0;
        c.tolerance = 1e-9;
        c.status = worst >= -1e-9 ? Check::Status::Pass : Check::Status::Fail;
        c.note = "min over 100 random fields of (Q - lambda Q_gamma) / |u|^2";
    });

    guarded(checks, make_check("index-upper-chain", kUpperChain), [&](Check& c) {
        need_spectrum();
        if (r.comparison.size() != domains.size()) throw Error(ErrorCode::SolverFailure, "comparison counts missing");
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t d = 0; d < domains.size(); ++d) {
            worst = std::max(worst, static_cast<double>(r.spectral->morse_index[d] - r.comparison[d].neg_Lgamma));
            worst = std::max(worst, static_cast<double>(r.comparison[d].neg_L - r.comparison[d].neg_Lgamma));
        }
        verdict_le(c, worst, 0.0, 0.0);
        c.note = "max over domains of index - Neg(L_gamma)";
    });

    guarded(checks, make_check("anisotropic-degree-bracket", kUpperChain), [&](Check& c) {
        const WulffMesh w = wulff_mesh(spec, 5);
        const Degrees d = degrees(field, w);
        r.gauss.degrees = d;
        const double lam2 = r.constants.lambda_gamma * r.constants.lambda_gamma;
        const double Lam2 = r.constants.Lambda_gamma * r.constants.Lambda_gamma;
        const double lo = lam2 * d.total_curvature / w.area, hi = Lam2 * d.total_curvature / w.area;
        const double tol = 1e-9 * std::max(std::abs(hi), 1e-12);
        c.lhs = d.raw_nu_gamma;
        c.rhs = hi;
        c.tolerance = tol;
        c.status = (d.raw_nu_gamma >= lo - tol && d.raw_nu_gamma <= hi + tol) ? Check::Status::Pass : Check::Status::Fail;
        c.note = "raw deg(nu_gamma) within [" + fmt(lo) + ", " + fmt(hi) + "]; int -K_gamma = " +
                 fmt(d.total_gamma_curvature) + " within [" + fmt(lam2 * d.total_curvature) + ", " +
                 fmt(Lam2 * d.total_curvature) + "]";
    });

    guarded(checks, make_check("index-inertia-agreement", kInertia), [&](Check& c) {
        need_spectrum();
        int worst = 0;
        for (std::size_t d = 0; d < domains.size(); ++d) {
            worst = std::max(worst, std::abs(r.spectral->morse_index[d] - r.spectral->inertia_index[d]));
        }
        verdict_le(c, worst, 0.0, 0.0);
        c.note = "max |eigenvalue count - LDL^T count|";
    });

    std::string gauss_blocker;
    if (r.planar) gauss_blocker = "planar patch";
    else if (!complete) gauss_blocker = "patch has a boundary that is not an end";

    for (const Vec3& axis : config.axes) {
        guarded(checks, make_check("translation-jacobi-field[" + axis_label(axis) + "]", kJacobi), [&](Check& c) {
            if (!disc) throw Error(ErrorCode::SolverFailure, "assembly failed: " + spectral_error);
            const JacobiResidual jr = jacobi_field_residual(*disc, axis);
            if (r.spectral) {
                auto& list = r.spectral->jacobi_residuals;
                const bool known = std::any_of(list.begin(), list.end(),
                                               [&](const JacobiResidual& x) { return (x.axis - axis).norm() < 1e-14; });
                if (!known) list.push_back(jr);
            }
            if (r.planar && std::isnan(jr.relative_residual)) {
                c = degenerate(c, "normal component is constant");
                return;
            }
            verdict_le(c, jr.relative_residual, 0.0, config.tolerances.jacobi);
            c.note = "relative weak residual of <nu, a>";
        });
    }

    for (const Vec3& axis : config.axes) {
        guarded(checks, make_check("courant-nodal-bound[" + axis_label(axis) + "]", kCourant), [&](Check& c) {
            if (!gauss_blocker.empty()) {
                c = degenerate(c, gauss_blocker);
                return;
            }
            need_spectrum();
            const int n = nodal_domains(patch, axis);
            verdict_le(c, n - 1, *index, 0.0);
            c.note = "nodal domains - 1 vs " + index_note;
        });
    }

    // Gauss stage.
    PseudographOptions pg_options;
    pg_options.band_tol = config.tolerances.band_tol;
    pg_options.flat_tol = config.tolerances.flat_tol;
    r.gauss.degenerate = !gauss_blocker.empty();
    r.gauss.end_branch_orders = patch.topology().end_branch_orders;
    r.gauss.upper_chain.c_prime = r.constants.c_prime_gamma;
    r.gauss.upper_chain.deg_nu_gamma = r.gauss.degrees.deg_nu_gamma;
    if (!r.comparison.empty()) r.gauss.upper_chain.neg_Lgamma = r.comparison.back().neg_Lgamma;

    guarded(checks, make_check("riemann-hurwitz", kRiemannHurwitz), [&](Check& c) {
        if (!gauss_blocker.empty()) {
            c = degenerate(c, gauss_blocker);
            return;
        }
        const CriticalSet cs = critical_set(field, config.tolerances.flat_tol);
        r.gauss.branch_points = cs.points;
        r.gauss.boundary_clusters = cs.boundary_clusters;
        std::vector<int> orders = r.gauss.end_branch_orders;
        for (const auto& p : cs.points) orders.push_back(p.branch_order);
        const int deg = r.gauss.degrees.deg_nu;
        r.gauss.rh_defect = riemann_hurwitz_defect(patch.topology().euler_characteristic, deg, orders);
        verdict_le(c, std::abs(r.gauss.rh_defect), 0.0, 0.5);
        c.note = "chi - 2 deg(nu) + sum b with deg(nu) = " + std::to_string(deg);
    });

    for (const Vec3& axis : config.axes) {
        const std::string label = axis_label(axis);
        std::optional<Pseudograph> pg;
        std::string pg_error;
        bool pg_benign = false;
        if (gauss_blocker.empty()) {
            try {
                pg = pseudograph_extract(patch, spec, axis, r.genus, pg_options);
            } catch (const Error& e) {
                pg_error = e.what();
                pg_benign = e.code() == ErrorCode::GrazingCircle || e.code() == ErrorCode::NonDiscreteCriticalSet;
            } catch (const std::exception& e) {
                pg_error = e.what();
            }
        }
        auto not_available = [&](Check& c) {
            if (!gauss_blocker.empty()) {
                c = degenerate(c, gauss_blocker);
                return true;
            }
            if (!pg) {
                if (pg_benign) c = degenerate(c, pg_error);
                else {
                    c.status = Check::Status::Fail;
                    c.note = pg_error;
                }
                return true;
            }
            return false;
        };
        int lb = 0;
        if (pg) {
            lb = index_lower_bound(*pg);
            r.gauss.pseudographs.push_back(*pg);
            r.gauss.lower_bounds.push_back(lb);
            r.gauss.lower_bound = std::max(r.gauss.lower_bound, lb);
        }
        guarded(checks, make_check("pseudograph-euler[" + label + "]", kEuler), [&](Check& c) {
            if (not_available(c)) return;
            const EulerCount ec = euler_inequality_check(*pg);
            if (ec.degenerate) {
                c = degenerate(c, "empty nodal set");
                c.lhs = ec.slack;
                return;
            }
            c.lhs = ec.slack;
            c.rhs = 0.0;
            c.status = ec.slack >= 0 ? Check::Status::Pass : Check::Status::Fail;
            c.note = "v=" + std::to_string(ec.v) + " e=" + std::to_string(ec.e) + " n=" + std::to_string(ec.n);
        });
        guarded(checks, make_check("index-lower-bound[" + label + "]", kLowerBound), [&](Check& c) {
            if (not_available(c)) return;
            need_spectrum();
            c.lhs = lb;
            c.rhs = *index;
            c.status = *index >= lb ? Check::Status::Pass : Check::Status::Fail;
            c.note = "branching lower bound vs " + index_note;
        });
    }

    guarded(checks, make_check("low-genus-instability", kLowGenus), [&](Check& c) {
        if (r.planar) {
            c = degenerate(c, "planar patch");
            return;
        }
        if (!complete) {
            c = degenerate(c, gauss_blocker);
            return;
        }
        if (r.genus > 1) {
            c = degenerate(c, "genus above 1");
            return;
        }
        need_spectrum();
        c.lhs = *index;
        c.rhs = 1.0;
        c.status = *index >= 1 ? Check::Status::Pass : Check::Status::Fail;
        c.note = index_note;
    });

    return r;
}

SelfTestResult self_test(const ExperimentConfig& config) {
    const VerdictReport clean = verify_bounds(config);
    VerifyOptions corrupt;
    corrupt.potential_sign = -1.0;
    const VerdictReport bad = verify_bounds(config, corrupt);
    SelfTestResult out;
    out.clean_pass = clean.all_pass();
    for (const Check& c : bad.checks) {
        if (c.status != Check::Status::Fail) continue;
        const auto it = std::find_if(clean.checks.begin(), clean.checks.end(),
                                     [&](const Check& d) { return d.name == c.name; });
        if (it == clean.checks.end() || it->status != Check::Status::Fail) out.flipped.push_back(c.name);
    }
    out.corruption_detected = !out.flipped.empty();
    return out;
}

}  // namespace anisomin
