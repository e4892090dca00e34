#include "anisomin/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "anisomin/error.hpp"

namespace anisomin {

namespace {

ordered_json vec2(const Vec2& v) { return ordered_json::array({v(0), v(1)}); }

const char* kind_name(PseudographVertex::Kind k) {
    switch (k) {
        case PseudographVertex::Kind::Critical: return "critical";
        case PseudographVertex::Kind::End: return "end";
        case PseudographVertex::Kind::Boundary: return "boundary";
        case PseudographVertex::Kind::Artificial: return "artificial";
    }
    return "artificial";
}

}  // namespace

std::string axis_label(const Vec3& a) {
    for (int i = 0; i < 3; ++i) {
        if (std::abs(a(i) - 1.0) < 1e-12 && std::abs(a((i + 1) % 3)) < 1e-12 && std::abs(a((i + 2) % 3)) < 1e-12) {
            return "e" + std::to_string(i + 1);
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.6g,%.6g,%.6g)", a(0), a(1), a(2));
    return buf;
}

ordered_json to_json(const ParamRect& r) { return ordered_json::array({r.u0, r.u1, r.v0, r.v1}); }

ordered_json to_json(const Vec3& v) { return ordered_json::array({v(0), v(1), v(2)}); }

ordered_json to_json(const AnisotropyConstants& c) {
    ordered_json j;
    j["lambda_gamma"] = c.lambda_gamma;
    j["Lambda_gamma"] = c.Lambda_gamma;
    j["c_gamma"] = c.c_gamma;
    j["c_prime_gamma"] = c.c_prime_gamma;
    j["argmin"] = to_json(c.argmin);
    j["argmax"] = to_json(c.argmax);
    return j;
}

ordered_json to_json(const GraphSolution& s) {
    ordered_json j;
    j["grid"] = ordered_json::array({s.nx, s.ny});
    j["domain"] = to_json(s.domain);
    j["nx"] = s.nx;
    j["ny"] = s.ny;
    j["integrand"] = s.integrand;
    j["converged"] = s.converged;
    j["iterations"] = s.iterations;
    j["residual_linf"] = s.residual_linf;
    j["residual_history"] = s.residual_history;
    j["u"] = s.u;
    return j;
}

GraphSolution solution_from_json(const nlohmann::json& j) {
    GraphSolution s;
    try {
        const auto& d = j.at("domain");
        if (d.size() != 4) throw Error(ErrorCode::InvalidArgument, "domain needs 4 numbers");
        s.domain = {d[0].get<double>(), d[1].get<double>(), d[2].get<double>(), d[3].get<double>()};
        s.nx = j.at("nx").get<int>();
        s.ny = j.at("ny").get<int>();
        s.integrand = j.value("integrand", std::string("const:1"));
        s.converged = j.at("converged").get<bool>();
        s.iterations = j.value("iterations", 0);
        s.residual_linf = j.value("residual_linf", 0.0);
        if (j.contains("residual_history")) s.residual_history = j.at("residual_history").get<std::vector<double>>();
        s.u = j.at("u").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("bad graph solution: ") + e.what());
    }
    if (s.nx < 2 || s.ny < 2 || s.u.size() != static_cast<std::size_t>(s.nx) * static_cast<std::size_t>(s.ny)) {
        throw Error(ErrorCode::InvalidArgument, "graph solution size does not match nx * ny");
    }
    return s;
}

ordered_json to_json(const CurvatureField& field) {
    std::vector<double> h, k, kg;
    for (const auto& n : field.nodes) {
        h.push_back(n.H_gamma);
        k.push_back(n.K_sigma);
        kg.push_back(n.K_gamma);
    }
    ordered_json j;
    j["nodes"] = field.nodes.size();
    j["curvature_scale"] = field.curvature_scale;
    j["sup_H_gamma"] = field.sup_abs_H_gamma();
    j["total_curvature"] = field.total_curvature();
    j["H_gamma"] = h;
    j["K_sigma"] = k;
    j["K_gamma"] = kg;
    return j;
}

ordered_json to_json(const SpectralReport& r) {
    ordered_json j;
    ordered_json domains = ordered_json::array();
    for (const auto& d : r.domains) domains.push_back(to_json(d));
    j["domains"] = domains;
    j["eigenvalues"] = r.eigenvalues;
    j["morse_index"] = r.morse_index;
    j["inertia_index"] = r.inertia_index;
    j["stabilized_index"] = r.stabilized_index ? ordered_json(*r.stabilized_index) : ordered_json(nullptr);
    ordered_json rel = ordered_json::object();
    ordered_json linf = ordered_json::object();
    for (const auto& x : r.jacobi_residuals) {
        rel[axis_label(x.axis)] = x.relative_residual;
        linf[axis_label(x.axis)] = x.linf_residual;
    }
    j["jacobi_residuals"] = rel;
    j["jacobi_linf_residuals"] = linf;
    return j;
}

ordered_json to_json(const std::vector<ComparisonCounts>& c) {
    ordered_json j = ordered_json::array();
    for (const auto& x : c) j.push_back({{"neg_L", x.neg_L}, {"neg_Lgamma", x.neg_Lgamma}});
    return j;
}

ordered_json to_json(const Degrees& d) {
    ordered_json j;
    j["total_curvature"] = d.total_curvature;
    j["total_gamma_curvature"] = d.total_gamma_curvature;
    j["wulff_area"] = d.wulff_area;
    j["raw_deg_nu"] = d.raw_nu;
    j["raw_deg_nu_gamma"] = d.raw_nu_gamma;
    j["deg_nu"] = d.deg_nu;
    j["deg_nu_gamma"] = d.deg_nu_gamma;
    j["residue_nu"] = d.residue_nu;
    j["residue_nu_gamma"] = d.residue_nu_gamma;
    j["orientation_reversed"] = d.orientation_reversed;
    return j;
}

ordered_json to_json(const CriticalPoint& p) {
    ordered_json j;
    j["uv"] = vec2(p.location);
    j["nu"] = to_json(p.nu);
    j["order"] = p.branch_order;
    j["detection_radius"] = p.detection_radius;
    return j;
}

ordered_json to_json(const Pseudograph& pg) {
    ordered_json j;
    j["axis"] = to_json(pg.axis);
    ordered_json verts = ordered_json::array();
    for (const auto& v : pg.vertices) {
        ordered_json jv;
        jv["uv"] = vec2(v.uv);
        jv["order"] = v.branch_order;
        jv["kind"] = kind_name(v.kind);
        if (v.end >= 0) jv["end"] = v.end;
        verts.push_back(jv);
    }
    j["vertices"] = verts;
    ordered_json edges = ordered_json::array();
    for (const auto& e : pg.edges) {
        ordered_json poly = ordered_json::array();
        for (const auto& q : e.polyline) poly.push_back(vec2(q));
        edges.push_back(poly);
    }
    j["edges"] = edges;
    ordered_json ends = ordered_json::array();
    for (const auto& e : pg.edges) ends.push_back({e.a, e.b});
    j["edge_vertices"] = ends;
    j["N"] = pg.n_components_complement;
    j["genus"] = pg.genus;
    j["band_tol"] = pg.band_tol;
    j["nodal_points"] = pg.nodal_points.size();
    j["degenerate"] = pg.degenerate;
    return j;
}

ordered_json to_json(const GaussReport& r) {
    ordered_json j;
    j["degrees"] = to_json(r.degrees);
    ordered_json bp = ordered_json::array();
    for (const auto& p : r.branch_points) bp.push_back(to_json(p));
    j["branch_points"] = bp;
    j["boundary_clusters"] = r.boundary_clusters;
    j["end_branch_orders"] = r.end_branch_orders;
    j["rh_defect"] = r.rh_defect;
    ordered_json pgs = ordered_json::array();
    for (const auto& pg : r.pseudographs) pgs.push_back(to_json(pg));
    j["pseudographs"] = pgs;
    j["lower_bounds"] = r.lower_bounds;
    j["lower_bound"] = r.lower_bound;
    j["upper_chain"] = {{"neg_Lgamma", r.upper_chain.neg_Lgamma},
                        {"deg_nu_gamma", r.upper_chain.deg_nu_gamma},
                        {"c_prime_gamma", r.upper_chain.c_prime},
                        {"constant", "C(gamma) = C(W_gamma) / c'(gamma)"},
                        {"C(W_gamma)", "not computed"}};
    j["degenerate"] = r.degenerate;
    return j;
}

ordered_json to_json(const Check& c) {
    ordered_json j;
    j["name"] = c.name;
    j["anchor"] = c.anchor;
    j["status"] = std::string(to_string(c.status));
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["tolerance"] = c.tolerance;
    j["note"] = c.note;
    return j;
}

ordered_json to_json(const VerdictReport& r) {
    ordered_json j;
    j["surface"] = r.surface;
    j["integrand"] = r.integrand;
    j["accepted"] = {{"accepted", r.acceptance.accepted},
                     {"sup_H_gamma", r.acceptance.sup_H_gamma},
                     {"curvature_scale", r.acceptance.curvature_scale},
                     {"relative", r.acceptance.relative}};
    j["planar"] = r.planar;
    j["genus"] = r.genus;
    j["constants"] = to_json(r.constants);
    j["spectral"] = r.spectral ? to_json(*r.spectral) : ordered_json(nullptr);
    j["comparison"] = to_json(r.comparison);
    j["gauss"] = to_json(r.gauss);
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    j["checks"] = checks;
    j["all_pass"] = r.all_pass();
    j["provenance"] = {{"config_hash", r.config_hash}, {"version", r.version}};
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void write_patch_obj(std::ostream& os, const SurfacePatch& patch) {
    os << "# " << patch.topology().name << " " << patch.nu() << "x" << patch.nv() << "\n";
    char buf[96];
    for (int j = 0; j < patch.nv(); ++j) {
        for (int i = 0; i < patch.nu(); ++i) {
            const Vec3 x = patch.jet(patch.u_at(i), patch.v_at(j)).x;
            std::snprintf(buf, sizeof buf, "v %.12g %.12g %.12g\n", x(0), x(1), x(2));
            os << buf;
        }
    }
    for (const auto& t : patch.triangles()) os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + path + " for writing");
    out << text;
    if (!out) throw Error(ErrorCode::InvalidArgument, "write to " + path + " failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace anisomin
