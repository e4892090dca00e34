// anisomin: command-line front end. Every report is JSON; meshes are OBJ.
// Exit status: 0 when every check passes, 1 when a check fails (or a solve
// does not converge), 2 on bad input.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anisomin/error.hpp"
#include "anisomin/fixtures.hpp"
#include "anisomin/gauss_analysis.hpp"
#include "anisomin/graph_solver.hpp"
#include "anisomin/harness.hpp"
#include "anisomin/io.hpp"
#include "anisomin/spectrum.hpp"

using namespace anisomin;

namespace {

struct Globals {
    std::string out;
    int grid = 0;  // 0: command default
    unsigned seed = 1;
};

std::vector<double> numbers(const std::string& text, std::size_t expected, const char* what) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, std::string("bad number in ") + what + ": '" + item + "'");
        }
    }
    if (expected && v.size() != expected) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " needs " + std::to_string(expected) + " numbers");
    }
    return v;
}

ParamRect rect(const std::string& text) {
    const auto v = numbers(text, 4, "domain");
    return {v[0], v[1], v[2], v[3]};
}

// "u0,u1,v0,v1;u0,u1,v0,v1;..."
std::vector<ParamRect> rect_list(const std::string& text) {
    std::vector<ParamRect> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (!item.empty()) out.push_back(rect(item));
    }
    return out;
}

Vec3 axis(const std::string& text) {
    const auto v = numbers(text, 3, "axis");
    const Vec3 a(v[0], v[1], v[2]);
    if (a.norm() < 1e-12) throw Error(ErrorCode::InvalidArgument, "zero axis");
    return a.normalized();
}

std::vector<Vec3> axis_list(const std::string& text) {
    std::vector<Vec3> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (!item.empty()) out.push_back(axis(item));
    }
    return out;
}

void emit(const Globals& g, const ordered_json& j) {
    if (g.out.empty()) std::cout << dump(j);
    else write_text_file(g.out, dump(j));
}

std::string strip_obj(const std::string& path) {
    return path.size() > 4 && path.compare(path.size() - 4, 4, ".obj") == 0 ? path.substr(0, path.size() - 4) : path;
}

struct ConfigFlags {
    std::string config;
    std::string surface;
    std::string integrand;
    std::string domains;
    std::string axes;
    int genus = -1;
    int k = 0;
    double minimal_accept = 0.0;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
    cmd->add_option("--config", f.config, "ExperimentConfig JSON file");
    cmd->add_option("--surface", f.surface, "fixture text or graph solution .json");
    cmd->add_option("--integrand", f.integrand, "const:c | ellipsoid:a,b,c | sh:l,m,eps");
    cmd->add_option("--domains", f.domains, "exhaustion 'u0,u1,v0,v1;...'");
    cmd->add_option("--axes", f.axes, "axes 'x,y,z;...'");
    cmd->add_option("--genus", f.genus, "genus of the compactified surface");
    cmd->add_option("--k", f.k, "eigenpairs per domain");
    cmd->add_option("--minimal-accept", f.minimal_accept, "sup|H_gamma|/scale acceptance threshold");
}

ExperimentConfig build_config(const ConfigFlags& f, const Globals& g) {
    ExperimentConfig c;
    if (!f.config.empty()) c = config_from_json(nlohmann::json::parse(read_text_file(f.config)));
    if (!f.surface.empty()) c.surface = f.surface;
    if (!f.integrand.empty()) c.integrand = f.integrand;
    if (!f.domains.empty()) c.domains = rect_list(f.domains);
    if (!f.axes.empty()) c.axes = axis_list(f.axes);
    if (f.genus >= 0) c.genus = f.genus;
    if (f.k > 0) c.k = f.k;
    if (f.minimal_accept > 0.0) c.tolerances.minimal_accept = f.minimal_accept;
    if (g.grid > 0) c.grid = g.grid;
    c.seed = g.seed;
    if (!g.out.empty()) c.output = g.out;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anisotropic minimal surface lab"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--out", g.out, "output file (stdout when absent)");
    app.add_option("--grid", g.grid, "nodes per direction")->check(CLI::Range(8, 4096));
    app.add_option("--seed", g.seed, "random seed");

    int status = 0;

    // wulff
    std::string w_integrand = "const:1";
    int w_refinement = 5;
    auto* wulff = app.add_subcommand("wulff", "Wulff shape mesh (OBJ to --out, summary on stdout)");
    wulff->add_option("--integrand", w_integrand, "integrand spec");
    wulff->add_option("--refinement", w_refinement, "icosphere refinement")->check(CLI::Range(0, 8));
    wulff->callback([&] {
        const IntegrandSpec spec = IntegrandSpec::parse(w_integrand);
        const WulffMesh mesh = wulff_mesh(spec, w_refinement);
        if (!g.out.empty()) {
            std::ofstream os(g.out);
            if (!os) throw Error(ErrorCode::InvalidArgument, "cannot open " + g.out);
            write_obj(os, mesh);
        }
        ordered_json j;
        j["integrand"] = spec.to_string();
        j["refinement"] = w_refinement;
        j["vertices"] = mesh.vertices.size();
        j["faces"] = mesh.faces.size();
        j["area"] = mesh.area;
        j["signed_volume"] = mesh.signed_volume();
        j["closed"] = mesh.is_closed();
        j["constants"] = to_json(anisotropy_constants(spec));
        std::cout << dump(j);
    });

    // solve-graph
    std::string sg_integrand = "const:1", sg_domain = "0,1,0,1", sg_bc = "zero";
    double sg_tol = 1e-10, sg_damping = 1.0;
    int sg_max_iter = 200;
    auto* solve = app.add_subcommand("solve-graph", "Dirichlet problem for an anisotropic minimal graph");
    solve->add_option("--integrand", sg_integrand, "integrand spec");
    solve->add_option("--domain", sg_domain, "x0,x1,y0,y1");
    solve->add_option("--bc", sg_bc, "zero | linear:a,b,c | catenoid | sine:A, or a file holding one of these");
    solve->add_option("--tol", sg_tol, "residual tolerance");
    solve->add_option("--max-iter", sg_max_iter, "iteration cap");
    solve->add_option("--damping", sg_damping, "initial damping factor in (0, 1]");
    solve->callback([&] {
        GraphProblem p;
        p.domain = rect(sg_domain);
        p.nx = p.ny = g.grid > 0 ? g.grid : 33;
        std::string bc = sg_bc;
        if (std::ifstream probe(bc); probe) {
            bc = read_text_file(sg_bc);
            while (!bc.empty() && std::isspace(static_cast<unsigned char>(bc.back()))) bc.pop_back();
        }
        p.boundary_data = parse_boundary(bc);
        p.spec = IntegrandSpec::parse(sg_integrand);
        p.tol = sg_tol;
        p.max_iter = sg_max_iter;
        p.damping = sg_damping;
        GraphSolution s = solve_graph(p);
        s.integrand = p.spec.to_string();
        emit(g, to_json(s));
        if (!s.converged) status = 1;
    });

    // curvature
    std::string cv_surface = "catenoid:2", cv_integrand = "const:1";
    auto* curv = app.add_subcommand("curvature", "Curvature fields; --out x.obj also writes x.fields.json");
    curv->add_option("--surface", cv_surface, "fixture text or graph solution .json");
    curv->add_option("--integrand", cv_integrand, "integrand spec");
    curv->callback([&] {
        const IntegrandSpec spec = IntegrandSpec::parse(cv_integrand);
        const SurfacePatch patch = load_surface(cv_surface, g.grid > 0 ? g.grid : 96);
        patch.validate();
        const CurvatureField field = curvature_field(patch, spec);
        const Acceptance a = accept_candidate(patch, spec);
        ordered_json summary;
        summary["surface"] = patch.topology().name;
        summary["integrand"] = spec.to_string();
        summary["grid"] = ordered_json::array({patch.nu(), patch.nv()});
        summary["accepted"] = a.accepted;
        summary["sup_H_gamma"] = a.sup_H_gamma;
        summary["curvature_scale"] = a.curvature_scale;
        summary["total_curvature"] = field.total_curvature();
        if (!g.out.empty()) {
            std::ofstream os(g.out);
            if (!os) throw Error(ErrorCode::InvalidArgument, "cannot open " + g.out);
            write_patch_obj(os, patch);
            write_text_file(strip_obj(g.out) + ".fields.json", dump(to_json(field)));
        }
        std::cout << dump(summary);
    });

    // spectrum
    std::string sp_surface = "catenoid:2", sp_integrand = "const:1", sp_domains;
    int sp_k = 12;
    auto* spec_cmd = app.add_subcommand("spectrum", "Dirichlet Jacobi spectra on nested domains");
    spec_cmd->add_option("--surface", sp_surface, "fixture text or graph solution .json");
    spec_cmd->add_option("--integrand", sp_integrand, "integrand spec");
    spec_cmd->add_option("--domains", sp_domains, "'u0,u1,v0,v1;...' (default: 50%, 80%, 100%)");
    spec_cmd->add_option("--k", sp_k, "eigenpairs per domain")->check(CLI::Range(1, 200));
    spec_cmd->callback([&] {
        const IntegrandSpec spec = IntegrandSpec::parse(sp_integrand);
        const SurfacePatch patch = load_surface(sp_surface, g.grid > 0 ? g.grid : 96);
        patch.validate();
        const std::vector<ParamRect> domains = sp_domains.empty() ? default_domains(patch) : rect_list(sp_domains);
        const JacobiDiscretization disc = assemble(patch, spec);
        const SpectralReport r = morse_index_exhaustion(disc, domains, sp_k);
        emit(g, to_json(r));
        if (r.morse_index != r.inertia_index) status = 1;
    });

    // gauss
    std::string ga_surface = "catenoid:2", ga_integrand = "const:1", ga_axis = "0,0,1";
    int ga_genus = -1;
    auto* gauss = app.add_subcommand("gauss", "Gauss map degrees, branch points and the nodal pseudograph");
    gauss->add_option("--surface", ga_surface, "fixture text or graph solution .json");
    gauss->add_option("--integrand", ga_integrand, "integrand spec");
    gauss->add_option("--axis", ga_axis, "ax,ay,az (several separated by ';')");
    gauss->add_option("--genus", ga_genus, "genus of the compactified surface (default: fixture metadata)");
    gauss->callback([&] {
        const IntegrandSpec spec = IntegrandSpec::parse(ga_integrand);
        const SurfacePatch patch = load_surface(ga_surface, g.grid > 0 ? g.grid : 96);
        patch.validate();
        const int genus = ga_genus >= 0 ? ga_genus : patch.topology().genus;
        const GaussReport r = gauss_report(patch, spec, axis_list(ga_axis), genus);
        emit(g, to_json(r));
        for (const auto& pg : r.pseudographs) {
            if (!pg.degenerate && euler_inequality_check(pg).slack < 0) status = 1;
        }
    });

    // bounds
    ConfigFlags bf;
    auto* bounds = app.add_subcommand("bounds", "End-to-end verification of the index bounds");
    add_config_flags(bounds, bf);
    bounds->callback([&] {
        const ExperimentConfig c = build_config(bf, g);
        const VerdictReport r = verify_bounds(c);
        emit(g, to_json(r));
        if (!r.all_pass()) status = 1;
    });

    // selftest
    ConfigFlags sf;
    auto* selftest = app.add_subcommand("selftest", "Pipeline with the potential sign flipped must fail");
    add_config_flags(selftest, sf);
    selftest->callback([&] {
        const ExperimentConfig c = build_config(sf, g);
        const SelfTestResult r = self_test(c);
        ordered_json j;
        j["clean_pass"] = r.clean_pass;
        j["corruption_detected"] = r.corruption_detected;
        j["flipped"] = r.flipped;
        emit(g, j);
        if (!(r.clean_pass && r.corruption_detected)) status = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "anisomin: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "anisomin: bad JSON: " << e.what() << "\n";
        return 2;
    }
    return status;
}
