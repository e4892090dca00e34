#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "anisomin/gauss_analysis.hpp"
#include "anisomin/graph_solver.hpp"
#include "anisomin/spectrum.hpp"

namespace anisomin {

inline constexpr std::string_view kVersion = "anisomin 0.3.0";

struct Tolerances {
    double minimal_accept = 1e-3;  // sup|H_gamma| / curvature scale
    double residual = 1e-10;       // graph solver
    double flat_tol = 0.0;         // <= 0: automatic
    double band_tol = 0.0;         // <= 0: automatic
    double jacobi = 5e-3;          // relative residual of translation fields
};

struct ExperimentConfig {
    std::string surface = "catenoid:2";  // fixture text or a solution JSON path
    std::string integrand = "const:1";
    int grid = 96;
    std::vector<ParamRect> domains;      // empty: three nested defaults
    std::vector<Vec3> axes{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    std::optional<int> genus;            // empty: fixture metadata
    Tolerances tolerances;
    std::string output;
    unsigned seed = 1;
    int k = 12;
};

nlohmann::ordered_json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Fixture text, or a `.json` graph solution which is lifted.
SurfacePatch load_surface(const std::string& surface, int grid);

/// Nested rectangles at 50%, 80% and 100% of the parameter rectangle about its
/// centre (periodic directions kept whole).
std::vector<ParamRect> default_domains(const SurfacePatch& patch);

struct Acceptance {
    bool accepted = false;
    double sup_H_gamma = 0.0;
    double curvature_scale = 1.0;
    double relative = 0.0;
};

Acceptance accept_candidate(const SurfacePatch& patch, const IntegrandSpec& spec, double minimal_accept = 1e-3);

struct Check {
    enum class Status { Pass, Fail, Degenerate };
    std::string name;
    std::string anchor;
    Status status = Status::Pass;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    std::string note;
};

std::string_view to_string(Check::Status s);

struct VerdictReport {
    std::string surface;
    std::string integrand;
    Acceptance acceptance;
    bool planar = false;
    int genus = 0;
    AnisotropyConstants constants;
    std::optional<SpectralReport> spectral;
    std::vector<ComparisonCounts> comparison;
    GaussReport gauss;
    std::vector<Check> checks;
    std::string config_hash;
    std::string version{kVersion};

    bool all_pass() const;
};

/// Every anchor the check list must cover.
const std::vector<std::string>& required_anchors();

struct VerifyOptions {
    double potential_sign = 1.0;  // -1 corrupts the Jacobi potential
};

/// Full pipeline; failures of individual stages are recorded on the checks
/// that depend on them.
VerdictReport verify_bounds(const ExperimentConfig& config, const VerifyOptions& options = {});

struct SelfTestResult {
    bool clean_pass = false;
    bool corruption_detected = false;
    std::vector<std::string> flipped;  // checks that fail only under corruption
};

/// Runs the pipeline as configured and again with the potential sign flipped.
SelfTestResult self_test(const ExperimentConfig& config);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace anisomin
