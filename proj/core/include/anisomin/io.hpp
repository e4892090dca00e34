#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "anisomin/gauss_analysis.hpp"
#include "anisomin/graph_solver.hpp"
#include "anisomin/harness.hpp"
#include "anisomin/spectrum.hpp"

namespace anisomin {

using ordered_json = nlohmann::ordered_json;

/// "e1", "e2", "e3" for coordinate axes, "(x,y,z)" otherwise.
std::string axis_label(const Vec3& a);

ordered_json to_json(const ParamRect& r);
ordered_json to_json(const Vec3& v);
ordered_json to_json(const AnisotropyConstants& c);

ordered_json to_json(const GraphSolution& s);
/// Inverse of to_json(GraphSolution). Throws InvalidArgument on missing or
/// inconsistent fields.
GraphSolution solution_from_json(const nlohmann::json& j);

ordered_json to_json(const CurvatureField& field);
ordered_json to_json(const SpectralReport& r);
ordered_json to_json(const std::vector<ComparisonCounts>& c);
ordered_json to_json(const Degrees& d);
ordered_json to_json(const CriticalPoint& p);
ordered_json to_json(const Pseudograph& pg);
ordered_json to_json(const GaussReport& r);
ordered_json to_json(const Check& c);
ordered_json to_json(const VerdictReport& r);

/// Two-space indented dump with a trailing newline.
std::string dump(const ordered_json& j);

/// Vertex positions of the patch and its grid triangles.
void write_patch_obj(std::ostream& os, const SurfacePatch& patch);

/// Writes `text` to `path`; throws InvalidArgument when the file cannot be opened.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace anisomin
