#pragma once

#include "chainrec/net.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace chainrec {

using json = nlohmann::json;

// ---- complex files: {"vertices": [["p/q", ...], ...],
//                      "maximal_simplices": [[int, ...], ...]} ----
json complex_to_json(const SimplicialComplex& k);
// FormatError on malformed input; rationals and decimals both accepted.
ComplexPtr complex_from_json(const json& j);

// ---- vertex-map files: {"source": path, "target": path,
//                         "assignment": [int, ...]} ----
json vertex_map_to_json(const VertexMap& m, const std::string& source_path,
                        const std::string& target_path);
// Paths are resolved relative to base_dir.
VertexMap vertex_map_from_json(const json& j, const std::string& base_dir);

// ---- sampled-map files: {"delta": "p/q", "points": [...], "images": [...]}
json sampled_map_to_json(const SampledMap& f);
// When `complex` is given, net carriers are reconstructed by point location.
SampledMap sampled_map_from_json(const json& j, const ComplexPtr& complex = nullptr);

json point_to_json(const Point& p);
Point point_from_json(const json& j);

json load_json(const std::string& path);   // FormatError on parse failure
void save_json(const json& j, const std::string& path);
ComplexPtr load_complex(const std::string& path);

// ---- static SVG rendering (ambient dimension 2 only) ----
struct SvgOverlay {
    std::string label;
    std::vector<PointD> points;
    std::string color;  // CSS color
};

// Wireframe of the 1-skeleton, filled overlay points, legend.
// Byte-deterministic for fixed input. AmbientDimUnsupported otherwise.
std::string render_svg(const SimplicialComplex& k,
                       const std::vector<SvgOverlay>& overlays);

}  // namespace chainrec
