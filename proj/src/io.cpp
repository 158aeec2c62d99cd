#include "chainrec/io.hpp"

#include "chainrec/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

namespace chainrec {

namespace {

Rat rat_from_json(const json& v) {
    try {
        if (v.is_string()) return parse_rat(v.get<std::string>());
        if (v.is_number_integer()) return Rat(v.get<long long>());
        if (v.is_number_float()) return parse_rat(v.dump());
    } catch (const std::exception& e) {
        throw FormatError(std::string("bad rational: ") + e.what());
    }
    throw FormatError("bad rational: " + v.dump());
}

std::vector<Point> points_from_json(const json& arr, const char* what) {
    if (!arr.is_array()) throw FormatError(std::string(what) + " must be an array");
    std::vector<Point> out;
    for (const auto& row : arr) out.push_back(point_from_json(row));
    return out;
}

json points_to_json(const std::vector<Point>& pts) {
    json arr = json::array();
    for (const Point& p : pts) arr.push_back(point_to_json(p));
    return arr;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

}  // namespace

json point_to_json(const Point& p) {
    json arr = json::array();
    for (const Rat& c : p) arr.push_back(format_rat(c));
    return arr;
}

Point point_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw FormatError("point must be a nonempty array");
    Point p;
    for (const auto& c : j) p.push_back(rat_from_json(c));
    return p;
}

json complex_to_json(const SimplicialComplex& k) {
    json j;
    j["vertices"] = points_to_json(k.vertices());
    json maximal = json::array();
    for (int id : k.maximal()) maximal.push_back(k.simplex(id));
    j["maximal_simplices"] = std::move(maximal);
    return j;
}

ComplexPtr complex_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("maximal_simplices"))
        throw FormatError("complex needs 'vertices' and 'maximal_simplices'");
    auto vertices = points_from_json(j["vertices"], "vertices");
    std::vector<Simplex> maximal;
    for (const auto& row : j["maximal_simplices"]) {
        if (!row.is_array()) throw FormatError("simplex must be an int array");
        Simplex s;
        for (const auto& v : row) {
            if (!v.is_number_integer()) throw FormatError("vertex index must be an integer");
            s.push_back(v.get<int>());
        }
        maximal.push_back(std::move(s));
    }
    return std::make_shared<SimplicialComplex>(
        SimplicialComplex::close_complex(vertices, maximal));
}

json vertex_map_to_json(const VertexMap& m, const std::string& source_path,
                        const std::string& target_path) {
    json j;
    j["source"] = source_path;
    j["target"] = target_path;
    j["assignment"] = m.assignment;
    return j;
}

VertexMap vertex_map_from_json(const json& j, const std::string& base_dir) {
    if (!j.is_object() || !j.contains("source") || !j.contains("target") ||
        !j.contains("assignment"))
        throw FormatError("vertex map needs 'source', 'target', 'assignment'");
    auto resolve = [&](const json& v) {
        if (!v.is_string()) throw FormatError("complex path must be a string");
        std::filesystem::path p(v.get<std::string>());
        if (p.is_relative() && !base_dir.empty())
            p = std::filesystem::path(base_dir) / p;
        return p.string();
    };
    VertexMap m;
    m.source = load_complex(resolve(j["source"]));
    m.target = load_complex(resolve(j["target"]));
    for (const auto& v : j["assignment"]) {
        if (!v.is_number_integer()) throw FormatError("assignment entry must be an integer");
        m.assignment.push_back(v.get<int>());
    }
    m.validate();
    return m;
}

json sampled_map_to_json(const SampledMap& f) {
    json j;
    j["delta"] = format_rat(f.net->delta);
    j["points"] = points_to_json(f.net->points);
    j["images"] = points_to_json(f.images);
    return j;
}

SampledMap sampled_map_from_json(const json& j, const ComplexPtr& complex) {
    if (!j.is_object() || !j.contains("delta") || !j.contains("points") ||
        !j.contains("images"))
        throw FormatError("sampled map needs 'delta', 'points', 'images'");
    auto net = std::make_shared<Net>();
    net->complex = complex;
    net->delta = rat_from_json(j["delta"]);
    if (net->delta <= 0) throw FormatError("delta must be positive");
    net->delta_d = to_double(net->delta);
    net->points = points_from_json(j["points"], "points");
    for (const Point& p : net->points) {
        net->points_d.push_back(to_double(p));
        if (complex) {
            auto loc = complex->locate(p);
            if (!loc) throw PointOutsideComplex("net point escapes the complex");
            net->carriers.push_back(std::move(*loc));
        }
    }
    auto images = points_from_json(j["images"], "images");
    if (images.size() != net->points.size())
        throw FormatError("'images' and 'points' must have equal length");
    return SampledMap::from_images(net, std::move(images));
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const std::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    out << j.dump(2) << '\n';
}

ComplexPtr load_complex(const std::string& path) {
    return complex_from_json(load_json(path));
}

std::string render_svg(const SimplicialComplex& k,
                       const std::vector<SvgOverlay>& overlays) {
    if (k.ambient_dim() != 2)
        throw AmbientDimUnsupported("SVG rendering needs ambient dimension 2, got " +
                                    std::to_string(k.ambient_dim()));
    double x0 = 1e18, y0 = 1e18, x1 = -1e18, y1 = -1e18;
    for (int v = 0; v < k.num_vertices(); ++v) {
        x0 = std::min(x0, k.vertex_d(v)[0]);
        x1 = std::max(x1, k.vertex_d(v)[0]);
        y0 = std::min(y0, k.vertex_d(v)[1]);
        y1 = std::max(y1, k.vertex_d(v)[1]);
    }
    const double span = std::max({x1 - x0, y1 - y0, 1e-9});
    const double scale = 480.0 / span;
    const double margin = 40.0;
    const double width = (x1 - x0) * scale + 2 * margin;
    const double height = (y1 - y0) * scale + 2 * margin + 20.0 * overlays.size();
    // SVG y grows downward; flip so the picture matches the plane
    auto X = [&](double x) { return margin + (x - x0) * scale; };
    auto Y = [&](double y) { return margin + (y1 - y) * scale; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
        << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
        << " " << fmt(height) << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "  <g stroke=\"#444444\" stroke-width=\"1.5\">\n";
    for (int id = 0; id < k.num_simplices(); ++id) {
        if (k.simplex_dim(id) != 1) continue;
        const Simplex& e = k.simplex(id);
        out << "    <line x1=\"" << fmt(X(k.vertex_d(e[0])[0])) << "\" y1=\""
            << fmt(Y(k.vertex_d(e[0])[1])) << "\" x2=\""
            << fmt(X(k.vertex_d(e[1])[0])) << "\" y2=\""
            << fmt(Y(k.vertex_d(e[1])[1])) << "\"/>\n";
    }
    out << "  </g>\n";
    for (size_t i = 0; i < overlays.size(); ++i) {
        const auto& ov = overlays[i];
        out << "  <g fill=\"" << ov.color << "\">\n";
        for (const PointD& p : ov.points) {
            if (p.size() != 2)
                throw AmbientDimUnsupported("overlay point is not planar");
            out << "    <circle cx=\"" << fmt(X(p[0])) << "\" cy=\""
                << fmt(Y(p[1])) << "\" r=\"3\"/>\n";
        }
        double ly = margin + (y1 - y0) * scale + 20.0 * (i + 1);
        out << "    <circle cx=\"" << fmt(margin) << "\" cy=\"" << fmt(ly)
            << "\" r=\"4\"/>\n";
        out << "    <text x=\"" << fmt(margin + 10) << "\" y=\"" << fmt(ly + 4)
            << "\" font-family=\"monospace\" font-size=\"12\" fill=\"#000000\">"
            << ov.label << " (" << ov.points.size() << ")</text>\n";
        out << "  </g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace chainrec
