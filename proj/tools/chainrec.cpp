// chainrec: command-line front end for the library.
//
// Subcommands: subdivide | crush-map | compress | cr-analyze | perturb |
// pipeline. All file formats are JSON (schemas in docs/formats.md). Exit
// codes: 0 ok, 2 input/format error, 3 precondition, 4 premise violation.

#include <CLI11.hpp>

#include "chainrec/crush.hpp"
#include "chainrec/engine.hpp"
#include "chainrec/io.hpp"
#include "chainrec/perturb.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace chainrec;

std::string dir_of(const std::string& path) {
    return std::filesystem::path(path).parent_path().string();
}

// A map argument is either a vertex-map file (sampled on a fresh net of the
// given complex) or an already-sampled map file.
SampledMap load_map_on_net(const std::string& path, const ComplexPtr& complex,
                           const Rat& delta) {
    json j = load_json(path);
    if (j.contains("assignment")) {
        VertexMap m = vertex_map_from_json(j, dir_of(path));
        return sample_vertex_map(sample_net(complex, delta), m);
    }
    if (j.contains("images")) return sampled_map_from_json(j, complex);
    throw FormatError(path + ": neither a vertex map nor a sampled map");
}

json cr_report_json(const CRReport& rep, const Net& net) {
    json out;
    out["epsilon"] = format_rat(rep.epsilon);
    out["delta"] = format_rat(rep.delta);
    out["cr_count"] = static_cast<int>(rep.cr_points.size());
    json comps = json::array();
    for (const auto& comp : rep.components) {
        double diam = 0;
        for (size_t a = 0; a < comp.size(); ++a)
            for (size_t b = a + 1; b < comp.size(); ++b)
                diam = std::max(diam, dist_d(net.points_d[comp[a]],
                                             net.points_d[comp[b]]));
        comps.push_back({{"size", static_cast<int>(comp.size())},
                         {"diameter", diam}});
    }
    out["components"] = std::move(comps);
    out["d1"] = rep.d1;
    out["isolated_count"] = static_cast<int>(rep.isolated.size());
    out["measure"] = rep.measure;
    return out;
}

// Shared report shape for crush-map / compress / pipeline.
json bound_report_json(const ComplexPtr& base, const SampledMap& sampled,
                       const Rat& eps, const Rat& delta) {
    auto id = sample_function(sampled.net, [](const Point& p) { return p; });
    auto rep = cr_eps(sampled, eps);
    json out;
    out["mesh"] = base->mesh();
    out["sup_dist_to_id"] = format_rat(sup_dist_upper(sampled, id));
    out["d1_cr"] = rep.d1;
    out["slack"] = 2 * to_double(delta) + to_double(eps);
    out["epsilon"] = format_rat(eps);
    out["delta"] = format_rat(delta);
    return out;
}

int cmd_subdivide(const std::string& in, const std::string& out) {
    auto k = load_complex(in);
    auto sub = barycentric_subdivide(*k);
    save_json(complex_to_json(sub.complex), out);
    return 0;
}

int cmd_crush_map(const std::string& in, const std::string& prefix,
                  const Rat& eps, const Rat& delta) {
    auto k = load_complex(in);
    auto pair = crush_vertex_map(k);
    save_json(complex_to_json(*pair.kpp), prefix + ".source.json");
    save_json(complex_to_json(*pair.kp), prefix + ".target.json");
    save_json(vertex_map_to_json(pair.g, prefix + ".source.json",
                                 prefix + ".target.json"),
              prefix + ".map.json");
    auto gs = sample_vertex_map(sample_net(k, delta), pair.g);
    save_json(bound_report_json(k, gs, eps, delta), prefix + ".report.json");
    return 0;
}

int cmd_compress(const std::string& in, const std::string& map_path,
                 const std::string& prefix, const Rat& eps, const Rat& delta) {
    auto lk = load_complex(in);
    VertexMap f = vertex_map_from_json(load_json(map_path), dir_of(map_path));
    VertexMap h = skeleton_compress(lk, f);
    save_json(complex_to_json(*h.source), prefix + ".source.json");
    save_json(complex_to_json(*h.target), prefix + ".target.json");
    save_json(vertex_map_to_json(h, prefix + ".source.json",
                                 prefix + ".target.json"),
              prefix + ".map.json");
    auto hs = sample_vertex_map(sample_net(lk, delta), h);
    save_json(bound_report_json(lk, hs, eps, delta), prefix + ".report.json");
    return 0;
}

int cmd_cr_analyze(const std::string& complex_path, const std::string& map_path,
                   const Rat& eps, const Rat& delta,
                   const std::string& measure_path, const std::string& svg_path,
                   const std::string& out) {
    auto k = load_complex(complex_path);
    auto f = load_map_on_net(map_path, k, delta);
    CrOptions opt;
    std::vector<double> weights;
    if (!measure_path.empty()) {
        json w = load_json(measure_path);
        if (w.is_string() && w.get<std::string>() == "uniform") {
            weights.assign(f.net->size(), 1.0 / f.net->size());
        } else if (w.is_array()) {
            for (const auto& v : w) weights.push_back(v.get<double>());
            if (static_cast<int>(weights.size()) != f.net->size())
                throw FormatError("weights length does not match the net");
        } else {
            throw FormatError("weights must be an array or \"uniform\"");
        }
        opt.weights = &weights;
    }
    auto rep = cr_eps(f, eps, opt);
    save_json(cr_report_json(rep, *f.net), out);
    if (!svg_path.empty()) {
        SvgOverlay ov;
        ov.label = "cr_eps";
        ov.color = "#cc2222";
        for (int p : rep.cr_points) ov.points.push_back(f.net->points_d[p]);
        std::ofstream svg(svg_path);
        if (!svg) throw FormatError("cannot write " + svg_path);
        svg << render_svg(*f.net->complex, {ov});
    }
    return 0;
}

int cmd_perturb(const std::string& complex_path, const std::string& map_path,
                const Rat& eps, const Rat& delta, int l, std::uint64_t seed,
                const std::string& out) {
    auto k = load_complex(complex_path);
    auto f = load_map_on_net(map_path, k, delta);
    auto plan = make_plan(f, eps, l, seed);
    auto pm = build_perturbation(f, plan);
    auto dens = verify_density(pm, eps);
    auto rob = verify_robustness(pm, plan.beta_max / 2, 5, seed);

    json j = sampled_map_to_json(pm.g_prime);
    json manifest;
    manifest["epsilon"] = format_rat(plan.epsilon);
    manifest["eta"] = format_rat(plan.eta);
    manifest["lambda"] = format_rat(plan.lambda);
    manifest["radius"] = format_rat(plan.radius);
    manifest["delta_prime"] = format_rat(plan.delta_prime);
    manifest["l"] = plan.l;
    manifest["seed"] = plan.seed;
    manifest["sites"] = plan.sites;
    manifest["chains"] = plan.chains;
    json cells = json::array();
    for (const auto& c : plan.cells)
        cells.push_back({{"site", c.site},
                         {"node", c.node},
                         {"r", c.r},
                         {"center", c.center},
                         {"members", c.members}});
    manifest["cells"] = std::move(cells);
    manifest["orbits"] = pm.designated_orbits;
    j["plan"] = std::move(manifest);
    j["verification"] = {
        {"certified_dist", format_rat(pm.certified_dist)},
        {"density",
         {{"pass", dens.pass},
          {"cr_size", dens.cr_size},
          {"failures", dens.failures},
          {"worst_second", dens.worst_second}}},
        {"robustness",
         {{"pass", rob.pass},
          {"trials", rob.trials},
          {"step_violations", rob.step_violations},
          {"cr_cell_misses", rob.cr_cell_misses},
          {"worst_step", rob.worst_step}}}};
    save_json(j, out);
    return (dens.pass && rob.pass) ? 0 : 4;
}

int cmd_pipeline(const std::string& complex_path, const std::string& map_path,
                 const Rat& eps, const Rat& delta, int max_depth,
                 const std::string& out) {
    auto l = load_complex(complex_path);
    auto F = load_map_on_net(map_path, l, delta);
    auto res = poly_pipeline(l, F, eps, max_depth);
    // the CR bound is a small-scale statement: evaluate it at the 3*delta
    // floor rather than at the (coarse) approximation epsilon
    auto rep = bound_report_json(l, res.h_sampled, 3 * delta, delta);
    rep["epsilon"] = format_rat(eps);
    rep["epsilon_cr"] = format_rat(3 * delta);
    rep["depth"] = res.depth;
    rep["sup_dist_fh"] = format_rat(res.sup_dist_fh);
    save_json(rep, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computational chain-recurrence toolkit"};
    app.require_subcommand(1);

    std::string complex_path, map_path, out, prefix, measure_path, svg_path;
    std::string eps_s = "1/10", delta_s = "1/100";
    int l = 2, max_depth = 6;
    std::uint64_t seed = 0;

    auto* sub = app.add_subcommand("subdivide", "barycentric subdivision");
    sub->add_option("--complex", complex_path)->required();
    sub->add_option("--out", out)->required();

    auto* crush = app.add_subcommand("crush-map", "skeleton crush of K''");
    crush->add_option("--complex", complex_path)->required();
    crush->add_option("--out-prefix", prefix)->required();
    crush->add_option("--epsilon", eps_s);
    crush->add_option("--delta", delta_s);

    auto* comp = app.add_subcommand("compress", "skeleton compression h = f o g");
    comp->add_option("--complex", complex_path)->required();
    comp->add_option("--map", map_path)->required();
    comp->add_option("--out-prefix", prefix)->required();
    comp->add_option("--epsilon", eps_s);
    comp->add_option("--delta", delta_s);

    auto* cr = app.add_subcommand("cr-analyze", "eps-chain recurrent set");
    cr->add_option("--complex", complex_path)->required();
    cr->add_option("--map", map_path)->required();
    cr->add_option("--epsilon", eps_s)->required();
    cr->add_option("--delta", delta_s)->required();
    cr->add_option("--measure", measure_path);
    cr->add_option("--svg", svg_path);
    cr->add_option("--out", out)->required();

    auto* pert = app.add_subcommand("perturb", "periodic-orbit perturbation");
    pert->add_option("--complex", complex_path)->required();
    pert->add_option("--map", map_path)->required();
    pert->add_option("--epsilon", eps_s)->required();
    pert->add_option("--delta", delta_s)->required();
    pert->add_option("--l", l)->required();
    pert->add_option("--seed", seed)->required();
    pert->add_option("--out", out)->required();

    auto* pipe = app.add_subcommand("pipeline", "approximation + compression");
    pipe->add_option("--complex", complex_path)->required();
    pipe->add_option("--map", map_path)->required();
    pipe->add_option("--epsilon", eps_s)->required();
    pipe->add_option("--delta", delta_s)->required();
    pipe->add_option("--max-depth", max_depth);
    pipe->add_option("--out", out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        chainrec::Rat eps = chainrec::parse_rat(eps_s);
        chainrec::Rat delta = chainrec::parse_rat(delta_s);
        if (sub->parsed()) return cmd_subdivide(complex_path, out);
        if (crush->parsed()) return cmd_crush_map(complex_path, prefix, eps, delta);
        if (comp->parsed())
            return cmd_compress(complex_path, map_path, prefix, eps, delta);
        if (cr->parsed())
            return cmd_cr_analyze(complex_path, map_path, eps, delta,
                                  measure_path, svg_path, out);
        if (pert->parsed())
            return cmd_perturb(complex_path, map_path, eps, delta, l, seed, out);
        if (pipe->parsed())
            return cmd_pipeline(complex_path, map_path, eps, delta, max_depth, out);
    } catch (const chainrec::Error& e) {
        chainrec::json err = {{"error", e.name()},
                              {"detail", e.what()},
                              {"exit", static_cast<int>(e.kind())}};
        std::cerr << err.dump() << '\n';
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        chainrec::json err = {{"error", "InternalError"}, {"detail", e.what()}, {"exit", 2}};
        std::cerr << err.dump() << '\n';
        return 2;
    }
    return 0;
}
