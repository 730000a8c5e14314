#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "silhlab/silhlab.hpp"

namespace silhlab::cli {

namespace detail {

inline std::vector<double> parse_numbers(const std::string& text, size_t count, const std::string& what) {
  std::vector<double> values;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? text.size() - pos : comma - pos);
    try {
      size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidSpec("bad number '" + item + "' in " + what + ": " + text);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (values.size() != count)
    throw InvalidSpec(what + " needs " + std::to_string(count) + " comma-separated numbers: " + text);
  return values;
}

inline Viewpoint parse_viewpoint(const std::string& spec, std::uint64_t seed) {
  if (spec == "random") {
    Rng rng(seed);
    return Viewpoint::at_infinity(sample_direction_uniform(rng));
  }
  if (spec.rfind("inf:", 0) == 0) {
    auto v = parse_numbers(spec.substr(4), 3, "direction");
    return Viewpoint::at_infinity(Direction(Vec3{v[0], v[1], v[2]}));
  }
  if (spec.rfind("pt:", 0) == 0) {
    auto v = parse_numbers(spec.substr(3), 3, "point");
    return Viewpoint::finite(Vec3{v[0], v[1], v[2]});
  }
  throw InvalidSpec("viewpoint must be inf:x,y,z | pt:x,y,z | random, got: " + spec);
}

inline ViewpointModel parse_model(const std::string& spec) {
  if (spec == "inf") return ViewpointModel::at_infinity();
  if (spec.rfind("ball:", 0) == 0) {
    auto v = parse_numbers(spec.substr(5), 4, "ball model");
    return ViewpointModel::ball(Vec3{v[0], v[1], v[2]}, v[3]);
  }
  throw InvalidSpec("model must be inf | ball:cx,cy,cz,r, got: " + spec);
}

/// Family templates grow by one trailing argument: "icosphere" + 3 ->
/// "icosphere:3", "lantern:8" + 512 -> "lantern:8,512".
inline FamilySpec family_member(const std::string& family_template, int size) {
  std::string sep = family_template.find(':') == std::string::npos ? ":" : ",";
  return parse_family_spec(family_template + sep + std::to_string(size));
}

inline std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? text.size() - pos : comma - pos);
    try {
      size_t used = 0;
      sizes.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidSpec("bad size '" + item + "' in sizes list: " + text);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return sizes;
}

struct MeshInput {
  TriangleMesh mesh;
  std::optional<AnalyticSurface> surface;  // known only for generated input
};

inline MeshInput load_input(const std::string& mesh_path, const std::string& family_spec) {
  if (!mesh_path.empty()) return {load_mesh_file(mesh_path), std::nullopt};
  Generated gen = generate(parse_family_spec(family_spec));
  return {std::move(gen.mesh), gen.surface};
}

inline void deliver(const std::string& bytes, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    out << bytes;
  else
    write_file_atomic(out_path, bytes);
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

/// Builds the app and runs one invocation. Exit codes: 0 success, 1 usage,
/// 2 malformed input data, 3 numeric/domain failures.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mesh silhouette statistics laboratory"};
  app.require_subcommand(1);

  // Shared option state.
  std::string mesh_path, family_spec, out_path, fmt;
  std::string view_spec = "inf:0,0,1", model_spec = "inf", surface_spec, svg_path;
  std::string family_template, sizes_text, in_path;
  long long samples = 10000;
  std::uint64_t seed = 0;
  int grid_depth = 4;
  int threads = 0;
  double alpha_floor = 0.05, fatness_floor = 0.2, trend_slack = 1.25;
  double silh_length = 0;
  bool silh_given = false;

  auto add_input = [&](CLI::App* cmd) {
    auto* group = cmd->add_option_group("input", "mesh source");
    group->add_option("--mesh", mesh_path, "mesh file to load (.off or .obj)");
    group->add_option("--family", family_spec, "generate a family member, e.g. icosphere:3");
    group->require_option(1);
  };
  auto add_mc = [&](CLI::App* cmd) {
    cmd->add_option("--samples", samples, "Monte-Carlo sample count")
        ->capture_default_str()
        ->check(CLI::Range(2LL, 1000000000LL));
    cmd->add_option("--seed", seed, "base random seed")->capture_default_str();
    cmd->add_option("--threads", threads, "worker threads; 0 = SILHLAB_THREADS or all cores")
        ->capture_default_str();
  };
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output file (atomic write); stdout when omitted");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a mesh family member as OFF");
  gen->add_option("family", family_spec, "family spec, e.g. icosphere:3 or lantern:8,64")->required();
  add_out(gen);

  CLI::App* info = app.add_subcommand("info", "validate a mesh and print statistics");
  add_input(info);
  add_out(info);

  CLI::App* silhouette = app.add_subcommand("silhouette", "extract one silhouette");
  add_input(silhouette);
  silhouette->add_option("--view", view_spec, "viewpoint: inf:x,y,z | pt:x,y,z | random")
      ->capture_default_str();
  silhouette->add_option("--seed", seed, "seed for --view random")->capture_default_str();
  silhouette->add_option("--svg", svg_path, "also write an SVG projection (infinite viewpoints only)");
  add_out(silhouette);

  CLI::App* expect = app.add_subcommand("expect", "expected silhouette size, exact and Monte-Carlo");
  add_input(expect);
  expect->add_option("--model", model_spec, "viewpoint model: inf | ball:cx,cy,cz,r")
      ->capture_default_str();
  add_mc(expect);
  add_out(expect);

  CLI::App* check = app.add_subcommand("check", "measure mesh-quality hypothesis witnesses");
  add_input(check);
  check->add_option("--surface", surface_spec,
                    "reference surface, e.g. sphere:r=1 (defaults to the generated family's)");
  check->add_option("--sizes", sizes_text, "certify a family template over these sizes, e.g. 1,2,3");
  check->add_option("--depth", grid_depth, "barycentric sampling depth per face")
      ->capture_default_str()
      ->check(CLI::Range(1, 64));
  check->add_option("--alpha-floor", alpha_floor, "minimum admissible alpha_n")->capture_default_str();
  check->add_option("--fatness-floor", fatness_floor, "minimum admissible fatness_n")
      ->capture_default_str();
  check->add_option("--trend-slack", trend_slack, "tolerated growth over the last three reports")
      ->capture_default_str();
  check->add_option("--format", fmt, "output format: json (default) or csv");
  add_out(check);

  CLI::App* sweep = app.add_subcommand("sweep", "run a family sweep and emit records");
  sweep->add_option("--family", family_template, "family template, e.g. icosphere or lantern:8")
      ->required();
  sweep->add_option("--sizes", sizes_text, "comma-separated member sizes, strictly increasing")
      ->required();
  add_mc(sweep);
  sweep->add_option("--depth", grid_depth, "barycentric sampling depth per face")
      ->capture_default_str()
      ->check(CLI::Range(1, 64));
  sweep->add_option("--format", fmt, "output format: csv (default) or json");
  add_out(sweep);

  CLI::App* fit = app.add_subcommand("fit", "power-law fit of sweep records");
  fit->add_option("--in", in_path, "sweep records file (.csv or .json)")->required();
  CLI::Option* silh_opt = fit->add_option(
      "--silh", silh_length, "reference mean silhouette length; adds the upper-bound check per record");
  add_out(fit);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    auto parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      Generated g = generate(parse_family_spec(family_spec));
      detail::deliver(save_off(g.mesh), out_path, out);
      return 0;
    }

    if (info->parsed()) {
      detail::MeshInput input = detail::load_input(mesh_path, family_spec);
      MeshStats st = validate(input.mesh);
      nlohmann::ordered_json j;
      j["n_faces"] = st.n_faces;
      j["n_vertices"] = st.n_vertices;
      j["n_edges"] = st.n_edges;
      j["n_boundary_edges"] = st.n_boundary_edges;
      j["min_edge_length"] = st.min_edge_length;
      j["max_edge_length"] = st.max_edge_length;
      j["min_height"] = st.min_height;
      j["min_fatness"] = st.min_fatness;
      j["euler_characteristic"] = st.euler_characteristic;
      detail::deliver(detail::dump(j), out_path, out);
      return 0;
    }

    if (silhouette->parsed()) {
      detail::MeshInput input = detail::load_input(mesh_path, family_spec);
      EdgeAdjacency adj = build_adjacency(input.mesh);
      Viewpoint vp = detail::parse_viewpoint(view_spec, seed);
      if (!svg_path.empty() && !vp.is_at_infinity()) {
        err << "error: --svg needs a viewpoint at infinity\n";
        return 1;
      }
      SilhouetteResult result = extract_silhouette(input.mesh, adj, vp);
      if (!svg_path.empty())
        write_file_atomic(svg_path, emit_svg(input.mesh, adj, result, vp.direction()));
      nlohmann::ordered_json j;
      j["viewpoint"] = vp.is_at_infinity()
                           ? "inf:" + fmt_g17(vp.direction().vec().x) + "," +
                                 fmt_g17(vp.direction().vec().y) + "," + fmt_g17(vp.direction().vec().z)
                           : "pt:" + fmt_g17(vp.point().x) + "," + fmt_g17(vp.point().y) + "," +
                                 fmt_g17(vp.point().z);
      j["n_edges"] = result.edge_ids.size();
      j["n_interior"] = result.n_interior;
      j["n_boundary"] = result.n_boundary;
      j["n_degenerate_faces"] = result.n_degenerate_faces;
      if (result.projected_length)
        j["projected_length"] = *result.projected_length;
      else
        j["projected_length"] = nullptr;
      j["edge_ids"] = result.edge_ids;
      detail::deliver(detail::dump(j), out_path, out);
      return 0;
    }

    if (expect->parsed()) {
      detail::MeshInput input = detail::load_input(mesh_path, family_spec);
      EdgeAdjacency adj = build_adjacency(input.mesh);
      ExpectationReport report =
          mc_expected_silhouette(input.mesh, adj, detail::parse_model(model_spec), samples, seed, threads);
      detail::deliver(detail::dump(to_json(report)), out_path, out);
      return 0;
    }

    if (check->parsed()) {
      if (sizes_text.empty()) {
        detail::MeshInput input = detail::load_input(mesh_path, family_spec);
        std::optional<AnalyticSurface> surface = input.surface;
        if (!surface_spec.empty()) surface = AnalyticSurface::parse(surface_spec);
        if (!surface) {
          err << "error: --surface is required for mesh files\n";
          return 1;
        }
        HypothesisReport report = measure_hypotheses(input.mesh, *surface, grid_depth);
        detail::deliver(detail::dump(to_json(report)), out_path, out);
        return 0;
      }
      if (family_spec.empty()) {
        err << "error: --sizes certification needs --family\n";
        return 1;
      }
      std::vector<HypothesisReport> reports;
      for (int sz : detail::parse_sizes(sizes_text)) {
        Generated g = generate(detail::family_member(family_spec, sz));
        AnalyticSurface surface =
            surface_spec.empty() ? g.surface : AnalyticSurface::parse(surface_spec);
        reports.push_back(measure_hypotheses(g.mesh, surface, grid_depth));
      }
      CertificationConfig config{alpha_floor, fatness_floor, trend_slack};
      FamilyCertificate cert = certify_family(reports, config);
      if (fmt == "csv")
        detail::deliver(hypothesis_csv(cert.reports), out_path, out);
      else
        detail::deliver(detail::dump(to_json(cert)), out_path, out);
      return 0;
    }

    if (sweep->parsed()) {
      std::vector<int> sizes = detail::parse_sizes(sizes_text);
      SweepOptions opt;
      opt.mc_samples = samples;
      opt.seed = seed;
      opt.grid_depth = grid_depth;
      opt.threads = threads;
      auto member = [&](int sz) { return detail::family_member(family_template, sz); };
      std::vector<SweepRecord> records = run_sweep(member, sizes, opt);
      bool json_out = fmt == "json" || (fmt.empty() && out_path.size() >= 5 &&
                                        out_path.compare(out_path.size() - 5, 5, ".json") == 0);
      detail::deliver(json_out ? emit_json(records) : emit_csv(records), out_path, out);
      return 0;
    }

    if (fit->parsed()) {
      silh_given = silh_opt->count() > 0;
      std::string text = read_file(in_path);
      bool json_in = in_path.size() >= 5 && in_path.compare(in_path.size() - 5, 5, ".json") == 0;
      std::vector<SweepRecord> records = json_in ? parse_records_json(text) : parse_records_csv(text);
      nlohmann::ordered_json j = to_json(fit_exponent(records));
      if (silh_given) {
        nlohmann::ordered_json bounds = nlohmann::ordered_json::array();
        bool all = true;
        for (const auto& rec : records) {
          BoundCheck check_result = check_theorem_bound(rec, silh_length);
          nlohmann::ordered_json b;
          b["n"] = rec.n;
          b["lhs"] = check_result.lhs;
          b["rhs"] = check_result.rhs;
          b["holds"] = check_result.holds;
          bounds.push_back(b);
          all = all && check_result.holds;
        }
        j["bound_holds_all"] = all;
        j["bound_checks"] = bounds;
      }
      detail::deliver(detail::dump(j), out_path, out);
      return 0;
    }
  } catch (const InvalidSpec& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const MeshError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const FileError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args), out, err);
}

}  // namespace silhlab::cli
