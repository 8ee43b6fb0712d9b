#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftile/render.hpp"
#include "ftile/report.hpp"
#include "ftile/search.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ftile;

namespace {

struct Globals {
  std::size_t budget = 20000;
  std::size_t max_level = 200;
  bool json_out = false;
  bool quiet = false;
};

fs::path fixture_dir() {
  if (const char *env = std::getenv("FTILE_FIXTURES")) return env;
  return FTILE_FIXTURE_DIR;
}

/// Accepts a path or the name of a shipped fixture.
fs::path resolve_config(const std::string &arg) {
  fs::path p(arg);
  if (fs::exists(p)) return p;
  fs::path f = fixture_dir() / (arg + ".json");
  if (fs::exists(f)) return f;
  throw Error(ErrorKind::IoError, "no such config: " + arg);
}

std::vector<double> parse_reals(const std::string &text, std::size_t count, const char *what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw Error(ErrorKind::ConfigError, std::string(what) + ": bad number '" + item + "'");
    }
  }
  if (out.size() != count)
    throw Error(ErrorKind::ConfigError, std::string(what) + ": expected " + std::to_string(count) + " numbers");
  return out;
}

json parse_int_list(const std::string &text, const char *what) {
  json out = json::array();
  try {
    for (const auto &c : IntPolynomial::parse(text).coeffs) out.push_back(c.convert_to<std::int64_t>());
  } catch (const Error &) {
    throw Error(ErrorKind::ConfigError, std::string(what) + ": expected comma-separated integers");
  }
  return out;
}

void emit(const Globals &g, const json &doc) {
  if (g.quiet) return;
  std::cout << (g.json_out ? doc.dump() : doc.dump(2)) << '\n';
}

int cmd_analyze(const Globals &g, const std::string &config, const std::string &check, bool check_flag,
                const std::string &graph_prefix, bool no_types, std::size_t type_cap, bool overlap_types,
                unsigned threads, bool no_timing) {
  const fs::path path = resolve_config(config);
  const IFSystem sys = load_config_file(path);
  AnalyzeOptions opt;
  opt.ft.budget = g.budget;
  opt.ft.max_level = g.max_level;
  opt.ft.threads = threads;
  opt.compute_types = !no_types;
  opt.types.cap = type_cap;
  opt.types.overlap_universe = overlap_types;
  const Analysis a = analyze(sys, opt);
  const json report = report_json(sys, a, !no_timing);
  emit(g, report);
  for (const auto &w : sys.warnings())
    if (!g.quiet) std::cerr << "warning: " << w << '\n';

  if (!graph_prefix.empty() && a.graph) {
    std::ofstream edges(graph_prefix + ".edges.tsv"), vertices(graph_prefix + ".vertices.tsv");
    if (!edges || !vertices) throw Error(ErrorKind::IoError, "cannot write graph export " + graph_prefix);
    write_graph_export(edges, vertices, a.ft, *a.graph);
  }

  if (check_flag || !check.empty()) {
    const fs::path expected_path =
        check.empty() ? path.parent_path() / "expected" / path.filename() : fs::path(check);
    std::ifstream in(expected_path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + expected_path.string());
    json expected;
    try {
      expected = json::parse(in);
    } catch (const json::parse_error &e) {
      throw Error(ErrorKind::ConfigError, std::string("expected file: ") + e.what());
    }
    const auto problems = check_report(report, expected);
    for (const auto &p : problems) std::cerr << "check: " << p << '\n';
    if (!problems.empty()) return 3;
    if (!g.quiet && !g.json_out) std::cerr << "check: " << expected_path.string() << " matches\n";
  }
  return a.ft.status == FTStatus::FiniteType ? 0 : 2;
}

int cmd_pisot(const Globals &g, const std::string &poly_text, const std::string &config, const std::string &hint) {
  std::optional<Complex> lambda_hint;
  if (!hint.empty()) {
    auto v = parse_reals(hint, 2, "--lambda-hint");
    lambda_hint = Complex(v[0], v[1]);
  }
  json out;
  if (!poly_text.empty()) {
    IntPolynomial p;
    try {
      p = IntPolynomial::parse(poly_text);
    } catch (const Error &e) {
      throw Error(ErrorKind::ConfigError, e.what());
    }
    if (p.coeffs.size() < 2 || !p.is_monic()) throw Error(ErrorKind::ConfigError, "polynomial must be monic of degree >= 1");
    IntVector one(p.degree());
    one[0] = 1;
    const FieldContext field(companion_matrix(p), one, lambda_hint);
    const PisotClass pc = pisot_classify(field, p);
    out["poly"] = p.to_string();
    out["lambda"] = {field.lambda().real(), field.lambda().imag()};
    out["modulus"] = field.modulus();
    out["root_moduli"] = pc.root_moduli;
    out["pisot_class"] = std::string(to_string(pc.kind));
    out["pisot_source"] = "minimal_polynomial";
  } else {
    const IFSystem sys = load_config_file(resolve_config(config));
    const PisotClass pc = pisot_classify(sys.field(), sys.minimal_poly());
    out["label"] = sys.label();
    out["lambda"] = {sys.field().lambda().real(), sys.field().lambda().imag()};
    out["modulus"] = sys.field().modulus();
    out["root_moduli"] = pc.root_moduli;
    out["pisot_class"] = std::string(to_string(pc.kind));
    out["pisot_source"] = pc.from_characteristic_polynomial ? "characteristic_polynomial" : "minimal_polynomial";
  }
  if (g.json_out) {
    emit(g, out);
  } else if (!g.quiet) {
    std::cout << std::setprecision(10) << "lambda  " << out["lambda"][0].get<double>() << (out["lambda"][1].get<double>() < 0 ? " - " : " + ")
              << std::abs(out["lambda"][1].get<double>()) << "i\n"
              << "modulus " << out["modulus"].get<double>() << "\nroots  ";
    for (double r : out["root_moduli"]) std::cout << ' ' << r;
    std::cout << "\nclass   " << out["pisot_class"].get<std::string>() << " (" << out["pisot_source"].get<std::string>()
              << ")\n";
  }
  return 0;
}

int cmd_render(const Globals &g, const std::string &config, const std::string &mode, int px, const std::string &window,
               const std::string &depth, double gamma, const std::string &out_path, std::size_t piece_cap) {
  const IFSystem sys = load_config_file(resolve_config(config));
  RenderJob job;
  job.window = Window::around_attractor(sys);
  if (!window.empty()) {
    auto v = parse_reals(window, 4, "--window");
    job.window = {Complex(v[0], v[1]), v[2], v[3]};
  }
  if (mode == "global") job.mode = RenderMode::Global;
  else if (mode == "local") job.mode = RenderMode::Local;
  else throw Error(ErrorKind::ConfigError, "--mode must be global or local");
  job.px = px;
  if (!depth.empty() && depth != "auto") {
    try {
      job.depth = static_cast<unsigned>(std::stoul(depth));
    } catch (const std::exception &) {
      throw Error(ErrorKind::ConfigError, "--depth must be a nonnegative integer or auto");
    }
  }
  job.gamma = gamma;
  job.piece_cap = piece_cap;
  for (const auto &w : sys.warnings())
    if (!g.quiet) std::cerr << "warning: " << w << '\n';
  const RenderResult res = rasterize(sys, job);
  write_image(res.image, out_path, format_for(out_path));
  json info{{"out", out_path},
            {"width", res.image.width},
            {"height", res.image.height},
            {"depth", res.depth},
            {"pieces", res.pieces},
            {"max_hits", res.max_hits}};
  if (g.json_out) emit(g, info);
  else if (!g.quiet)
    std::cout << "wrote " << out_path << " (" << res.image.width << "x" << res.image.height << "), depth "
              << res.depth << ", " << res.pieces << " visible pieces\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Finite-type analysis and rendering of self-similar sets with algebraic data"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--budget", g.budget, "Candidate budget for the FT algorithm")->capture_default_str();
  app.add_option("--max-level", g.max_level, "Maximum FT level")->capture_default_str();
  app.add_flag("--json", g.json_out, "Compact JSON output");
  app.add_flag("--quiet", g.quiet, "Suppress normal output");

  auto *analyze = app.add_subcommand("analyze", "Run the full neighbor and dimension analysis");
  std::string a_config, a_check, a_graph;
  bool a_check_flag = false, a_no_types = false, a_overlap = false, a_no_timing = false;
  std::size_t a_cap = 1'000'000;
  unsigned a_threads = 0;
  analyze->add_option("config", a_config, "Config file or fixture name")->required();
  auto *check_opt = analyze->add_option("--check", a_check, "Compare with an expected-output file")->expected(0, 1);
  analyze->add_option("--graph", a_graph, "Write PREFIX.edges.tsv and PREFIX.vertices.tsv");
  analyze->add_flag("--no-types", a_no_types, "Skip neighborhood types and dimension");
  analyze->add_option("--type-cap", a_cap, "Maximum number of neighborhood types")->capture_default_str();
  analyze->add_flag("--overlap-types", a_overlap, "Build types from overlap neighbors only");
  analyze->add_option("--threads", a_threads, "Worker threads (default: FTILE_THREADS or all cores)");
  analyze->add_flag("--no-timing", a_no_timing, "Omit runtime fields from the report");

  auto *pisot = app.add_subcommand("pisot", "Classify an expansion factor");
  std::string p_poly, p_config, p_hint;
  auto *poly_opt = pisot->add_option("--poly", p_poly, "Monic polynomial, ascending coefficients");
  auto *pcfg_opt = pisot->add_option("--config", p_config, "Config file or fixture name");
  pisot->add_option("--lambda-hint", p_hint, "re,im of the wanted root");
  poly_opt->excludes(pcfg_opt);

  auto *render = app.add_subcommand("render", "Rasterize the attractor");
  std::string r_config, r_mode = "global", r_window, r_depth = "auto", r_out = "out.ppm";
  int r_px = 512;
  double r_gamma = 1.0;
  std::size_t r_cap = 100'000'000;
  render->add_option("config", r_config, "Config file or fixture name")->required();
  render->add_option("--mode", r_mode, "global or local")->capture_default_str();
  render->add_option("--px", r_px, "Image width in pixels")->capture_default_str();
  render->add_option("--window", r_window, "cx,cy,width,height");
  render->add_option("--depth", r_depth, "Recursion depth or auto")->capture_default_str();
  render->add_option("--gamma", r_gamma, "Shade exponent for local views")->capture_default_str();
  render->add_option("--out", r_out, "Output file (.ppm or .png)")->capture_default_str();
  render->add_option("--piece-cap", r_cap, "Maximum number of visible pieces")->capture_default_str();

  auto *search = app.add_subcommand("search", "Randomized search for finite-type systems");
  SearchSpec spec;
  std::string s_config, s_poly, s_lambda, s_log = "search.jsonl";
  std::vector<std::string> s_roots;
  bool s_no_neg = false, s_no_timing = false;
  auto *scfg = search->add_option("--config", s_config, "Config whose field is used (digits ignored)");
  auto *spoly = search->add_option("--poly", s_poly, "Minimal polynomial of the primitive element");
  scfg->excludes(spoly);
  search->add_option("--lambda", s_lambda, "Coordinates of lambda with --poly (default: the primitive element)");
  search->add_option("--m", spec.m, "Number of maps")->capture_default_str();
  search->add_option("--bound", spec.coord_bound, "Translation coordinates lie in [-B, B]")->capture_default_str();
  search->add_option("--root", s_roots, "Coordinates of a root of unity generating rotations (repeatable)");
  search->add_flag("--no-negation", s_no_neg, "Do not add -1 to the rotation generators");
  search->add_option("--trials", spec.trials, "Number of trials")->capture_default_str();
  search->add_option("--seed", spec.seed, "64-bit seed")->capture_default_str();
  search->add_option("--neighbor-cap", spec.neighbor_cap, "Flag records with at most this many proper maps")
      ->capture_default_str();
  search->add_flag("--beta", spec.compute_beta, "Also compute the dimension");
  search->add_flag("--no-timing", s_no_timing, "Omit runtime_ms from records");
  search->add_option("--log", s_log, "JSONL log (appended)")->capture_default_str();

  auto *fixtures = app.add_subcommand("fixtures", "Fixture catalog");
  fixtures->require_subcommand(1);
  auto *list = fixtures->add_subcommand("list", "List the shipped fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*analyze)
      return cmd_analyze(g, a_config, a_check, check_opt->count() > 0, a_graph, a_no_types, a_cap, a_overlap,
                         a_threads, a_no_timing);
    if (*pisot) {
      if (p_poly.empty() && p_config.empty()) throw Error(ErrorKind::ConfigError, "pisot needs --poly or --config");
      return cmd_pisot(g, p_poly, p_config, p_hint);
    }
    if (*render) return cmd_render(g, r_config, r_mode, r_px, r_window, r_depth, r_gamma, r_out, r_cap);
    if (*search) {
      if (!s_config.empty()) {
        std::ifstream in(resolve_config(s_config));
        spec.base = json::parse(in);
      } else if (!s_poly.empty()) {
        json poly = parse_int_list(s_poly, "--poly");
        json lambda = json::array();
        for (std::size_t i = 0; i + 1 < poly.size(); ++i) lambda.push_back(i == 1 ? 1 : 0);
        if (poly.size() == 2) lambda[0] = -poly[0].get<std::int64_t>();
        if (!s_lambda.empty()) lambda = parse_int_list(s_lambda, "--lambda");
        spec.base = json{{"mode", "power"}, {"poly", poly}, {"lambda", lambda}};
      } else {
        throw Error(ErrorKind::ConfigError, "search needs --config or --poly");
      }
      for (const auto &r : s_roots) spec.generators.push_back(parse_int_list(r, "--root"));
      spec.negation = !s_no_neg;
      spec.budget = g.budget;
      spec.max_level = g.max_level;
      spec.timing = !s_no_timing;
      const SearchRunner runner(spec);
      std::ofstream log(s_log, std::ios::app);
      if (!log) throw Error(ErrorKind::IoError, "cannot open " + s_log);
      std::size_t finite = 0, interesting = 0;
      const auto records = runner.run(log, [&](const json &rec) {
        if (rec["ft_status"] == "FiniteType") ++finite;
        if (rec["interesting"].get<bool>()) ++interesting;
      });
      json summary{{"trials", records.size()}, {"finite_type", finite}, {"interesting", interesting}, {"log", s_log}};
      if (g.json_out) emit(g, summary);
      else if (!g.quiet)
        std::cout << records.size() << " trials, " << finite << " finite type, " << interesting
                  << " interesting; log " << s_log << '\n';
      return 0;
    }
    if (*list) {
      std::vector<fs::path> files;
      for (const auto &e : fs::directory_iterator(fixture_dir()))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      json names = json::array();
      for (const auto &f : files) {
        std::ifstream in(f);
        json doc = json::parse(in);
        names.push_back(json{{"name", f.stem().string()}, {"mode", doc.value("mode", "")},
                             {"digits", doc.contains("digits") ? doc["digits"].size() : 0}});
      }
      if (g.json_out) emit(g, names);
      else if (!g.quiet)
        for (const auto &n : names)
          std::cout << std::left << std::setw(20) << n["name"].get<std::string>() << n["mode"].get<std::string>()
                    << "  m=" << n["digits"] << '\n';
      return 0;
    }
  } catch (const Error &e) {
    std::cerr << error_json(e).dump() << '\n';
    return 1;
  } catch (const json::exception &e) {
    std::cerr << json{{"error", "ConfigError"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 1;
}
