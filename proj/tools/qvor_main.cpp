// qvor: Voronoi diagrams of pure states, capacity estimates, and self-checks.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage or
// configuration error.

#include <algorithm>
#include <cstdint>
#include <map>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qvor/bloch.hpp"
#include "qvor/channel.hpp"
#include "qvor/io.hpp"
#include "qvor/sites.hpp"
#include "qvor/svg.hpp"
#include "qvor/verify.hpp"
#include "qvor/voronoi.hpp"

namespace fs = std::filesystem;
using qvor::io::Json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// Everything a run can be configured with. Values come from the defaults,
// then the --config file, then explicit flags.
// d = 0 and n = 0 stand for the subcommand's own default.
struct Settings {
  int d = 0;
  int example = 3;
  std::vector<Eigen::Vector3d> sites;  // overrides `example` when non-empty
  std::vector<std::string> kinds{"divergence", "euclidean"};
  std::size_t n = 0;
  double r = 0.9999;
  std::uint64_t seed = 0;
  std::string scheme = "fibonacci";
  std::string out;
  double boundary_tol = 1e-7;
  int grid_theta = 90;
  int grid_phi = 180;
  bool ellipsoid_view = false;
  int svg_size = 480;
  int svg_resolution = 160;
  // capacity
  std::optional<qvor::QubitChannel> channel;
  bool interior = false;
  double gap_tol = 1e-7;
  // verify
  std::vector<int> only;
  std::vector<int> dims{3, 4, 5};
  double eigen_tol = 1e-9;
};

[[noreturn]] void config_error(const std::string& what) {
  throw qvor::Error(qvor::ErrorCode::kInvalidArgument, what);
}

template <class T>
T get_as(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    config_error(std::string("config key '") + key + "' has the wrong type");
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

qvor::QubitChannel channel_from_json(const Json& j) {
  if (j.is_number()) return qvor::QubitChannel::depolarizing(j.get<double>());
  return qvor::QubitChannel::from_json(j.dump());
}

void apply_config_file(const fs::path& path, Settings& s) {
  const Json j = qvor::io::read_json_file(path);
  if (!j.is_object()) config_error(path.string() + ": top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "d") s.d = get_as<int>(j, "d");
    else if (key == "example") s.example = get_as<int>(j, "example");
    else if (key == "sites") {
      s.sites.clear();
      for (const auto& v : get_as<std::vector<std::vector<double>>>(j, "sites")) {
        if (v.size() != 3) config_error("each site needs three coordinates");
        s.sites.emplace_back(v[0], v[1], v[2]);
      }
    } else if (key == "kinds" || key == "kind") {
      s.kinds = value.is_string() ? split_list(value.get<std::string>())
                                  : get_as<std::vector<std::string>>(j, key.c_str());
    } else if (key == "n") s.n = get_as<std::size_t>(j, "n");
    else if (key == "r") s.r = get_as<double>(j, "r");
    else if (key == "seed") s.seed = get_as<std::uint64_t>(j, "seed");
    else if (key == "scheme") s.scheme = get_as<std::string>(j, "scheme");
    else if (key == "out") s.out = get_as<std::string>(j, "out");
    else if (key == "boundary_tol") s.boundary_tol = get_as<double>(j, "boundary_tol");
    else if (key == "grid_theta") s.grid_theta = get_as<int>(j, "grid_theta");
    else if (key == "grid_phi") s.grid_phi = get_as<int>(j, "grid_phi");
    else if (key == "ellipsoid_view") s.ellipsoid_view = get_as<bool>(j, "ellipsoid_view");
    else if (key == "svg_size") s.svg_size = get_as<int>(j, "svg_size");
    else if (key == "svg_resolution") s.svg_resolution = get_as<int>(j, "svg_resolution");
    else if (key == "channel") s.channel = channel_from_json(value);
    else if (key == "interior") s.interior = get_as<bool>(j, "interior");
    else if (key == "gap_tol") s.gap_tol = get_as<double>(j, "gap_tol");
    else if (key == "only") s.only = get_as<std::vector<int>>(j, "only");
    else if (key == "dims") s.dims = get_as<std::vector<int>>(j, "dims");
    else if (key == "eigen_tol") s.eigen_tol = get_as<double>(j, "eigen_tol");
    else config_error(path.string() + ": unknown key '" + key + "'");
  }
}

// Flags registered on a subcommand. Only flags the user actually passed
// override the config file.
struct Flags {
  std::string config;
  int d = 0;
  std::vector<int> dims;
  int example = 0;
  std::vector<std::string> kinds;
  std::size_t n = 0;
  double r = 0.0;
  std::uint64_t seed = 0;
  std::string scheme;
  std::string out;
  bool ellipsoid_view = false;
  int grid_theta = 0;
  int grid_phi = 0;
  int svg_resolution = 0;
  std::string channel_file;
  double depolarizing = 0.0;
  bool interior = false;
  double gap_tol = 0.0;
  std::vector<int> only;
  double eigen_tol = 0.0;
  bool json = false;

  // A key can sit on several subcommands; only one of them gets parsed.
  std::multimap<std::string, CLI::Option*> given;

  void add(const std::string& key, CLI::Option* opt) { given.emplace(key, opt); }
  bool has(const std::string& key) const {
    auto [lo, hi] = given.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      if (it->second->count() > 0) return true;
    }
    return false;
  }
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON file with settings; flags override it")
      ->check(CLI::ExistingFile);
  f.add("seed", cmd->add_option("--seed", f.seed, "random seed"));
  f.add("out", cmd->add_option("--out", f.out, "output directory"));
}

Settings resolve(const Flags& f) {
  Settings s;
  if (!f.config.empty()) apply_config_file(f.config, s);
  if (f.has("d")) s.d = f.d;
  if (f.has("dims")) s.dims = f.dims;
  if (f.has("example")) {
    s.example = f.example;
    s.sites.clear();
  }
  if (f.has("kind")) {
    s.kinds.clear();
    for (const auto& k : f.kinds) {
      for (auto& part : split_list(k)) s.kinds.push_back(part);
    }
  }
  if (f.has("n")) s.n = f.n;
  if (f.has("r")) s.r = f.r;
  if (f.has("seed")) s.seed = f.seed;
  if (f.has("scheme")) s.scheme = f.scheme;
  if (f.has("out")) s.out = f.out;
  if (f.has("ellipsoid_view")) s.ellipsoid_view = f.ellipsoid_view;
  if (f.has("grid_theta")) s.grid_theta = f.grid_theta;
  if (f.has("grid_phi")) s.grid_phi = f.grid_phi;
  if (f.has("svg_resolution")) s.svg_resolution = f.svg_resolution;
  if (f.has("channel")) s.channel = channel_from_json(qvor::io::read_json_file(f.channel_file));
  if (f.has("depolarizing")) s.channel = qvor::QubitChannel::depolarizing(f.depolarizing);
  if (f.has("interior")) s.interior = f.interior;
  if (f.has("gap_tol")) s.gap_tol = f.gap_tol;
  if (f.has("only")) s.only = f.only;
  if (f.has("eigen_tol")) s.eigen_tol = f.eigen_tol;
  return s;
}

Json vec_json(const Eigen::Vector3d& v) { return Json::array({v(0), v(1), v(2)}); }

std::string num(double v) { return qvor::io::format_double(v); }

qvor::PureStateModel model_for(int d) {
  if (d == 2) return qvor::PureStateModel::qubit();
  if (d < 2) throw qvor::Error(qvor::ErrorCode::kSectionDimension, "d must be at least 2", d);
  return qvor::PureStateModel::section(d);
}

std::vector<Eigen::Vector3d> resolve_sites(const Settings& s) {
  if (!s.sites.empty()) return s.sites;
  return qvor::example_sites(s.example);
}

std::vector<Eigen::Vector3d> sample_points(const Settings& s) {
  std::vector<Eigen::Vector3d> pts;
  for (const auto& b : qvor::sample_sphere(s.n, qvor::parse_sphere_scheme(s.scheme), s.seed)) {
    pts.push_back(b.vec());
  }
  return pts;
}

// ---- diagram ---------------------------------------------------------------

Json diagram_config(const Settings& s, const std::vector<Eigen::Vector3d>& sites) {
  Json j;
  j["command"] = "diagram";
  j["d"] = s.d;
  j["example"] = s.sites.empty() ? Json(s.example) : Json(nullptr);
  Json sj = Json::array();
  for (const auto& p : sites) sj.push_back(vec_json(p));
  j["sites"] = sj;
  j["kinds"] = s.kinds;
  j["n"] = s.n;
  j["r"] = s.r;
  j["seed"] = s.seed;
  j["scheme"] = s.scheme;
  j["boundary_tol"] = s.boundary_tol;
  j["grid_theta"] = s.grid_theta;
  j["grid_phi"] = s.grid_phi;
  j["ellipsoid_view"] = s.ellipsoid_view;
  j["svg_size"] = s.svg_size;
  j["svg_resolution"] = s.svg_resolution;
  return j;
}

int run_diagram(const Settings& s) {
  const auto model = model_for(s.d);
  const auto sites = resolve_sites(s);
  if (s.kinds.empty()) config_error("no distance kinds given");
  std::vector<qvor::DistanceKind> kinds;
  for (const auto& k : s.kinds) kinds.push_back(qvor::DistanceKind::parse(k, s.r));
  if (s.grid_theta < 2 || s.grid_phi < 3) config_error("boundary grid is too coarse");
  const auto points = sample_points(s);

  const Json config = diagram_config(s, sites);
  const std::string hash = qvor::io::config_hash(config);
  const fs::path out = s.out.empty() ? fs::path("out") : fs::path(s.out);

  std::vector<qvor::CellAssignment> assignments;
  Json boundary_summary = Json::object();
  for (const auto& kind : kinds) {
    const auto cells = qvor::assign_cells(model, points, sites, kind, s.boundary_tol);
    qvor::io::CsvTable assign({"index", "u_x", "u_y", "u_z", "c1", "c2", "c3", "site", "margin",
                           "boundary", "config_hash"});
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto c = model.plot_coordinates(points[i]);
      assign.add_row({std::to_string(i), num(points[i](0)), num(points[i](1)),
                      num(points[i](2)), num(c(0)), num(c(1)), num(c(2)),
                      std::to_string(cells.site[i]), num(cells.margin[i]),
                      cells.is_boundary(i) ? "1" : "0", hash});
    }
    qvor::io::write_text(out / ("assign_" + kind.name() + ".csv"), assign.str());

    const auto boundary =
        qvor::extract_boundary(model, sites, kind, {s.grid_theta, s.grid_phi});
    qvor::io::CsvTable lines({"line", "site_a", "site_b", "closed", "vertex", "c1", "c2", "c3",
                          "config_hash"});
    for (std::size_t l = 0; l < boundary.lines.size(); ++l) {
      const auto& pl = boundary.lines[l];
      for (std::size_t v = 0; v < pl.points.size(); ++v) {
        const auto c = model.plot_coordinates(pl.points[v]);
        lines.add_row({std::to_string(l), std::to_string(pl.site_a), std::to_string(pl.site_b),
                       pl.closed ? "1" : "0", std::to_string(v), num(c(0)), num(c(1)),
                       num(c(2)), hash});
      }
    }
    qvor::io::write_text(out / ("boundary_" + kind.name() + ".csv"), lines.str());

    qvor::SvgOptions svg;
    svg.size = s.svg_size;
    svg.resolution = s.svg_resolution;
    svg.ellipsoid_view = s.ellipsoid_view;
    svg.title = "d=" + std::to_string(s.d) + " " + kind.name() + ", " +
                std::to_string(sites.size()) + " sites";
    svg.config_hash = hash;
    qvor::io::write_text(out / ("diagram_" + kind.name() + ".svg"),
                         qvor::render_svg(model, sites, kind, boundary, svg));

    boundary_summary[kind.name()] = {{"lines", boundary.lines.size()},
                                     {"grid_spacing", boundary.grid_spacing},
                                     {"max_abs_gap", boundary.max_abs_gap}};
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) flagged += cells.is_boundary(i) ? 1 : 0;
    std::cout << kind.name() << ": " << points.size() << " points, " << flagged
              << " on boundaries, " << boundary.lines.size() << " boundary lines\n";
    assignments.push_back(cells);
  }

  if (kinds.size() >= 2) {
    Json pairs = Json::array();
    for (std::size_t a = 0; a < kinds.size(); ++a) {
      for (std::size_t b = a + 1; b < kinds.size(); ++b) {
        const auto cmp = qvor::compare_diagrams(assignments[a], assignments[b]);
        Json witnesses = Json::array();
        for (std::size_t w = 0; w < cmp.witnesses.size() && w < 20; ++w) {
          const std::size_t i = cmp.witnesses[w];
          witnesses.push_back({{"index", i},
                               {"u", vec_json(points[i])},
                               {"plot", vec_json(model.plot_coordinates(points[i]))},
                               {"site_a", assignments[a].site[i]},
                               {"site_b", assignments[b].site[i]}});
        }
        pairs.push_back({{"a", kinds[a].name()},
                         {"b", kinds[b].name()},
                         {"total", cmp.total},
                         {"agree", cmp.agree},
                         {"disagree", cmp.disagree},
                         {"boundary_excluded", cmp.boundary},
                         {"identical", cmp.disagree == 0},
                         {"witnesses", witnesses}});
        std::cout << kinds[a].name() << " vs " << kinds[b].name() << ": " << cmp.disagree
                  << " of " << cmp.total << " points differ ("
                  << cmp.boundary << " boundary points excluded)\n";
      }
    }
    Json report{{"config", config},
                {"config_hash", hash},
                {"comparisons", pairs},
                {"boundaries", boundary_summary}};
    qvor::io::write_text(out / "comparison.json", report.dump(2) + "\n");
  }
  std::cout << "wrote " << out.string() << " (config " << hash << ")\n";
  return 0;
}

// ---- capacity --------------------------------------------------------------

int run_capacity(const Settings& s) {
  const auto channel = s.channel.value_or(qvor::QubitChannel::identity());
  qvor::CapacityOptions opt;
  opt.samples = s.n;
  opt.scheme = qvor::parse_sphere_scheme(s.scheme);
  opt.seed = s.seed;
  opt.interior = s.interior;
  opt.seb.gap_tol = s.gap_tol;

  Json config{{"command", "capacity"},
              {"channel", Json::parse(channel.to_json())},
              {"n", s.n},
              {"seed", s.seed},
              {"scheme", s.scheme},
              {"interior", s.interior},
              {"gap_tol", s.gap_tol}};
  const std::string hash = qvor::io::config_hash(config);
  const auto est = qvor::holevo_capacity_estimate(channel, opt);
  Json report{{"config", config},
              {"config_hash", hash},
              {"nats", est.value},
              {"bits", est.bits()},
              {"n", est.samples},
              {"seed", s.seed},
              {"gap", est.gap},
              {"iterations", est.iterations},
              {"converged", est.converged},
              {"center", vec_json(est.center.vec())}};
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!s.out.empty()) qvor::io::write_text(fs::path(s.out) / "capacity.json", text);
  return 0;
}

// ---- verify ----------------------------------------------------------------

int run_verify(const Settings& s, bool json_to_stdout) {
  qvor::verify::Config cfg;
  cfg.seed = s.seed == 0 ? cfg.seed : s.seed;
  cfg.section_dims = s.dims;
  cfg.eigen_tol = s.eigen_tol;
  cfg.validate();
  std::vector<int> ids = s.only.empty() ? qvor::verify::all_ids() : s.only;
  const auto valid = qvor::verify::all_ids();
  for (int id : ids) {
    if (std::find(valid.begin(), valid.end(), id) == valid.end()) {
      config_error("no check with id " + std::to_string(id));
    }
  }
  std::ostream& lines = json_to_stdout ? std::cerr : std::cout;
  const auto checks = qvor::verify::run_checks(ids, cfg, [&](const qvor::verify::Check& c) {
    lines << qvor::verify::format_line(c) << std::endl;
  });
  const bool ok = qvor::verify::all_passed(checks);
  const Json report = qvor::verify::report(checks, cfg);
  if (json_to_stdout) std::cout << report.dump(2) << "\n";
  if (!s.out.empty()) qvor::io::write_text(fs::path(s.out) / "verify.json", report.dump(2) + "\n");
  lines << "verify: " << (ok ? "PASS" : "FAIL") << std::endl;
  return ok ? 0 : kExitFail;
}

// ---- sample ----------------------------------------------------------------

int run_sample(const Settings& s) {
  const auto model = model_for(s.d);
  const auto points = sample_points(s);
  if (!(s.r > 0.0 && s.r <= 1.0)) {
    throw qvor::Error(qvor::ErrorCode::kRadiusOutOfRange, "r must lie in (0,1]", s.r);
  }
  Json config{{"command", "sample"}, {"d", s.d}, {"n", s.n}, {"r", s.r},
              {"seed", s.seed},      {"scheme", s.scheme}};
  const std::string hash = qvor::io::config_hash(config);
  qvor::io::CsvTable table({"index", "u_x", "u_y", "u_z", "c1", "c2", "c3", "config_hash"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::Vector3d u = s.r * points[i];
    const auto c = model.plot_coordinates(u);
    table.add_row({std::to_string(i), num(u(0)), num(u(1)), num(u(2)), num(c(0)), num(c(1)),
                   num(c(2)), hash});
  }
  if (s.out.empty()) {
    std::cout << table.str();
  } else {
    qvor::io::write_text(fs::path(s.out) / "samples.csv", table.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Voronoi diagrams of pure quantum states"};
  app.require_subcommand(1);

  Flags f;
  auto* diagram = app.add_subcommand("diagram", "assign cells, trace boundaries, draw SVGs");
  add_common(diagram, f);
  f.add("d", diagram->add_option("--d", f.d, "levels; 2 is the qubit sphere"));
  f.add("example",
        diagram->add_option("--example", f.example, "built-in site set")
            ->check(CLI::Range(1, 3)));
  f.add("kind",
        diagram->add_option("--kind", f.kinds,
                            "comma list of divergence, euclidean, geodesic, hilbert-schmidt"));
  f.add("n", diagram->add_option("--n", f.n, "sample points"));
  f.add("r", diagram->add_option("--r", f.r, "shrink radius for the divergence"));
  f.add("scheme", diagram->add_option("--scheme", f.scheme, "fibonacci or random"));
  f.add("ellipsoid_view",
        diagram->add_flag("--ellipsoid-view", f.ellipsoid_view, "draw section coordinates"));
  f.add("grid_theta", diagram->add_option("--grid-theta", f.grid_theta));
  f.add("grid_phi", diagram->add_option("--grid-phi", f.grid_phi));
  f.add("svg_resolution", diagram->add_option("--svg-resolution", f.svg_resolution));

  auto* capacity = app.add_subcommand("capacity", "estimate a qubit channel's capacity");
  add_common(capacity, f);
  f.add("channel",
        capacity->add_option("--channel", f.channel_file, "JSON file {\"m\":[9],\"b\":[3]}")
            ->check(CLI::ExistingFile));
  f.add("depolarizing",
        capacity->add_option("--depolarizing", f.depolarizing, "depolarizing probability"));
  f.add("n", capacity->add_option("--n", f.n, "input samples"));
  f.add("scheme", capacity->add_option("--scheme", f.scheme));
  f.add("interior", capacity->add_flag("--interior", f.interior, "sample the ball"));
  f.add("gap_tol", capacity->add_option("--gap-tol", f.gap_tol));

  auto* verify = app.add_subcommand("verify", "run the numerical self-checks");
  add_common(verify, f);
  f.add("dims",
        verify->add_option("--d", f.dims, "levels for the section checks")->delimiter(','));
  f.add("only", verify->add_option("--only", f.only, "check ids")->delimiter(','));
  f.add("eigen_tol", verify->add_option("--eigen-tol", f.eigen_tol));
  verify->add_flag("--json", f.json, "print the JSON report on stdout");

  auto* sample = app.add_subcommand("sample", "write sample points as CSV");
  add_common(sample, f);
  f.add("d", sample->add_option("--d", f.d));
  f.add("n", sample->add_option("--n", f.n));
  f.add("r", sample->add_option("--r", f.r));
  f.add("scheme", sample->add_option("--scheme", f.scheme));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    Settings s = resolve(f);
    if (diagram->parsed()) {
      if (s.d == 0) s.d = 5;
      if (s.n == 0) s.n = 20000;
      return run_diagram(s);
    }
    if (capacity->parsed()) {
      if (s.n == 0) s.n = 2562;
      return run_capacity(s);
    }
    if (verify->parsed()) return run_verify(s, f.json);
    if (s.d == 0) s.d = 2;
    if (s.n == 0) s.n = 1000;
    return run_sample(s);
  } catch (const qvor::Error& e) {
    std::cerr << "qvor: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "qvor: " << e.what() << "\n";
    return kExitUsage;
  }
}
