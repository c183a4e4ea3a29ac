#include "qvor/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "qvor/bloch.hpp"
#include "qvor/channel.hpp"
#include "qvor/qdm.hpp"
#include "qvor/section.hpp"
#include "qvor/seb.hpp"
#include "qvor/sites.hpp"
#include "qvor/voronoi.hpp"

namespace qvor::verify {

using Vec = Eigen::Vector3d;
using io::Json;

void Config::validate() const {
  for (int d : section_dims) section::require_section_dim(d);
  if (!(shrink > 0.0 && shrink < 1.0)) {
    throw Error(ErrorCode::kRadiusOutOfRange, "shrink radius must lie in (0,1)", shrink);
  }
  if (sphere_points < 1 || section_points < 1 || capacity_samples < 2) {
    throw Error(ErrorCode::kInvalidArgument, "sample counts must be positive");
  }
}

Json Config::to_json() const {
  return {{"seed", seed},
          {"section_dims", section_dims},
          {"eigen_tol", eigen_tol},
          {"closed_form_tol", closed_form_tol},
          {"identity_tol", identity_tol},
          {"kl_tol", kl_tol},
          {"plane_tol", plane_tol},
          {"bisector_tol", bisector_tol},
          {"zero_set_tol", zero_set_tol},
          {"capacity_tol", capacity_tol},
          {"shrink", shrink},
          {"sphere_points", sphere_points},
          {"section_points", section_points},
          {"capacity_samples", capacity_samples}};
}

const char* to_string(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kInfo: return "info";
  }
  return "fail";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Vec> fibonacci(std::size_t n) {
  std::vector<Vec> out;
  out.reserve(n);
  for (const auto& v : sample_sphere(n)) out.push_back(v.vec());
  return out;
}

Vec random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  while (true) {
    const Vec v(g(rng), g(rng), g(rng));
    if (v.norm() > 1e-6) return v.normalized();
  }
}

CMatrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  CMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

std::vector<double> random_probabilities(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> p(static_cast<std::size_t>(d));
  double s = 0.0;
  for (auto& x : p) s += (x = u(rng));
  for (auto& x : p) x /= s;
  return p;
}

CMatrix diagonal(const std::vector<double>& p) {
  const int d = static_cast<int>(p.size());
  CMatrix m = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = p[static_cast<std::size_t>(i)];
  return m;
}

// Root of f on [lo, hi] where f(lo) < 0 < f(hi).
template <class F>
double bisect(F&& f, double lo, double hi, int steps = 80) {
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Pure point on the meridian through the x axis at angle t from +x.
Vec meridian(double t, double phi) {
  return {std::cos(t), std::sin(t) * std::cos(phi), std::sin(t) * std::sin(phi)};
}

double site_scale(const section::SectionSite& a, const section::SectionSite& b) {
  return std::max({std::abs(a.eta1), std::abs(a.etad), std::abs(a.etad1), std::abs(b.eta1),
                   std::abs(b.etad), std::abs(b.etad1)});
}

int sign_of(double v, double zero) { return std::abs(v) <= zero ? 0 : (v > 0 ? 1 : -1); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Check make_check(int id, const char* name) {
  Check c;
  c.id = id;
  c.name = name;
  return c;
}

// 1 ----------------------------------------------------------------------
Check qubit_coincidence(const Config& cfg) {
  Check c = make_check(1, "qubit-coincidence");
  const auto t0 = Clock::now();
  const auto pts = fibonacci(cfg.sphere_points);
  const auto model = PureStateModel::qubit();
  const double tol = 1e-6;
  std::size_t compared = 0, disagree = 0, excluded = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto sites = random_sites(2 + s % 7, cfg.seed + s);
    const auto div = assign_cells(model, pts, sites, DistanceKind::divergence_limit(cfg.shrink), tol);
    const auto geo = assign_cells(model, pts, sites, DistanceKind::geodesic(), tol);
    const auto euc = assign_cells(model, pts, sites, DistanceKind::coordinate_euclidean(), tol);
    for (const auto& cmp : {compare_diagrams(div, geo), compare_diagrams(div, euc),
                            compare_diagrams(geo, euc)}) {
      compared += cmp.agree + cmp.disagree;
      disagree += cmp.disagree;
      excluded += cmp.boundary;
    }
  }
  const double secs = seconds_since(t0);
  c.measured = {{"site_sets", 20}, {"points", pts.size()}, {"compared", compared},
                {"disagreements", disagree}, {"boundary_excluded", excluded},
                {"margin_tol", tol}, {"runtime_target_s", 30}};
  c.status = disagree == 0 && secs < 30.0 ? Status::kPass : Status::kFail;
  c.summary = std::to_string(disagree) + " disagreements over " + std::to_string(compared) +
              " comparisons (" + std::to_string(excluded) + " near-boundary excluded)";
  return c;
}

// 2 ----------------------------------------------------------------------
Check mirrored_pair_plane(const Config& cfg) {
  Check c = make_check(2, "mirrored-pair-plane");
  std::mt19937_64 rng(cfg.seed + 2);
  const auto sites = example_sites(2);
  double worst_div = 0.0, worst_euc = 0.0, worst_odd = 0.0;
  Json per_dim = Json::object();
  for (int d : cfg.section_dims) {
    const auto a = section::sphere_to_site(d, sites[0]);
    const auto b = section::sphere_to_site(d, sites[1]);
    std::uniform_real_distribution<double> x1(-1.0, d - 1.0), xd(-1.0, 1.0), ang(0.0, 2 * std::numbers::pi);
    double wd = 0.0, we = 0.0;
    for (int i = 0; i < 1000; ++i) {
      // half pure points on the ring, half arbitrary plane points
      const double t = ang(rng);
      const auto p = i % 2 == 0 ? section::sphere_to_section(d, Vec(std::cos(t), std::sin(t), 0.0))
                                : section::SectionPoint::constrained_at(d, x1(rng), xd(rng), 0.0);
      const auto pp = section::SectionPoint::constrained_at(d, p.xi1(), p.xid, 0.0);
      wd = std::max(wd, std::abs(section::divergence_boundary_residual(a, b, pp)));
      we = std::max(we, std::abs(section::euclidean_boundary_residual(a, b, pp)));
      const double h = xd(rng);
      const auto up = section::SectionPoint::constrained_at(d, pp.xi1(), pp.xid, h);
      const auto dn = section::SectionPoint::constrained_at(d, pp.xi1(), pp.xid, -h);
      worst_odd = std::max({worst_odd,
                            std::abs(section::divergence_boundary_residual(a, b, up) +
                                     section::divergence_boundary_residual(a, b, dn)),
                            std::abs(section::euclidean_boundary_residual(a, b, up) +
                                     section::euclidean_boundary_residual(a, b, dn))});
    }
    per_dim[std::to_string(d)] = {{"max_abs_divergence_residual", wd}, {"max_abs_euclidean_residual", we}};
    worst_div = std::max(worst_div, wd);
    worst_euc = std::max(worst_euc, we);
  }
  c.measured = {{"per_dim", per_dim}, {"plane_points_per_dim", 1000}, {"tolerance", cfg.plane_tol},
                {"max_odd_symmetry_defect", worst_odd}};
  c.status = worst_div <= cfg.plane_tol && worst_euc <= cfg.plane_tol && worst_odd <= cfg.plane_tol
                 ? Status::kPass
                 : Status::kFail;
  c.summary = "max |residual| on the plane: divergence " + fmt(worst_div) + ", euclidean " +
              fmt(worst_euc) + " (tol " + fmt(cfg.plane_tol) + ")";
  return c;
}

// 3 ----------------------------------------------------------------------
Check diagonal_pair_bisector(const Config& cfg) {
  Check c = make_check(3, "diagonal-pair-bisector");
  const auto sites = example_sites(1);
  double worst = 0.0, worst_closed = 0.0;
  bool signs_ok = true;
  Json per_dim = Json::object();
  for (int d : cfg.section_dims) {
    const auto model = PureStateModel::section(d);
    // states built from generalized Bloch vectors, divergences from qdm only
    auto state = [&](const Vec& u) {
      return xi_to_density(GeneralizedBloch(d, model.coordinates(u)));
    };
    const CMatrix sa = state(sites[0]);
    const CMatrix sb = state(sites[1]);
    const double centre = (d - 2) / 2.0;
    double wd = 0.0;
    std::vector<double> roots;
    for (int k = 0; k < 8; ++k) {
      const double phi = 0.1 + k * std::numbers::pi / 4.0;
      auto gap = [&](double t) {
        const CMatrix rho = state(cfg.shrink * meridian(t, phi));
        // negative near site a (t = 0)
        return divergence_on_support(sa, rho) - divergence_on_support(sb, rho);
      };
      const double t = bisect(gap, 0.0, std::numbers::pi, 60);
      const double xi1 = model.plot_coordinates(meridian(t, phi)).x();
      roots.push_back(xi1);
      wd = std::max(wd, std::abs(xi1 - centre));
    }
    const auto a = section::sphere_to_site(d, sites[0]);
    const auto b = section::sphere_to_site(d, sites[1]);
    double wc = 0.0;
    for (int k = 0; k < 16; ++k) {
      const double ang = k * std::numbers::pi / 8.0;
      const auto on = section::SectionPoint::constrained_at(d, centre, std::cos(ang), std::sin(ang));
      wc = std::max(wc, std::abs(section::divergence_boundary_residual(a, b, on)));
      const auto left = section::SectionPoint::constrained_at(d, centre + 0.01, std::cos(ang), std::sin(ang));
      const auto right = section::SectionPoint::constrained_at(d, centre - 0.01, std::cos(ang), std::sin(ang));
      signs_ok = signs_ok && section::divergence_boundary_residual(a, b, left) > 0 &&
                 section::divergence_boundary_residual(a, b, right) < 0;
    }
    per_dim[std::to_string(d)] = {{"expected_xi1", centre}, {"numeric_roots", roots},
                                  {"max_deviation", wd}, {"closed_form_max_abs_on_plane", wc}};
    worst = std::max(worst, wd);
    worst_closed = std::max(worst_closed, wc);
  }
  c.measured = {{"per_dim", per_dim}, {"shrink", cfg.shrink}, {"tolerance", cfg.bisector_tol},
                {"closed_form_signs_ok", signs_ok}};
  c.status = worst <= cfg.bisector_tol && worst_closed == 0.0 && signs_ok ? Status::kPass
                                                                         : Status::kFail;
  c.summary = "numeric bisector max |xi1 - (d-2)/2| = " + fmt(worst) + " (tol " +
              fmt(cfg.bisector_tol) + "), closed form on the plane max " + fmt(worst_closed);
  return c;
}

// 4 ----------------------------------------------------------------------
Check section_non_coincidence(const Config& cfg) {
  Check c = make_check(4, "section-non-coincidence");
  const auto pts = fibonacci(std::max<std::size_t>(cfg.section_points, 20000));
  const auto div_kind = DistanceKind::divergence_limit(cfg.shrink);

  const auto model5 = PureStateModel::section(5);
  const auto eight = example_sites(3);
  const auto cmp5 = compare_diagrams(assign_cells(model5, pts, eight, div_kind),
                                     assign_cells(model5, pts, eight, DistanceKind::coordinate_euclidean()));

  // seeded pair at d = 3 with both eta_1 and eta_d separated
  std::uint64_t seed = cfg.seed + 4;
  std::vector<Vec> pair;
  while (true) {
    pair = random_sites(2, seed);
    const auto a = section::sphere_to_site(3, pair[0]);
    const auto b = section::sphere_to_site(3, pair[1]);
    if (std::abs(a.eta1 - b.eta1) > 0.05 && std::abs(a.etad - b.etad) > 0.05) break;
    ++seed;
  }
  const auto model3 = PureStateModel::section(3);
  const auto cmp3 = compare_diagrams(assign_cells(model3, pts, pair, div_kind),
                                     assign_cells(model3, pts, pair, DistanceKind::coordinate_euclidean()));

  auto witnesses = [&](const DiagramComparison& cmp, const PureStateModel& model) {
    Json w = Json::array();
    for (std::size_t k = 0; k < std::min<std::size_t>(5, cmp.witnesses.size()); ++k) {
      const auto q = model.plot_coordinates(pts[cmp.witnesses[k]]);
      w.push_back({q.x(), q.y(), q.z()});
    }
    return w;
  };
  c.measured = {{"points", pts.size()},
                {"eight_sites_d5", {{"agree", cmp5.agree}, {"disagree", cmp5.disagree},
                                    {"boundary", cmp5.boundary}, {"witnesses", witnesses(cmp5, model5)}}},
                {"random_pair_d3", {{"site_seed", seed}, {"agree", cmp3.agree}, {"disagree", cmp3.disagree},
                                    {"boundary", cmp3.boundary}, {"witnesses", witnesses(cmp3, model3)}}}};
  c.status = cmp5.disagree > 0 && cmp3.disagree > 0 ? Status::kPass : Status::kFail;
  c.summary = "d=5 eight sites: " + std::to_string(cmp5.disagree) + "/" + std::to_string(pts.size()) +
              " disagree; d=3 pair: " + std::to_string(cmp3.disagree) + " disagree";
  return c;
}

// 5 ----------------------------------------------------------------------
Check closed_form_equivalence(const Config& cfg) {
  Check c = make_check(5, "closed-form-equivalence");
  std::mt19937_64 rng(cfg.seed + 5);
  std::uniform_real_distribution<double> rad(0.05, 0.95), off(-1.0, 1.0);
  double worst_tr = 0.0, worst_eig = 0.0, worst_r = 0.0;
  for (int d = 3; d <= 6; ++d) {
    for (int i = 0; i < 100; ++i) {
      const auto p = section::sphere_to_section(d, rad(rng) * random_unit(rng));
      const auto s = i % 2 == 0 ? section::sphere_to_site(d, random_unit(rng))
                                : section::sphere_to_site(d, rad(rng) * random_unit(rng));
      const double closed = section::trace_sigma_log_rho(s, p);
      const double direct = qvor::trace_sigma_log_rho(section::section_density(s.point()),
                                                      section::section_density(p));
      worst_tr = std::max(worst_tr, std::abs(closed - direct));
    }
    // coordinates over the range the section states occupy
    std::uniform_real_distribution<double> on_diag(-1.0, d - 1.0);
    for (int i = 0; i < 500; ++i) {
      std::vector<double> diag(static_cast<std::size_t>(d - 1));
      for (auto& x : diag) x = on_diag(rng);
      const auto p = section::SectionPoint::general(d, diag, off(rng), off(rng));
      const auto e = section::section_eigen(p);
      std::vector<double> vals{e.lambda1, e.lambda2};
      vals.insert(vals.end(), e.rest.begin(), e.rest.end());
      std::sort(vals.begin(), vals.end(), std::greater<>());
      const auto gen = hermitian_eig(section::section_density(p));
      for (int k = 0; k < d; ++k) {
        worst_eig = std::max(worst_eig, std::abs(vals[static_cast<std::size_t>(k)] - gen.eigenvalues(k)));
      }
      const double a = (p.xi2() - p.xi1()) / (2.0 * d);
      worst_r = std::max({worst_r, std::abs(e.Rplus - e.r * (a + e.r / 2)),
                          std::abs(e.Rminus + e.r * (a - e.r / 2))});
    }
  }
  c.measured = {{"trace_log_max_abs", worst_tr}, {"trace_log_tol", cfg.closed_form_tol},
                {"eigen_max_abs", worst_eig}, {"eigen_tol", cfg.eigen_tol},
                {"r_identity_max_abs", worst_r}, {"r_identity_tol", cfg.identity_tol},
                {"pairs_per_dim", 100}, {"eigen_points_per_dim", 500}};
  c.status = worst_tr <= cfg.closed_form_tol && worst_eig <= cfg.eigen_tol && worst_r <= cfg.identity_tol
                 ? Status::kPass
                 : Status::kFail;
  c.summary = "Tr sigma log rho " + fmt(worst_tr) + " (tol " + fmt(cfg.closed_form_tol) + "), eigenvalues " +
              fmt(worst_eig) + " (tol " + fmt(cfg.eigen_tol) + "), R+- " + fmt(worst_r) + " (tol " +
              fmt(cfg.identity_tol) + ")";
  return c;
}

// 6 ----------------------------------------------------------------------
Check sphere_map_signs(const Config& cfg) {
  Check c = make_check(6, "sphere-map-sign-agreement");
  std::mt19937_64 rng(cfg.seed + 6);
  std::size_t mismatches = 0, zero_mismatches = 0, triples = 0;
  double worst_zero = 0.0;
  for (int d : {3, 5}) {
    for (int i = 0; i < 1000; ++i) {
      const Vec ua = random_unit(rng), ub = random_unit(rng), uq = random_unit(rng);
      const auto a = section::sphere_to_site(d, ua);
      const auto b = section::sphere_to_site(d, ub);
      const double zero = cfg.zero_set_tol * (1.0 + site_scale(a, b));
      const double div = section::divergence_boundary_residual(a, b, section::sphere_to_site(d, uq).point());
      const double geo = section::geodesic_bisector_residual(section::ellipsoid_to_sphere(a),
                                                             section::ellipsoid_to_sphere(b),
                                                             section::ellipsoid_to_sphere(section::sphere_to_site(d, uq)));
      ++triples;
      if (sign_of(div, zero) != sign_of(geo, zero)) ++mismatches;

      // a point on the geodesic bisector must be on the divergence bisector
      const Vec n = (ua - ub).normalized();
      const Vec on = (uq - uq.dot(n) * n).normalized();
      const double div_on = section::divergence_boundary_residual(a, b, section::sphere_to_site(d, on).point());
      worst_zero = std::max(worst_zero, std::abs(div_on));
      if (!section::on_bisector(div_on, site_scale(a, b), cfg.zero_set_tol)) ++zero_mismatches;
    }
  }
  c.measured = {{"triples", triples}, {"sign_mismatches", mismatches},
                {"zero_set_mismatches", zero_mismatches}, {"max_abs_on_bisector", worst_zero},
                {"zero_tol", cfg.zero_set_tol}};
  c.status = mismatches == 0 && zero_mismatches == 0 ? Status::kPass : Status::kFail;
  c.summary = std::to_string(mismatches) + " sign mismatches in " + std::to_string(triples) +
              " triples; bisector points max |residual| " + fmt(worst_zero);
  return c;
}

// 7 ----------------------------------------------------------------------
Check divergence_correctness(const Config& cfg) {
  Check c = make_check(7, "divergence-correctness");
  std::mt19937_64 rng(cfg.seed + 7);
  double worst_kl = 0.0, worst_self = 0.0, min_div = std::numeric_limits<double>::infinity();
  for (int d = 2; d <= 6; ++d) {
    for (int i = 0; i < 100; ++i) {
      const auto p = random_probabilities(d, rng);
      const auto q = random_probabilities(d, rng);
      worst_kl = std::max(worst_kl, std::abs(divergence(diagonal(p), diagonal(q)) - classical_kl(p, q)));
      const CMatrix s = random_density(d, rng);
      worst_self = std::max(worst_self, std::abs(divergence(s, s)));
    }
    for (int i = 0; i < 200; ++i) {
      min_div = std::min(min_div, divergence(random_density(d, rng), random_density(d, rng)));
    }
  }
  c.measured = {{"kl_max_abs", worst_kl}, {"kl_tol", cfg.kl_tol}, {"self_max_abs", worst_self},
                {"min_divergence", min_div}, {"random_pairs", 1000}};
  c.status = worst_kl <= cfg.kl_tol && worst_self <= cfg.kl_tol && min_div >= -1e-12 ? Status::kPass
                                                                                    : Status::kFail;
  c.summary = "KL " + fmt(worst_kl) + ", D(s||s) " + fmt(worst_self) + ", min D over 1000 pairs " + fmt(min_div);
  return c;
}

// 8 ----------------------------------------------------------------------
Check holevo_capacity(const Config& cfg) {
  Check c = make_check(8, "holevo-capacity");
  CapacityOptions opt;
  opt.samples = cfg.capacity_samples;
  bool ok = true;
  double slowest = 0.0;

  auto t0 = Clock::now();
  const auto id = holevo_capacity_estimate(QubitChannel::identity(), opt);
  slowest = std::max(slowest, seconds_since(t0));
  const double id_err = std::abs(id.value - std::numbers::ln2);
  ok = ok && id_err <= cfg.capacity_tol;

  t0 = Clock::now();
  const auto dead = holevo_capacity_estimate(QubitChannel::depolarizing(1.0), opt);
  slowest = std::max(slowest, seconds_since(t0));
  ok = ok && std::abs(dead.value) <= 1e-9;

  Json dep = Json::array();
  double worst = 0.0;
  for (double p : {0.25, 0.5, 0.75}) {
    t0 = Clock::now();
    const auto ch = QubitChannel::depolarizing(p);
    const auto est = holevo_capacity_estimate(ch, opt);
    std::vector<BlochVector> images;
    for (const auto& v : sample_sphere(opt.samples, opt.scheme, opt.seed)) images.push_back(apply_channel(ch, v));
    const auto grid = brute_force_center(images, {.spacing = 0.005});
    slowest = std::max(slowest, seconds_since(t0));
    const double diff = std::abs(est.value - grid.radius);
    worst = std::max(worst, diff);
    ok = ok && diff <= cfg.capacity_tol && est.converged;
    dep.push_back({{"p", p}, {"estimate_nats", est.value}, {"grid_nats", grid.radius},
                   {"grid_error_bound", grid.error_bound}, {"solver_gap", est.gap}});
  }
  ok = ok && slowest < 60.0;
  c.measured = {{"samples", opt.samples},
                {"identity_nats", id.value},
                {"identity_error", id_err},
                {"fully_depolarizing_nats", dead.value},
                {"depolarizing", dep},
                {"max_oracle_difference", worst},
                {"tolerance", cfg.capacity_tol},
                {"runtime_target_s_per_channel", 60}};
  c.status = ok ? Status::kPass : Status::kFail;
  c.summary = "identity " + fmt(id.value) + " nats (ln2 err " + fmt(id_err) + "), fully depolarizing " +
              fmt(dead.value) + ", depolarizing vs grid max diff " + fmt(worst);
  return c;
}

// 9 ----------------------------------------------------------------------
Check seb_vs_grid(const Config& cfg) {
  Check c = make_check(9, "seb-vs-grid");
  std::size_t failures = 0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  Json sets = Json::array();
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::mt19937_64 rng(cfg.seed + 900 + s);
    const std::size_t n = 3 + (s * 7) % 48;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<BlochVector> cloud;
    std::vector<DensityMatrix> states;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = i % 3 == 0 ? 1.0 : std::cbrt(u(rng));
      cloud.push_back(BlochVector::from(r * random_unit(rng)));
      states.push_back(bloch_to_density(cloud.back()));
    }
    const auto seb = smallest_enclosing_ball(states);
    const auto grid = brute_force_center(cloud);
    const double combined = seb.gap + grid.error_bound + 1e-9;
    const double diff = std::abs(seb.radius - grid.radius);
    worst_excess = std::max(worst_excess, diff - combined);
    const bool ok = diff <= combined && grid.radius >= seb.lower_bound - 1e-12 && seb.converged;
    failures += ok ? 0 : 1;
    sets.push_back({{"n", n}, {"solver", seb.radius}, {"grid", grid.radius}, {"combined_tol", combined}});
  }
  c.measured = {{"sets", sets}, {"failures", failures}};
  c.status = failures == 0 ? Status::kPass : Status::kFail;
  c.summary = std::to_string(20 - failures) + "/20 sets agree within solver gap + grid bound";
  return c;
}

// 10 ---------------------------------------------------------------------
Check diagonal_pair_euclidean(const Config& cfg) {
  Check c = make_check(10, "diagonal-pair-euclidean-report");
  const auto sites = example_sites(1);
  Json per_dim = Json::object();
  std::string line;
  for (int d : cfg.section_dims) {
    const auto model = PureStateModel::section(d);
    const auto a = section::sphere_to_site(d, sites[0]);
    const auto b = section::sphere_to_site(d, sites[1]);
    // the residual is affine in xi_1
    const double r0 = section::euclidean_boundary_residual(a, b, section::SectionPoint::constrained_at(d, 0, 0, 0));
    const double r1 = section::euclidean_boundary_residual(a, b, section::SectionPoint::constrained_at(d, 1, 0, 0));
    const double derived = -r0 / (r1 - r0);

    const auto xa = model.coordinates(sites[0]);
    const auto xb = model.coordinates(sites[1]);
    double numeric = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double phi = 0.2 + k * std::numbers::pi / 2.0;
      const double t = bisect([&](double tt) {
        const auto q = model.coordinates(meridian(tt, phi));
        return coordinate_distance_sq(xa, q) - coordinate_distance_sq(xb, q);
      }, 0.0, std::numbers::pi);
      numeric += model.plot_coordinates(meridian(t, phi)).x() / 4.0;
    }
    per_dim[std::to_string(d)] = {{"claimed_root", 1.0}, {"derived_root", derived},
                                  {"numeric_root", numeric},
                                  {"claimed_matches", std::abs(numeric - 1.0) <= 1e-6}};
    line += " d=" + std::to_string(d) + ": claimed 1, derived " + fmt(derived) + ", numeric " + fmt(numeric) + ";";
  }
  c.measured = {{"per_dim", per_dim}};
  c.status = Status::kInfo;
  c.summary = "euclidean bisector of the diagonal pair:" + line;
  return c;
}

}  // namespace

std::vector<int> all_ids() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

Check run_check(int id, const Config& config) {
  config.validate();
  const auto t0 = Clock::now();
  Check c;
  switch (id) {
    case 1: c = qubit_coincidence(config); break;
    case 2: c = mirrored_pair_plane(config); break;
    case 3: c = diagonal_pair_bisector(config); break;
    case 4: c = section_non_coincidence(config); break;
    case 5: c = closed_form_equivalence(config); break;
    case 6: c = sphere_map_signs(config); break;
    case 7: c = divergence_correctness(config); break;
    case 8: c = holevo_capacity(config); break;
    case 9: c = seb_vs_grid(config); break;
    case 10: c = diagonal_pair_euclidean(config); break;
    default:
      throw Error(ErrorCode::kInvalidArgument, "no check with id " + std::to_string(id));
  }
  c.seconds = seconds_since(t0);
  return c;
}

std::vector<Check> run_checks(const std::vector<int>& ids, const Config& config,
                              const std::function<void(const Check&)>& progress) {
  config.validate();
  for (int id : ids) {
    if (id < 1 || id > 10) throw Error(ErrorCode::kInvalidArgument, "no check with id " + std::to_string(id));
  }
  std::vector<Check> out;
  for (int id : ids) {
    out.push_back(run_check(id, config));
    if (progress) progress(out.back());
  }
  return out;
}

bool all_passed(const std::vector<Check>& checks) {
  return std::none_of(checks.begin(), checks.end(),
                      [](const Check& c) { return c.status == Status::kFail; });
}

Json report(const std::vector<Check>& checks, const Config& config) {
  Json list = Json::array();
  for (const auto& c : checks) {
    list.push_back({{"id", c.id}, {"name", c.name}, {"status", to_string(c.status)},
                    {"summary", c.summary}, {"measured", c.measured}});
  }
  const Json cfg = config.to_json();
  return {{"config", cfg}, {"config_hash", io::config_hash(cfg)}, {"checks", list},
          {"passed", all_passed(checks)}};
}

std::string format_line(const Check& c) {
  const char* tag = c.status == Status::kPass ? "PASS" : c.status == Status::kFail ? "FAIL" : "INFO";
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f s", c.seconds);
  return std::string("[") + tag + "] " + std::to_string(c.id) + " " + c.name + ": " + c.summary +
         " (" + secs + ")";
}

}  // namespace qvor::verify
