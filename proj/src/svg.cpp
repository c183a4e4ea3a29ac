#include "qvor/svg.hpp"

#include <cmath>
#include <sstream>

#include "qvor/io.hpp"

namespace qvor {

namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

const char* colour(int site) { return kPalette[site % 10]; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Camera {
  Eigen::Vector3d e1, e2, e3;  // screen right, screen up, towards viewer
  Eigen::Vector3d scale;       // surface = scale * unit sphere
  double extent = 1.0;         // half-width of the visible window
  int size = 0;

  Eigen::Vector2d screen(const Eigen::Vector3d& q) const {
    const double half = 0.5 * size;
    return {half + q.dot(e1) / extent * half * 0.92, half - q.dot(e2) / extent * half * 0.92};
  }

  // Front intersection of the viewing ray through plane point (a, b) with
  // the surface, as a unit-sphere vector.
  bool hit(double a, double b, Eigen::Vector3d& u) const {
    const Eigen::Vector3d origin = a * e1 + b * e2;
    const Eigen::Vector3d o = origin.cwiseQuotient(scale);
    const Eigen::Vector3d dir = e3.cwiseQuotient(scale);
    const double qa = dir.squaredNorm();
    const double qb = 2.0 * o.dot(dir);
    const double qc = o.squaredNorm() - 1.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return false;
    const double t = (-qb + std::sqrt(disc)) / (2.0 * qa);
    u = (o + t * dir).normalized();
    return true;
  }

  bool front(const Eigen::Vector3d& u) const {
    // outward normal of the scaled surface
    return u.cwiseQuotient(scale).dot(e3) > 0.0;
  }
};

}  // namespace

std::string render_svg(const PureStateModel& model, std::span<const Eigen::Vector3d> sites,
                       const DistanceKind& kind, const BoundaryResult& boundary,
                       const SvgOptions& options) {
  Camera cam;
  cam.size = options.size;
  cam.e3 = options.view.normalized();
  const Eigen::Vector3d up = std::abs(cam.e3.z()) < 0.9 ? Eigen::Vector3d::UnitZ()
                                                        : Eigen::Vector3d::UnitY();
  cam.e1 = up.cross(cam.e3).normalized();
  cam.e2 = cam.e3.cross(cam.e1);
  cam.scale = Eigen::Vector3d::Ones();
  if (options.ellipsoid_view && !model.is_qubit()) cam.scale.x() = model.level() / 2.0;
  cam.extent = cam.scale.maxCoeff();

  const SiteDistances dist(model, sites, kind);
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << cam.size
      << "\" height=\"" << cam.size << "\" viewBox=\"0 0 " << cam.size << ' ' << cam.size
      << "\">\n";
  if (!options.title.empty()) svg << "<title>" << escape_xml(options.title) << "</title>\n";
  if (!options.config_hash.empty()) {
    svg << "<desc>config-hash " << escape_xml(options.config_hash) << "</desc>\n";
  }
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n<g shape-rendering=\"crispEdges\">\n";

  // cell raster, run-length encoded along rows
  const int res = options.resolution;
  const double px = static_cast<double>(cam.size) / res;
  const double half = 0.5 * cam.size;
  std::vector<double> row(sites.size());
  for (int iy = 0; iy < res; ++iy) {
    int run_start = -1, run_site = -1;
    auto flush = [&](int end) {
      if (run_site < 0) return;
      svg << "<rect x=\"" << num(run_start * px) << "\" y=\"" << num(iy * px) << "\" width=\""
          << num((end - run_start) * px + 0.5) << "\" height=\"" << num(px + 0.5)
          << "\" fill=\"" << colour(run_site) << "\"/>\n";
      run_site = -1;
    };
    for (int ix = 0; ix < res; ++ix) {
      const double sx = (ix + 0.5) * px, sy = (iy + 0.5) * px;
      const double a = (sx - half) / (half * 0.92) * cam.extent;
      const double b = (half - sy) / (half * 0.92) * cam.extent;
      Eigen::Vector3d u;
      int site = -1;
      if (cam.hit(a, b, u)) {
        dist.evaluate(u, row);
        site = static_cast<int>(std::min_element(row.begin(), row.end()) - row.begin());
      }
      if (site != run_site) {
        flush(ix);
        if (site >= 0) {
          run_start = ix;
          run_site = site;
        }
      }
    }
    flush(res);
  }
  svg << "</g>\n";

  // boundary curves, split where they pass behind the surface
  svg << "<g fill=\"none\" stroke=\"#202020\" stroke-width=\"1.6\" stroke-linejoin=\"round\">\n";
  for (const auto& line : boundary.lines) {
    std::string pts;
    auto emit = [&] {
      if (pts.find(' ') != std::string::npos) svg << "<polyline points=\"" << pts << "\"/>\n";
      pts.clear();
    };
    const std::size_t count = line.points.size() + (line.closed ? 1 : 0);
    for (std::size_t k = 0; k < count; ++k) {
      const auto& u = line.points[k % line.points.size()];
      if (!cam.front(u)) {
        emit();
        continue;
      }
      const Eigen::Vector2d s = cam.screen(u.cwiseProduct(cam.scale));
      if (!pts.empty()) pts += ' ';
      pts += num(s.x()) + "," + num(s.y());
    }
    emit();
  }
  svg << "</g>\n";

  // silhouette
  if (cam.scale.isOnes()) {
    svg << "<circle cx=\"" << num(half) << "\" cy=\"" << num(half) << "\" r=\""
        << num(half * 0.92 / cam.extent) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  }

  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const Eigen::Vector3d u = sites[k].normalized();
    const Eigen::Vector2d s = cam.screen(u.cwiseProduct(cam.scale));
    const bool visible = cam.front(u);
    svg << "<circle cx=\"" << num(s.x()) << "\" cy=\"" << num(s.y()) << "\" r=\"4\" fill=\""
        << (visible ? "#000000" : "none") << "\" stroke=\"#000000\"/>\n"
        << "<text x=\"" << num(s.x() + 6) << "\" y=\"" << num(s.y() - 6) << "\">" << k
        << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace qvor
