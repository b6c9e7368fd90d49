#include "gvdtg/render.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace gvdtg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

const char* fill(CellState s) {
  switch (s) {
    case CellState::kFree: return "#ffffff";
    case CellState::kOccupied: return "#202020";
    default: return "#b8b8b8";
  }
}

}  // namespace

std::string render_svg(const OccupancyGrid& map, const RenderLayers& layers) {
  const int w = map.width(), h = map.height();
  // Cell units with y pointing up, so the picture matches the world frame.
  auto sx = [&](double u) { return num(u); };
  auto sy = [&](double v) { return num(h - v); };
  auto cell_x = [&](Cell c) { return sx(c.x + 0.5); };
  auto cell_y = [&](Cell c) { return sy(c.y + 0.5); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << ' ' << h << "\" width=\"" << w * 4
      << "\" height=\"" << h * 4 << "\">\n";
  out << "<g class=\"map\" shape-rendering=\"crispEdges\">\n";
  for (int y = 0; y < h; ++y) {
    int x = 0;
    while (x < w) {
      const CellState s = map.at(x, y);
      int end = x + 1;
      while (end < w && map.at(end, y) == s) ++end;
      out << "<rect x=\"" << x << "\" y=\"" << h - y - 1 << "\" width=\"" << end - x
          << "\" height=\"1\" fill=\"" << fill(s) << "\"/>\n";
      x = end;
    }
  }
  out << "</g>\n";

  if (!layers.disks.empty()) {
    out << "<g class=\"disks\" fill=\"none\" stroke=\"#6fa8dc\" stroke-width=\"0.2\">\n";
    for (const GvdNode& n : layers.disks) {
      out << "<circle cx=\"" << cell_x(n.center) << "\" cy=\"" << cell_y(n.center) << "\" r=\"" << num(n.radius)
          << "\"/>\n";
    }
    out << "</g>\n";
  }

  if (layers.graph) {
    const auto& nodes = layers.graph->nodes();
    out << "<g class=\"edges\" stroke-width=\"0.4\" fill=\"none\">\n";
    for (const TopoEdge& e : layers.graph->edges()) {
      const char* color = e.kind == EdgeKind::kStraight ? "#3c78d8" : e.kind == EdgeKind::kGvdChain ? "#6aa84f" : "#e69138";
      out << "<polyline stroke=\"" << color << "\" points=\"";
      const std::vector<Cell> pts = e.path.empty()
                                        ? std::vector<Cell>{nodes[static_cast<std::size_t>(e.a)].cell,
                                                            nodes[static_cast<std::size_t>(e.b)].cell}
                                        : e.path;
      for (std::size_t i = 0; i < pts.size(); ++i) out << (i ? " " : "") << cell_x(pts[i]) << ',' << cell_y(pts[i]);
      out << "\"/>\n";
    }
    out << "</g>\n<g class=\"nodes\">\n";
    for (const TopoNode& n : nodes) {
      const bool center = n.kind == NodeKind::kCenter;
      out << "<circle cx=\"" << cell_x(n.cell) << "\" cy=\"" << cell_y(n.cell) << "\" r=\"" << (center ? "1.5" : "0.8")
          << "\" fill=\"" << (center ? "#cc0000" : "#3c78d8") << "\"/>\n";
    }
    out << "</g>\n";
  }

  if (!layers.trajectory.empty()) {
    const double rho = map.resolution();
    auto u = [&](const Pose& p) { return (p.x - map.origin().x) / rho; };
    auto v = [&](const Pose& p) { return (p.y - map.origin().y) / rho; };
    out << "<polyline class=\"trajectory\" fill=\"none\" stroke=\"#9900ff\" stroke-width=\"0.5\" points=\"";
    std::size_t written = 0;
    Pose last{};
    for (std::size_t i = 0; i < layers.trajectory.size(); ++i) {
      const Pose& p = layers.trajectory[i];
      if (written && p.x == last.x && p.y == last.y && i + 1 != layers.trajectory.size()) continue;
      out << (written ? " " : "") << sx(u(p)) << ',' << sy(v(p));
      last = p;
      ++written;
    }
    out << "\"/>\n";
    const Pose& s = layers.trajectory.front();
    const Pose& e = layers.trajectory.back();
    out << "<circle class=\"start\" cx=\"" << sx(u(s)) << "\" cy=\"" << sy(v(s)) << "\" r=\"2\" fill=\"#00a000\"/>\n";
    out << "<polygon class=\"end\" fill=\"#ffbf00\" stroke=\"#000000\" stroke-width=\"0.2\" points=\"";
    for (int k = 0; k < 10; ++k) {
      const double r = k % 2 == 0 ? 3.0 : 1.2;
      const double a = std::numbers::pi / 2 + k * std::numbers::pi / 5;
      out << (k ? " " : "") << sx(u(e) + r * std::cos(a)) << ',' << sy(v(e) + r * std::sin(a));
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace gvdtg
