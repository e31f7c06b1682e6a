#include "ensemble_lens/contour.hpp"

#include <array>
#include <deque>
#include <set>
#include <unordered_map>

namespace ensemble_lens {

namespace {

// Marching squares over the field padded by one ring of outside vertices.
// Padded coordinates (px, py) map to real vertex (px - 1, py - 1); padding
// vertices sit on the position of the nearest real vertex.
class PaddedGrid {
 public:
  PaddedGrid(const DensityField& field, double level)
      : field_(field), level_(level), w_(field.grid.nx + 2), h_(field.grid.ny + 2) {}

  std::size_t width() const { return w_; }
  std::size_t height() const { return h_; }

  bool real(std::size_t px, std::size_t py) const {
    return px >= 1 && py >= 1 && px <= field_.grid.nx && py <= field_.grid.ny;
  }
  double value(std::size_t px, std::size_t py) const { return field_.at(px - 1, py - 1); }
  bool inside(std::size_t px, std::size_t py) const {
    return real(px, py) && value(px, py) >= level_;
  }
  PlanePoint position(std::size_t px, std::size_t py) const {
    const auto clamp = [](std::size_t p, std::size_t n) {
      return p == 0 ? std::size_t{0} : std::min(p - 1, n - 1);
    };
    return field_.grid.vertex(clamp(px, field_.grid.nx), clamp(py, field_.grid.ny));
  }

  // Horizontal edge (px,py)-(px+1,py) or vertical edge (px,py)-(px,py+1).
  std::size_t edge_id(std::size_t px, std::size_t py, bool vertical) const {
    return (py * w_ + px) * 2 + (vertical ? 1 : 0);
  }

  PlanePoint crossing(std::size_t ax, std::size_t ay, std::size_t bx, std::size_t by) const {
    const PlanePoint pa = position(ax, ay);
    const PlanePoint pb = position(bx, by);
    if (!real(ax, ay)) return pb;
    if (!real(bx, by)) return pa;
    const double va = value(ax, ay);
    const double vb = value(bx, by);
    const double t = (level_ - va) / (vb - va);
    return {pa.z1 + t * (pb.z1 - pa.z1), pa.z2 + t * (pb.z2 - pa.z2)};
  }

 private:
  const DensityField& field_;
  double level_;
  std::size_t w_;
  std::size_t h_;
};

enum Side { kBottom = 0, kRight = 1, kTop = 2, kLeft = 3 };

struct Segment {
  std::array<std::size_t, 2> edges;
  std::array<PlanePoint, 2> points;
};

}  // namespace

std::vector<Polyline> marching_squares(const DensityField& field, double level) {
  const PaddedGrid g(field, level);
  std::vector<Segment> segments;

  for (std::size_t cy = 0; cy + 1 < g.height(); ++cy) {
    for (std::size_t cx = 0; cx + 1 < g.width(); ++cx) {
      const bool bl = g.inside(cx, cy);
      const bool br = g.inside(cx + 1, cy);
      const bool tr = g.inside(cx + 1, cy + 1);
      const bool tl = g.inside(cx, cy + 1);
      const int code = (bl ? 1 : 0) | (br ? 2 : 0) | (tr ? 4 : 0) | (tl ? 8 : 0);
      if (code == 0 || code == 15) continue;

      auto side_edge = [&](Side s) {
        switch (s) {
          case kBottom: return g.edge_id(cx, cy, false);
          case kRight: return g.edge_id(cx + 1, cy, true);
          case kTop: return g.edge_id(cx, cy + 1, false);
          case kLeft: return g.edge_id(cx, cy, true);
        }
        return std::size_t{0};
      };
      auto side_point = [&](Side s) {
        switch (s) {
          case kBottom: return g.crossing(cx, cy, cx + 1, cy);
          case kRight: return g.crossing(cx + 1, cy, cx + 1, cy + 1);
          case kTop: return g.crossing(cx, cy + 1, cx + 1, cy + 1);
          case kLeft: return g.crossing(cx, cy, cx, cy + 1);
        }
        return PlanePoint{};
      };
      auto emit = [&](Side a, Side b) {
        segments.push_back({{side_edge(a), side_edge(b)}, {side_point(a), side_point(b)}});
      };
      auto center_inside = [&] {
        // Saddles only occur with four real corners.
        const double avg = (g.value(cx, cy) + g.value(cx + 1, cy) +
                            g.value(cx + 1, cy + 1) + g.value(cx, cy + 1)) / 4.0;
        return avg >= level;
      };

      switch (code) {
        case 1: emit(kLeft, kBottom); break;
        case 2: emit(kBottom, kRight); break;
        case 3: emit(kLeft, kRight); break;
        case 4: emit(kRight, kTop); break;
        case 5:
          if (center_inside()) {
            emit(kBottom, kRight);
            emit(kLeft, kTop);
          } else {
            emit(kLeft, kBottom);
            emit(kRight, kTop);
          }
          break;
        case 6: emit(kBottom, kTop); break;
        case 7: emit(kLeft, kTop); break;
        case 8: emit(kLeft, kTop); break;
        case 9: emit(kBottom, kTop); break;
        case 10:
          if (center_inside()) {
            emit(kLeft, kBottom);
            emit(kRight, kTop);
          } else {
            emit(kBottom, kRight);
            emit(kLeft, kTop);
          }
          break;
        case 11: emit(kRight, kTop); break;
        case 12: emit(kLeft, kRight); break;
        case 13: emit(kBottom, kRight); break;
        case 14: emit(kLeft, kBottom); break;
        default: break;
      }
    }
  }

  // Every crossed edge is shared by exactly two segments (one per adjacent
  // cell), so walking edge -> segment -> other edge closes every loop.
  std::unordered_map<std::size_t, std::array<int, 2>> by_edge;
  by_edge.reserve(segments.size() * 2);
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    for (auto e : segments[static_cast<std::size_t>(s)].edges) {
      auto [it, fresh] = by_edge.try_emplace(e, std::array<int, 2>{-1, -1});
      (it->second[0] < 0 ? it->second[0] : it->second[1]) = s;
    }
  }

  std::vector<Polyline> contours;
  std::vector<bool> used(segments.size(), false);
  for (std::size_t start = 0; start < segments.size(); ++start) {
    if (used[start]) continue;
    Polyline line;
    std::size_t seg = start;
    std::size_t entry_edge = segments[start].edges[0];
    line.push_back(segments[start].points[0]);
    while (!used[seg]) {
      used[seg] = true;
      const auto& s = segments[seg];
      const int exit = s.edges[0] == entry_edge ? 1 : 0;
      const std::size_t exit_edge = s.edges[static_cast<std::size_t>(exit)];
      line.push_back(s.points[static_cast<std::size_t>(exit)]);
      const auto& pair = by_edge.at(exit_edge);
      const int next = pair[0] == static_cast<int>(seg) ? pair[1] : pair[0];
      if (next < 0) break;
      seg = static_cast<std::size_t>(next);
      entry_edge = exit_edge;
    }

    Polyline clean;
    for (const auto& p : line) {
      if (clean.empty() || !(clean.back() == p)) clean.push_back(p);
    }
    if (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
    std::set<std::pair<double, double>> distinct;
    for (const auto& p : clean) distinct.emplace(p.z1, p.z2);
    if (distinct.size() < 3) continue;
    clean.push_back(clean.front());
    contours.push_back(std::move(clean));
  }
  return contours;
}

ComponentLabels label_components(const DensityField& field, double level) {
  const std::size_t nx = field.grid.nx;
  const std::size_t ny = field.grid.ny;
  ComponentLabels out;
  out.labels.assign(nx * ny, -1);
  std::deque<std::size_t> queue;
  for (std::size_t idx = 0; idx < nx * ny; ++idx) {
    if (out.labels[idx] >= 0 || !(field.values[idx] >= level)) continue;
    const int label = out.count++;
    out.labels[idx] = label;
    queue.push_back(idx);
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      const auto ix = static_cast<long>(cur % nx);
      const auto iy = static_cast<long>(cur / nx);
      for (long dy = -1; dy <= 1; ++dy) {
        for (long dx = -1; dx <= 1; ++dx) {
          const long x = ix + dx;
          const long y = iy + dy;
          if ((dx == 0 && dy == 0) || x < 0 || y < 0 || x >= static_cast<long>(nx) ||
              y >= static_cast<long>(ny)) {
            continue;
          }
          const auto n = static_cast<std::size_t>(y) * nx + static_cast<std::size_t>(x);
          if (out.labels[n] < 0 && field.values[n] >= level) {
            out.labels[n] = label;
            queue.push_back(n);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace ensemble_lens
