#pragma once

// Logically rectangular quadrilateral grids.
//
// Vertex (i, j) with 0 <= i <= ni, 0 <= j <= nj. Cell (i, j) is bounded by
// vertices (i, j), (i+1, j), (i+1, j+1), (i, j+1). An i-face (i, j) joins
// vertices (i, j) and (i, j+1) and its normal points towards increasing i;
// a j-face (i, j) joins (i, j) and (i+1, j) with its normal towards
// increasing j. Cells are stored row-major: index = j * ni + i.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "shockstab/euler.hpp"

namespace shockstab {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

class StructuredGrid {
 public:
  StructuredGrid() = default;

  /// `vertices` holds (ni+1)*(nj+1) points, index = j*(ni+1) + i.
  StructuredGrid(int ni, int nj, std::vector<Point2> vertices)
      : ni_(ni), nj_(nj), vertices_(std::move(vertices)) {
    if (ni < 1 || nj < 1) throw Error("grid needs at least one cell in each direction");
    if (vertices_.size() != static_cast<std::size_t>(ni + 1) * (nj + 1)) {
      throw Error("grid vertex count does not match (ni+1)*(nj+1)");
    }
    build_metrics();
    active_.assign(num_cells(), 1);
  }

  static StructuredGrid cartesian(int ni, int nj, double x0, double x1, double y0, double y1) {
    std::vector<Point2> v;
    v.reserve(static_cast<std::size_t>(ni + 1) * (nj + 1));
    for (int j = 0; j <= nj; ++j) {
      for (int i = 0; i <= ni; ++i) {
        v.push_back({x0 + (x1 - x0) * i / ni, y0 + (y1 - y0) * j / nj});
      }
    }
    return StructuredGrid(ni, nj, std::move(v));
  }

  int ni() const noexcept { return ni_; }
  int nj() const noexcept { return nj_; }
  std::size_t num_cells() const noexcept { return static_cast<std::size_t>(ni_) * nj_; }
  std::size_t cell_index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * ni_ + i;
  }

  const Point2& vertex(int i, int j) const { return vertices_[vidx(i, j)]; }
  const std::vector<Point2>& vertices() const noexcept { return vertices_; }

  double area(int i, int j) const { return area_[cell_index(i, j)]; }
  Point2 centroid(int i, int j) const { return centroid_[cell_index(i, j)]; }

  const FaceFrame& iface(int i, int j) const {
    return iface_[static_cast<std::size_t>(j) * (ni_ + 1) + i];
  }
  const FaceFrame& jface(int i, int j) const {
    return jface_[static_cast<std::size_t>(j) * ni_ + i];
  }
  Point2 iface_center(int i, int j) const { return mid(vertex(i, j), vertex(i, j + 1)); }
  Point2 jface_center(int i, int j) const { return mid(vertex(i, j), vertex(i + 1, j)); }

  /// Blanked cells carry no unknowns; faces shared with active cells act
  /// as reflective walls.
  void blank(int i, int j) { active_[cell_index(i, j)] = 0; }
  bool active(int i, int j) const { return active_[cell_index(i, j)] != 0; }
  std::size_t num_active() const {
    std::size_t n = 0;
    for (auto a : active_) n += a;
    return n;
  }

  /// Swaps the roles of i and j and of x and y (orientation preserving).
  StructuredGrid transposed() const {
    std::vector<Point2> v;
    v.reserve(vertices_.size());
    for (int i = 0; i <= ni_; ++i) {
      for (int j = 0; j <= nj_; ++j) {
        const auto& p = vertex(i, j);
        v.push_back({p.y, p.x});
      }
    }
    StructuredGrid t(nj_, ni_, std::move(v));
    for (int j = 0; j < nj_; ++j)
      for (int i = 0; i < ni_; ++i)
        if (!active(i, j)) t.blank(j, i);
    return t;
  }

 private:
  std::size_t vidx(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * (ni_ + 1) + i;
  }
  static Point2 mid(const Point2& a, const Point2& b) {
    return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  }

  static FaceFrame frame(double nx_raw, double ny_raw) {
    const double len = std::hypot(nx_raw, ny_raw);
    if (!(len > 0.0)) throw Error("degenerate grid face of zero length");
    return {nx_raw / len, ny_raw / len, len};
  }

  void build_metrics() {
    area_.resize(num_cells());
    centroid_.resize(num_cells());
    for (int j = 0; j < nj_; ++j) {
      for (int i = 0; i < ni_; ++i) {
        const auto& a = vertex(i, j);
        const auto& b = vertex(i + 1, j);
        const auto& c = vertex(i + 1, j + 1);
        const auto& d = vertex(i, j + 1);
        // half the cross product of the diagonals
        const double d1x = c.x - a.x, d1y = c.y - a.y;
        const double d2x = d.x - b.x, d2y = d.y - b.y;
        const double area = 0.5 * (d1x * d2y - d1y * d2x);
        if (!(area > 0.0)) {
          throw Error("inverted or degenerate cell (" + std::to_string(i) + ", " +
                      std::to_string(j) + ")");
        }
        area_[cell_index(i, j)] = area;
        centroid_[cell_index(i, j)] = {0.25 * (a.x + b.x + c.x + d.x), 0.25 * (a.y + b.y + c.y + d.y)};
      }
    }
    iface_.resize(static_cast<std::size_t>(ni_ + 1) * nj_);
    for (int j = 0; j < nj_; ++j) {
      for (int i = 0; i <= ni_; ++i) {
        const auto& p = vertex(i, j);
        const auto& q = vertex(i, j + 1);
        iface_[static_cast<std::size_t>(j) * (ni_ + 1) + i] = frame(q.y - p.y, -(q.x - p.x));
      }
    }
    jface_.resize(static_cast<std::size_t>(ni_) * (nj_ + 1));
    for (int j = 0; j <= nj_; ++j) {
      for (int i = 0; i < ni_; ++i) {
        const auto& p = vertex(i, j);
        const auto& q = vertex(i + 1, j);
        jface_[static_cast<std::size_t>(j) * ni_ + i] = frame(-(q.y - p.y), q.x - p.x);
      }
    }
  }

  int ni_ = 0;
  int nj_ = 0;
  std::vector<Point2> vertices_;
  std::vector<double> area_;
  std::vector<Point2> centroid_;
  std::vector<FaceFrame> iface_;
  std::vector<FaceFrame> jface_;
  std::vector<std::uint8_t> active_;
};

/// Cell-averaged conserved field over a grid (row-major).
struct Field {
  int ni = 0;
  int nj = 0;
  std::vector<ConservedState> cells;

  Field() = default;
  Field(int ni_, int nj_, ConservedState fill = {})
      : ni(ni_), nj(nj_), cells(static_cast<std::size_t>(ni_) * nj_, fill) {}

  ConservedState& operator()(int i, int j) { return cells[static_cast<std::size_t>(j) * ni + i]; }
  const ConservedState& operator()(int i, int j) const {
    return cells[static_cast<std::size_t>(j) * ni + i];
  }
  friend bool operator==(const Field&, const Field&) = default;
};

}  // namespace shockstab
