#pragma once

// Boundary conditions and ghost-cell population.

#include <array>
#include <cmath>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "shockstab/euler.hpp"
#include "shockstab/grid.hpp"

namespace shockstab {

inline constexpr int kGhostLayers = 2;

struct SupersonicInflow {
  PrimitiveState state;
};
struct ZeroGradientOutflow {};
struct ReflectiveWall {};
struct Extrapolate {};
struct Periodic {};

/// Top boundary tracking a straight oblique shock: ghost cells whose face
/// centre lies left of x_s(t) = x0 + speed * t receive `post`, the rest `pre`.
struct MovingShockTop {
  PrimitiveState pre;
  PrimitiveState post;
  double x0 = 0.0;
  double speed = 0.0;

  double shock_x(double t) const { return x0 + speed * t; }
};

using BoundaryCondition = std::variant<SupersonicInflow, ZeroGradientOutflow, ReflectiveWall,
                                       Extrapolate, MovingShockTop, Periodic>;

enum class Edge { West = 0, East = 1, South = 2, North = 3 };

/// Cells [begin, end) along an edge share one condition.
struct BoundarySegment {
  int begin = 0;
  int end = 0;
  BoundaryCondition condition;
};

struct BoundarySpec {
  std::array<std::vector<BoundarySegment>, 4> edges;

  BoundarySpec& set(Edge e, BoundaryCondition bc, int begin = 0, int end = -1) {
    edges[static_cast<int>(e)].push_back({begin, end, std::move(bc)});
    return *this;
  }

  /// Resolves open-ended segments and checks every boundary face has
  /// exactly one condition.
  void validate(const StructuredGrid& grid) {
    for (int e = 0; e < 4; ++e) {
      const int n = e < 2 ? grid.nj() : grid.ni();
      std::vector<int> count(static_cast<std::size_t>(n), 0);
      for (auto& seg : edges[e]) {
        if (seg.end < 0) seg.end = n;
        if (seg.begin < 0 || seg.end > n || seg.begin >= seg.end) {
          throw Error("boundary segment out of range on edge " + std::to_string(e));
        }
        for (int k = seg.begin; k < seg.end; ++k) ++count[k];
      }
      for (int k = 0; k < n; ++k) {
        if (count[k] != 1) {
          throw Error("boundary face " + std::to_string(k) + " on edge " + std::to_string(e) +
                      " has " + std::to_string(count[k]) + " conditions");
        }
      }
    }
    auto periodic = [&](Edge e) {
      for (auto& s : edges[static_cast<int>(e)])
        if (std::holds_alternative<Periodic>(s.condition)) return true;
      return false;
    };
    if (periodic(Edge::West) != periodic(Edge::East) ||
        periodic(Edge::South) != periodic(Edge::North)) {
      throw Error("periodic conditions must be paired on opposite edges");
    }
  }

  const BoundaryCondition& at(Edge e, int k) const {
    for (const auto& seg : edges[static_cast<int>(e)]) {
      if (k >= seg.begin && k < seg.end) return seg.condition;
    }
    throw Error("no boundary condition for face " + std::to_string(k));
  }

  /// Edges mapped W<->S, E<->N to follow StructuredGrid::transposed().
  BoundarySpec transposed() const {
    BoundarySpec t;
    t.edges[0] = edges[2];
    t.edges[1] = edges[3];
    t.edges[2] = edges[0];
    t.edges[3] = edges[1];
    return t;
  }
};

/// Primitive field padded with kGhostLayers on every side.
class GhostedField {
 public:
  GhostedField() = default;
  GhostedField(int ni, int nj)
      : ni_(ni), nj_(nj),
        data_(static_cast<std::size_t>(ni + 2 * kGhostLayers) * (nj + 2 * kGhostLayers)) {}

  int ni() const noexcept { return ni_; }
  int nj() const noexcept { return nj_; }

  /// Valid for -kGhostLayers <= i < ni + kGhostLayers (likewise j).
  PrimitiveState& operator()(int i, int j) { return data_[idx(i, j)]; }
  const PrimitiveState& operator()(int i, int j) const { return data_[idx(i, j)]; }

 private:
  std::size_t idx(int i, int j) const noexcept {
    return static_cast<std::size_t>(j + kGhostLayers) * (ni_ + 2 * kGhostLayers) +
           (i + kGhostLayers);
  }
  int ni_ = 0;
  int nj_ = 0;
  std::vector<PrimitiveState> data_;
};

/// Reflects the velocity about a face with unit normal n.
inline PrimitiveState mirror_state(const PrimitiveState& w, const FaceFrame& n) {
  const double un = w.u * n.nx + w.v * n.ny;
  return {w.rho, w.u - 2.0 * un * n.nx, w.v - 2.0 * un * n.ny, w.p};
}

namespace detail {

struct GhostContext {
  const StructuredGrid& grid;
  const GhostedField& field;
  double t;
};

/// Ghost value for layer `layer` (1 = adjacent) outside boundary face k.
inline PrimitiveState ghost_value(const BoundaryCondition& bc, const GhostContext& ctx, Edge e,
                                  int k, int layer) {
  const auto& g = ctx.grid;
  const int ni = g.ni(), nj = g.nj();
  // interior(d): the d-th interior cell from the edge (d = 0 adjacent).
  auto interior = [&](int d) -> const PrimitiveState& {
    switch (e) {
      case Edge::West: return ctx.field(d, k);
      case Edge::East: return ctx.field(ni - 1 - d, k);
      case Edge::South: return ctx.field(k, d);
      case Edge::North: return ctx.field(k, nj - 1 - d);
    }
    return ctx.field(0, 0);
  };
  auto face = [&]() -> const FaceFrame& {
    switch (e) {
      case Edge::West: return g.iface(0, k);
      case Edge::East: return g.iface(ni, k);
      case Edge::South: return g.jface(k, 0);
      case Edge::North: return g.jface(k, nj);
    }
    return g.iface(0, 0);
  };
  return std::visit(
      [&](const auto& c) -> PrimitiveState {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SupersonicInflow>) {
          return c.state;
        } else if constexpr (std::is_same_v<T, ZeroGradientOutflow> ||
                             std::is_same_v<T, Extrapolate>) {
          return interior(0);
        } else if constexpr (std::is_same_v<T, ReflectiveWall>) {
          return mirror_state(interior(layer - 1), face());
        } else if constexpr (std::is_same_v<T, MovingShockTop>) {
          const Point2 fc = (e == Edge::West || e == Edge::East)
                                ? g.iface_center(e == Edge::West ? 0 : ni, k)
                                : g.jface_center(k, e == Edge::South ? 0 : nj);
          return fc.x < c.shock_x(ctx.t) ? c.post : c.pre;
        } else {
          // periodic: wrap to the opposite edge
          switch (e) {
            case Edge::West: return ctx.field(ni - layer, k);
            case Edge::East: return ctx.field(layer - 1, k);
            case Edge::South: return ctx.field(k, nj - layer);
            case Edge::North: return ctx.field(k, layer - 1);
          }
          return interior(0);
        }
      },
      bc);
}

}  // namespace detail

/// Fills the ghost layers of `padded` (interior already set) at time t.
inline void fill_ghosts(const StructuredGrid& grid, const BoundarySpec& spec, GhostedField& padded,
                        double t) {
  const int ni = grid.ni(), nj = grid.nj();
  const detail::GhostContext ctx{grid, padded, t};
  for (int layer = 1; layer <= kGhostLayers; ++layer) {
    for (int j = 0; j < nj; ++j) {
      padded(-layer, j) = detail::ghost_value(spec.at(Edge::West, j), ctx, Edge::West, j, layer);
      padded(ni - 1 + layer, j) =
          detail::ghost_value(spec.at(Edge::East, j), ctx, Edge::East, j, layer);
    }
    for (int i = 0; i < ni; ++i) {
      padded(i, -layer) = detail::ghost_value(spec.at(Edge::South, i), ctx, Edge::South, i, layer);
      padded(i, nj - 1 + layer) =
          detail::ghost_value(spec.at(Edge::North, i), ctx, Edge::North, i, layer);
    }
  }
}

/// Primitive recovery of every active cell plus ghost population. Blanked
/// cells keep their stored state. Throws NonPhysicalState with the cell index.
inline GhostedField apply_boundaries(const StructuredGrid& grid, const Field& field,
                                     const BoundarySpec& spec, double t, const GasModel& gas) {
  GhostedField padded(grid.ni(), grid.nj());
  for (int j = 0; j < grid.nj(); ++j) {
    for (int i = 0; i < grid.ni(); ++i) {
      const auto& U = field(i, j);
      if (!grid.active(i, j)) {
        padded(i, j) = {U.rho, 0.0, 0.0, 1.0};
        continue;
      }
      try {
        padded(i, j) = primitive_from_conserved(U, gas);
      } catch (const NonPhysicalState& e) {
        throw NonPhysicalState(e.detail(), grid.cell_index(i, j));
      }
    }
  }
  fill_ghosts(grid, spec, padded, t);
  return padded;
}

}  // namespace shockstab
