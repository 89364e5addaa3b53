#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

namespace dclust {

using PointId = std::int32_t;

// Finite metric: either Euclidean over stored coordinates or an explicit
// symmetric distance matrix. The doubling dimension is declared, not inferred.
class MetricSpace {
 public:
  MetricSpace() = default;

  // coords is row-major, one row of `dim` values per point.
  static MetricSpace euclidean(std::vector<double> coords, int dim, int doubling_dim);
  // full is the row-major n*n matrix. Symmetry and zero diagonal are checked;
  // the triangle inequality is not (see check_triangle_inequality).
  static MetricSpace from_matrix(std::vector<double> full, int n, int doubling_dim);

  int size() const { return n_; }
  int doubling_dimension() const { return d_; }
  bool has_coordinates() const { return coord_dim_ > 0; }
  int coordinate_dim() const { return coord_dim_; }
  std::span<const double> point(PointId p) const {
    return {coords_.data() + static_cast<std::size_t>(p) * coord_dim_, static_cast<std::size_t>(coord_dim_)};
  }
  const std::vector<double>& coordinates() const { return coords_; }
  const std::vector<double>& matrix() const { return matrix_; }

  double dist(PointId a, PointId b) const {
    if (coord_dim_ == 2) {
      const double* x = coords_.data() + 2 * static_cast<std::size_t>(a);
      const double* y = coords_.data() + 2 * static_cast<std::size_t>(b);
      double dx = x[0] - y[0], dy = x[1] - y[1];
      return std::sqrt(dx * dx + dy * dy);
    }
    if (coord_dim_ > 0) return coord_dist(a, b);
    return matrix_[static_cast<std::size_t>(a) * n_ + b];
  }

  // Points `ids` renumbered 0..ids.size()-1.
  MetricSpace subspace(std::span<const PointId> ids) const;

  // First violated triple (i, j, k) with dist(i,k) > dist(i,j) + dist(j,k) + tol, if any.
  bool check_triangle_inequality(double tol, PointId* bad = nullptr) const;

 private:
  double coord_dist(PointId a, PointId b) const;

  int n_ = 0;
  int d_ = 1;
  int coord_dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> matrix_;
};

struct DistanceExtremes {
  double min_positive = 0.0;  // 0 if all points coincide
  double max = 0.0;
};
DistanceExtremes distance_extremes(const MetricSpace& space);
DistanceExtremes distance_extremes(const MetricSpace& space, std::span<const PointId> subset);

// max pairwise / min positive pairwise distance. Throws DomainError with
// fewer than two distinct points.
double aspect_ratio(const MetricSpace& space);

// Exact minimum positive pairwise distance; a sweep over the first
// coordinate when coordinates are stored, a full scan otherwise.
double min_positive_distance(const MetricSpace& space);
double min_positive_distance(const MetricSpace& space, std::span<const PointId> subset);
// Exact diameter up to 3000 points, else 2 * eccentricity of point 0 (an upper bound).
double diameter_bound(const MetricSpace& space);

// Dynamic nearest-neighbour index over labelled points. Ties go to the
// smallest label. Low-dimensional coordinates use a grid, anything else a scan.
class NearestIndex {
 public:
  // expected: roughly how many points will be inserted, sets the cell size.
  NearestIndex(const MetricSpace& space, int expected);

  void insert(PointId p, int label);
  bool empty() const { return size_ == 0; }
  // {label, distance}; {-1, inf} when empty.
  std::pair<int, double> nearest(PointId q) const;

 private:
  using Cell = std::array<std::int64_t, 3>;
  Cell cell_of(PointId p) const;
  static std::uint64_t key(const Cell& c);

  const MetricSpace& space_;
  bool grid_ = false;
  double h_ = 0.0;
  int size_ = 0;
  Cell lo_{}, hi_{};
  std::vector<std::pair<PointId, int>> flat_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<PointId, int>>> cells_;
};

// Points within distance r of v (inclusive), by linear scan.
std::vector<PointId> ball(const MetricSpace& space, PointId v, double r);

struct Net {
  std::vector<PointId> centers;
  double delta = 0.0;
};

// Greedy net of `ground` scanned in increasing id order. Centers in `seeds`
// are taken first (they must already be delta-separated).
Net build_net(const MetricSpace& space, std::span<const PointId> ground, double delta,
              std::span<const PointId> seeds = {});

bool is_separated(const MetricSpace& space, std::span<const PointId> centers, double delta);
bool is_covering(const MetricSpace& space, std::span<const PointId> ground, std::span<const PointId> centers,
                 double delta);
// 2^{d * ceil(log2(D/delta))}, the packing bound for a delta-net of a set of diameter D.
double net_size_bound(int d, double diameter, double delta);

// Nets Y_0 = V, Y_i a (2^{i-2} * unit)-net of Y_{i-1}, with the parent links
// and neighbour lists needed for range search, carving and the spanner.
class NetHierarchy {
 public:
  // unit <= 0 means: use the minimum positive pairwise distance.
  // near_factor scales the neighbour radius near_factor * 2^i * unit.
  explicit NetHierarchy(const MetricSpace& space, double unit = 0.0, double near_factor = 7.0 / 3.0);

  const MetricSpace& space() const { return *space_; }
  double unit() const { return unit_; }
  double near_factor() const { return near_factor_; }
  int top() const { return static_cast<int>(nets_.size()) - 1; }

  // Levels above top() repeat Y_top.
  const std::vector<PointId>& level(int i) const { return nets_[clamp(i)]; }
  bool contains(int i, PointId p) const { return pos_[clamp(i)][p] >= 0; }
  // Covering point of p in Y_{i+1}; p itself if p is also in Y_{i+1}.
  PointId parent(int i, PointId p) const;
  // Points of Y_{i-1} whose parent is y, for y in Y_i and 1 <= i <= top().
  const std::vector<PointId>& children(int i, PointId y) const { return children_[i][pos_[i][y]]; }
  // Points of Y_i within near_factor * 2^i * unit of y (y included).
  const std::vector<PointId>& near(int i, PointId y) const { return near_[clamp(i)][pos_[clamp(i)][y]]; }
  // Ancestor of u in Y_i along parent links; within 2^{i-1} * unit of u.
  PointId owner(int i, PointId u) const;

  // All points within distance r of q, sorted by id.
  std::vector<PointId> range(PointId q, double r) const;

 private:
  int clamp(int i) const { return i < 0 ? 0 : (i > top() ? top() : i); }

  const MetricSpace* space_;
  double unit_;
  double near_factor_;
  std::vector<std::vector<PointId>> nets_;
  std::vector<std::vector<std::int32_t>> pos_;     // [level][point] -> index in nets_[level] or -1
  std::vector<std::vector<PointId>> parent_;       // [level][index]
  std::vector<std::vector<std::vector<PointId>>> children_;
  std::vector<std::vector<std::vector<PointId>>> near_;
};

struct SpannerEdge {
  PointId u, v;
  double w;
};

struct Spanner {
  int n = 0;
  double stretch = 1.0;
  std::vector<SpannerEdge> edges;
};

// Net-tree spanner: neighbour edges at every level plus parent links.
Spanner build_spanner(const MetricSpace& space, double stretch = 4.0);
// Single-source shortest path distances over the spanner edges.
std::vector<double> spanner_distances(const Spanner& spanner, PointId source);

}  // namespace dclust
