#pragma once

#include <climits>
#include <cstdint>
#include <memory>
#include <vector>

#include "dclust/metric.hpp"

namespace dclust {

// Returned by ball_cut_level when the ball holds no point other than its center.
inline constexpr int kNoCut = INT_MIN;

struct Part {
  int id = 0;
  int level = 0;
  std::vector<PointId> members;  // sorted
  PointId center = 0;            // carving center (the part's own point at level 0, unused at the top)
  double radius = 0.0;           // carving radius tau * 2^level * unit
  int parent = -1;
  std::vector<int> children;
  std::vector<PointId> portals;  // inherited portals first, then greedy additions
};

// Node of the compressed tree: a maximal chain of parts with equal member
// sets, from level `bottom` up to level `top`.
struct TreeNode {
  int part = 0;    // the chain's top part; its portals are the node's portals
  int top = 0;
  int bottom = 0;
  int parent = -1;
  std::vector<int> children;
};

struct PortalPath {
  std::vector<PointId> points;
  double length = 0.0;
  int cut_level = 0;
  double bound = 0.0;  // dist(u,v) + 16 * rho * 2^{cut_level} * unit
};

struct DecompositionStats {
  int height = 0;
  int parts = 0;
  int tree_nodes = 0;
  int max_children = 0;
  int max_portals = 0;
};

class Decomposition {
 public:
  // Distances are measured in units of the minimum positive distance, so a
  // level-i part has diameter at most 2^{i+1} * unit(). A shared hierarchy
  // may be passed to amortize its construction over many seeds.
  static Decomposition build(std::shared_ptr<const MetricSpace> space, double rho, std::uint64_t seed,
                             std::shared_ptr<const NetHierarchy> hierarchy = nullptr);

  const MetricSpace& space() const { return *space_; }
  std::shared_ptr<const MetricSpace> space_ptr() const { return space_; }
  const NetHierarchy& hierarchy() const { return *hierarchy_; }
  std::shared_ptr<const NetHierarchy> hierarchy_ptr() const { return hierarchy_; }

  int height() const { return height_; }  // root level
  double unit() const { return unit_; }
  double rho() const { return rho_; }
  double tau() const { return tau_; }  // carving radius factor in [1/2, 1)
  std::uint64_t seed() const { return seed_; }
  const std::vector<PointId>& order() const { return order_; }  // random carving order

  const std::vector<Part>& parts() const { return parts_; }
  const Part& part(int id) const { return parts_[id]; }
  const std::vector<int>& level_parts(int level) const { return level_parts_[level]; }
  int part_at(int level, PointId u) const { return part_of_[level][u]; }
  bool is_portal(int level, PointId u) const { return portal_flag_[level][u] != 0; }
  double scale(int level) const;  // 2^level * unit

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int root_node() const { return 0; }
  int leaf_node(PointId u) const { return leaf_node_[u]; }

  // Maximum level at which u and v lie in different parts. Throws DomainError if u == v.
  int cut_level(PointId u, PointId v) const;
  // max over w in ball(v, r), w != v, of cut_level(v, w); kNoCut if there is no such w.
  int ball_cut_level(PointId v, double r) const;
  // Whether ball(v, r) is cut at some level strictly greater than `threshold`.
  bool ball_cut_above(PointId v, double r, double threshold) const;

  PortalPath portal_respecting_path(PointId u, PointId v) const;

  DecompositionStats stats() const;

 private:
  std::shared_ptr<const MetricSpace> space_;
  std::shared_ptr<const NetHierarchy> hierarchy_;
  int height_ = 0;
  double unit_ = 1.0;
  double rho_ = 0.5;
  double tau_ = 0.5;
  std::uint64_t seed_ = 0;
  std::vector<PointId> order_;
  std::vector<Part> parts_;
  std::vector<std::vector<int>> level_parts_;
  std::vector<std::vector<int>> part_of_;           // [level][point]
  std::vector<std::vector<unsigned char>> portal_flag_;  // [level][point]
  std::vector<TreeNode> nodes_;
  std::vector<int> leaf_node_;
};

struct BadlyCutParams {
  double epsilon = 0.3;
  int p = 1;
  int d = 2;

  // epsilon^2 * (p / (p + epsilon))^p
  double kappa() const;
  // 2d + 2 + log2(1 / kappa)
  double tau() const;
};

// epsilon^2 * p / (p + epsilon)^p, the other printed form; equals kappa() at p = 1.
double kappa_alternative(double epsilon, int p);

// epsilon^2 * 2^{-tau} (facility location, k-median, k-means and variants) or
// epsilon * 2^{-tau} (k-center).
double default_rho(const BadlyCutParams& params, bool kcenter);

bool is_badly_cut_client(const Decomposition& decomp, PointId c, double l_c, const BadlyCutParams& params);
bool is_badly_cut_facility(const Decomposition& decomp, PointId f, double opt_f, const BadlyCutParams& params);
bool is_badly_cut_kcenter(const Decomposition& decomp, PointId f, double gamma, const BadlyCutParams& params);

}  // namespace dclust
