#include "dclust/split_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "dclust/errors.hpp"
#include "dclust/rng.hpp"

namespace dclust {

double Decomposition::scale(int level) const { return std::ldexp(unit_, level); }

Decomposition Decomposition::build(std::shared_ptr<const MetricSpace> space, double rho, std::uint64_t seed,
                                   std::shared_ptr<const NetHierarchy> hierarchy) {
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must lie in (0, 1)");
  if (!space || space->size() == 0) throw ParameterError("decomposition of an empty space");
  const MetricSpace& sp = *space;
  const int n = sp.size();

  Decomposition d;
  d.space_ = space;
  d.rho_ = rho;
  d.seed_ = seed;
  if (!hierarchy) hierarchy = std::make_shared<NetHierarchy>(sp);
  if (&hierarchy->space() != space.get()) throw ParameterError("hierarchy was built over a different space");
  d.hierarchy_ = hierarchy;
  d.unit_ = hierarchy->unit();
  const NetHierarchy& net = *hierarchy;

  const double diam = diameter_bound(sp);
  d.height_ = 0;
  if (n >= 2) {
    double ratio = diam / d.unit_;
    d.height_ = ratio > 1.0 ? static_cast<int>(std::ceil(std::log2(ratio) - 1e-12)) : 1;
    d.height_ = std::max(1, d.height_);
  }
  const int H = d.height_;

  Rng rng(seed);
  d.order_.resize(n);
  std::iota(d.order_.begin(), d.order_.end(), 0);
  shuffle(d.order_, rng);
  d.tau_ = 0.5 + 0.5 * uniform01(rng);
  std::vector<int> rank(n);
  for (int r = 0; r < n; ++r) rank[d.order_[r]] = r;

  d.part_of_.assign(H + 1, std::vector<int>(n, -1));
  d.level_parts_.assign(H + 1, {});

  Part root;
  root.id = 0;
  root.level = H;
  root.members.resize(n);
  std::iota(root.members.begin(), root.members.end(), 0);
  root.center = n > 0 ? d.order_.front() : 0;
  root.radius = d.tau_ * d.scale(H);
  d.parts_.push_back(root);
  d.level_parts_[H].push_back(0);
  std::fill(d.part_of_[H].begin(), d.part_of_[H].end(), 0);

  // Levels H-1 .. 1: u joins the first center y of Y_i (in the random order)
  // with dist(u, y) <= tau * 2^i; such a y is a neighbour of u's owner in Y_i.
  for (int i = H - 1; i >= 0; --i) {
    std::vector<std::tuple<int, int, PointId>> keyed;  // (parent part, center rank, point)
    keyed.reserve(n);
    double radius = d.tau_ * d.scale(i);
    for (PointId u = 0; u < n; ++u) {
      PointId center = u;
      if (i > 0) {
        PointId o = net.owner(i, u);
        int best = INT_MAX;
        for (PointId y : net.near(i, o))
          if (rank[y] < best && sp.dist(u, y) <= radius) best = rank[y];
        if (best == INT_MAX) best = rank[o];  // unreachable: the owner is within 2^{i-1} <= radius
        center = d.order_[best];
      }
      keyed.emplace_back(d.part_of_[i + 1][u], i > 0 ? rank[center] : u, u);
    }
    std::sort(keyed.begin(), keyed.end());
    int last_parent = -1, last_key = -1;
    for (auto& [parent, key, u] : keyed) {
      if (parent != last_parent || key != last_key) {
        Part p;
        p.id = static_cast<int>(d.parts_.size());
        p.level = i;
        p.center = i > 0 ? d.order_[key] : u;
        p.radius = radius;
        p.parent = parent;
        d.parts_[parent].children.push_back(p.id);
        d.level_parts_[i].push_back(p.id);
        d.parts_.push_back(std::move(p));
        last_parent = parent;
        last_key = key;
      }
      Part& cur = d.parts_.back();
      cur.members.push_back(u);
      d.part_of_[i][u] = cur.id;
    }
  }
  for (auto& p : d.parts_) std::sort(p.members.begin(), p.members.end());

  // Portals top-down so every part starts from its parent's portals.
  d.portal_flag_.assign(H + 1, std::vector<unsigned char>(n, 0));
  for (int i = H; i >= 0; --i) {
    double delta = rho * d.scale(i + 1);
    for (int id : d.level_parts_[i]) {
      Part& p = d.parts_[id];
      std::vector<PointId> seeds;
      if (p.parent >= 0)
        for (PointId q : d.parts_[p.parent].portals)
          if (d.part_of_[i][q] == id) seeds.push_back(q);
      p.portals = build_net(sp, p.members, delta, seeds).centers;
      for (PointId q : p.portals) d.portal_flag_[i][q] = 1;
    }
  }

  // Compressed tree: collapse single-child chains.
  d.leaf_node_.assign(n, -1);
  std::vector<std::pair<int, int>> queue{{0, -1}};  // (top part, parent node)
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto [top_part, parent_node] = queue[qi];
    int bottom = top_part;
    while (d.parts_[bottom].children.size() == 1) bottom = d.parts_[bottom].children.front();
    TreeNode node;
    node.part = top_part;
    node.top = d.parts_[top_part].level;
    node.bottom = d.parts_[bottom].level;
    node.parent = parent_node;
    int id = static_cast<int>(d.nodes_.size());
    if (parent_node >= 0) d.nodes_[parent_node].children.push_back(id);
    d.nodes_.push_back(node);
    if (d.parts_[bottom].children.empty()) {
      for (PointId u : d.parts_[bottom].members) d.leaf_node_[u] = id;
    }
    for (int c : d.parts_[bottom].children) queue.emplace_back(c, id);
  }
  return d;
}

int Decomposition::cut_level(PointId u, PointId v) const {
  if (u == v) throw DomainError("cut level of a point with itself");
  for (int l = height_ - 1; l >= 0; --l)
    if (part_of_[l][u] != part_of_[l][v]) return l;
  throw DomainError("points are never separated");  // only coincident multi-point leaves could do this
}

int Decomposition::ball_cut_level(PointId v, double r) const {
  int best = kNoCut;
  for (PointId w : hierarchy_->range(v, r))
    if (w != v) best = std::max(best, cut_level(v, w));
  return best;
}

bool Decomposition::ball_cut_above(PointId v, double r, double threshold) const {
  double j = std::floor(threshold) + 1.0;
  if (j > height_ - 1) return false;
  int level = j < 0 ? 0 : static_cast<int>(j);
  int own = part_of_[level][v];
  for (PointId w : hierarchy_->range(v, r))
    if (part_of_[level][w] != own) return true;
  return false;
}

PortalPath Decomposition::portal_respecting_path(PointId u, PointId v) const {
  PortalPath path;
  path.cut_level = cut_level(u, v);
  const int top = path.cut_level;
  auto climb = [&](PointId x) {
    std::vector<PointId> pts{x};
    PointId w = x;
    for (int j = 1; j <= top; ++j) {
      const Part& part = parts_[part_of_[j][x]];
      PointId best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (PointId q : part.portals) {
        double dd = space_->dist(w, q);
        if (dd < best_d || (dd == best_d && q < best)) {
          best = q;
          best_d = dd;
        }
      }
      if (best != w) pts.push_back(best);
      w = best;
    }
    return pts;
  };
  auto a = climb(u);
  auto b = climb(v);
  path.points = a;
  for (auto it = b.rbegin(); it != b.rend(); ++it)
    if (*it != path.points.back()) path.points.push_back(*it);
  for (std::size_t i = 1; i < path.points.size(); ++i)
    path.length += space_->dist(path.points[i - 1], path.points[i]);
  path.bound = space_->dist(u, v) + 16.0 * rho_ * scale(top);
  return path;
}

DecompositionStats Decomposition::stats() const {
  DecompositionStats s;
  s.height = height_;
  s.parts = static_cast<int>(parts_.size());
  s.tree_nodes = static_cast<int>(nodes_.size());
  for (const auto& nd : nodes_) s.max_children = std::max<int>(s.max_children, static_cast<int>(nd.children.size()));
  for (const auto& p : parts_) s.max_portals = std::max<int>(s.max_portals, static_cast<int>(p.portals.size()));
  return s;
}

double BadlyCutParams::kappa() const {
  return epsilon * epsilon * std::pow(static_cast<double>(p) / (p + epsilon), p);
}

double BadlyCutParams::tau() const { return 2.0 * d + 2.0 + std::log2(1.0 / kappa()); }

double kappa_alternative(double epsilon, int p) { return epsilon * epsilon * p / std::pow(p + epsilon, p); }

double default_rho(const BadlyCutParams& params, bool kcenter) {
  double scale = std::exp2(-params.tau());
  return (kcenter ? params.epsilon : params.epsilon * params.epsilon) * scale;
}

bool is_badly_cut_client(const Decomposition& decomp, PointId c, double l_c, const BadlyCutParams& params) {
  if (!(l_c > 0.0)) return false;
  double r = 3.0 * l_c / params.epsilon;
  return decomp.ball_cut_above(c, r, std::log2(r / decomp.unit()) + params.tau());
}

bool is_badly_cut_facility(const Decomposition& decomp, PointId f, double opt_f, const BadlyCutParams& params) {
  if (!(opt_f > 0.0)) return false;
  double r = 3.0 * opt_f;
  return decomp.ball_cut_above(f, r, std::log2(r / decomp.unit()) + params.tau());
}

bool is_badly_cut_kcenter(const Decomposition& decomp, PointId f, double gamma, const BadlyCutParams& params) {
  if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
  // i with 2^{i-1} <= 2 gamma < 2^i, in units of the decomposition.
  int i = static_cast<int>(std::floor(std::log2(2.0 * gamma / decomp.unit()))) + 1;
  double r = decomp.scale(i);
  return decomp.ball_cut_above(f, r, i + params.tau());
}

}  // namespace dclust
