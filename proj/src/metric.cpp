#include "dclust/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "dclust/errors.hpp"

namespace dclust {

namespace {

// Uniform bucket grid over coordinates, used to find candidates within a
// radius h of a query in low dimension. Falls back to a flat list otherwise.
class BucketGrid {
 public:
  BucketGrid(const MetricSpace& space, double h) : space_(space), h_(h) {
    active_ = space.has_coordinates() && space.coordinate_dim() <= 3 && h > 0;
  }

  void insert(PointId p) {
    if (!active_) {
      flat_.push_back(p);
      return;
    }
    cells_[key(cell_of(p))].push_back(p);
  }

  // Calls f(q) for every inserted q that may lie within h of p.
  template <class F>
  void for_candidates(PointId p, F&& f) const {
    if (!active_) {
      for (PointId q : flat_) f(q);
      return;
    }
    auto c = cell_of(p);
    int m = space_.coordinate_dim();
    std::array<std::int64_t, 3> o{};
    int total = 1;
    for (int i = 0; i < m; ++i) total *= 3;
    for (int t = 0; t < total; ++t) {
      int r = t;
      for (int i = 0; i < m; ++i) {
        o[i] = c[i] + (r % 3) - 1;
        r /= 3;
      }
      auto it = cells_.find(key(o));
      if (it == cells_.end()) continue;
      for (PointId q : it->second) f(q);
    }
  }

 private:
  std::array<std::int64_t, 3> cell_of(PointId p) const {
    std::array<std::int64_t, 3> c{};
    auto x = space_.point(p);
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = static_cast<std::int64_t>(std::floor(x[i] / h_));
    return c;
  }
  static std::uint64_t key(const std::array<std::int64_t, 3>& c) {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

  const MetricSpace& space_;
  double h_;
  bool active_;
  std::vector<PointId> flat_;
  std::unordered_map<std::uint64_t, std::vector<PointId>> cells_;
};

constexpr double kRelTol = 1e-12;

}  // namespace

MetricSpace MetricSpace::euclidean(std::vector<double> coords, int dim, int doubling_dim) {
  if (dim <= 0) throw ParameterError("coordinate dimension must be positive");
  if (coords.size() % static_cast<std::size_t>(dim) != 0) throw ParameterError("coordinate array is ragged");
  if (doubling_dim < 1) throw ParameterError("doubling dimension must be >= 1");
  for (double x : coords)
    if (!std::isfinite(x)) throw ParameterError("non-finite coordinate");
  MetricSpace m;
  m.n_ = static_cast<int>(coords.size() / dim);
  m.d_ = doubling_dim;
  m.coord_dim_ = dim;
  m.coords_ = std::move(coords);
  return m;
}

MetricSpace MetricSpace::from_matrix(std::vector<double> full, int n, int doubling_dim) {
  if (n < 0 || full.size() != static_cast<std::size_t>(n) * n) throw ParameterError("matrix must be n*n");
  if (doubling_dim < 1) throw ParameterError("doubling dimension must be >= 1");
  for (int i = 0; i < n; ++i) {
    if (full[static_cast<std::size_t>(i) * n + i] != 0.0) throw ValidationError("nonzero diagonal entry");
    for (int j = 0; j < i; ++j) {
      double a = full[static_cast<std::size_t>(i) * n + j], b = full[static_cast<std::size_t>(j) * n + i];
      if (!(a >= 0.0) || !std::isfinite(a)) throw ValidationError("distance must be finite and nonnegative");
      if (a != b) throw ValidationError("distance matrix is not symmetric");
    }
  }
  MetricSpace m;
  m.n_ = n;
  m.d_ = doubling_dim;
  m.matrix_ = std::move(full);
  return m;
}

double MetricSpace::coord_dist(PointId a, PointId b) const {
  const double* x = coords_.data() + static_cast<std::size_t>(a) * coord_dim_;
  const double* y = coords_.data() + static_cast<std::size_t>(b) * coord_dim_;
  double s = 0.0;
  for (int i = 0; i < coord_dim_; ++i) {
    double t = x[i] - y[i];
    s += t * t;
  }
  return std::sqrt(s);
}

MetricSpace MetricSpace::subspace(std::span<const PointId> ids) const {
  MetricSpace m;
  m.n_ = static_cast<int>(ids.size());
  m.d_ = d_;
  m.coord_dim_ = coord_dim_;
  if (coord_dim_ > 0) {
    m.coords_.reserve(ids.size() * coord_dim_);
    for (PointId p : ids) {
      auto x = point(p);
      m.coords_.insert(m.coords_.end(), x.begin(), x.end());
    }
  } else {
    m.matrix_.resize(ids.size() * ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j) m.matrix_[i * ids.size() + j] = dist(ids[i], ids[j]);
  }
  return m;
}

bool MetricSpace::check_triangle_inequality(double tol, PointId* bad) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        if (dist(i, k) > dist(i, j) + dist(j, k) + tol) {
          if (bad) {
            bad[0] = i;
            bad[1] = j;
            bad[2] = k;
          }
          return false;
        }
      }
  return true;
}

DistanceExtremes distance_extremes(const MetricSpace& space) {
  std::vector<PointId> all(space.size());
  std::iota(all.begin(), all.end(), 0);
  return distance_extremes(space, all);
}

DistanceExtremes distance_extremes(const MetricSpace& space, std::span<const PointId> subset) {
  DistanceExtremes e;
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      double d = space.dist(subset[i], subset[j]);
      if (d > e.max) e.max = d;
      if (d > 0 && d < mn) mn = d;
    }
  e.min_positive = std::isfinite(mn) ? mn : 0.0;
  return e;
}

double aspect_ratio(const MetricSpace& space) {
  auto e = distance_extremes(space);
  if (e.min_positive <= 0.0) throw DomainError("aspect ratio needs at least two distinct points");
  return e.max / e.min_positive;
}

double min_positive_distance(const MetricSpace& space) {
  std::vector<PointId> all(space.size());
  std::iota(all.begin(), all.end(), 0);
  return min_positive_distance(space, all);
}

double min_positive_distance(const MetricSpace& space, std::span<const PointId> subset) {
  if (!space.has_coordinates()) return distance_extremes(space, subset).min_positive;
  std::vector<PointId> order(subset.begin(), subset.end());
  auto x0 = [&](PointId p) { return space.point(p)[0]; };
  std::sort(order.begin(), order.end(), [&](PointId a, PointId b) { return x0(a) < x0(b); });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size() && x0(order[j]) - x0(order[i]) < best; ++j) {
      double d = space.dist(order[i], order[j]);
      if (d > 0 && d < best) best = d;
    }
  return std::isfinite(best) ? best : 0.0;
}

double diameter_bound(const MetricSpace& space) {
  constexpr int kExactLimit = 3000;
  const int n = space.size();
  if (n <= kExactLimit) return distance_extremes(space).max;
  double ecc = 0.0;
  for (PointId u = 1; u < n; ++u) ecc = std::max(ecc, space.dist(0, u));
  return 2.0 * ecc;
}

NearestIndex::NearestIndex(const MetricSpace& space, int expected) : space_(space) {
  const int m = space.coordinate_dim();
  if (!space.has_coordinates() || m > 3 || space.size() == 0 || expected < 16) return;
  double extent = 0.0;
  for (int k = 0; k < m; ++k) {
    double a = std::numeric_limits<double>::infinity(), b = -a;
    for (PointId p = 0; p < space.size(); ++p) {
      a = std::min(a, space.point(p)[k]);
      b = std::max(b, space.point(p)[k]);
    }
    extent = std::max(extent, b - a);
  }
  if (!(extent > 0)) return;
  h_ = extent / std::pow(static_cast<double>(expected), 1.0 / m);
  grid_ = true;
}

NearestIndex::Cell NearestIndex::cell_of(PointId p) const {
  Cell c{};
  auto x = space_.point(p);
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = static_cast<std::int64_t>(std::floor(x[i] / h_));
  return c;
}

std::uint64_t NearestIndex::key(const Cell& c) {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : c) h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

void NearestIndex::insert(PointId p, int label) {
  flat_.push_back({p, label});
  if (!grid_) {
    ++size_;
    return;
  }
  Cell c = cell_of(p);
  if (size_ == 0) {
    lo_ = hi_ = c;
  } else {
    for (int i = 0; i < 3; ++i) {
      lo_[i] = std::min(lo_[i], c[i]);
      hi_[i] = std::max(hi_[i], c[i]);
    }
  }
  cells_[key(c)].push_back({p, label});
  ++size_;
}

std::pair<int, double> NearestIndex::nearest(PointId q) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  auto offer = [&](const std::pair<PointId, int>& e) {
    double d = space_.dist(q, e.first);
    if (d < best_d || (d == best_d && e.second < best)) {
      best_d = d;
      best = e.second;
    }
  };
  constexpr int kScanLimit = 64;
  if (!grid_ || size_ <= kScanLimit) {
    for (const auto& e : flat_) offer(e);
    return {best, best_d};
  }
  const int m = space_.coordinate_dim();
  const Cell c = cell_of(q);
  std::int64_t reach = 0;
  for (int i = 0; i < m; ++i) reach = std::max({reach, c[i] - lo_[i], hi_[i] - c[i]});
  for (std::int64_t r = 0; r <= reach; ++r) {
    // Cells at Chebyshev offset exactly r.
    std::array<std::int64_t, 3> o{};
    const std::int64_t side = 2 * r + 1;
    std::int64_t total = 1;
    for (int i = 0; i < m; ++i) total *= side;
    for (std::int64_t t = 0; t < total; ++t) {
      std::int64_t u = t;
      bool shell = false;
      for (int i = 0; i < m; ++i) {
        o[i] = u % side - r;
        u /= side;
        if (o[i] == r || o[i] == -r) shell = true;
      }
      if (!shell && r > 0) continue;
      Cell cc{};
      for (int i = 0; i < m; ++i) cc[i] = c[i] + o[i];
      auto it = cells_.find(key(cc));
      if (it == cells_.end()) continue;
      for (const auto& e : it->second) offer(e);
    }
    // Anything in a farther ring is at least r * h away.
    if (best >= 0 && best_d < static_cast<double>(r) * h_) break;
  }
  return {best, best_d};
}

std::vector<PointId> ball(const MetricSpace& space, PointId v, double r) {
  std::vector<PointId> out;
  for (PointId u = 0; u < space.size(); ++u)
    if (space.dist(u, v) <= r) out.push_back(u);
  return out;
}

Net build_net(const MetricSpace& space, std::span<const PointId> ground, double delta, std::span<const PointId> seeds) {
  if (!(delta > 0)) throw ParameterError("net radius must be positive");
  if (ground.empty()) throw ParameterError("net ground set is empty");
  Net net;
  net.delta = delta;
  BucketGrid grid(space, delta);
  std::vector<PointId> order(ground.begin(), ground.end());
  std::sort(order.begin(), order.end());
  for (PointId s : seeds) {
    net.centers.push_back(s);
    grid.insert(s);
  }
  std::vector<PointId> sorted_seeds(seeds.begin(), seeds.end());
  std::sort(sorted_seeds.begin(), sorted_seeds.end());
  for (PointId u : order) {
    if (std::binary_search(sorted_seeds.begin(), sorted_seeds.end(), u)) continue;
    bool covered = false;
    grid.for_candidates(u, [&](PointId c) {
      if (!covered && space.dist(u, c) <= delta) covered = true;
    });
    if (!covered) {
      net.centers.push_back(u);
      grid.insert(u);
    }
  }
  return net;
}

bool is_separated(const MetricSpace& space, std::span<const PointId> centers, double delta) {
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if (!(space.dist(centers[i], centers[j]) > delta)) return false;
  return true;
}

bool is_covering(const MetricSpace& space, std::span<const PointId> ground, std::span<const PointId> centers,
                 double delta) {
  for (PointId u : ground) {
    bool ok = false;
    for (PointId c : centers)
      if (space.dist(u, c) <= delta) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

double net_size_bound(int d, double diameter, double delta) {
  if (diameter <= delta) return 1.0;
  double e = std::ceil(std::log2(diameter / delta) - kRelTol);
  return std::exp2(d * e);
}

NetHierarchy::NetHierarchy(const MetricSpace& space, double unit, double near_factor)
    : space_(&space), unit_(unit), near_factor_(near_factor) {
  const int n = space.size();
  if (n == 0) throw ParameterError("net hierarchy of an empty space");
  if (unit_ <= 0) {
    unit_ = min_positive_distance(space);
    if (unit_ <= 0) unit_ = 1.0;
  }
  std::vector<PointId> all(n);
  std::iota(all.begin(), all.end(), 0);
  nets_.push_back(all);

  auto index_of = [&](const std::vector<PointId>& net) {
    std::vector<std::int32_t> pos(n, -1);
    for (std::size_t i = 0; i < net.size(); ++i) pos[net[i]] = static_cast<std::int32_t>(i);
    return pos;
  };
  pos_.push_back(index_of(all));

  for (int i = 1; nets_.back().size() > 1; ++i) {
    const auto& prev = nets_.back();
    double delta = std::ldexp(unit_, i - 2);
    BucketGrid grid(space, delta);
    std::vector<PointId> next;
    std::vector<PointId> par(prev.size(), -1);
    for (std::size_t a = 0; a < prev.size(); ++a) {
      PointId u = prev[a];
      PointId best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      grid.for_candidates(u, [&](PointId c) {
        double d = space.dist(u, c);
        if (d <= delta && (d < best_d || (d == best_d && c < best))) {
          best = c;
          best_d = d;
        }
      });
      if (best < 0) {
        next.push_back(u);
        grid.insert(u);
        best = u;
      }
      par[a] = best;
    }
    parent_.push_back(std::move(par));
    nets_.push_back(std::move(next));
    pos_.push_back(index_of(nets_.back()));
  }
  parent_.emplace_back(nets_.back().size(), -1);

  const int levels = static_cast<int>(nets_.size());
  children_.resize(levels);
  for (int i = 1; i < levels; ++i) {
    children_[i].resize(nets_[i].size());
    for (std::size_t a = 0; a < nets_[i - 1].size(); ++a) {
      PointId p = parent_[i - 1][a];
      children_[i][pos_[i][p]].push_back(nets_[i - 1][a]);
    }
  }

  near_.resize(levels);
  for (int i = 0; i < levels; ++i) {
    const auto& net = nets_[i];
    double radius = near_factor_ * std::ldexp(unit_, i);
    BucketGrid grid(space, radius);
    for (PointId y : net) grid.insert(y);
    near_[i].resize(net.size());
    for (std::size_t a = 0; a < net.size(); ++a) {
      PointId y = net[a];
      auto& list = near_[i][a];
      grid.for_candidates(y, [&](PointId c) {
        if (space.dist(y, c) <= radius) list.push_back(c);
      });
      std::sort(list.begin(), list.end());
    }
  }
}

PointId NetHierarchy::parent(int i, PointId p) const {
  if (i >= top()) return p;
  return parent_[i][pos_[i][p]];
}

PointId NetHierarchy::owner(int i, PointId u) const {
  int lim = std::min(i, top());
  for (int j = 0; j < lim; ++j) u = parent_[j][pos_[j][u]];
  return u;
}

std::vector<PointId> NetHierarchy::range(PointId q, double r) const {
  const auto& sp = *space_;
  // Descendants of a point of Y_j lie strictly within 2^{j-1} * unit of it.
  auto reach = [&](int j) { return j == 0 ? 0.0 : std::ldexp(unit_, j - 1); };
  double slack = 1e-12 * (r + unit_);
  std::vector<PointId> cand;
  for (PointId y : nets_[top()])
    if (sp.dist(q, y) <= r + reach(top()) + slack) cand.push_back(y);
  for (int i = top(); i >= 1; --i) {
    std::vector<PointId> next;
    for (PointId y : cand)
      for (PointId c : children(i, y))
        if (sp.dist(q, c) <= r + reach(i - 1) + slack) next.push_back(c);
    cand.swap(next);
  }
  std::vector<PointId> out;
  for (PointId c : cand)
    if (sp.dist(q, c) <= r) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

Spanner build_spanner(const MetricSpace& space, double stretch) {
  if (!(stretch >= 1.5)) throw ParameterError("spanner stretch must be at least 1.5");
  Spanner sp;
  sp.n = space.size();
  sp.stretch = stretch;
  if (space.size() < 2) return sp;
  // A path climbs parent links to the first level whose ancestors are
  // neighbours; with radius c*2^i the detour is at most 4/(c-1) times dist.
  double c = 1.0 + 4.0 / (stretch - 1.0);
  NetHierarchy h(space, 0.0, c);
  std::vector<std::pair<PointId, PointId>> pairs;
  for (int i = 0; i <= h.top(); ++i) {
    for (PointId y : h.level(i)) {
      for (PointId z : h.near(i, y))
        if (y < z) pairs.emplace_back(y, z);
      if (i < h.top()) {
        PointId p = h.parent(i, y);
        if (p != y) pairs.emplace_back(std::min(p, y), std::max(p, y));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  sp.edges.reserve(pairs.size());
  for (auto [u, v] : pairs) sp.edges.push_back({u, v, space.dist(u, v)});
  return sp;
}

std::vector<double> spanner_distances(const Spanner& spanner, PointId source) {
  std::vector<std::vector<std::pair<PointId, double>>> adj(spanner.n);
  for (const auto& e : spanner.edges) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  std::vector<double> d(spanner.n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, PointId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[source] = 0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    for (auto [v, w] : adj[u])
      if (du + w < d[v]) {
        d[v] = du + w;
        pq.push({d[v], v});
      }
  }
  return d;
}

}  // namespace dclust
