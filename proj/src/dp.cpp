#include "dclust/dp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "dclust/errors.hpp"
#include "dclust/preprocess.hpp"

namespace dclust {

namespace {

constexpr std::int32_t kQInf = std::numeric_limits<std::int32_t>::max();
constexpr std::int32_t kLeafOpen = -2;
// Enumeration limit when max_combinations is 0, summed over the whole tree.
constexpr std::size_t kUnlimitedCombinations = std::size_t{1} << 24;
using Key = std::vector<std::int32_t>;

struct Partial {
  std::int32_t cost, outliers, centers;
  std::int32_t back, choice;
};

// Keeps the entries not dominated in (cost, outliers, centers); the first of
// equal entries survives.
template <class T>
void pareto_prune(std::vector<T>& v, bool use_outliers) {
  if (v.size() <= 1) return;
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (v[a].cost != v[b].cost) return v[a].cost < v[b].cost;
    if (v[a].outliers != v[b].outliers) return v[a].outliers < v[b].outliers;
    return v[a].centers < v[b].centers;
  });
  std::vector<T> kept;
  std::int32_t min_centers = std::numeric_limits<std::int32_t>::max();
  for (std::size_t i : idx) {
    const T& e = v[i];
    if (!use_outliers) {
      if (e.centers < min_centers) {
        min_centers = e.centers;
        kept.push_back(e);
      }
      continue;
    }
    bool dominated = false;
    for (const T& k : kept)
      if (k.outliers <= e.outliers && k.centers <= e.centers) {
        dominated = true;
        break;
      }
    if (!dominated) kept.push_back(e);
  }
  v = std::move(kept);
}

}  // namespace

CostGrid::CostGrid(double lo, double hi, double ratio) : lo_(lo), hi_(hi), ratio_(ratio) {
  if (!(lo > 0) || !(hi >= lo) || !(ratio > 1.0)) throw ParameterError("invalid cost grid");
  values_.assign(1, 0.0);
  double v = lo;
  values_.push_back(v);
  while (v < hi) {
    v *= ratio;
    values_.push_back(v);
  }
}

int CostGrid::index_up(double x) const {
  if (!(x > 0)) return x == 0 ? 0 : (std::isnan(x) ? size() : 0);
  auto it = std::lower_bound(values_.begin() + 1, values_.end(), x * (1.0 - 1e-12));
  return static_cast<int>(it - values_.begin());
}

int CostGrid::index_down(double x) const {
  auto it = std::upper_bound(values_.begin(), values_.end(), x * (1.0 + 1e-12));
  return std::max(0, static_cast<int>(it - values_.begin()) - 1);
}

int CostGrid::add(int a, int b) const {
  if (a == 0) return b;
  if (b == 0) return a;
  return index_up(values_[a] + values_[b]);
}

OutlierGrid::OutlierGrid(double delta, std::int64_t cap) : cap_(cap) {
  if (!(delta > 0) || cap < 0) throw ParameterError("invalid outlier grid");
  values_.assign(1, 0);
  double v = 1.0;
  while (true) {
    auto c = static_cast<std::int64_t>(std::ceil(v - 1e-9));
    if (c > cap) break;
    if (c != values_.back()) values_.push_back(c);
    v *= 1.0 + delta;
  }
  if (values_.back() != cap) values_.push_back(cap);
}

int OutlierGrid::index_up(std::int64_t x) const {
  if (x > cap_) return size();
  auto it = std::lower_bound(values_.begin(), values_.end(), x);
  return static_cast<int>(it - values_.begin());
}

struct PortalDp::Impl {
  struct Cell {
    Key key;
    std::vector<double> fl_value;
    std::vector<std::int32_t> fl_combo;
    std::vector<std::vector<DpEntry>> front;
    std::vector<std::int32_t> pool;
  };

  struct Node {
    int id = 0;
    bool leaf = false;
    bool ambient = false;
    PointId point = -1;
    int bottom = 0;
    std::vector<PointId> portals;
    double D = 0, step = 0, limit = 0;
    std::vector<int> kids;  // indices into nodes
    std::vector<int> off;   // offset of each child's portals in the flattened child-portal list
    int total_child_portals = 0;
    std::vector<std::vector<double>> d_cp;    // [j] |P_j| x |P_N|
    std::vector<std::vector<double>> d_self;  // [j] |P_j| x |P_j|
    std::vector<std::vector<std::vector<double>>> sib;  // [t][c] over the flattened child portals
    std::vector<Key> configs;
    int empty = -1;
    std::vector<std::int32_t> combo_child;  // combos x kids
    std::vector<std::int32_t> combo_cfg;
    bool moments_ready = false;
    std::vector<int> clients;
    double m0 = 0;
    std::vector<double> m1, m2;
    std::map<Key, int> keymap;
    std::deque<Cell> cells;

    std::size_t combos() const { return combo_cfg.size(); }
  };

  const ClusteringInstance& inst;
  const Decomposition& dec;
  Setup set;
  bool kmode;
  bool use_out;
  int p;
  std::vector<int> fac_at;
  std::vector<std::vector<int>> clients_at;
  std::vector<Node> nodes;
  DpStats stats;
  std::size_t enumerated = 0;
  bool root_done = false;
  std::vector<DpEntry> root;
  std::vector<std::pair<int, int>> root_ref;

  Impl(const ClusteringInstance& instance, const Decomposition& decomp, Setup s)
      : inst(instance), dec(decomp), set(std::move(s)) {
    kmode = set.mode != DpMode::kFacilityLocation;
    use_out = set.mode == DpMode::kOutliers;
    p = set.mode == DpMode::kCenter ? 1 : inst.p;
    const int n = dec.space().size();
    if (&dec.space() != inst.metric.get()) throw ParameterError("decomposition was built over a different space");
    fac_at = facility_at_point(inst);
    if (set.forced.empty()) set.forced.assign(inst.facilities.size(), 0);
    clients_at.assign(n, {});
    for (std::size_t c = 0; c < inst.clients.size(); ++c)
      if (inst.clients[c].demand > 0) clients_at[inst.clients[c].point].push_back(static_cast<int>(c));
    stats.quantized_values =
        static_cast<int>(std::ceil((1.0 / (set.options.epsilon * set.options.epsilon) + 1.0 / set.options.epsilon) *
                                   set.options.grid_refinement)) + 2;
    stats.cost_grid_size = set.cost_grid.size();
    build();
  }

  double dist(PointId a, PointId b) const { return dec.space().dist(a, b); }

  double real(const Node& nd, std::int32_t q) const { return q == kQInf ? kInf : q * nd.step; }

  std::int32_t quantize(const Node& nd, double x, bool cap) const {
    if (!(x < kInf)) return kQInf;
    if (cap && x > nd.limit) return kQInf;
    double q = std::ceil(x / nd.step - 1e-9);
    return static_cast<std::int32_t>(std::min(q, 1e9));
  }

  void build() {
    const auto& tn = dec.nodes();
    nodes.resize(tn.size());
    const double eps = set.options.epsilon;
    for (int id = static_cast<int>(tn.size()) - 1; id >= 0; --id) {
      Node& nd = nodes[id];
      const TreeNode& t = tn[id];
      nd.id = id;
      nd.kids = t.children;
      nd.bottom = t.bottom;
      nd.leaf = t.children.empty();
      nd.ambient = t.bottom > set.ambient_level;
      nd.portals = dec.part(t.part).portals;
      nd.D = dec.scale(t.bottom + 1);
      nd.step = eps * nd.D / set.options.grid_refinement;
      nd.limit = nd.D / eps + nd.D;
      stats.max_portals = std::max<int>(stats.max_portals, static_cast<int>(nd.portals.size()));
      if (nd.leaf) {
        const auto& mem = dec.part(t.part).members;
        if (mem.size() != 1) throw DomainError("leaf part with more than one point");
        nd.point = mem.front();
        nd.portals = {nd.point};
        int f = fac_at[nd.point];
        if (f >= 0) nd.configs.push_back({0});
        if (!(f >= 0 && set.forced[f])) {
          nd.empty = static_cast<int>(nd.configs.size());
          nd.configs.push_back({kQInf});
        }
      } else {
        setup_internal(nd);
        if (set.options.max_inside_configs > 0 && nd.configs.size() > set.options.max_inside_configs)
          prune_configs(nd);
      }
      stats.max_inside_configs = std::max(stats.max_inside_configs, nd.configs.size());
    }
    stats.nodes = static_cast<int>(nodes.size());
  }

  void setup_distances(Node& nd) {
    const int m = static_cast<int>(nd.kids.size());
    const int P = static_cast<int>(nd.portals.size());
    nd.off.assign(m, 0);
    nd.total_child_portals = 0;
    nd.d_cp.assign(m, {});
    nd.d_self.assign(m, {});
    for (int j = 0; j < m; ++j) {
      const Node& c = nodes[nd.kids[j]];
      nd.off[j] = nd.total_child_portals;
      const int Pj = static_cast<int>(c.portals.size());
      nd.total_child_portals += Pj;
      nd.d_cp[j].resize(static_cast<std::size_t>(Pj) * P);
      for (int q = 0; q < Pj; ++q)
        for (int a = 0; a < P; ++a) nd.d_cp[j][q * P + a] = dist(c.portals[q], nd.portals[a]);
      nd.d_self[j].resize(static_cast<std::size_t>(Pj) * Pj);
      for (int q = 0; q < Pj; ++q)
        for (int r = 0; r < Pj; ++r) nd.d_self[j][q * Pj + r] = dist(c.portals[q], c.portals[r]);
    }
  }

  void setup_internal(Node& nd) {
    setup_distances(nd);
    const int m = static_cast<int>(nd.kids.size());
    const int P = static_cast<int>(nd.portals.size());
    nd.configs.clear();
    nd.combo_child.clear();
    nd.combo_cfg.clear();
    nd.sib.assign(m, {});
    if (nd.ambient) {
      nd.configs.push_back(Key(P, kQInf));
      nd.empty = -1;
      nd.combo_child.assign(m, -1);
      nd.combo_cfg.push_back(0);
      return;
    }
    // Per child configuration: its inside distance to every parent portal and to every sibling portal.
    std::vector<std::vector<std::vector<double>>> to_parent(m);
    for (int t = 0; t < m; ++t) {
      const Node& c = nodes[nd.kids[t]];
      const int Pt = static_cast<int>(c.portals.size());
      to_parent[t].resize(c.configs.size());
      nd.sib[t].resize(c.configs.size());
      for (std::size_t ci = 0; ci < c.configs.size(); ++ci) {
        const Key& cfg = c.configs[ci];
        auto& tp = to_parent[t][ci];
        tp.assign(P, kInf);
        for (int a = 0; a < P; ++a)
          for (int r = 0; r < Pt; ++r) {
            double l = real(c, cfg[r]);
            if (l < kInf) tp[a] = std::min(tp[a], dist(nd.portals[a], c.portals[r]) + l);
          }
        auto& sb = nd.sib[t][ci];
        sb.assign(nd.total_child_portals, kInf);
        for (int j = 0; j < m; ++j) {
          if (j == t) continue;
          const Node& cj = nodes[nd.kids[j]];
          for (std::size_t q = 0; q < cj.portals.size(); ++q)
            for (int r = 0; r < Pt; ++r) {
              double l = real(c, cfg[r]);
              if (l < kInf) sb[nd.off[j] + q] = std::min(sb[nd.off[j] + q], dist(cj.portals[q], c.portals[r]) + l);
            }
        }
      }
    }

    std::map<Key, int> found;
    std::vector<int> raw_cfg;
    std::vector<std::int32_t> choice(m, 0);
    const std::size_t cap = set.options.max_combinations;
    bool capped = false;
    std::vector<std::vector<double>> partial(m + 1, std::vector<double>(P, kInf));
    auto emit = [&](const std::vector<double>& l) {
      Key key(P);
      for (int a = 0; a < P; ++a) key[a] = quantize(nd, l[a], false);
      auto it = found.emplace(key, static_cast<int>(found.size())).first;
      raw_cfg.push_back(it->second);
      nd.combo_child.insert(nd.combo_child.end(), choice.begin(), choice.end());
    };
    auto rec = [&](auto&& self, int j) -> void {
      if (capped) return;
      if (j == m) {
        if (cap > 0 && raw_cfg.size() >= cap) {
          capped = true;
          return;
        }
        if (cap == 0 && ++enumerated > kUnlimitedCombinations)
          throw CapacityError("more than 2^24 child combinations; set max_combinations");
        emit(partial[m]);
        return;
      }
      const Node& c = nodes[nd.kids[j]];
      for (std::size_t ci = 0; ci < c.configs.size() && !capped; ++ci) {
        choice[j] = static_cast<std::int32_t>(ci);
        for (int a = 0; a < P; ++a) partial[j + 1][a] = std::min(partial[j][a], to_parent[j][ci][a]);
        self(self, j + 1);
      }
    };
    rec(rec, 0);
    if (capped) {
      stats.capped_combinations = true;
      bool all_empty = true;
      for (int j = 0; j < m; ++j) {
        const Node& c = nodes[nd.kids[j]];
        if (c.empty < 0) all_empty = false;
        choice[j] = c.empty;
      }
      if (all_empty) emit(std::vector<double>(P, kInf));
    }
    // Number configurations in lexicographic order.
    std::vector<int> remap(found.size());
    int pos = 0;
    for (auto& [key, raw] : found) {
      remap[raw] = pos++;
      nd.configs.push_back(key);
    }
    nd.combo_cfg.resize(raw_cfg.size());
    for (std::size_t i = 0; i < raw_cfg.size(); ++i) nd.combo_cfg[i] = remap[raw_cfg[i]];
    nd.empty = -1;
    for (std::size_t i = 0; i < nd.configs.size(); ++i)
      if (std::all_of(nd.configs[i].begin(), nd.configs[i].end(), [](std::int32_t v) { return v == kQInf; }))
        nd.empty = static_cast<int>(i);
    stats.combinations += nd.combos();
  }

  // Keeps the configurations with the best value when nothing outside is open.
  void prune_configs(Node& nd) {
    stats.capped_inside = true;
    const std::size_t cap = std::max<std::size_t>(set.options.max_inside_configs, 1);
    int cell = get_cell(nd, Key(nd.portals.size(), kQInf));
    const Cell& c = nd.cells[cell];
    std::vector<std::pair<std::pair<double, double>, int>> rank;
    for (std::size_t i = 0; i < nd.configs.size(); ++i) {
      std::pair<double, double> score{kInf, kInf};
      if (!kmode) {
        score.first = c.fl_value[i];
      } else {
        for (const auto& e : c.front[i]) score = std::min(score, std::make_pair<double, double>(e.cost, e.centers));
      }
      rank.push_back({score, static_cast<int>(i)});
    }
    std::stable_sort(rank.begin(), rank.end());
    std::vector<char> keep(nd.configs.size(), 0);
    std::size_t kept = 0;
    if (nd.empty >= 0) {
      keep[nd.empty] = 1;
      ++kept;
    }
    for (auto& [score, i] : rank) {
      if (kept >= cap) break;
      if (!keep[i]) {
        keep[i] = 1;
        ++kept;
      }
    }
    std::vector<int> remap(nd.configs.size(), -1);
    std::vector<Key> configs;
    for (std::size_t i = 0; i < nd.configs.size(); ++i)
      if (keep[i]) {
        remap[i] = static_cast<int>(configs.size());
        configs.push_back(nd.configs[i]);
      }
    const std::size_t m = nd.kids.size();
    std::vector<std::int32_t> child, cfg;
    for (std::size_t k = 0; k < nd.combos(); ++k) {
      int r = remap[nd.combo_cfg[k]];
      if (r < 0) continue;
      cfg.push_back(r);
      child.insert(child.end(), nd.combo_child.begin() + k * m, nd.combo_child.begin() + (k + 1) * m);
    }
    nd.configs = std::move(configs);
    nd.combo_cfg = std::move(cfg);
    nd.combo_child = std::move(child);
    nd.empty = nd.empty >= 0 ? remap[nd.empty] : -1;
    nd.keymap.clear();
    nd.cells.clear();
  }

  int get_cell(Node& nd, const Key& key) {
    auto it = nd.keymap.find(key);
    if (it != nd.keymap.end()) return it->second;
    int idx = static_cast<int>(nd.cells.size());
    nd.keymap.emplace(key, idx);
    nd.cells.emplace_back();
    nd.cells.back().key = key;
    compute_cell(nd, idx);
    stats.memo_cells++;
    stats.max_outside_keys = std::max(stats.max_outside_keys, nd.keymap.size());
    stats.max_cells_per_node = std::max(stats.max_cells_per_node, nd.keymap.size() * nd.configs.size());
    return idx;
  }

  // ---- client costs -------------------------------------------------------

  double unit_cost(double s) const { return power_cost(s, p); }

  double leaf_closed_fl(PointId u, double s) const {
    double total = 0.0;
    for (int c : clients_at[u]) {
      const Client& cl = inst.clients[c];
      if (!(s < kInf)) return kInf;
      total += static_cast<double>(cl.demand) * unit_cost(s);
    }
    return total;
  }

  std::int32_t cost_index(double x) const {
    int j = set.cost_grid.index_up(x);
    return j;
  }

  bool cost_ok(std::int32_t j) const { return j < set.cost_grid.size(); }

  void push_entry(std::vector<DpEntry>& out, std::int32_t cost, std::int32_t o, std::int32_t centers,
                  std::int32_t prov) const {
    if (!cost_ok(cost) || centers > set.k_cap) return;
    if (use_out && o >= set.outlier_grid.size()) return;
    out.push_back({cost, o, centers, prov});
  }

  void leaf_front(const Node& nd, int cfg, double s, std::vector<DpEntry>& out) const {
    out.clear();
    const PointId u = nd.point;
    if (nd.configs[cfg][0] == 0) {
      int f = fac_at[u];
      push_entry(out, 0, 0, set.forced[f] ? 0 : 1, kLeafOpen);
      return;
    }
    const auto& cls = clients_at[u];
    switch (set.mode) {
      case DpMode::kFacilityLocation:
      case DpMode::kMedian: {
        double v = leaf_closed_fl(u, s);
        if (v < kInf) push_entry(out, cost_index(v), 0, 0, 0);
        break;
      }
      case DpMode::kPrizeCollecting: {
        double v = 0.0;
        for (int c : cls) {
          const Client& cl = inst.clients[c];
          double serve = s < kInf ? unit_cost(s) : kInf;
          v += static_cast<double>(cl.demand) * std::min(serve, cl.penalty);
        }
        if (v < kInf) push_entry(out, cost_index(v), 0, 0, 0);
        break;
      }
      case DpMode::kOutliers: {
        std::int64_t units = 0;
        for (int c : cls) units += inst.clients[c].demand;
        const std::int64_t top = std::min<std::int64_t>(units, set.outlier_grid.cap());
        const double uc = s < kInf ? unit_cost(s) : kInf;
        for (std::int64_t t = 0; t <= top; ++t) {
          double v = units - t == 0 ? 0.0 : static_cast<double>(units - t) * uc;
          if (!(v < kInf)) continue;
          push_entry(out, cost_index(v), set.outlier_grid.index_up(t), 0, static_cast<std::int32_t>(t));
        }
        pareto_prune(out, true);
        break;
      }
      case DpMode::kCenter: {
        if (cls.empty()) {
          push_entry(out, 0, 0, 0, 0);
        } else if (s < kInf) {
          push_entry(out, cost_index(s), 0, 0, 0);
        }
        break;
      }
    }
  }

  double leaf_value_fl(const Node& nd, int cfg, double s) const {
    if (nd.configs[cfg][0] == 0) return inst.facilities[fac_at[nd.point]].opening_cost;
    return leaf_closed_fl(nd.point, s);
  }

  void ensure_moments(Node& nd) {
    if (nd.moments_ready) return;
    nd.moments_ready = true;
    const TreeNode& t = dec.nodes()[nd.id];
    for (PointId u : dec.part(t.part).members)
      for (int c : clients_at[u]) nd.clients.push_back(c);
    const int P = static_cast<int>(nd.portals.size());
    nd.m1.assign(P, 0.0);
    nd.m2.assign(P, 0.0);
    nd.m0 = 0.0;
    for (int c : nd.clients) {
      const Client& cl = inst.clients[c];
      double w = static_cast<double>(cl.demand);
      nd.m0 += w;
      for (int q = 0; q < P; ++q) {
        double d = dist(cl.point, nd.portals[q]);
        nd.m1[q] += w * d;
        nd.m2[q] += w * d * d;
      }
    }
  }

  // All clients of the part reach the outside through one portal q.
  double contract_fl(Node& nd, const std::vector<double>& s) {
    ensure_moments(nd);
    stats.far_contractions++;
    if (nd.m0 == 0) return 0.0;
    double best = kInf;
    for (std::size_t q = 0; q < nd.portals.size(); ++q) {
      double S = s[q];
      if (!(S < kInf)) continue;
      double v = p == 2 ? nd.m2[q] + 2.0 * S * nd.m1[q] + S * S * nd.m0 : nd.m1[q] + S * nd.m0;
      best = std::min(best, v);
    }
    return best;
  }

  void contract_front(Node& nd, const std::vector<double>& s, std::vector<DpEntry>& out) {
    ensure_moments(nd);
    stats.far_contractions++;
    out.clear();
    if (nd.clients.empty()) {
      push_entry(out, 0, 0, 0, 0);
      return;
    }
    if (set.mode == DpMode::kMedian) {
      double v = contract_fl(nd, s);
      stats.far_contractions--;
      if (v < kInf) push_entry(out, cost_index(v), 0, 0, 0);
      return;
    }
    for (std::size_t q = 0; q < nd.portals.size(); ++q) {
      double S = s[q];
      if (!(S < kInf)) continue;
      if (set.mode == DpMode::kPrizeCollecting) {
        double v = 0.0;
        for (int c : nd.clients) {
          const Client& cl = inst.clients[c];
          v += static_cast<double>(cl.demand) * std::min(unit_cost(dist(cl.point, nd.portals[q]) + S), cl.penalty);
        }
        push_entry(out, cost_index(v), 0, 0, 0);
      } else if (set.mode == DpMode::kCenter) {
        double v = 0.0;
        for (int c : nd.clients) v = std::max(v, dist(inst.clients[c].point, nd.portals[q]) + S);
        push_entry(out, cost_index(v), 0, 0, 0);
      } else {
        std::vector<std::pair<double, std::int64_t>> units;
        double total = 0.0;
        std::int64_t count = 0;
        for (int c : nd.clients) {
          const Client& cl = inst.clients[c];
          double uc = unit_cost(dist(cl.point, nd.portals[q]) + S);
          units.emplace_back(uc, cl.demand);
          total += uc * static_cast<double>(cl.demand);
          count += cl.demand;
        }
        std::sort(units.begin(), units.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        const std::int64_t top = std::min<std::int64_t>(count, set.outlier_grid.cap());
        double removed = 0.0;
        std::size_t ui = 0;
        std::int64_t used_in = 0;
        for (std::int64_t t = 0; t <= top; ++t) {
          double v = t == count ? 0.0 : std::max(0.0, total - removed);
          push_entry(out, cost_index(v), set.outlier_grid.index_up(t), 0, static_cast<std::int32_t>(t));
          if (t == top) break;
          while (ui < units.size() && used_in >= units[ui].second) {
            ++ui;
            used_in = 0;
          }
          removed += units[ui].first;
          ++used_in;
        }
      }
    }
    pareto_prune(out, use_out);
  }

  // ---- combination ---------------------------------------------------------

  // Outside distances s_B of a cell, as real values.
  std::vector<double> outside(const Node& nd, const Key& key) const {
    std::vector<double> s(key.size());
    for (std::size_t a = 0; a < key.size(); ++a) s[a] = real(nd, key[a]);
    return s;
  }

  // Via-parent part of every child's outside distances.
  std::vector<double> base_outside(const Node& nd, const std::vector<double>& sB) const {
    std::vector<double> base(nd.total_child_portals, kInf);
    const int P = static_cast<int>(nd.portals.size());
    bool any = std::any_of(sB.begin(), sB.end(), [](double v) { return v < kInf; });
    if (!any) return base;
    for (std::size_t j = 0; j < nd.kids.size(); ++j) {
      const Node& c = nodes[nd.kids[j]];
      for (std::size_t q = 0; q < c.portals.size(); ++q) {
        double best = kInf;
        for (int a = 0; a < P; ++a)
          if (sB[a] < kInf) best = std::min(best, nd.d_cp[j][q * P + a] + sB[a]);
        base[nd.off[j] + q] = best;
      }
    }
    return base;
  }

  void child_outside(const Node& nd, const std::vector<double>& base, const std::int32_t* ch, int j,
                     std::vector<double>& s) const {
    const Node& c = nodes[nd.kids[j]];
    const int Pj = static_cast<int>(c.portals.size());
    const int m = static_cast<int>(nd.kids.size());
    std::vector<double> raw(Pj);
    for (int q = 0; q < Pj; ++q) {
      double v = base[nd.off[j] + q];
      for (int t = 0; t < m; ++t)
        if (t != j) v = std::min(v, nd.sib[t][ch[t]][nd.off[j] + q]);
      raw[q] = v;
    }
    s.assign(Pj, kInf);
    for (int q = 0; q < Pj; ++q) {
      double v = raw[q];
      for (int r = 0; r < Pj; ++r)
        if (raw[r] < kInf) v = std::min(v, nd.d_self[j][q * Pj + r] + raw[r]);
      s[q] = v;
    }
  }

  enum class SrcKind { kLeaf, kFar, kMemo };
  struct Source {
    SrcKind kind;
    int cell = -1;
  };

  Source resolve(const Node& parent, int j, int cfg, const std::vector<double>& s) {
    Node& c = nodes[parent.kids[j]];
    if (c.leaf) return {SrcKind::kLeaf};
    if (parent.ambient) return {SrcKind::kMemo, get_cell(c, Key(c.portals.size(), kQInf))};
    double lo = *std::min_element(s.begin(), s.end());
    if (set.options.far_regime && lo > c.D / set.options.epsilon) {
      if (cfg == c.empty) return {SrcKind::kFar};
      return {SrcKind::kMemo, get_cell(c, Key(c.portals.size(), kQInf))};
    }
    Key key(s.size());
    for (std::size_t q = 0; q < s.size(); ++q) key[q] = quantize(c, s[q], true);
    const std::size_t cap = set.options.max_outside_keys;
    if (cap > 0 && c.keymap.size() >= cap && !c.keymap.count(key)) {
      // Over the key cap: an empty part sends its clients through one portal
      // with the exact distances, any other part ignores the outside.
      stats.capped_keys = true;
      if (cfg == c.empty) return {SrcKind::kFar};
      return {SrcKind::kMemo, get_cell(c, Key(c.portals.size(), kQInf))};
    }
    return {SrcKind::kMemo, get_cell(c, key)};
  }

  double child_value_fl(const Node& parent, int j, int cfg, const std::vector<double>& s) {
    Node& c = nodes[parent.kids[j]];
    Source src = resolve(parent, j, cfg, s);
    if (src.kind == SrcKind::kLeaf) return leaf_value_fl(c, cfg, parent.ambient ? kInf : s[0]);
    if (src.kind == SrcKind::kFar) return contract_fl(c, s);
    return c.cells[src.cell].fl_value[cfg];
  }

  // Front of child j under configuration cfg; buf holds inline fronts.
  const std::vector<DpEntry>& child_front(const Node& parent, int j, int cfg, const std::vector<double>& s,
                                          std::vector<DpEntry>& buf) {
    Node& c = nodes[parent.kids[j]];
    Source src = resolve(parent, j, cfg, s);
    if (src.kind == SrcKind::kLeaf) {
      leaf_front(c, cfg, parent.ambient ? kInf : s[0], buf);
      return buf;
    }
    if (src.kind == SrcKind::kFar) {
      contract_front(c, s, buf);
      return buf;
    }
    return c.cells[src.cell].front[cfg];
  }

  // Ambient parents: the child's fronts over all its configurations, with
  // (configuration, entry) of each option.
  void union_front(const Node& parent, int j, std::vector<DpEntry>& out, std::vector<std::pair<int, int>>& ref) {
    Node& c = nodes[parent.kids[j]];
    out.clear();
    ref.clear();
    std::vector<DpEntry> buf;
    std::vector<double> inf(c.portals.size(), kInf);
    for (std::size_t cfg = 0; cfg < c.configs.size(); ++cfg) {
      const auto& f = child_front(parent, j, static_cast<int>(cfg), inf, buf);
      for (std::size_t e = 0; e < f.size(); ++e) {
        DpEntry x = f[e];
        x.prov = static_cast<std::int32_t>(ref.size());
        ref.emplace_back(static_cast<int>(cfg), static_cast<int>(e));
        out.push_back(x);
      }
    }
    pareto_prune(out, use_out);
  }

  bool combine(const DpEntry& a, const DpEntry& b, DpEntry& out) const {
    std::int32_t cost;
    if (set.mode == DpMode::kCenter)
      cost = std::max(a.cost, b.cost);
    else
      cost = set.cost_grid.add(a.cost, b.cost);
    if (!cost_ok(cost)) return false;
    std::int32_t o = 0;
    if (use_out) {
      o = set.outlier_grid.add(a.outliers, b.outliers);
      if (o >= set.outlier_grid.size()) return false;
    }
    std::int32_t centers = a.centers + b.centers;
    if (centers > set.k_cap) return false;
    out = {cost, o, centers, -1};
    return true;
  }

  void compute_cell(Node& nd, int idx) {
    const Key key = nd.cells[idx].key;
    const int m = static_cast<int>(nd.kids.size());
    const std::size_t nc = nd.configs.size();
    std::vector<double> sB = outside(nd, key);
    std::vector<double> base = base_outside(nd, sB);

    if (nd.leaf) {
      // Only the root can be a leaf here.
      Cell& cell = nd.cells[idx];
      if (!kmode) {
        cell.fl_value.assign(nc, kInf);
        cell.fl_combo.assign(nc, -1);
        for (std::size_t c = 0; c < nc; ++c) cell.fl_value[c] = leaf_value_fl(nd, static_cast<int>(c), sB[0]);
      } else {
        cell.front.assign(nc, {});
        for (std::size_t c = 0; c < nc; ++c) leaf_front(nd, static_cast<int>(c), sB[0], cell.front[c]);
      }
      return;
    }

    std::vector<std::vector<double>> s(m);
    if (!kmode) {
      std::vector<double> value(nc, kInf);
      std::vector<std::int32_t> best(nc, -1);
      for (std::size_t k = 0; k < nd.combos(); ++k) {
        const std::int32_t* ch = nd.combo_child.data() + k * m;
        double total = 0.0;
        for (int j = 0; j < m && total < kInf; ++j) {
          if (nd.ambient) {
            double b = kInf;
            std::vector<double> inf(nodes[nd.kids[j]].portals.size(), kInf);
            for (std::size_t c = 0; c < nodes[nd.kids[j]].configs.size(); ++c)
              b = std::min(b, child_value_fl(nd, j, static_cast<int>(c), inf));
            total += b;
            continue;
          }
          child_outside(nd, base, ch, j, s[j]);
          total += child_value_fl(nd, j, ch[j], s[j]);
        }
        int cfg = nd.combo_cfg[k];
        if (total < value[cfg]) {
          value[cfg] = total;
          best[cfg] = static_cast<std::int32_t>(k);
        }
      }
      Cell& cell = nd.cells[idx];
      cell.fl_value = std::move(value);
      cell.fl_combo = std::move(best);
      stats.table_entries += nc;
      return;
    }

    std::vector<std::vector<DpEntry>> front(nc);
    std::vector<std::vector<std::int32_t>> trail(nc);  // per candidate: combo then choices
    std::vector<std::vector<Partial>> stage(m + 1);
    std::vector<DpEntry> buf;
    std::vector<std::pair<int, int>> ref;
    for (std::size_t k = 0; k < nd.combos(); ++k) {
      const std::int32_t* ch = nd.combo_child.data() + k * m;
      stage[0].assign(1, Partial{0, 0, 0, -1, -1});
      bool dead = false;
      for (int j = 0; j < m && !dead; ++j) {
        const std::vector<DpEntry>* f;
        if (nd.ambient) {
          union_front(nd, j, buf, ref);
          f = &buf;
        } else {
          child_outside(nd, base, ch, j, s[j]);
          f = &child_front(nd, j, ch[j], s[j], buf);
        }
        auto& next = stage[j + 1];
        next.clear();
        for (std::size_t a = 0; a < stage[j].size(); ++a) {
          const Partial& pa = stage[j][a];
          DpEntry ea{pa.cost, pa.outliers, pa.centers, -1};
          for (std::size_t e = 0; e < f->size(); ++e) {
            DpEntry out;
            if (!combine(ea, (*f)[e], out)) continue;
            next.push_back({out.cost, out.outliers, out.centers, static_cast<std::int32_t>(a),
                            static_cast<std::int32_t>(e)});
          }
        }
        pareto_prune(next, use_out);
        if (next.empty()) dead = true;
      }
      if (dead) continue;
      int cfg = nd.combo_cfg[k];
      for (std::size_t i = 0; i < stage[m].size(); ++i) {
        const Partial& fin = stage[m][i];
        DpEntry e{fin.cost, fin.outliers, fin.centers, static_cast<std::int32_t>(trail[cfg].size())};
        std::vector<std::int32_t> choices(m);
        std::int32_t at = static_cast<std::int32_t>(i);
        for (int j = m; j >= 1; --j) {
          choices[j - 1] = stage[j][at].choice;
          at = stage[j][at].back;
        }
        trail[cfg].push_back(static_cast<std::int32_t>(k));
        trail[cfg].insert(trail[cfg].end(), choices.begin(), choices.end());
        front[cfg].push_back(e);
      }
      pareto_prune(front[cfg], use_out);
    }
    // Compact provenance to the surviving entries.
    Cell& cell = nd.cells[idx];
    cell.front.assign(nc, {});
    for (std::size_t c = 0; c < nc; ++c) {
      for (DpEntry e : front[c]) {
        std::int32_t at = static_cast<std::int32_t>(cell.pool.size());
        cell.pool.insert(cell.pool.end(), trail[c].begin() + e.prov, trail[c].begin() + e.prov + m + 1);
        e.prov = at;
        cell.front[c].push_back(e);
      }
      stats.table_entries += cell.front[c].size();
    }
  }

  // ---- reconstruction -------------------------------------------------------

  void open_leaf(const Node& c, std::vector<int>& facs) const { facs.push_back(fac_at[c.point]); }

  void recon_fl(Node& nd, int cell_idx, int cfg, std::vector<int>& facs) {
    if (nd.leaf) {
      if (nd.configs[cfg][0] == 0) open_leaf(nd, facs);
      return;
    }
    const Cell& cell = nd.cells[cell_idx];
    const int m = static_cast<int>(nd.kids.size());
    std::int32_t k = cell.fl_combo[cfg];
    if (k < 0) throw DomainError("reconstruction of an infeasible cell");
    const std::int32_t* ch = nd.combo_child.data() + k * m;
    std::vector<double> sB = outside(nd, cell.key);
    std::vector<double> base = base_outside(nd, sB);
    std::vector<double> s;
    for (int j = 0; j < m; ++j) {
      Node& c = nodes[nd.kids[j]];
      int cj = ch[j];
      if (nd.ambient) {
        std::vector<double> inf(c.portals.size(), kInf);
        double b = kInf;
        for (std::size_t x = 0; x < c.configs.size(); ++x) {
          double v = child_value_fl(nd, j, static_cast<int>(x), inf);
          if (v < b) {
            b = v;
            cj = static_cast<int>(x);
          }
        }
        s = inf;
      } else {
        child_outside(nd, base, ch, j, s);
      }
      Source src = resolve(nd, j, cj, s);
      if (src.kind == SrcKind::kLeaf) {
        if (c.configs[cj][0] == 0) open_leaf(c, facs);
      } else if (src.kind == SrcKind::kMemo) {
        recon_fl(c, src.cell, cj, facs);
      }
    }
  }

  void recon_k(Node& nd, int cell_idx, int cfg, int entry, std::vector<int>& facs, std::int64_t& dropped) {
    const Cell& cell = nd.cells[cell_idx];
    const DpEntry e = cell.front[cfg][entry];
    if (nd.leaf) {
      if (e.prov == kLeafOpen)
        open_leaf(nd, facs);
      else if (use_out)
        dropped += e.prov;
      return;
    }
    const int m = static_cast<int>(nd.kids.size());
    const std::int32_t* pool = cell.pool.data() + e.prov;
    const std::int32_t k = pool[0];
    std::vector<std::int32_t> choice(pool + 1, pool + 1 + m);
    const std::int32_t* ch = nd.combo_child.data() + k * m;
    std::vector<double> sB = outside(nd, cell.key);
    std::vector<double> base = base_outside(nd, sB);
    std::vector<double> s;
    std::vector<DpEntry> buf;
    std::vector<std::pair<int, int>> ref;
    for (int j = 0; j < m; ++j) {
      Node& c = nodes[nd.kids[j]];
      int cj = ch[j];
      int ej = choice[j];
      if (nd.ambient) {
        union_front(nd, j, buf, ref);
        auto [rc, re] = ref[buf[ej].prov];
        cj = rc;
        ej = re;
        s.assign(c.portals.size(), kInf);
      } else {
        child_outside(nd, base, ch, j, s);
      }
      Source src = resolve(nd, j, cj, s);
      if (src.kind == SrcKind::kLeaf) {
        leaf_front(c, cj, nd.ambient ? kInf : s[0], buf);
        const DpEntry& x = buf[ej];
        if (x.prov == kLeafOpen)
          open_leaf(c, facs);
        else if (use_out)
          dropped += x.prov;
      } else if (src.kind == SrcKind::kFar) {
        contract_front(c, s, buf);
        if (use_out) dropped += buf[ej].prov;
      } else {
        recon_k(c, src.cell, cj, ej, facs, dropped);
      }
    }
  }

  void ensure_root() {
    if (root_done) return;
    root_done = true;
    Node& r = nodes[0];
    int cell = get_cell(r, Key(r.portals.size(), kQInf));
    for (std::size_t c = 0; c < r.configs.size(); ++c) {
      const auto& f = r.cells[cell].front[c];
      for (std::size_t e = 0; e < f.size(); ++e) {
        DpEntry x = f[e];
        x.prov = static_cast<std::int32_t>(root_ref.size());
        root_ref.emplace_back(static_cast<int>(c), static_cast<int>(e));
        root.push_back(x);
      }
    }
    pareto_prune(root, use_out);
  }
};

PortalDp::PortalDp(const ClusteringInstance& inst, const Decomposition& decomp, Setup setup)
    : impl_(std::make_unique<Impl>(inst, decomp, std::move(setup))) {}

PortalDp::~PortalDp() = default;

double PortalDp::solve_fl(std::vector<int>* facilities) {
  if (impl_->kmode) throw ParameterError("solve_fl needs the facility location mode");
  auto& r = impl_->nodes[0];
  int cell = impl_->get_cell(r, Key(r.portals.size(), kQInf));
  const auto& v = r.cells[cell].fl_value;
  int best = -1;
  for (std::size_t c = 0; c < v.size(); ++c)
    if (best < 0 || v[c] < v[best]) best = static_cast<int>(c);
  if (best < 0 || !(v[best] < kInf)) throw InfeasibleError("no feasible facility location configuration");
  if (facilities) {
    facilities->clear();
    impl_->recon_fl(r, cell, best, *facilities);
    std::sort(facilities->begin(), facilities->end());
  }
  return v[best];
}

const std::vector<DpEntry>& PortalDp::root_front() {
  impl_->ensure_root();
  return impl_->root;
}

int PortalDp::best_index(int centers) {
  int best = -1;
  for (const auto& e : root_front())
    if (e.centers <= centers && (best < 0 || e.cost < best)) best = e.cost;
  return best;
}

std::vector<int> PortalDp::root_table() {
  const auto& front = root_front();
  std::vector<int> t(impl_->set.cost_grid.size(), kUnreachable);
  for (const auto& e : front) t[e.cost] = std::min(t[e.cost], static_cast<int>(e.centers));
  for (std::size_t j = 1; j < t.size(); ++j) t[j] = std::min(t[j], t[j - 1]);
  return t;
}

int PortalDp::entry_for_index(int j) const {
  int best = -1;
  const auto& root = impl_->root;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const auto& e = root[i];
    if (e.cost > j) continue;
    if (best < 0 || e.centers < root[best].centers ||
        (e.centers == root[best].centers && e.cost < root[best].cost))
      best = static_cast<int>(i);
  }
  return best;
}

std::vector<int> PortalDp::reconstruct(int which, std::int64_t* dropped) {
  impl_->ensure_root();
  auto& r = impl_->nodes[0];
  int cell = impl_->get_cell(r, Key(r.portals.size(), kQInf));
  auto [cfg, entry] = impl_->root_ref[impl_->root[which].prov];
  std::vector<int> facs;
  std::int64_t d = 0;
  impl_->recon_k(r, cell, cfg, entry, facs, d);
  std::sort(facs.begin(), facs.end());
  facs.erase(std::unique(facs.begin(), facs.end()), facs.end());
  if (dropped) *dropped = d;
  return facs;
}

const DpStats& PortalDp::stats() const { return impl_->stats; }

nlohmann::json PortalDp::dump() const {
  nlohmann::json out = nlohmann::json::array();
  auto enc = [](const Key& k) {
    nlohmann::json a = nlohmann::json::array();
    for (auto v : k) a.push_back(v == kQInf ? -1 : v);
    return a;
  };
  for (const auto& nd : impl_->nodes) {
    nlohmann::json n;
    n["node"] = nd.id;
    n["portals"] = nd.portals;
    n["step"] = nd.step;
    nlohmann::json cfgs = nlohmann::json::array();
    for (const auto& c : nd.configs) cfgs.push_back(enc(c));
    n["configs"] = cfgs;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : nd.cells) {
      nlohmann::json c;
      c["key"] = enc(cell.key);
      if (!impl_->kmode) {
        nlohmann::json vals = nlohmann::json::array();
        for (double v : cell.fl_value) vals.push_back(v < kInf ? nlohmann::json(v) : nlohmann::json(nullptr));
        c["values"] = vals;
      } else {
        nlohmann::json fr = nlohmann::json::array();
        for (const auto& f : cell.front) {
          nlohmann::json list = nlohmann::json::array();
          for (const auto& e : f) list.push_back({e.cost, e.outliers, e.centers});
          fr.push_back(list);
        }
        c["fronts"] = fr;
      }
      cells.push_back(c);
    }
    n["cells"] = cells;
    out.push_back(n);
  }
  return out;
}

int PortalDp::monotonicity_violations() const {
  if (!impl_->kmode) return 0;
  const int J = impl_->set.cost_grid.size();
  const int X = impl_->use_out ? impl_->set.outlier_grid.size() : 1;
  int bad = 0;
  for (const auto& nd : impl_->nodes)
    for (const auto& cell : nd.cells)
      for (const auto& f : cell.front) {
        // table[j][x] = fewest centers with cost index <= j and outlier index <= x
        std::vector<int> table(static_cast<std::size_t>(J) * X, kUnreachable);
        for (const auto& e : f) table[static_cast<std::size_t>(e.cost) * X + e.outliers] = std::min<int>(
                                    table[static_cast<std::size_t>(e.cost) * X + e.outliers], e.centers);
        for (int j = 0; j < J; ++j)
          for (int x = 0; x < X; ++x) {
            int& v = table[static_cast<std::size_t>(j) * X + x];
            if (j > 0) v = std::min(v, table[static_cast<std::size_t>(j - 1) * X + x]);
            if (x > 0) v = std::min(v, table[static_cast<std::size_t>(j) * X + x - 1]);
          }
        for (int j = 0; j < J; ++j)
          for (int x = 0; x < X; ++x) {
            int v = table[static_cast<std::size_t>(j) * X + x];
            if (j + 1 < J && table[static_cast<std::size_t>(j + 1) * X + x] > v) ++bad;
            if (x + 1 < X && table[static_cast<std::size_t>(j) * X + x + 1] > v) ++bad;
          }
        // No stored entry may be dominated by another.
        for (std::size_t a = 0; a < f.size(); ++a)
          for (std::size_t b = 0; b < f.size(); ++b)
            if (a != b && f[b].cost <= f[a].cost && f[b].outliers <= f[a].outliers &&
                f[b].centers <= f[a].centers &&
                (f[b].cost < f[a].cost || f[b].outliers < f[a].outliers || f[b].centers < f[a].centers))
              ++bad;
      }
  return bad;
}

Budget compute_budget(const ClusteringInstance& inst, const Solution& sol, const Decomposition& decomp,
                      double epsilon) {
  Budget b;
  b.cut_levels.assign(inst.clients.size(), kNoCut);
  for (std::size_t c = 0; c < inst.clients.size(); ++c) {
    const Client& cl = inst.clients[c];
    int f = c < sol.assignment.size() ? sol.assignment[c] : kNotServed;
    if (cl.demand == 0 || f == kNotServed) continue;
    PointId fp = inst.facilities[f].point;
    if (fp == cl.point) continue;
    int lvl = decomp.cut_level(cl.point, fp);
    b.cut_levels[c] = lvl;
    std::int64_t served = cl.demand - (c < sol.dropped.size() ? sol.dropped[c] : 0);
    b.total += static_cast<double>(served) * epsilon * decomp.scale(lvl);
  }
  return b;
}

CostGrid make_cost_grid(double l_cost, double epsilon, int n, double floor_cost) {
  double base = l_cost > 0 ? l_cost : floor_cost;
  n = std::max(n, 2);
  return CostGrid(epsilon * base / (4.0 * n), (1.0 + epsilon) * base, 1.0 + epsilon / std::log2(n));
}

CostGrid make_kcenter_grid(double gamma, double epsilon, int n) {
  n = std::max(n, 2);
  return CostGrid(epsilon * gamma / 8.0, (1.0 + epsilon) * gamma, 1.0 + epsilon / std::log2(n));
}

namespace {

void check_epsilon(double eps) {
  if (!(eps > 0 && eps < 1)) throw ParameterError("epsilon must lie in (0, 1)");
}

DpResult finish(const ModifiedInstance& mod, std::vector<int> facs, std::int64_t dropped) {
  DpResult r;
  r.facilities = std::move(facs);
  r.dropped = dropped;
  r.solution = evaluate(mod.modified, r.facilities,
                        mod.modified.objective == Objective::kOutliers ? dropped : -1);
  return r;
}

DpResult solve_k_modes(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options,
                       DpMode mode, int k, std::int64_t z, double l_cost, double gamma) {
  check_epsilon(options.epsilon);
  if (k < 1) throw ParameterError("k must be at least 1");
  const ClusteringInstance& inst = mod.modified;
  const int n = decomp.space().size();
  PortalDp::Setup setup;
  setup.mode = mode;
  setup.options = options;
  setup.k_cap = k;
  setup.forced.assign(inst.facilities.size(), 0);
  for (int f : mod.forced_centers) setup.forced[f] = 1;
  if (mode == DpMode::kOutliers) {
    auto z_allow = static_cast<std::int64_t>(std::floor((1.0 + options.epsilon) * static_cast<double>(z) + 1e-9));
    double delta = options.epsilon / std::max(1.0, std::log2(std::max(2.0, n / options.epsilon)));
    setup.outlier_grid = OutlierGrid(delta, z_allow);
  }
  if (mode == DpMode::kCenter) {
    BadlyCutParams params{options.epsilon, 1, decomp.space().doubling_dimension()};
    double g = gamma > 0 ? gamma : decomp.unit();
    setup.ambient_level = std::log2(2.0 * g / decomp.unit()) + params.tau();
  }
  const double floor_cost = power_cost(decomp.unit(), inst.p);
  for (int retry = 0; retry < 8; ++retry) {
    double scale = std::ldexp(1.0, retry);
    if (mode == DpMode::kCenter) {
      double g = gamma > 0 ? gamma : decomp.unit();
      CostGrid base = make_kcenter_grid(g, options.epsilon, n);
      setup.cost_grid = CostGrid(base.lo(), base.hi() * scale, base.ratio());
    } else {
      CostGrid base = make_cost_grid(l_cost, options.epsilon, n, floor_cost);
      setup.cost_grid = CostGrid(base.lo(), base.hi() * scale, base.ratio());
    }
    PortalDp dp(inst, decomp, setup);
    int idx = dp.best_index(k);
    if (idx < 0) continue;
    int which = dp.entry_for_index(idx);
    std::int64_t dropped = 0;
    auto facs = dp.reconstruct(which, &dropped);
    DpResult r = finish(mod, std::move(facs), dropped);
    r.cost_index = idx;
    r.declared_cost = setup.cost_grid.value(idx);
    r.centers = dp.root_front()[which].centers;
    r.stats = dp.stats();
    r.stats.grid_retries = retry;
    if (options.dump_tables) r.tables = dp.dump();
    return r;
  }
  throw InfeasibleError("no cost index reachable with the given number of centers");
}

}  // namespace

DpResult solve_fl_dp(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options) {
  check_epsilon(options.epsilon);
  PortalDp::Setup setup;
  setup.mode = DpMode::kFacilityLocation;
  setup.options = options;
  PortalDp dp(mod.modified, decomp, setup);
  std::vector<int> facs;
  double v = dp.solve_fl(&facs);
  DpResult r = finish(mod, std::move(facs), 0);
  r.declared_cost = v;
  r.centers = static_cast<int>(r.facilities.size());
  r.stats = dp.stats();
  if (options.dump_tables) r.tables = dp.dump();
  return r;
}

DpResult solve_k_dp(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options, int k,
                    double l_cost) {
  return solve_k_modes(mod, decomp, options, DpMode::kMedian, k, 0, l_cost, 0.0);
}

DpResult solve_pc_dp(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options, int k,
                     double l_cost) {
  return solve_k_modes(mod, decomp, options, DpMode::kPrizeCollecting, k, 0, l_cost, 0.0);
}

DpResult solve_outliers_dp(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options,
                           int k, std::int64_t z, double l_cost) {
  if (z < 0) throw ParameterError("outlier budget must be nonnegative");
  return solve_k_modes(mod, decomp, options, DpMode::kOutliers, k, z, l_cost, 0.0);
}

DpResult solve_kcenter_dp(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options,
                          int k, double gamma) {
  return solve_k_modes(mod, decomp, options, DpMode::kCenter, k, 0, 0.0, gamma);
}

}  // namespace dclust
