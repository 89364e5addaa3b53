#pragma once

// Structural checks shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dclust/split_tree.hpp"

namespace testing {

using namespace dclust;

struct DecompositionReport {
  int diameter = 0;       // parts of level i with diameter > 2^{i+1} * unit
  int refinement = 0;     // broken partition / parent-child links
  int concise = 0;        // |P_B| > (1/rho)^d
  int precise = 0;        // member without a portal within rho * 2^{i+1} * unit
  int nested = 0;         // parent portal inside B missing from P_B
  int node_count = 0;     // compressed tree with more than 2n nodes
  int max_portals = 0;
  double concise_bound = 0.0;

  bool ok() const { return diameter + refinement + concise + precise + nested + node_count == 0; }
  std::string summary() const {
    return "diameter=" + std::to_string(diameter) + " refinement=" + std::to_string(refinement) +
           " concise=" + std::to_string(concise) + " precise=" + std::to_string(precise) +
           " nested=" + std::to_string(nested) + " nodes=" + std::to_string(node_count);
  }
};

inline DecompositionReport check_decomposition(const Decomposition& dec) {
  DecompositionReport r;
  const MetricSpace& sp = dec.space();
  const int n = sp.size();
  const int H = dec.height();
  const int d = sp.doubling_dimension();
  r.concise_bound = std::pow(1.0 / dec.rho(), d);

  for (int i = 0; i <= H; ++i) {
    std::vector<int> seen(n, 0);
    for (int id : dec.level_parts(i)) {
      const Part& p = dec.part(id);
      if (p.level != i) ++r.refinement;
      for (PointId u : p.members) {
        ++seen[u];
        if (dec.part_at(i, u) != id) ++r.refinement;
      }
    }
    for (int u = 0; u < n; ++u)
      if (seen[u] != 1) ++r.refinement;
  }
  if (dec.level_parts(H).size() != 1) ++r.refinement;
  for (int id : dec.level_parts(0))
    if (dec.part(id).members.size() != 1) ++r.refinement;

  for (const Part& p : dec.parts()) {
    const double lim = dec.scale(p.level + 1);
    double diam = 0.0;
    for (std::size_t a = 0; a < p.members.size(); ++a)
      for (std::size_t b = a + 1; b < p.members.size(); ++b)
        diam = std::max(diam, sp.dist(p.members[a], p.members[b]));
    if (diam > lim) ++r.diameter;

    if (p.level > 0) {
      std::vector<PointId> un;
      for (int c : p.children) {
        const Part& ch = dec.part(c);
        if (ch.parent != p.id || ch.level != p.level - 1) ++r.refinement;
        un.insert(un.end(), ch.members.begin(), ch.members.end());
      }
      std::sort(un.begin(), un.end());
      if (un != p.members) ++r.refinement;
    }

    r.max_portals = std::max<int>(r.max_portals, static_cast<int>(p.portals.size()));
    if (static_cast<double>(p.portals.size()) > r.concise_bound) ++r.concise;
    const double reach = dec.rho() * dec.scale(p.level + 1);
    for (PointId q : p.portals)
      if (!std::binary_search(p.members.begin(), p.members.end(), q)) ++r.precise;
    for (PointId u : p.members) {
      bool ok = false;
      for (PointId q : p.portals)
        if (sp.dist(u, q) <= reach) {
          ok = true;
          break;
        }
      if (!ok) ++r.precise;
    }
    if (p.parent >= 0)
      for (PointId q : dec.part(p.parent).portals)
        if (std::binary_search(p.members.begin(), p.members.end(), q) &&
            std::find(p.portals.begin(), p.portals.end(), q) == p.portals.end())
          ++r.nested;
  }
  if (static_cast<int>(dec.nodes().size()) > 2 * n) ++r.node_count;
  return r;
}

struct PathReport {
  long pairs = 0;
  long too_long = 0;
  long invalid_hops = 0;
  long direct_mismatch = 0;
  double worst_slack = 0.0;  // min over pairs of bound - length
};

// Every pair u < v: length bound plus the portal condition at each level a hop crosses.
inline PathReport check_portal_paths(const Decomposition& dec) {
  PathReport r;
  r.worst_slack = 1e300;
  const MetricSpace& sp = dec.space();
  const int n = sp.size();
  for (PointId u = 0; u < n; ++u)
    for (PointId v = u + 1; v < n; ++v) {
      if (sp.dist(u, v) == 0.0) continue;
      PortalPath path = dec.portal_respecting_path(u, v);
      ++r.pairs;
      double len = 0.0;
      for (std::size_t h = 1; h < path.points.size(); ++h) {
        PointId a = path.points[h - 1], b = path.points[h];
        len += sp.dist(a, b);
        for (int j = 0; j < dec.height(); ++j)
          if (dec.part_at(j, a) != dec.part_at(j, b) && !(dec.is_portal(j, a) && dec.is_portal(j, b)))
            ++r.invalid_hops;
      }
      if (path.points.front() != u || path.points.back() != v) ++r.invalid_hops;
      const double bound = sp.dist(u, v) + 16.0 * dec.rho() * dec.scale(path.cut_level);
      if (len > bound) ++r.too_long;
      r.worst_slack = std::min(r.worst_slack, bound - len);
      if (dec.is_portal(path.cut_level, u) && dec.is_portal(path.cut_level, v) && len != sp.dist(u, v))
        ++r.direct_mismatch;
    }
  return r;
}

}  // namespace testing
