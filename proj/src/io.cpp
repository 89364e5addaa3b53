#include "dclust/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dclust/errors.hpp"
#include "dclust/rng.hpp"

namespace dclust {

namespace {

constexpr const char* kSchema = "dclust.instance/1";

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_row(const std::string& line, int lineno) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    std::string cell = trim(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (cell.empty()) throw ParseError("empty field", lineno);
    double v = 0.0;
    auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || end != cell.data() + cell.size()) throw ParseError("not a number: '" + cell + "'", lineno);
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Data lines with their 1-based line numbers.
std::vector<std::pair<int, std::vector<double>>> parse_csv(const std::string& text) {
  std::vector<std::pair<int, std::vector<double>>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    rows.emplace_back(lineno, parse_row(t, lineno));
  }
  return rows;
}

ClusteringInstance with_default_roles(std::shared_ptr<const MetricSpace> metric, const IngestOptions& opt) {
  ClusteringInstance inst = ClusteringInstance::all_points(std::move(metric), opt.objective, opt.k, opt.opening_cost);
  inst.z = opt.z;
  return inst;
}

double number_or_inf(const nlohmann::json& v) { return v.is_null() ? kInf : v.get<double>(); }

}  // namespace

InputFormat input_format_from_string(const std::string& s) {
  if (s == "points-csv") return InputFormat::kPointsCsv;
  if (s == "distmatrix-csv") return InputFormat::kDistMatrixCsv;
  if (s == "instance-json") return InputFormat::kInstanceJson;
  throw ParameterError("unknown input format '" + s + "'");
}

ClusteringInstance ingest_text(const std::string& text, const IngestOptions& opt) {
  ClusteringInstance inst;
  switch (opt.format) {
    case InputFormat::kPointsCsv: {
      auto rows = parse_csv(text);
      if (rows.empty()) throw ParseError("no points", 0);
      const std::size_t dim = rows.front().second.size();
      std::vector<double> coords;
      for (auto& [lineno, row] : rows) {
        if (row.size() != dim) throw ParseError("expected " + std::to_string(dim) + " coordinates", lineno);
        for (double x : row)
          if (!std::isfinite(x)) throw ParseError("non-finite coordinate", lineno);
        coords.insert(coords.end(), row.begin(), row.end());
      }
      auto metric = std::make_shared<MetricSpace>(
          MetricSpace::euclidean(std::move(coords), static_cast<int>(dim), opt.doubling_dimension));
      inst = with_default_roles(metric, opt);
      break;
    }
    case InputFormat::kDistMatrixCsv: {
      auto rows = parse_csv(text);
      const int n = static_cast<int>(rows.size());
      if (n == 0) throw ParseError("empty matrix", 0);
      std::vector<double> full(static_cast<std::size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i) {
        auto& [lineno, row] = rows[i];
        if (static_cast<int>(row.size()) != i + 1)
          throw ParseError("row " + std::to_string(i) + " must hold " + std::to_string(i + 1) + " values", lineno);
        if (row[i] != 0.0) throw ParseError("nonzero diagonal entry", lineno);
        for (int j = 0; j < i; ++j) {
          if (!(row[j] >= 0) || !std::isfinite(row[j])) throw ParseError("distance must be finite and nonnegative", lineno);
          full[static_cast<std::size_t>(i) * n + j] = row[j];
          full[static_cast<std::size_t>(j) * n + i] = row[j];
        }
      }
      auto metric = std::make_shared<MetricSpace>(MetricSpace::from_matrix(std::move(full), n, opt.doubling_dimension));
      PointId bad[3];
      if (!metric->check_triangle_inequality(opt.triangle_tolerance, bad))
        throw ValidationError("triangle inequality violated at (" + std::to_string(bad[0]) + ", " +
                              std::to_string(bad[1]) + ", " + std::to_string(bad[2]) + ")");
      inst = with_default_roles(metric, opt);
      break;
    }
    case InputFormat::kInstanceJson: {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        // byte offset -> line
        int line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
          if (text[i] == '\n') ++line;
        throw ParseError(e.what(), line);
      }
      inst = instance_from_json(doc);
      break;
    }
  }
  inst.validate();
  return inst;
}

ClusteringInstance ingest(const std::string& path, const IngestOptions& opt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_text(buf.str(), opt);
}

nlohmann::json export_instance(const ClusteringInstance& inst) {
  const MetricSpace& sp = inst.space();
  nlohmann::json doc;
  doc["schema"] = kSchema;
  doc["objective"] = to_string(inst.objective);
  doc["p"] = inst.p;
  doc["k"] = inst.k;
  doc["z"] = inst.z;
  doc["doubling_dimension"] = sp.doubling_dimension();
  nlohmann::json metric;
  if (sp.has_coordinates()) {
    metric["type"] = "euclidean";
    metric["dim"] = sp.coordinate_dim();
    nlohmann::json pts = nlohmann::json::array();
    for (PointId u = 0; u < sp.size(); ++u) {
      auto x = sp.point(u);
      pts.push_back(std::vector<double>(x.begin(), x.end()));
    }
    metric["points"] = pts;
  } else {
    metric["type"] = "matrix";
    metric["n"] = sp.size();
    nlohmann::json rows = nlohmann::json::array();
    for (PointId u = 0; u < sp.size(); ++u) {
      std::vector<double> row(sp.size());
      for (PointId v = 0; v < sp.size(); ++v) row[v] = sp.dist(u, v);
      rows.push_back(row);
    }
    metric["distances"] = rows;
  }
  doc["metric"] = metric;
  nlohmann::json cls = nlohmann::json::array();
  for (const auto& c : inst.clients) {
    nlohmann::json e{{"point", c.point}, {"demand", c.demand}};
    e["penalty"] = std::isfinite(c.penalty) ? nlohmann::json(c.penalty) : nlohmann::json(nullptr);
    cls.push_back(e);
  }
  doc["clients"] = cls;
  nlohmann::json fac = nlohmann::json::array();
  for (const auto& f : inst.facilities) fac.push_back({{"point", f.point}, {"opening_cost", f.opening_cost}});
  doc["facilities"] = fac;
  return doc;
}

ClusteringInstance instance_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("schema", std::string()) != kSchema) throw ParseError("expected schema " + std::string(kSchema), 0);
    ClusteringInstance inst;
    inst.objective = objective_from_string(doc.at("objective").get<std::string>());
    inst.p = doc.value("p", default_exponent(inst.objective));
    inst.k = doc.value("k", 0);
    inst.z = doc.value("z", std::int64_t{0});
    const int d = doc.value("doubling_dimension", 2);
    const auto& m = doc.at("metric");
    const std::string type = m.at("type").get<std::string>();
    if (type == "euclidean") {
      const int dim = m.at("dim").get<int>();
      std::vector<double> coords;
      for (const auto& p : m.at("points")) {
        auto row = p.get<std::vector<double>>();
        if (static_cast<int>(row.size()) != dim) throw ParseError("point with wrong dimension", 0);
        coords.insert(coords.end(), row.begin(), row.end());
      }
      inst.metric = std::make_shared<MetricSpace>(MetricSpace::euclidean(std::move(coords), dim, d));
    } else if (type == "matrix") {
      const int n = m.at("n").get<int>();
      std::vector<double> full;
      for (const auto& r : m.at("distances")) {
        auto row = r.get<std::vector<double>>();
        if (static_cast<int>(row.size()) != n) throw ParseError("matrix row with wrong length", 0);
        full.insert(full.end(), row.begin(), row.end());
      }
      auto metric = std::make_shared<MetricSpace>(MetricSpace::from_matrix(std::move(full), n, d));
      if (!metric->check_triangle_inequality(1e-9)) throw ValidationError("triangle inequality violated");
      inst.metric = metric;
    } else {
      throw ParseError("unknown metric type '" + type + "'", 0);
    }
    for (const auto& c : doc.at("clients"))
      inst.clients.push_back({c.at("point").get<PointId>(), c.value("demand", std::int64_t{1}),
                              c.contains("penalty") ? number_or_inf(c.at("penalty")) : kInf});
    for (const auto& f : doc.at("facilities"))
      inst.facilities.push_back({f.at("point").get<PointId>(), f.value("opening_cost", 0.0)});
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what(), 0);
  }
}

nlohmann::json decomposition_to_json(const Decomposition& decomp) {
  nlohmann::json doc;
  doc["seed"] = decomp.seed();
  doc["height"] = decomp.height();
  doc["unit"] = decomp.unit();
  doc["rho"] = decomp.rho();
  doc["tau"] = decomp.tau();
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : decomp.parts())
    parts.push_back({{"id", p.id},
                     {"level", p.level},
                     {"members", p.members},
                     {"center", p.center},
                     {"radius", p.radius},
                     {"parent", p.parent},
                     {"children", p.children},
                     {"portals", p.portals}});
  doc["parts"] = parts;
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : decomp.nodes())
    nodes.push_back({{"part", n.part}, {"top", n.top}, {"bottom", n.bottom}, {"parent", n.parent}, {"children", n.children}});
  doc["nodes"] = nodes;
  return doc;
}

nlohmann::json solution_to_json(const Solution& sol) {
  nlohmann::json j;
  j["facilities"] = sol.facilities;
  j["assignment"] = sol.assignment;
  j["dropped"] = sol.dropped;
  j["opening"] = sol.opening;
  j["connection"] = sol.connection;
  j["penalty"] = sol.penalty;
  j["cost"] = sol.cost;
  j["outliers"] = sol.outliers;
  return j;
}

MetricSpace uniform_points(int n, int dim, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw ParameterError("need n >= 1 and dim >= 1");
  Rng rng(seed);
  std::vector<double> coords(static_cast<std::size_t>(n) * dim);
  for (double& x : coords) x = uniform01(rng);
  return MetricSpace::euclidean(std::move(coords), dim, dim);
}

MetricSpace grid_points(int side, int dim) {
  if (side < 1 || dim < 1) throw ParameterError("need side >= 1 and dim >= 1");
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= side;
  std::vector<double> coords;
  coords.reserve(n * dim);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t r = idx;
    for (int i = 0; i < dim; ++i) {
      coords.push_back(static_cast<double>(r % side));
      r /= side;
    }
  }
  return MetricSpace::euclidean(std::move(coords), dim, dim);
}

MetricSpace two_scale_points(int n, int dim, int clusters, double spread, std::uint64_t seed) {
  if (n < 1 || dim < 1 || clusters < 1 || !(spread > 0)) throw ParameterError("invalid two-scale parameters");
  Rng rng(seed);
  std::vector<double> centers(static_cast<std::size_t>(clusters) * dim);
  for (double& x : centers) x = uniform01(rng);
  std::vector<double> coords(static_cast<std::size_t>(n) * dim);
  for (int i = 0; i < n; ++i) {
    auto c = static_cast<std::size_t>(uniform_index(rng, clusters));
    for (int a = 0; a < dim; ++a)
      coords[static_cast<std::size_t>(i) * dim + a] = centers[c * dim + a] + spread * (2.0 * uniform01(rng) - 1.0);
  }
  return MetricSpace::euclidean(std::move(coords), dim, dim);
}

}  // namespace dclust
