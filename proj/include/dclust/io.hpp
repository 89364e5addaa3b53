#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "dclust/instance.hpp"
#include "dclust/split_tree.hpp"

namespace dclust {

// points-csv:      one point per line, comma-separated coordinates x1,...,xm.
//                  Blank lines and lines starting with '#' are skipped.
// distmatrix-csv:  lower triangle with diagonal; line i (0-based) holds the
//                  i+1 values dist(i,0),...,dist(i,i).
// instance-json:   the "dclust.instance/1" document written by export_instance.
enum class InputFormat { kPointsCsv, kDistMatrixCsv, kInstanceJson };

InputFormat input_format_from_string(const std::string& s);

struct IngestOptions {
  InputFormat format = InputFormat::kPointsCsv;
  Objective objective = Objective::kKMedian;  // for the two csv formats
  int doubling_dimension = 2;
  double opening_cost = 1.0;                  // facility location, csv formats
  int k = 0;
  std::int64_t z = 0;
  double triangle_tolerance = 1e-9;
};

// Parse errors carry the 1-based line number; a distance matrix that breaks
// the triangle inequality raises ValidationError.
ClusteringInstance ingest(const std::string& path, const IngestOptions& options);
ClusteringInstance ingest_text(const std::string& text, const IngestOptions& options);

nlohmann::json export_instance(const ClusteringInstance& inst);
ClusteringInstance instance_from_json(const nlohmann::json& doc);

nlohmann::json decomposition_to_json(const Decomposition& decomp);
nlohmann::json solution_to_json(const Solution& sol);

// Synthetic point sets.
MetricSpace uniform_points(int n, int dim, std::uint64_t seed);
MetricSpace grid_points(int side, int dim);
// `clusters` tight blobs (radius `spread`) with centers uniform in the unit cube.
MetricSpace two_scale_points(int n, int dim, int clusters, double spread, std::uint64_t seed);

}  // namespace dclust
