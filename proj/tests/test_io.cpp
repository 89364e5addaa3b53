#include <doctest.h>

#include "dclust/errors.hpp"
#include "dclust/experiment.hpp"
#include "dclust/io.hpp"
#include "support.hpp"

using namespace dclust;

namespace {

int parse_line(const std::string& text, const IngestOptions& opt) {
  try {
    ingest_text(text, opt);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("points csv") {
  IngestOptions opt;
  opt.k = 2;
  auto inst = ingest_text("# header\n0,0\n1,0\n\n0,2.5\n", opt);
  CHECK(inst.space().size() == 3);
  CHECK(inst.space().dist(0, 2) == 2.5);
  CHECK(inst.k == 2);
  CHECK(inst.clients.size() == 3u);
  CHECK(parse_line("0,0\n1,x\n", opt) == 2);
  CHECK(parse_line("0,0\n1\n", opt) == 2);
  CHECK(parse_line("0,0\n\n1,,2\n", opt) == 3);
  CHECK_THROWS_AS(ingest_text("", opt), ParseError);
}

TEST_CASE("distance matrix csv") {
  IngestOptions opt;
  opt.format = InputFormat::kDistMatrixCsv;
  opt.k = 1;
  auto inst = ingest_text("0\n1,0\n2,1,0\n", opt);
  CHECK(inst.space().size() == 3);
  CHECK(inst.space().dist(0, 2) == 2.0);
  CHECK(parse_line("0\n1,0,4\n", opt) == 2);
  CHECK(parse_line("0\n1,0\n2,-1,0\n", opt) == 3);
  CHECK(parse_line("0\n1,3\n", opt) == 2);
  CHECK_THROWS_AS(ingest_text("0\n1,0\n5,1,0\n", opt), ValidationError);
}

TEST_CASE("instance json round trip") {
  auto m = testing::random_plane(7, 3);
  auto inst = testing::make_instance(m, Objective::kPrizeCollecting, 5, 2);
  inst.clients[1].penalty = 0.25;
  inst.clients[2].demand = 3;
  auto doc = export_instance(inst);
  CHECK(doc["schema"] == "dclust.instance/1");
  auto back = instance_from_json(doc);
  CHECK(export_instance(back) == doc);
  CHECK(back.clients[0].penalty == kInf);
  CHECK(back.clients[1].penalty == 0.25);
  IngestOptions opt;
  opt.format = InputFormat::kInstanceJson;
  auto again = ingest_text(doc.dump(), opt);
  CHECK(export_instance(again) == doc);
  auto bad = doc;
  bad["schema"] = "other/9";
  CHECK_THROWS_AS(instance_from_json(bad), ParseError);
  CHECK_THROWS_AS(ingest_text("{not json", opt), ParseError);
}

TEST_CASE("decomposition and solution json") {
  auto m = testing::random_plane(10, 2);
  auto dec = Decomposition::build(m, 0.25, 4);
  auto j = decomposition_to_json(dec);
  CHECK(j["seed"] == 4);
  CHECK(j["parts"].size() == dec.parts().size());
  auto inst = testing::make_instance(m, Objective::kKMedian, 10, 2);
  auto s = solution_to_json(evaluate(inst, std::vector<int>{1, 2}));
  CHECK(s["facilities"] == nlohmann::json::array({1, 2}));
}

TEST_CASE("generators") {
  auto a = uniform_points(20, 3, 9), b = uniform_points(20, 3, 9);
  CHECK(a.coordinates() == b.coordinates());
  CHECK(a.coordinate_dim() == 3);
  CHECK(grid_points(4, 2).size() == 16);
  auto t = two_scale_points(30, 2, 3, 0.01, 5);
  CHECK(t.size() == 30);
  CHECK_THROWS_AS(uniform_points(0, 2, 1), ParameterError);
}

TEST_CASE("configuration validation") {
  RunConfig c;
  c.epsilon = 0.4;
  CHECK_THROWS_AS(validate_config(c), ParameterError);
  c.epsilon = 0.3;
  c.k = 0;
  CHECK_THROWS_AS(validate_config(c), ParameterError);
  c.k = 2;
  c.z = -1;
  CHECK_THROWS_AS(validate_config(c), ParameterError);
  c.z = 0;
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("experiments are reproducible and thread-count independent") {
  RunConfig c;
  c.objective = Objective::kKMedian;
  c.k = 2;
  c.trials = 4;
  c.generator.n = 9;
  c.seed = 17;
  c.threads = 1;
  auto a = run_experiment(c);
  c.threads = 3;
  auto b = run_experiment(c);
  CHECK(a == b);
  CHECK(a["schema"] == kResultSchema);
  CHECK(a["trials"].size() == 4u);
  c.seed = 18;
  CHECK(run_experiment(c) != a);
}

TEST_CASE("median") {
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
}
