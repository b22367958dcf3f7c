#include <doctest.h>

#include <cmath>
#include <limits>

#include "gselab/errors.hpp"
#include "gselab/io.hpp"
#include "gselab/rng.hpp"

using namespace gselab;

TEST_CASE("parse_graph") {
  const WeightedGraph g = parse_graph("# triangle\n3\n1 2 1\n\n1 3 1\n2 3 1\n");
  CHECK(g == WeightedGraph::complete(3));
  const WeightedGraph h = parse_graph("2\nw: 1 3\n1 2 0.5\n2 1 0.5\n");
  CHECK(h.node_weights() == std::vector<double>{1.0, 3.0});
  CHECK(h.edge_weight(1, 0) == 0.5);
  CHECK_FALSE(h.is_simple());
}

TEST_CASE("parse_graph errors carry line numbers") {
  try {
    parse_graph("3\n1 2 1\n1 4 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_graph("2\n1 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("2\n1 2 x\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("2\n1 2 1\n2 1 0.5\n"), ConsistencyError);
  CHECK_NOTHROW(parse_graph("2\n1 2 1\n2 1 1\n"));
}

TEST_CASE("parse_interaction and parse_reals") {
  CHECK(parse_interaction("2\n0 1\n1 0\n") == InteractionMatrix::maxcut(2));
  CHECK_THROWS_AS(parse_interaction("2\n0 1\n0 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_interaction("2\n0 1\n"), ParseError);
  CHECK(parse_reals("1/3, 2/3") == std::vector<double>{1.0 / 3.0, 2.0 / 3.0});
  CHECK(parse_reals("0.5 0.25,0.25") == std::vector<double>{0.5, 0.25, 0.25});
  CHECK_THROWS(parse_reals("1/0"));
  CHECK_THROWS(parse_reals("a"));
}

TEST_CASE("parse_graphon") {
  const StepGraphon w = parse_graphon(R"({"lambda": ["1/2", 0.5], "B": [[1, 0], [0, "1/4"]]})");
  CHECK(w.k() == 2);
  CHECK(w.value(1, 1) == 0.25);
  CHECK_THROWS(parse_graphon(R"({"lambda": [1], "B": [[1, 2]]})"));
  CHECK_THROWS(parse_graphon("{"));
}

TEST_CASE("serialization round trips") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    std::vector<double> a(n);
    Matrix b(n, n);
    for (auto& x : a) x = rng.uniform(0.1, 3.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.uniform() < 0.6) b(i, j) = b(j, i) = rng.uniform(-2.0, 2.0);
    const WeightedGraph g(a, b);
    CHECK(parse_graph(serialize_graph(g)) == g);
    const InteractionMatrix j(b);
    CHECK(parse_interaction(serialize_interaction(j)) == j);
    std::vector<double> lambda(a);
    double total = 0.0;
    for (double x : lambda) total += x;
    for (double& x : lambda) x /= total;
    const StepGraphon w(lambda, b);
    const StepGraphon back = parse_graphon(serialize_graphon(w));
    CHECK(back.lambda() == w.lambda());
    CHECK(back.values() == w.values());
  }
}

TEST_CASE("format_real is shortest round trip") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(-4.0 / 9.0) == "-0.4444444444444444");
  const double x = 1.0 / 3.0;
  CHECK(std::stod(format_real(x)) == x);
}

TEST_CASE("json reports") {
  EnergyResult r;
  r.value = -0.5;
  r.certificate = SpinConfiguration({0, 1}, 2);
  r.method = Method::exhaustive;
  const auto doc = to_json(r);
  CHECK(doc["schema"] == kSchema);
  CHECK(doc["certificate"]["states"] == nlohmann::json::array({1, 2}));
  r.value = std::numeric_limits<double>::infinity();
  CHECK(to_json(r)["value"].is_null());
}

TEST_CASE("csv header") {
  ReportRow row{0, 2, "maxcut2", "lower c=0", -0.5, "exhaustive", 7};
  CHECK(to_csv({row}) == "index,q,J-id,threshold,value,method,seed\n0,2,maxcut2,lower c=0,-0.5,exhaustive,7\n");
}
