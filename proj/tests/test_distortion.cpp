#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "bitalloc/distortion.hpp"
#include "bitalloc/pareto.hpp"

using namespace bitalloc;

namespace {

LayerDag diamond3_dag() { return build_dag(3, std::vector<Arc>{{0, 1}, {0, 2}}); }

LayeredExponentialModel diamond3_model(const LayerDag& dag) {
  return LayeredExponentialModel(dag, {1.0, 1.0, 1.0},
                                 {{{0, 1.0}}, {{0, 1.0}, {1, 2.0}}, {{0, 1.0}, {2, 2.0}}});
}

BitAllocation alloc3(double b0, double b1, double b2, double budget = 1.0) {
  return BitAllocation{{b0, b1, b2}, budget};
}

TabulatedModel nonconvex_table() {
  return TabulatedModel(
      {
          {{0.0, 0.0}, {6.0, 6.0}},
          {{0.0, 0.5}, {5.5, 4.0}},
          {{0.0, 1.0}, {5.0, 1.0}},
          {{0.5, 0.0}, {4.0, 5.5}},
          {{0.5, 0.5}, {3.5, 3.5}},
          {{1.0, 0.0}, {1.0, 5.0}},
      },
      0.5);
}

}  // namespace

TEST_CASE("layered exponential evaluates its closed form exactly") {
  LayerDag dag = diamond3_dag();
  LayeredExponentialModel model = diamond3_model(dag);

  DistortionVector zero = model.evaluate(alloc3(0, 0, 0));
  CHECK(zero.values == std::vector<double>{1.0, 1.0, 1.0});

  DistortionVector base = model.evaluate(alloc3(1, 0, 0));
  CHECK(base.values[0] == std::exp(-1.0));
  CHECK(base.values[1] == std::exp(-1.0));
  CHECK(base.values[2] == std::exp(-1.0));

  DistortionVector mid = model.evaluate(alloc3(0.5, 0.5, 0));
  CHECK(mid.values[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(mid.values[1] == doctest::Approx(std::exp(-1.5)).epsilon(1e-15));
  CHECK(mid.values[2] == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));

  // bits on a node outside a resolution's subgraph do not influence it
  DistortionVector branch = model.evaluate(alloc3(0, 1, 0));
  CHECK(branch.values[0] == 1.0);
  CHECK(branch.values[1] == std::exp(-2.0));
  CHECK(branch.values[2] == 1.0);
}

TEST_CASE("bases scale each resolution independently") {
  LayerDag dag = diamond3_dag();
  LayeredExponentialModel model(dag, {2.0, 3.0, 4.0},
                                {{{0, 1.0}}, {{0, 1.0}, {1, 2.0}}, {{0, 1.0}, {2, 2.0}}});
  DistortionVector d = model.evaluate(alloc3(0, 0, 0));
  CHECK(d.values == std::vector<double>{2.0, 3.0, 4.0});
}

TEST_CASE("unlisted subgraph members default to gain 1") {
  LayerDag dag = build_dag(2, std::vector<Arc>{{0, 1}});
  LayeredExponentialModel model(dag, {1.0, 1.0}, {{}, {}});
  DistortionVector d = model.evaluate(BitAllocation{{0.5, 0.5}, 1.0});
  CHECK(d.values[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(d.values[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(model.max_gain(1) == 1.0);
}

TEST_CASE("model construction rejects bad parameters") {
  LayerDag dag = diamond3_dag();
  // wrong base count
  try {
    LayeredExponentialModel(dag, {1.0}, {{}, {}, {}});
    FAIL("expected dimension mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dimension_mismatch);
  }
  // nonpositive base
  CHECK_THROWS_AS(LayeredExponentialModel(dag, {1.0, 0.0, 1.0}, {{}, {}, {}}), SchemaError);
  // gain listed for a node outside the resolution's subgraph
  CHECK_THROWS_AS(LayeredExponentialModel(dag, {1.0, 1.0, 1.0}, {{}, {{2, 1.0}}, {}}),
                  SchemaError);
  // negative gain
  CHECK_THROWS_AS(LayeredExponentialModel(dag, {1.0, 1.0, 1.0}, {{{0, -1.0}}, {}, {}}),
                  SchemaError);
  // all-zero gains leave a resolution constant
  CHECK_THROWS_AS(LayeredExponentialModel(dag, {1.0, 1.0, 1.0}, {{{0, 0.0}}, {}, {}}),
                  SchemaError);
}

TEST_CASE("infeasible allocations are rejected") {
  LayerDag dag = diamond3_dag();
  LayeredExponentialModel model = diamond3_model(dag);
  CHECK_THROWS_AS(model.evaluate(alloc3(-0.1, 0, 0)), InfeasibleAllocation);
  CHECK_THROWS_AS(model.evaluate(alloc3(0.6, 0.6, 0.0)), InfeasibleAllocation);
  CHECK_THROWS_AS(model.evaluate(BitAllocation{{0.5, 0.5}, 1.0}), Error);  // dimension
  // float-noise slack at the budget boundary is accepted
  CHECK_NOTHROW(model.evaluate(alloc3(0.5, 0.25, 0.25 + 1e-12)));
}

TEST_CASE("tabulated model looks up exact grid rows") {
  TabulatedModel model = nonconvex_table();
  CHECK(model.resolution_count() == 2);
  DistortionVector d = model.evaluate(BitAllocation{{0.5, 0.5}, 1.0});
  CHECK(d.values == std::vector<double>{3.5, 3.5});
  // lookup keys quantize to 1e-9 bits
  CHECK_NOTHROW(model.evaluate(BitAllocation{{0.5 + 1e-10, 0.5}, 1.0}));
  CHECK_THROWS_AS(model.evaluate(BitAllocation{{0.25, 0.5}, 1.0}), OffGrid);
}

TEST_CASE("tabulated model rejects duplicate and ragged rows") {
  CHECK_THROWS_AS(TabulatedModel({{{0.0, 0.0}, {1.0, 1.0}}, {{0.0, 0.0}, {2.0, 2.0}}}, 0.5),
                  SchemaError);
  CHECK_THROWS_AS(TabulatedModel({{{0.0, 0.0}, {1.0, 1.0}}, {{0.5}, {2.0, 2.0}}}, 0.5),
                  SchemaError);
  try {
    TabulatedModel({}, 0.5);
    FAIL("expected empty input rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_input);
  }
}

TEST_CASE("analytic envelope matches the steepest-gain closed form") {
  LayerDag dag = diamond3_dag();
  LayeredExponentialModel model = diamond3_model(dag);
  RdEnvelope envelope = rd_envelope(model, dag, 1, 1.0, 0.25);
  CHECK(envelope.analytic());
  CHECK(envelope.resolution() == 1);
  CHECK(envelope.evaluate(0.0) == 1.0);
  CHECK(envelope.evaluate(1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(envelope.evaluate(0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(envelope.samples().size() == 5);  // rates 0, 0.25, 0.5, 0.75, 1
  CHECK_THROWS_AS(envelope.evaluate(1.5), OutOfRange);
  CHECK_THROWS_AS(envelope.evaluate(-0.1), OutOfRange);
}

TEST_CASE("envelope lower-bounds every feasible allocation") {
  LayerDag dag = diamond3_dag();
  LayeredExponentialModel model = diamond3_model(dag);
  PointCloud cloud = enumerate_grid(model, dag, 1.0, 0.1);
  std::vector<RdEnvelope> envelopes;
  for (int i = 0; i < 3; ++i) envelopes.push_back(rd_envelope(model, dag, i, 1.0, 0.1));
  for (const CloudPoint& p : cloud.points) {
    for (int i = 0; i < 3; ++i) {
      double rate = 0.0;
      for (int j : dag.subgraph(i).members) rate += p.allocation.bits[j];
      CHECK(envelopes[i].evaluate(rate) <= p.distortion.values[i] + 1e-12);
    }
  }
}

TEST_CASE("analytic envelope is convex between sampled rates") {
  LayerDag dag = diamond3_dag();
  LayeredExponentialModel model = diamond3_model(dag);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> rate(0.0, 1.0);
  for (int i = 0; i < 3; ++i) {
    RdEnvelope envelope = rd_envelope(model, dag, i, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      double r1 = rate(rng), r2 = rate(rng);
      for (double lambda : {0.25, 0.5, 0.75}) {
        double mix = lambda * r1 + (1 - lambda) * r2;
        CHECK(envelope.evaluate(mix) <=
              lambda * envelope.evaluate(r1) + (1 - lambda) * envelope.evaluate(r2) + 1e-12);
      }
    }
  }
}

TEST_CASE("bucketed envelope takes per-rate minima of the table") {
  LayerDag dag = build_dag(2, std::vector<Arc>{{0, 1}});
  TabulatedModel model = nonconvex_table();
  RdEnvelope env0 = rd_envelope(model, dag, 0, 1.0);
  CHECK_FALSE(env0.analytic());
  CHECK(env0.evaluate(0.0) == 5.0);   // min over rows with b_0 = 0
  CHECK(env0.evaluate(0.5) == 3.5);   // min(4.0, 3.5)
  CHECK(env0.evaluate(1.0) == 1.0);
  RdEnvelope env1 = rd_envelope(model, dag, 1, 1.0);
  CHECK(env1.evaluate(0.0) == 6.0);   // only (0,0) has zero total
  CHECK(env1.evaluate(0.5) == 4.0);   // min over total rate 0.5
  CHECK(env1.evaluate(1.0) == 1.0);
}

TEST_CASE("inverse rate is exact at endpoints and tight inside") {
  LayerDag dag = diamond3_dag();
  LayeredExponentialModel model = diamond3_model(dag);
  RdEnvelope envelope = rd_envelope(model, dag, 1, 1.0);  // D(r) = exp(-2r)

  CHECK(inverse_rate(envelope, 1.0) == 0.0);
  CHECK(inverse_rate(envelope, std::exp(-2.0)) == 1.0);
  CHECK(inverse_rate(envelope, std::exp(-1.0)) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(inverse_rate(envelope, 1.1), OutOfRange);
  CHECK_THROWS_AS(inverse_rate(envelope, std::exp(-2.0) / 2), OutOfRange);
}

TEST_CASE("inverse rate round-trips random distortions") {
  LayerDag dag = diamond3_dag();
  LayeredExponentialModel model = diamond3_model(dag);
  std::mt19937 rng(11);
  for (int i = 0; i < 3; ++i) {
    RdEnvelope envelope = rd_envelope(model, dag, i, 1.0);
    double lo = envelope.evaluate(1.0), hi = envelope.evaluate(0.0);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (int trial = 0; trial < 100; ++trial) {
      double d = dist(rng);
      double r = inverse_rate(envelope, d);
      CHECK(std::abs(envelope.evaluate(r) - d) <= 1e-9);
    }
  }
}

TEST_CASE("inverse rate refuses non-monotone envelopes") {
  // single node whose tabulated distortion rises then falls
  LayerDag dag = build_dag(1, std::vector<Arc>{});
  TabulatedModel model({{{0.0}, {1.0}}, {{0.5}, {1.2}}, {{1.0}, {0.5}}}, 0.5);
  RdEnvelope envelope = rd_envelope(model, dag, 0, 1.0);
  CHECK_THROWS_AS(inverse_rate(envelope, 0.75), NotMonotone);
}

TEST_CASE("distortion_vector helper mirrors evaluate") {
  LayerDag dag = diamond3_dag();
  LayeredExponentialModel model = diamond3_model(dag);
  DistortionVector via_helper = distortion_vector(model, alloc3(0.5, 0.5, 0));
  DistortionVector direct = model.evaluate(alloc3(0.5, 0.5, 0));
  CHECK(via_helper.values == direct.values);
}
