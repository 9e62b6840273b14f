#include <cmath>

#include "doctest.h"
#include "numamig/workload.hpp"

using namespace numamig;

namespace {

ProcessSpec spec(double intensity, double gips, double sigma = 0.0) {
  ProcessSpec s;
  s.pid = ProcessId{1};
  s.num_threads = 1;
  s.mem_intensity = intensity;
  s.base_gips = gips;
  s.base_instb = 1.5;
  s.total_work = 10.0;
  s.noise_sigma = sigma;
  return s;
}

}  // namespace

TEST_CASE("local data gives the unit latency and base rate") {
  const auto topo = Topology::uniform(4, 8, 3.0);
  Rng rng(1);
  for (double m : {0.0, 0.5, 1.0}) {
    const auto s = sample(spec(m, 2.0), CoreId{9}, DataPlacement::local_to(NodeId{1}, 4), topo, rng);
    CHECK(s.latency == 200.0);
    CHECK(s.gips == 2.0);
    CHECK(s.instb == 1.5);
  }
}

TEST_CASE("fully remote data at distance 3") {
  // Hand evaluation: latency = 200 * 3 = 600; gips = 2 / (1 + 1 * (3 - 1)) = 2/3.
  const auto topo = Topology::uniform(4, 8, 3.0);
  Rng rng(1);
  const auto s = sample(spec(1.0, 2.0), CoreId{0}, DataPlacement::local_to(NodeId{2}, 4), topo, rng);
  CHECK(s.latency == doctest::Approx(600.0).epsilon(1e-12));
  CHECK(s.gips == doctest::Approx(0.666666666667).epsilon(1e-10));
}

TEST_CASE("interleaved data averages the distance row") {
  // Hand evaluation: 200 * (1 + 3 + 3 + 3) / 4 = 500.
  const auto topo = Topology::uniform(4, 8, 3.0);
  Rng rng(1);
  const auto s = sample(spec(1.0, 2.0), CoreId{0}, DataPlacement::interleaved(4), topo, rng);
  CHECK(s.latency == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("noise-free samples are bit-identical across calls and seeds") {
  const auto topo = Topology::uniform(4, 2, 2.5);
  const DataPlacement data({0.1, 0.2, 0.3, 0.4});
  Rng a(1), b(999);
  for (int core = 0; core < topo.num_cores(); ++core) {
    const auto x = sample(spec(0.7, 1.3), CoreId{core}, data, topo, a);
    const auto y = sample(spec(0.7, 1.3), CoreId{core}, data, topo, b);
    CHECK(x.latency == y.latency);
    CHECK(x.gips == y.gips);
    CHECK(x.instb == y.instb);
  }
}

TEST_CASE("latency rises and gips falls with weighted distance") {
  const auto topo = Topology::with_matrix(3, 1, {{1, 2, 4}, {2, 1, 3}, {4, 3, 1}});
  Rng gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> w{u(gen), u(gen), u(gen)};
    const double sum = w[0] + w[1] + w[2];
    for (auto& x : w) x /= sum;
    const DataPlacement data(w);
    Rng rng(1);
    // Rank cores by their weighted distance and check ordering of outputs.
    std::vector<std::pair<double, PerfSample>> by_core;
    std::vector<std::pair<double, PerfSample>> flat;
    for (int core = 0; core < 3; ++core) {
      double f = 0.0;
      for (int d = 0; d < 3; ++d) f += w[d] * topo.distance(NodeId{core}, NodeId{d});
      by_core.push_back({f, sample(spec(0.8, 2.0), CoreId{core}, data, topo, rng)});
      flat.push_back({f, sample(spec(0.0, 2.0), CoreId{core}, data, topo, rng)});
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (by_core[a].first < by_core[b].first - 1e-12) {
          CHECK(by_core[a].second.latency < by_core[b].second.latency);
          CHECK(by_core[a].second.gips > by_core[b].second.gips);
        }
        CHECK(flat[a].second.gips == 2.0);
      }
    }
  }
}

TEST_CASE("noisy samples are reproducible from the seed and centred") {
  const auto topo = Topology::uniform(2, 1, 2.0);
  const auto data = DataPlacement::local_to(NodeId{0}, 2);
  Rng a(42), b(42);
  double log_sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto x = sample(spec(1.0, 2.0, 0.1), CoreId{0}, data, topo, a);
    const auto y = sample(spec(1.0, 2.0, 0.1), CoreId{0}, data, topo, b);
    CHECK(x.latency == y.latency);
    CHECK(x.latency > 0.0);
    CHECK(x.gips > 0.0);
    log_sum += std::log(x.latency / 200.0);
  }
  // Mean of log factor is 0 with standard error 0.1 / sqrt(n) ~ 7e-4.
  CHECK(std::abs(log_sum / n) < 5e-3);
}

TEST_CASE("data placement validation") {
  CHECK_THROWS_AS(DataPlacement({0.5, 0.6}), Error);
  CHECK_THROWS_AS(DataPlacement({1.5, -0.5}), Error);
  CHECK_THROWS_AS(DataPlacement(std::vector<double>{}), Error);
  CHECK_NOTHROW(DataPlacement({0.25, 0.25, 0.5}));

  const auto topo = Topology::uniform(4, 1, 2.0);
  Rng rng(1);
  CHECK_THROWS_AS(sample(spec(1, 1), CoreId{0}, DataPlacement::interleaved(2), topo, rng), Error);
}

TEST_CASE("process spec validation") {
  auto s = spec(1.0, 1.0);
  CHECK_NOTHROW(s.validate());
  s.num_threads = 0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = spec(1.2, 1.0);
  CHECK_THROWS_AS(s.validate(), Error);
  s = spec(1.0, 0.0);
  CHECK_THROWS_AS(s.validate(), Error);
  s = spec(1.0, 1.0, -0.1);
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("advance_work retires gips * seconds") {
  ThreadProgress p{10.0, false};
  CHECK(advance_work(p, 2.0, 1000.0) == 8.0);
  CHECK_FALSE(p.finished);

  ThreadProgress q{1.0, false};
  CHECK(advance_work(q, 2.0, 1000.0) == 0.0);
  CHECK(q.finished);

  ThreadProgress done{0.0, false};
  CHECK_THROWS_AS(advance_work(done, 2.0, 1.0), Error);
  CHECK_THROWS_AS(advance_work(q, 2.0, 1.0), Error);

  ThreadProgress r{5.0, false};
  CHECK_THROWS_AS(advance_work(r, 2.0, -1.0), Error);
}
