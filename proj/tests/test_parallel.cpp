#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "locklab/parallel.hpp"

using namespace locklab;

namespace {

struct WorkerScope {
  explicit WorkerScope(int n) : saved(worker_count()) { set_worker_count(n); }
  ~WorkerScope() { set_worker_count(saved); }
  int saved;
};

}  // namespace

TEST_CASE("parallel reduction is bit-identical to the serial reference") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t n : {0u, 1u, 127u, 128u, 129u, 1000u, 16384u, 16385u, 100003u}) {
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng) * std::exp(8.0 * dist(rng));
    const double reference = pairwise_sum_serial(n, [&](std::size_t i) { return v[i]; });
    for (int workers : {1, 2, 3, 4, 7}) {
      WorkerScope scope(workers);
      const double got = pairwise_sum(n, [&](std::size_t i) { return v[i]; });
      CAPTURE(n);
      CAPTURE(workers);
      CHECK(got == reference);  // exact: same tree
    }
  }
}

TEST_CASE("pairwise sum keeps rounding error logarithmic") {
  const std::size_t n = 1u << 22;
  const double naive = [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += 0.1;
    return acc;
  }();
  const double pairwise = pairwise_sum(n, [](std::size_t) { return 0.1; });
  const double exact = 0.1L * static_cast<long double>(n);
  CHECK(std::fabs(pairwise - exact) < 1e-9);
  CHECK(std::fabs(pairwise - exact) < std::fabs(naive - exact));
}

TEST_CASE("worker count override") {
  WorkerScope scope(3);
  CHECK(worker_count() == 3);
  set_worker_count(0);
  CHECK(worker_count() == 1);
}
