#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "wavekin/parallel.hpp"
#include "wavekin/rng.hpp"

using namespace wavekin;

namespace {

// float sums whose value depends on association order: catches any
// thread-count-dependent reduction shape
double chunked_sum(std::size_t items, std::size_t chunk, unsigned threads) {
  auto map = [](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      RngStream rng(5, i, 0);
      s += rng.uniform() * 1e6 - 0.3;
    }
    return s;
  };
  auto merge = [](double& into, double&& next) { into += next; };
  return chunked_reduce<double>(items, chunk, threads, map, merge);
}

}  // namespace

TEST_CASE("chunked_reduce is bit-identical across thread counts") {
  const double base = chunked_sum(1000, 16, 1);
  for (unsigned threads : {2u, 3u, 8u}) {
    CHECK(chunked_sum(1000, 16, threads) == base);
  }
  // empty input and single chunk edge cases
  CHECK(chunked_sum(0, 16, 4) == 0.0);
  CHECK(chunked_sum(5, 16, 4) == chunked_sum(5, 16, 1));
}

TEST_CASE("chunked_reduce propagates the first failing chunk") {
  auto map = [](std::size_t b, std::size_t) -> int {
    if (b >= 64) throw std::runtime_error("chunk " + std::to_string(b));
    return 1;
  };
  auto merge = [](int& into, int&& next) { into += next; };
  for (unsigned threads : {1u, 4u}) {
    try {
      chunked_reduce<int>(1000, 16, threads, map, merge);
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "chunk 64");
    }
  }
}
