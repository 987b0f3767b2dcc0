#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mms.hpp"

using namespace rdns;

namespace {

const Params kRef = derive_constants(1.0, 1.5, 0.8, 1.0, 3);

template <class F>
void check_second_order(F run) {
  const mms::Errors a = run(64), b = run(128), c = run(256);
  REQUIRE(a.completed);
  REQUIRE(b.completed);
  REQUIRE(c.completed);
  CHECK(std::log2(a.rho / b.rho) > 1.8);
  CHECK(std::log2(b.rho / c.rho) > 1.8);
  CHECK(std::log2(a.u / b.u) > 1.8);
  CHECK(std::log2(b.u / c.u) > 1.8);
}

}  // namespace

TEST_CASE("manufactured solution: primitive explicit") {
  check_second_order([](std::size_t n) { return mms::run_primitive(n, kRef); });
}

TEST_CASE("manufactured solution: primitive IMEX") {
  check_second_order([](std::size_t n) { return mms::run_primitive(n, kRef, 0.1, 8.0, Scheme::imex); });
}

TEST_CASE("manufactured solution: enlarged explicit") {
  check_second_order([](std::size_t n) { return mms::run_enlarged(n, kRef); });
}

TEST_CASE("manufactured solution: two dimensions") {
  const Params p = derive_constants(1.0, 1.5, 0.8, 1.0, 2);
  check_second_order([&](std::size_t n) { return mms::run_primitive(n, p); });
}
