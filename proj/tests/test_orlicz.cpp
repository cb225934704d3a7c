#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "kantorovich/orlicz.hpp"

using namespace kantorovich;

namespace {

const Box unit1{{0.0}, {1.0}};

SampledField constant_field(double c, std::size_t n = 16) {
  return SampledField(unit1, {n}, std::vector<double>(n, c));
}

SampledField identity_field(std::size_t n) {
  return SampledField::sample(unit1, {n}, [](const std::vector<double>& x) { return x[0]; });
}

// Plain bisection on g(lambda) = I[f / lambda] - target(lambda), for the oracle.
double bisect(const std::function<double(double)>& g, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("phi-functions") {
  const auto p2 = power_phi(2.0);
  CHECK(p2(3.0) == 9.0);
  CHECK(p2.convex());
  const auto e1 = exponential_phi(1.0);
  CHECK(e1(1.0) == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK(parse_phi("power:1.5")(4.0) == doctest::Approx(8.0));
  CHECK(parse_phi("exp:2")(1.0) == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK_THROWS_AS(power_phi(0.5), std::invalid_argument);
  CHECK_THROWS_AS(exponential_phi(0.9), std::invalid_argument);
  CHECK_THROWS_AS(parse_phi("log:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_phi("power:"), std::invalid_argument);
  CHECK_THROWS_AS(ModularFunction("shifted", [](double u) { return u + 1.0; }, true), std::invalid_argument);
  CHECK_THROWS_AS(ModularFunction("bounded", [](double u) { return std::min(u, 1.0); }, false),
                  std::invalid_argument);
  CHECK_THROWS_AS(ModularFunction("decreasing", [](double u) { return u == 0 ? 0.0 : 1.0 / u + u; }, false),
                  std::invalid_argument);
}

TEST_CASE("sampled fields") {
  const auto f = SampledField::sample(Box{{0.0, 0.0}, {2.0, 1.0}}, {4, 2},
                                      [](const std::vector<double>& x) { return x[0] + 10 * x[1]; });
  CHECK(f.cell_volume() == doctest::Approx(0.25));
  CHECK(f.values()[0] == doctest::Approx(0.25 + 2.5));
  CHECK(f.values()[5] == doctest::Approx(0.75 + 7.5));  // axis 0 fastest
  CHECK(SampledField::centers(f.domain(), f.shape(), 0) == std::vector<double>{0.25, 0.75, 1.25, 1.75});
  CHECK_THROWS_AS(SampledField(unit1, {3}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(SampledField(unit1, {0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(SampledField(Box{{1.0}, {1.0}}, {1}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SampledField(unit1, {1}, {NAN}), std::invalid_argument);
}

TEST_CASE("modular") {
  CHECK(modular(power_phi(1.0), constant_field(2.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(modular(power_phi(1.0), constant_field(2.0, 7)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(modular(power_phi(2.0), constant_field(0.0)) == 0.0);
  CHECK(modular(power_phi(2.0), identity_field(10000)) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  // sign is irrelevant
  CHECK(modular(power_phi(3.0), constant_field(-2.0)) == doctest::Approx(8.0));
}

TEST_CASE("lp norms") {
  CHECK(lp_norm(constant_field(3.0), 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(lp_norm(identity_field(10000), 1.0) == doctest::Approx(0.5).epsilon(1e-6));
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> v(500);
  for (auto& x : v) x = g(rng);
  const SampledField f(Box{{-1.0}, {4.0}}, {500}, v);
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    for (double c : {-3.0, 0.1, 7.0}) {
      CHECK(lp_norm(f.scaled(c), p) == doctest::Approx(std::fabs(c) * lp_norm(f, p)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("luxemburg norm") {
  // power:1, constant c on the unit box: I[f / l] = c / l <= l  =>  l = sqrt(c)
  for (double c : {0.25, 2.0, 9.0, 1e4}) {
    CHECK(luxemburg_norm(power_phi(1.0), constant_field(c)) == doctest::Approx(std::sqrt(c)).epsilon(1e-7));
    CHECK(luxemburg_norm(power_phi(1.0), constant_field(c), 1e-10, LuxemburgForm::standard) ==
          doctest::Approx(c).epsilon(1e-9));
  }
  CHECK(luxemburg_norm(power_phi(2.0), constant_field(0.0)) == 0.0);

  // exp:1, constant 1: e^(1/l) - 1 = l, by an independent bisection
  const double expect = bisect([](double l) { return std::expm1(1.0 / l) - l; }, 0.1, 10.0);
  CHECK(luxemburg_norm(exponential_phi(1.0), constant_field(1.0), 1e-10) == doctest::Approx(expect).epsilon(1e-9));

  // standard form with power:p is the L^p norm
  const auto f = identity_field(1000);
  CHECK(luxemburg_norm(power_phi(2.0), f, 1e-10, LuxemburgForm::standard) ==
        doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-9));

  const auto f2 = f.scaled(2.0);
  for (const auto& phi : {power_phi(1.0), power_phi(3.0), exponential_phi(1.0)}) {
    CHECK(luxemburg_norm(phi, f2) >= luxemburg_norm(phi, f));
  }
}

TEST_CASE("sup error") {
  const auto a = identity_field(100);
  CHECK(sup_error(a, a) == 0.0);
  const auto b = a.with_values([&] {
    auto v = a.values();
    for (auto& x : v) x += 5.0;
    return v;
  }());
  CHECK(sup_error(a, b) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(sup_error(a, b) == sup_error(b, a));
  CHECK_THROWS_AS(sup_error(a, identity_field(50)), std::invalid_argument);
  CHECK_THROWS_AS(difference(a, identity_field(50)), std::invalid_argument);
}

TEST_CASE("modular convexity on random fields") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Box box{{0.0, 0.0}, {1.0, 2.0}};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> va(64), vb(64), mid(64);
    for (std::size_t i = 0; i < 64; ++i) {
      va[i] = u(rng);
      vb[i] = u(rng);
      mid[i] = 0.5 * (va[i] + vb[i]);
    }
    const SampledField a(box, {8, 8}, va), b(box, {8, 8}, vb), m(box, {8, 8}, mid);
    for (const auto& phi : {power_phi(1.0), power_phi(2.5), exponential_phi(1.0), exponential_phi(2.0)}) {
      CHECK(modular(phi, m) <= 0.5 * (modular(phi, a) + modular(phi, b)) * (1 + 1e-14));
    }
  }
}
