// Reference computations for the tests. Nothing here calls into the library
// beyond plain data types, so a bug there cannot hide behind its own oracle.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

// Integral over R of (sin(pi t) / (pi t))^n, n >= 2, from the classical
// closed form  int (sin x / x)^n dx = pi / (2^(n-1) (n-1)!) sum_j (-1)^j C(n,j) (n-2j)^(n-1),
// j = 0 .. floor(n/2). Substituting x = pi t cancels the pi, so the value is
// rational and computed exactly before the final rounding.
inline double sinc_power_integral(int n) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  cpp_int sum = 0;
  cpp_int binom = 1;  // C(n, j)
  for (int j = 0; 2 * j <= n; ++j) {
    cpp_int power = 1;
    for (int i = 0; i < n - 1; ++i) power *= (n - 2 * j);
    sum += (j % 2 == 0 ? 1 : -1) * binom * power;
    binom = binom * (n - j) / (j + 1);
  }
  cpp_int denom = 1;
  for (int i = 2; i <= n - 1; ++i) denom *= i;
  denom <<= (n - 1);
  return static_cast<double>(cpp_rational(sum, denom));
}

// c_k = 1 / int sinc^(2k)(u / (2 k pi alpha)) du, exact up to the final division.
inline double jackson_c_exact(int k, double alpha) {
  return 1.0 / (2.0 * k * std::numbers::pi * alpha * sinc_power_integral(2 * k));
}

inline double plain_sinc(double t) {
  if (t == 0.0) return 1.0;
  return std::sin(std::numbers::pi * t) / (std::numbers::pi * t);
}

// Composite Simpson on [a, b] with n (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, long n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double odd = 0.0, even = 0.0;
  for (long i = 1; i < n; ++i) (i % 2 ? odd : even) += f(a + h * static_cast<double>(i));
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

// c_k by brute force: Simpson with step 1/steps_per_unit on [0, T] for
// sinc^(2k)(t), plus the averaged tail mean(sin^2k) / ((2k-1) pi^2k T^(2k-1)).
inline double jackson_c_simpson(int k, double alpha, double T, long steps_per_unit) {
  const int n = 2 * k;
  const double core = simpson([n](double t) { return std::pow(plain_sinc(t), n); }, 0.0, T,
                              static_cast<long>(T) * steps_per_unit);
  double mean = 1.0;  // C(2k, k) / 4^k
  for (int i = 1; i <= k; ++i) mean *= static_cast<double>(k + i) / (4.0 * i);
  const double tail =
      mean / ((n - 1) * std::pow(std::numbers::pi, n) * std::pow(T, n - 1));
  return 1.0 / (2.0 * k * std::numbers::pi * alpha * 2.0 * (core + tail));
}

// Closed-form central B-splines of orders 2, 3, 4.
inline double bspline_closed(int k, double x) {
  const double a = std::fabs(x);
  switch (k) {
    case 2:
      return std::max(0.0, 1.0 - a);
    case 3:
      if (a <= 0.5) return 0.75 - a * a;
      if (a <= 1.5) return 0.5 * (1.5 - a) * (1.5 - a);
      return 0.0;
    case 4:
      if (a <= 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
      if (a <= 2.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
      return 0.0;
    default:
      return NAN;
  }
}

// Mean of f over [lo0, hi0] x [lo1, hi1] by an n x n midpoint subgrid.
// Exact for step functions whose jumps fall on subgrid lines.
inline double box_mean(const std::function<double(double, double)>& f, double lo0, double hi0,
                       double lo1, double hi1, int n = 100) {
  const double h0 = (hi0 - lo0) / n, h1 = (hi1 - lo1) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s += f(lo0 + (i + 0.5) * h0, lo1 + (j + 0.5) * h1);
  }
  return s / (static_cast<double>(n) * n);
}

// Between-class variance for the split {v <= t} / {v > t}, straight from the
// pixel list. Returns every t in 0..254 that attains the maximum.
inline std::vector<int> otsu_argmax(const std::vector<double>& pixels) {
  std::vector<double> score(255, 0.0);
  for (int t = 0; t < 255; ++t) {
    double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (double v : pixels) {
      const double q = std::round(v);
      if (q <= t) {
        n0 += 1;
        s0 += q;
      } else {
        n1 += 1;
        s1 += q;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    const double n = n0 + n1, d = s0 / n0 - s1 / n1;
    score[static_cast<std::size_t>(t)] = (n0 / n) * (n1 / n) * d * d;
  }
  const double best = *std::max_element(score.begin(), score.end());
  std::vector<int> arg;
  for (int t = 0; t < 255; ++t) {
    if (score[static_cast<std::size_t>(t)] >= best * (1.0 - 1e-12)) arg.push_back(t);
  }
  return arg;
}

// Smooth synthetic image: 255 (1 + cos) (1 + cos) / 4 bump over the frame,
// sampled at pixel centres, rounded to gray levels. Row-major.
inline std::vector<double> smooth_image(std::size_t size) {
  std::vector<double> px(size * size);
  const double half = static_cast<double>(size) / 2.0;
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double u = (static_cast<double>(c) + 0.5 - half) / half;
      const double v = (static_cast<double>(r) + 0.5 - half) / half;
      px[r * size + c] = std::round(255.0 * (1 + std::cos(std::numbers::pi * u)) *
                                    (1 + std::cos(std::numbers::pi * v)) / 4.0);
    }
  }
  return px;
}

}  // namespace oracle
