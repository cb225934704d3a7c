#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kantorovich/orlicz.hpp"
#include "kantorovich/sampling.hpp"

namespace kantorovich {

/// Built-in test signals for convergence sweeps.
///  - smooth: f(x, y) = (1 + cos(pi x)) (1 + cos(pi y)) / 4 on [-1, 1]^2, zero outside.
///  - step:   f = indicator of [0, 1], observed on [-2, 3].
enum class TestSignal { smooth, step };

TestSignal parse_test_signal(std::string_view name);
std::string to_string(TestSignal signal);

/// Error metric of S_w f - f: "sup", "lp:<p>" or "modular:<p>" (power phi, lambda = 1).
struct ErrorMetric {
  enum class Kind { sup, lp, modular };
  Kind kind = Kind::sup;
  double p = 2.0;

  std::string name() const;
};

ErrorMetric parse_metric(std::string_view spec);

/// Test signal with everything a sweep needs: cell means at any w, pointwise
/// values, the probe grid for the sup metric and the box for integral metrics.
class SignalCase {
 public:
  explicit SignalCase(TestSignal signal);

  std::size_t dims() const;
  double value(std::span<const double> x) const;
  CellMeans means(const SamplingScheme& scheme, double w) const;
  /// 201 points per axis over the signal support, endpoints included.
  std::vector<std::vector<double>> probe_grid() const;
  /// Midpoint grid for L^p and modular metrics.
  Box metric_domain() const;
  std::vector<std::size_t> metric_shape() const;

 private:
  TestSignal signal_;
};

struct SweepRow {
  double w;
  std::string metric;
  double value;
};

/// Error of S_w f against f for each w in w_list.
std::vector<SweepRow> convergence_sweep(std::string_view kernel_spec, TestSignal signal,
                                        const ErrorMetric& metric, const std::vector<double>& w_list,
                                        double truncation_tol = 1e-8);

/// CSV with header `w,metric,value`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace kantorovich
