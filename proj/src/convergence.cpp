#include "kantorovich/convergence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kantorovich {

namespace {

double bump(double t) { return std::fabs(t) <= 1.0 ? 0.5 * (1.0 + std::cos(std::numbers::pi * t)) : 0.0; }

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return v;
}

}  // namespace

TestSignal parse_test_signal(std::string_view name) {
  if (name == "smooth") return TestSignal::smooth;
  if (name == "step") return TestSignal::step;
  throw std::invalid_argument("unknown test signal '" + std::string(name) + "' (expected smooth or step)");
}

std::string to_string(TestSignal signal) { return signal == TestSignal::smooth ? "smooth" : "step"; }

std::string ErrorMetric::name() const {
  if (kind == Kind::sup) return "sup";
  std::ostringstream s;
  s << (kind == Kind::lp ? "lp:" : "modular:") << p;
  return s.str();
}

ErrorMetric parse_metric(std::string_view spec) {
  if (spec == "sup") return {};
  const auto colon = spec.find(':');
  if (colon != std::string_view::npos) {
    const auto family = spec.substr(0, colon);
    const auto text = spec.substr(colon + 1);
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
    const bool parsed = !text.empty() && ec == std::errc{} && ptr == text.data() + text.size();
    if (parsed && (family == "lp" || family == "modular")) {
      if (!(p >= 1.0)) throw std::invalid_argument("metric exponent must be >= 1");
      return {family == "lp" ? ErrorMetric::Kind::lp : ErrorMetric::Kind::modular, p};
    }
  }
  throw std::invalid_argument("unknown metric '" + std::string(spec) +
                              "' (expected sup, lp:<p> or modular:<p>)");
}

SignalCase::SignalCase(TestSignal signal) : signal_(signal) {}

std::size_t SignalCase::dims() const { return signal_ == TestSignal::smooth ? 2 : 1; }

double SignalCase::value(std::span<const double> x) const {
  if (signal_ == TestSignal::smooth) return bump(x[0]) * bump(x[1]);
  return (x[0] >= 0.0 && x[0] <= 1.0) ? 1.0 : 0.0;
}

CellMeans SignalCase::means(const SamplingScheme& scheme, double w) const {
  if (signal_ == TestSignal::smooth) {
    return integrate_cell_means([this](std::span<const double> x) { return value(x); },
                               Box{{-1.0, -1.0}, {1.0, 1.0}}, scheme, w);
  }
  return step_cell_means(StepFunction{{{0.0, 1.0}}, {1.0}}, scheme, w);
}

std::vector<std::vector<double>> SignalCase::probe_grid() const {
  if (signal_ == TestSignal::smooth) return {linspace(-1.0, 1.0, 201), linspace(-1.0, 1.0, 201)};
  return {linspace(-2.0, 3.0, 201)};
}

Box SignalCase::metric_domain() const {
  if (signal_ == TestSignal::smooth) return Box{{-1.5, -1.5}, {1.5, 1.5}};
  return Box{{-2.0}, {3.0}};
}

std::vector<std::size_t> SignalCase::metric_shape() const {
  // Grid lines fall on the step's jumps at 0 and 1, so the midpoint rule is exact for f.
  if (signal_ == TestSignal::smooth) return {600, 600};
  return {20000};
}

std::vector<SweepRow> convergence_sweep(std::string_view kernel_spec, TestSignal signal,
                                        const ErrorMetric& metric, const std::vector<double>& w_list,
                                        double truncation_tol) {
  if (w_list.empty()) throw std::invalid_argument("w list is empty");
  const SignalCase sc(signal);
  const auto scheme = SamplingScheme::uniform(sc.dims());
  const KantorovichOperator op(make_product_kernel(kernel_spec, sc.dims()), scheme, truncation_tol);

  std::vector<SweepRow> rows;
  for (double w : w_list) {
    const CellMeans means = sc.means(scheme, w);
    double value = 0.0;
    if (metric.kind == ErrorMetric::Kind::sup) {
      const auto grid = sc.probe_grid();
      const auto approx = op.evaluate_separable(means, grid);
      std::vector<double> point(sc.dims());
      for (std::size_t c = 0; c < approx.size(); ++c) {
        std::size_t rem = c;
        for (std::size_t d = 0; d < sc.dims(); ++d) {
          point[d] = grid[d][rem % grid[d].size()];
          rem /= grid[d].size();
        }
        value = std::max(value, std::fabs(approx[c] - sc.value(point)));
      }
    } else {
      const Box domain = sc.metric_domain();
      const auto shape = sc.metric_shape();
      std::vector<std::vector<double>> grid;
      for (std::size_t d = 0; d < sc.dims(); ++d) grid.push_back(SampledField::centers(domain, shape, d));
      const SampledField approx(domain, shape, op.evaluate_separable(means, grid));
      const SampledField exact =
          SampledField::sample(domain, shape, [&](const std::vector<double>& x) { return sc.value(x); });
      const SampledField err = difference(approx, exact);
      value = metric.kind == ErrorMetric::Kind::lp ? lp_norm(err, metric.p)
                                                   : modular(power_phi(metric.p), err);
    }
    rows.push_back({w, metric.name(), value});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "w,metric,value\n";
  const auto old = out.precision(17);
  for (const auto& r : rows) out << r.w << ',' << r.metric << ',' << r.value << '\n';
  out.precision(old);
}

}  // namespace kantorovich
