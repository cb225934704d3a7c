#include "kantorovich/orlicz.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kantorovich/summation.hpp"

namespace kantorovich {

namespace {

double parse_parameter(std::string_view text, std::string_view spec) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("malformed phi-function spec '" + std::string(spec) + "'");
  }
  return value;
}

std::string format_name(std::string_view family, double parameter) {
  std::ostringstream s;
  s << family << ':' << parameter;
  return s.str();
}

}  // namespace

ModularFunction::ModularFunction(std::string name, std::function<double(double)> phi, bool convex)
    : name_(std::move(name)), phi_(std::move(phi)), convex_(convex) {
  if (!phi_) throw std::invalid_argument("phi-function '" + name_ + "' has no evaluation function");
  if (phi_(0.0) != 0.0) throw std::invalid_argument("phi-function '" + name_ + "' must vanish at 0");
  double previous = 0.0;
  for (double u : {1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0}) {
    const double v = phi_(u);
    if (!(v > 0.0) || v < previous) {
      throw std::invalid_argument("phi-function '" + name_ + "' must be positive and nondecreasing");
    }
    previous = v;
  }
  if (!(phi_(1e6) > 1e3)) throw std::invalid_argument("phi-function '" + name_ + "' must be unbounded");
}

ModularFunction power_phi(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("power phi-function needs p >= 1");
  return ModularFunction(format_name("power", p), [p](double u) { return std::pow(u, p); }, true);
}

ModularFunction exponential_phi(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("exponential phi-function needs alpha >= 1");
  }
  return ModularFunction(format_name("exp", alpha),
                         [alpha](double u) { return std::expm1(std::pow(u, alpha)); }, true);
}

ModularFunction parse_phi(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon != std::string_view::npos) {
    const auto family = spec.substr(0, colon);
    const double parameter = parse_parameter(spec.substr(colon + 1), spec);
    if (family == "power") return power_phi(parameter);
    if (family == "exp") return exponential_phi(parameter);
  }
  throw std::invalid_argument("unknown phi-function spec '" + std::string(spec) +
                              "' (expected power:<p> or exp:<alpha>)");
}

SampledField::SampledField(Box domain, std::vector<std::size_t> shape, std::vector<double> values)
    : domain_(std::move(domain)), shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_.empty() || shape_.size() != domain_.dims()) {
    throw std::invalid_argument("sampled field shape does not match its domain");
  }
  std::size_t count = 1;
  cell_volume_ = 1.0;
  for (std::size_t d = 0; d < shape_.size(); ++d) {
    if (shape_[d] == 0) throw std::invalid_argument("sampled field needs a positive grid shape");
    const double extent = domain_.upper[d] - domain_.lower[d];
    if (!(extent > 0.0)) throw std::invalid_argument("sampled field domain must have positive extent");
    count *= shape_[d];
    cell_volume_ *= extent / static_cast<double>(shape_[d]);
  }
  if (values_.size() != count) throw std::invalid_argument("sampled field value count does not match its shape");
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("sampled field values must be finite");
  }
}

std::vector<double> SampledField::centers(const Box& domain, const std::vector<std::size_t>& shape,
                                          std::size_t axis) {
  std::vector<double> c(shape.at(axis));
  const double lo = domain.lower.at(axis);
  const double step = (domain.upper.at(axis) - lo) / static_cast<double>(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = lo + (static_cast<double>(i) + 0.5) * step;
  return c;
}

SampledField SampledField::sample(const Box& domain, std::vector<std::size_t> shape,
                                  const std::function<double(const std::vector<double>&)>& f) {
  const std::size_t n = shape.size();
  if (domain.dims() != n) throw std::invalid_argument("sampled field shape does not match its domain");
  std::vector<std::vector<double>> axes;
  std::size_t count = 1;
  for (std::size_t d = 0; d < n; ++d) {
    axes.push_back(centers(domain, shape, d));
    count *= shape[d];
  }
  std::vector<double> values(count);
  std::vector<double> point(n);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t rem = c;
    for (std::size_t d = 0; d < n; ++d) {
      point[d] = axes[d][rem % shape[d]];
      rem /= shape[d];
    }
    values[c] = f(point);
  }
  return SampledField(domain, std::move(shape), std::move(values));
}

SampledField SampledField::with_values(std::vector<double> values) const {
  return SampledField(domain_, shape_, std::move(values));
}

SampledField SampledField::scaled(double factor) const {
  std::vector<double> v = values_;
  for (auto& x : v) x *= factor;
  return with_values(std::move(v));
}

bool SampledField::same_grid(const SampledField& other) const {
  return shape_ == other.shape_ && domain_.lower == other.domain_.lower &&
         domain_.upper == other.domain_.upper;
}

SampledField difference(const SampledField& a, const SampledField& b) {
  if (!a.same_grid(b)) throw std::invalid_argument("sampled fields live on different grids");
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] - b.values()[i];
  return a.with_values(std::move(v));
}

double modular(const ModularFunction& phi, const SampledField& field) {
  CompensatedSum sum;
  for (double v : field.values()) sum.add(phi(std::fabs(v)));
  return field.cell_volume() * sum.value();
}

double lp_norm(const SampledField& field, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  CompensatedSum sum;
  for (double v : field.values()) sum.add(std::pow(std::fabs(v), p));
  return std::pow(field.cell_volume() * sum.value(), 1.0 / p);
}

double luxemburg_norm(const ModularFunction& phi, const SampledField& field, double tol,
                      LuxemburgForm form) {
  if (!phi.convex()) throw std::invalid_argument("Luxemburg norm needs a convex phi-function");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (std::all_of(field.values().begin(), field.values().end(), [](double v) { return v == 0.0; })) {
    return 0.0;
  }
  // admissible(lambda) is monotone: false below the infimum, true above it.
  auto admissible = [&](double lambda) {
    const double m = modular(phi, field.scaled(1.0 / lambda));
    return m <= (form == LuxemburgForm::printed ? lambda : 1.0);
  };

  double lo = 1.0, hi = 1.0;
  int steps = 0;
  if (admissible(1.0)) {
    while (admissible(lo)) {
      hi = lo;
      lo *= 0.5;
      if (++steps > 60) throw std::runtime_error("Luxemburg norm: no bracket below 1");
    }
  } else {
    while (!admissible(hi)) {
      lo = hi;
      hi *= 2.0;
      if (++steps > 60) throw std::runtime_error("Luxemburg norm: no bracket above 1");
    }
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? hi : lo) = mid;
  }
  return hi;
}

double sup_error(const SampledField& a, const SampledField& b) {
  if (!a.same_grid(b)) throw std::invalid_argument("sampled fields live on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    m = std::max(m, std::fabs(a.values()[i] - b.values()[i]));
  }
  return m;
}

}  // namespace kantorovich
