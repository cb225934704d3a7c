#include "kantorovich/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kantorovich/summation.hpp"

namespace kantorovich {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(pi x) with exact argument reduction; zero at every integer.
double sin_pi(double x) {
  double r = x - 2.0 * std::nearbyint(0.5 * x);  // r in [-1, 1]
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  return std::sin(kPi * r);
}

// Integrates f over [a, b] split into pieces of length at most `piece`.
// Adds evaluation count to `evaluations`; throws once it exceeds `budget`.
IntegralEstimate integrate_pieces(const std::function<double(double)>& f, double a, double b,
                                  double piece, long budget, long& evaluations) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  CompensatedSum sum;
  CompensatedSum err;
  const long pieces = std::max(1L, static_cast<long>(std::ceil((b - a) / piece - 1e-12)));
  for (long i = 0; i < pieces; ++i) {
    const double lo = a + static_cast<double>(i) * piece;
    const double hi = (i + 1 == pieces) ? b : a + static_cast<double>(i + 1) * piece;
    auto counted = [&](double x) {
      ++evaluations;
      return f(x);
    };
    double error = 0.0;
    sum.add(Quad::integrate(counted, lo, hi, 12, 1e-13, &error));
    err.add(error);
    if (evaluations > budget) {
      throw std::runtime_error("quadrature evaluation budget exhausted");
    }
  }
  return {sum.value(), err.value()};
}

// sum_{j>=0} C (R + j)^(-g) <= C R^(-g) + C R^(1-g) / (g - 1), per side; log domain
// so that Jackson's large envelope constants stay finite.
double envelope_tail(double log_constant, double exponent, double radius) {
  if (radius <= 0.0) return std::numeric_limits<double>::infinity();
  const double r = std::max(radius, 1.0);
  const double lr = std::log(r);
  const double a = std::exp(log_constant - exponent * lr);
  const double b = std::exp(log_constant + (1.0 - exponent) * lr) / (exponent - 1.0);
  return 2.0 * (a + b);
}

// Smallest R >= 1 with tail(R) < eps, for a decreasing tail function.
template <class Tail>
double solve_radius(Tail tail, double eps) {
  double hi = 1.0;
  if (tail(hi) < eps) return hi;
  double lo = hi;
  while (!(tail(hi) < eps)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("truncation radius does not exist for this tolerance");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) < eps ? hi : lo) = mid;
  }
  return hi;
}

// Additive recurrence with the generalized golden ratio; well-spread probes in [0,1)^n.
std::vector<std::vector<double>> quasi_random_probes(std::size_t dims, int count) {
  double phi = 2.0;
  for (int i = 0; i < 64; ++i) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(dims + 1));
  std::vector<double> alpha(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    alpha[d] = std::fmod(std::pow(1.0 / phi, static_cast<double>(d + 1)), 1.0);
  }
  std::vector<std::vector<double>> probes(static_cast<std::size_t>(count), std::vector<double>(dims));
  for (int j = 0; j < count; ++j) {
    for (std::size_t d = 0; d < dims; ++d) {
      const double v = 0.5 + alpha[d] * static_cast<double>(j + 1);
      probes[static_cast<std::size_t>(j)][d] = v - std::floor(v);
    }
  }
  return probes;
}

struct AxisSum {
  double value;
  double tail;
};

AxisSum axis_lattice_sum(const UnivariateKernel& chi, const NodeSequence& axis, double u,
                         double radius, double tail) {
  const IndexRange ks = axis.nodes_within(u - radius, u + radius);
  CompensatedSum sum;
  for (long k = ks.first; k <= ks.last; ++k) sum.add(chi(u - axis.node(k)));
  return {sum.value(), tail};
}

double parse_number(std::string_view text, std::string_view spec) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw std::invalid_argument("malformed kernel spec '" + std::string(spec) + "'");
  }
  return value;
}

int parse_order(std::string_view text, std::string_view spec) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw std::invalid_argument("malformed kernel spec '" + std::string(spec) + "'");
  }
  return value;
}

}  // namespace

double sinc(double x) {
  const double t = kPi * x;
  if (std::fabs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return sin_pi(x) / t;
}

UnivariateKernel::UnivariateKernel(std::string name, std::function<double(double)> fn,
                                   KernelSupport support, std::optional<double> normalization)
    : name_(std::move(name)),
      fn_(std::move(fn)),
      support_(support),
      normalization_(normalization) {
  if (!fn_) throw std::invalid_argument("kernel '" + name_ + "' has no evaluation function");
  if (const auto* c = std::get_if<CompactInterval>(&support_)) {
    if (!(c->lower < c->upper)) throw std::invalid_argument("kernel support must be a nonempty interval");
  } else {
    const auto& d = std::get<PolynomialDecay>(support_);
    if (!(d.exponent > 1.0) || !(d.constant > 0.0) || !std::isfinite(d.constant)) {
      throw std::invalid_argument("kernel decay needs exponent > 1 and a finite positive constant");
    }
  }
}

double UnivariateKernel::operator()(double x) const {
  if (const auto* c = std::get_if<CompactInterval>(&support_)) {
    if (x < c->lower || x > c->upper) return 0.0;
  }
  return fn_(x);
}

ProductKernel::ProductKernel(std::vector<UnivariateKernel> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("product kernel needs at least one factor");
}

double ProductKernel::operator()(std::span<const double> x) const {
  if (x.size() != factors_.size()) {
    throw std::invalid_argument("point dimension does not match kernel dimension");
  }
  double value = 1.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) value *= factors_[i](x[i]);
  return value;
}

std::optional<Box> ProductKernel::support_box() const {
  Box box;
  for (const auto& f : factors_) {
    const auto* c = std::get_if<CompactInterval>(&f.support());
    if (c == nullptr) return std::nullopt;
    box.lower.push_back(c->lower);
    box.upper.push_back(c->upper);
  }
  return box;
}

std::optional<double> ProductKernel::decay_exponent() const {
  std::optional<double> slowest;
  for (const auto& f : factors_) {
    if (const auto* d = std::get_if<PolynomialDecay>(&f.support())) {
      slowest = slowest ? std::min(*slowest, d->exponent) : d->exponent;
    }
  }
  return slowest;
}

std::string ProductKernel::name() const {
  std::string out;
  for (const auto& f : factors_) {
    if (!out.empty()) out += " x ";
    out += f.name();
  }
  return out;
}

UnivariateKernel make_fejer() {
  // 0.5 sinc^2(x/2) <= 0.5 (2 / (pi |x|))^2.
  return UnivariateKernel(
      "fejer",
      [](double x) {
        const double s = sinc(0.5 * x);
        return 0.5 * s * s;
      },
      PolynomialDecay{2.0, 2.0 / (kPi * kPi)});
}

UnivariateKernel make_central_bspline(int k) {
  if (k < 1) throw std::invalid_argument("B-spline order must be at least 1");
  if (k > 20) throw std::invalid_argument("B-spline order above 20 is not supported");

  std::vector<double> coeff(static_cast<std::size_t>(k) + 1);
  double factorial = 1.0;
  for (int i = 2; i < k; ++i) factorial *= i;
  double binom = 1.0;
  for (int i = 0; i <= k; ++i) {
    coeff[static_cast<std::size_t>(i)] = ((i % 2 == 0) ? binom : -binom) / factorial;
    binom = binom * (k - i) / (i + 1);
  }
  const double half = 0.5 * k;

  auto eval = [coeff, k, half](double x) {
    // Even function: evaluate on the left half, where fewer truncated powers
    // are active and the alternating sum cancels less.
    const double y = -std::fabs(x);
    if (y <= -half) return (k == 1 && y == -half) ? 0.5 : 0.0;
    CompensatedSum sum;
    for (int i = 0; i <= k; ++i) {
      const double base = half + y - i;
      if (base < 0.0) break;
      double p;
      if (k == 1) {
        p = base > 0.0 ? 1.0 : 0.5;
      } else {
        p = std::pow(base, k - 1);
      }
      sum.add(coeff[static_cast<std::size_t>(i)] * p);
    }
    return std::max(0.0, sum.value());
  };
  return UnivariateKernel("bspline:" + std::to_string(k), eval, CompactInterval{-half, half});
}

double jackson_norm_const(int k, double alpha, double tol, long max_evaluations) {
  if (k < 1) throw std::invalid_argument("Jackson order must be at least 1");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw std::invalid_argument("Jackson alpha must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  const double two_k = 2.0 * k;
  const double scale = two_k * kPi * alpha;  // u = scale * t
  // Mean of sin^(2k) over a period: C(2k, k) / 4^k.
  double mean_power = 1.0;
  for (int j = 1; j <= k; ++j) mean_power *= (2.0 * j - 1.0) / (2.0 * j);

  // Both tails: |remainder| <= 2 * scale * (1/2) / (pi T)^(2k) <= tol / 2.
  const double log_t = (std::log(2.0 * scale / tol) - two_k * std::log(kPi)) / two_k;
  const double t_cut = std::max(4.0, std::ceil(std::exp(log_t)));
  const double remainder = 2.0 * scale * 0.5 * std::exp(-two_k * std::log(kPi * t_cut));

  long evaluations = 0;
  const auto core = integrate_pieces(
      [k](double t) { return std::pow(sinc(t), 2 * k); }, 0.0, t_cut, 1.0, max_evaluations,
      evaluations);
  const double mean_tail =
      mean_power * std::exp(-two_k * std::log(kPi) - (two_k - 1.0) * std::log(t_cut)) / (two_k - 1.0);

  const double integral = 2.0 * scale * (core.value + mean_tail);
  const double error = 2.0 * scale * core.error_bound + remainder;
  if (!(error <= tol)) {
    throw std::runtime_error("Jackson normalization: estimated error " + std::to_string(error) +
                             " exceeds tolerance");
  }
  return 1.0 / integral;
}

UnivariateKernel make_jackson(int k, double alpha, double tol) {
  const double c = jackson_norm_const(k, alpha, tol);
  const double scale = 2.0 * k * kPi * alpha;
  // |sinc(x / scale)| <= scale / (pi |x|) = 2 k alpha / |x|.
  const double envelope = c * std::pow(2.0 * k * alpha, 2.0 * k);
  if (!std::isfinite(envelope)) throw std::invalid_argument("Jackson order too large for its decay envelope");

  std::ostringstream name;
  name << "jackson:" << k << ':' << alpha;
  return UnivariateKernel(
      name.str(), [c, k, scale](double x) { return c * std::pow(sinc(x / scale), 2 * k); },
      PolynomialDecay{2.0 * k, envelope}, c);
}

ProductKernel make_product(std::vector<UnivariateKernel> factors) {
  return ProductKernel(std::move(factors));
}

UnivariateKernel parse_kernel(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const auto family = parts.front();
  if (family == "fejer" && parts.size() == 1) return make_fejer();
  if (family == "bspline" && parts.size() == 2) return make_central_bspline(parse_order(parts[1], spec));
  if (family == "jackson" && (parts.size() == 2 || parts.size() == 3)) {
    const int k = parse_order(parts[1], spec);
    const double alpha = parts.size() == 3 ? parse_number(parts[2], spec) : 1.0;
    return make_jackson(k, alpha);
  }
  throw std::invalid_argument("unknown kernel spec '" + std::string(spec) +
                              "' (expected fejer, bspline:<k> or jackson:<k>[:<alpha>])");
}

ProductKernel make_product_kernel(std::string_view spec, std::size_t dims) {
  if (dims == 0) throw std::invalid_argument("product kernel needs at least one dimension");
  return ProductKernel(std::vector<UnivariateKernel>(dims, parse_kernel(spec)));
}

double truncation_radius(const UnivariateKernel& kernel, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("truncation tolerance must be positive");
  if (const auto* c = std::get_if<CompactInterval>(&kernel.support())) {
    return std::max(std::fabs(c->lower), std::fabs(c->upper));
  }
  const auto& d = std::get<PolynomialDecay>(kernel.support());
  const double log_c = std::log(d.constant);
  return solve_radius([&](double r) { return envelope_tail(log_c, d.exponent, r); }, eps);
}

double lattice_tail_bound(const UnivariateKernel& kernel, double radius) {
  if (const auto* c = std::get_if<CompactInterval>(&kernel.support())) {
    return radius >= std::max(std::fabs(c->lower), std::fabs(c->upper))
               ? 0.0
               : std::numeric_limits<double>::infinity();
  }
  const auto& d = std::get<PolynomialDecay>(kernel.support());
  return envelope_tail(std::log(d.constant), d.exponent, radius);
}

PartitionReport check_partition_of_unity(const ProductKernel& kernel, const SamplingScheme& scheme,
                                         int probe_count, double truncation_tol,
                                         double max_half_width) {
  if (scheme.dims() != kernel.dims()) {
    throw std::invalid_argument("scheme dimension does not match kernel dimension");
  }
  if (probe_count < 1) throw std::invalid_argument("probe_count must be positive");

  const std::size_t n = kernel.dims();
  PartitionReport report;
  std::vector<double> tails(n);
  std::vector<double> lo(n), width(n);
  for (std::size_t d = 0; d < n; ++d) {
    const auto& chi = kernel.factor(d);
    const double r = std::min(truncation_radius(chi, truncation_tol), max_half_width);
    report.radius.push_back(r);
    const auto& axis = scheme.axis(d);
    // Envelope bounds assume unit spacing; rescale by the smallest spacing.
    const double delta = axis.min_spacing();
    tails[d] = chi.has_compact_support() ? 0.0 : lattice_tail_bound(chi, r) / std::min(1.0, delta);
    if (axis.is_uniform()) {
      lo[d] = 0.0;
      width[d] = 1.0;
    } else {
      const auto win = *axis.node_window();
      const double a = axis.node(win.first);
      const double b = axis.node(win.last);
      if (b - a > 2.0 * r) {
        lo[d] = a + r;
        width[d] = b - a - 2.0 * r;
      } else {
        lo[d] = a;
        width[d] = b - a;
      }
    }
  }

  for (const auto& p : quasi_random_probes(n, probe_count)) {
    double prod = 1.0;
    double prod_upper = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
      const double u = lo[d] + p[d] * width[d];
      const auto s = axis_lattice_sum(kernel.factor(d), scheme.axis(d), u, report.radius[d], tails[d]);
      prod *= s.value;
      prod_upper *= std::fabs(s.value) + s.tail;
    }
    report.max_deviation = std::max(report.max_deviation, std::fabs(prod - 1.0));
    report.tail_bound = std::max(report.tail_bound, prod_upper - std::fabs(prod));
  }
  return report;
}

MomentEstimate moment_m_beta(const UnivariateKernel& kernel, double beta, int probe_count,
                             double truncation_tol, double max_half_width) {
  if (!(beta >= 0.0)) throw std::invalid_argument("moment order beta must be >= 0");
  if (probe_count < 1) throw std::invalid_argument("probe_count must be positive");

  double radius = 0.0;
  double tail = 0.0;
  if (const auto* c = std::get_if<CompactInterval>(&kernel.support())) {
    radius = std::max(std::fabs(c->lower), std::fabs(c->upper));
  } else {
    const auto& d = std::get<PolynomialDecay>(kernel.support());
    if (!(beta < d.exponent - 1.0)) {
      throw std::invalid_argument("moment of order " + std::to_string(beta) + " diverges for " +
                                  kernel.name() + " (needs beta < " +
                                  std::to_string(d.exponent - 1.0) + ")");
    }
    // |chi(x)| |x|^beta <= C |x|^-(exponent - beta).
    const double log_c = std::log(d.constant);
    const double g = d.exponent - beta;
    auto tail_at = [&](double r) { return envelope_tail(log_c, g, r); };
    radius = std::min(solve_radius(tail_at, truncation_tol), max_half_width);
    tail = tail_at(radius);
  }

  MomentEstimate est;
  est.tail_bound = tail;
  const NodeSequence axis = NodeSequence::uniform();
  for (int j = 0; j < probe_count; ++j) {
    const double u = static_cast<double>(j) / probe_count;
    const IndexRange ks = axis.nodes_within(u - radius, u + radius);
    CompensatedSum sum;
    for (long k = ks.first; k <= ks.last; ++k) {
      const double x = u - static_cast<double>(k);
      const double weight = beta == 0.0 ? 1.0 : std::pow(std::fabs(x), beta);
      sum.add(std::fabs(kernel(x)) * weight);
    }
    est.value = std::max(est.value, sum.value());
  }
  return est;
}

IntegralEstimate kernel_integral(const UnivariateKernel& kernel, bool absolute, double tol) {
  auto f = [&](double x) { return absolute ? std::fabs(kernel(x)) : kernel(x); };
  long evaluations = 0;
  constexpr long kBudget = 200'000'000;
  if (const auto* c = std::get_if<CompactInterval>(&kernel.support())) {
    // Unit pieces from the left end line up with B-spline knots.
    return integrate_pieces(f, c->lower, c->upper, 1.0, kBudget, evaluations);
  }
  const auto& d = std::get<PolynomialDecay>(kernel.support());
  // integral_{|x|>R} C |x|^-p = 2 C R^(1-p) / (p - 1) <= tol / 2.
  const double log_r =
      (std::log(4.0 * d.constant / ((d.exponent - 1.0) * tol))) / (d.exponent - 1.0);
  const double r = std::max(1.0, std::ceil(std::exp(log_r)));
  const double tail = 2.0 * d.constant * std::pow(r, 1.0 - d.exponent) / (d.exponent - 1.0);
  auto est = integrate_pieces(f, -r, r, 1.0, kBudget, evaluations);
  est.error_bound += tail;
  return est;
}

double l1_norm(const ProductKernel& kernel, double tol) {
  double norm = 1.0;
  for (const auto& f : kernel.factors()) norm *= kernel_integral(f, true, tol).value;
  return norm;
}

void write_kernel_curve_csv(std::ostream& out, const UnivariateKernel& kernel, double lower,
                            double upper, int samples) {
  if (samples < 2) throw std::invalid_argument("curve export needs at least two samples");
  if (!(lower < upper)) throw std::invalid_argument("curve export needs lower < upper");
  out << "x,value\n";
  const auto old_precision = out.precision(17);
  for (int i = 0; i < samples; ++i) {
    const double x = lower + (upper - lower) * static_cast<double>(i) / (samples - 1);
    out << x << ',' << kernel(x) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace kantorovich
