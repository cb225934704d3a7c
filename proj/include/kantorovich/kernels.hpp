#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kantorovich/scheme.hpp"

namespace kantorovich {

/// Normalized sinc: sin(pi x) / (pi x), with sinc(0) = 1. Exactly zero at
/// nonzero integers.
double sinc(double x);

/// Kernel vanishes outside [lower, upper] (node units).
struct CompactInterval {
  double lower;
  double upper;
};

/// |chi(x)| <= constant * |x|^(-exponent) for |x| >= 1, with exponent > 1.
struct PolynomialDecay {
  double exponent;
  double constant;
};

using KernelSupport = std::variant<CompactInterval, PolynomialDecay>;

/// A real kernel chi_i on R together with the support or decay metadata the
/// truncation logic relies on. Immutable and cheap to copy.
class UnivariateKernel {
 public:
  UnivariateKernel(std::string name, std::function<double(double)> fn, KernelSupport support,
                   std::optional<double> normalization = std::nullopt);

  /// Zero outside a compact support, regardless of what the wrapped function returns.
  double operator()(double x) const;

  const std::string& name() const { return name_; }
  const KernelSupport& support() const { return support_; }
  bool has_compact_support() const { return std::holds_alternative<CompactInterval>(support_); }

  /// Multiplicative normalization built into the kernel (Jackson c_k), if any.
  std::optional<double> normalization() const { return normalization_; }

 private:
  std::string name_;
  std::function<double(double)> fn_;
  KernelSupport support_;
  std::optional<double> normalization_;
};

/// chi(x) = prod_i chi_i(x_i).
class ProductKernel {
 public:
  /// Throws std::invalid_argument for an empty factor list.
  explicit ProductKernel(std::vector<UnivariateKernel> factors);

  std::size_t dims() const { return factors_.size(); }
  const UnivariateKernel& factor(std::size_t i) const { return factors_.at(i); }
  const std::vector<UnivariateKernel>& factors() const { return factors_; }

  double operator()(std::span<const double> x) const;

  /// Product of the factor supports; nullopt if any factor is non-compact.
  std::optional<Box> support_box() const;
  /// Slowest decay exponent among non-compact factors; nullopt if all compact.
  std::optional<double> decay_exponent() const;

  std::string name() const;

 private:
  std::vector<UnivariateKernel> factors_;
};

UnivariateKernel make_fejer();

/// Central B-spline M_k via its explicit truncated-power sum, 1 <= k <= 20.
UnivariateKernel make_central_bspline(int k);

/// c_k = 1 / integral of sinc^(2k)(u / (2 k pi alpha)) over R.
///
/// The integral is split at T (in units of the sinc argument): [0, T] is
/// integrated piecewise with adaptive Gauss-Kronrod and the tail beyond T is
/// the mean of sin^(2k) times the envelope 1/(pi t)^(2k), whose remainder is
/// bounded analytically. T is chosen so that bound stays below tol / 2.
/// Throws std::runtime_error when tol cannot be met within max_evaluations.
double jackson_norm_const(int k, double alpha, double tol = 1e-10,
                          long max_evaluations = 50'000'000);

UnivariateKernel make_jackson(int k, double alpha, double tol = 1e-10);

ProductKernel make_product(std::vector<UnivariateKernel> factors);

/// Parses "fejer", "bspline:<k>", "jackson:<k>" or "jackson:<k>:<alpha>".
/// Throws std::invalid_argument on a malformed spec.
UnivariateKernel parse_kernel(std::string_view spec);

/// Same univariate kernel along every axis.
ProductKernel make_product_kernel(std::string_view spec, std::size_t dims);

/// Half-width R of the summation window. Exact half-width of the support for
/// compact kernels; for decaying kernels the smallest R whose envelope bound on
/// sum_{|u-k|>R} |chi(u-k)| is below eps.
double truncation_radius(const UnivariateKernel& kernel, double eps);

/// Envelope bound on sum_{|u - t_k| > radius} |chi(u - t_k)| for unit spacing.
/// Zero for compact kernels once radius covers the support.
double lattice_tail_bound(const UnivariateKernel& kernel, double radius);

struct PartitionReport {
  double max_deviation = 0.0;  ///< max over probes of |sum_k chi(u - t_k) - 1|
  double tail_bound = 0.0;     ///< bound on what the truncated sums left out
  std::vector<double> radius;  ///< half-width used per axis
};

/// Partition-of-unity defect of a product kernel on a tensor sampling scheme,
/// probed at quasi-random points. The sum factorizes over axes. Each axis is
/// truncated at truncation_radius(factor, truncation_tol), capped at
/// max_half_width; the report carries the tail bound of the radius actually used.
PartitionReport check_partition_of_unity(const ProductKernel& kernel,
                                         const SamplingScheme& scheme, int probe_count,
                                         double truncation_tol = 1e-12,
                                         double max_half_width = 524288.0);

struct MomentEstimate {
  double value = 0.0;       ///< max over probes; a lower bound of the true sup
  double tail_bound = 0.0;  ///< envelope bound on the truncated part
};

/// Discrete absolute moment sup_u sum_k |chi(u - k)| |u - k|^beta on uniform
/// nodes, probed at u = j / probe_count in [0, 1). For decaying kernels beta
/// must satisfy beta < exponent - 1 (std::invalid_argument otherwise).
MomentEstimate moment_m_beta(const UnivariateKernel& kernel, double beta, int probe_count,
                             double truncation_tol = 1e-10,
                             double max_half_width = 524288.0);

struct IntegralEstimate {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Integral of chi over R (signed, or of |chi| when absolute is set).
IntegralEstimate kernel_integral(const UnivariateKernel& kernel, bool absolute = false,
                                 double tol = 1e-10);

/// ||chi||_1 for a product kernel: product of the factor L1 norms.
double l1_norm(const ProductKernel& kernel, double tol = 1e-10);

/// Writes `x,value` rows for `samples` equispaced points of [lower, upper].
void write_kernel_curve_csv(std::ostream& out, const UnivariateKernel& kernel, double lower,
                            double upper, int samples);

}  // namespace kantorovich
