#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kantorovich/kernels.hpp"
#include "kantorovich/scheme.hpp"

namespace kantorovich {

/// Piecewise-constant function on a tensor grid of intervals, zero outside
/// the grid. Piece p along axis d is (breaks[d][p], breaks[d][p + 1]].
/// Values are stored with axis 0 varying fastest.
struct StepFunction {
  std::vector<std::vector<double>> breaks;
  std::vector<double> values;

  std::size_t dims() const { return breaks.size(); }
  std::vector<std::size_t> shape() const;
  Box support() const;
  double operator()(std::span<const double> x) const;

  /// Throws std::invalid_argument if breaks are not strictly increasing or
  /// the value count does not match the grid.
  void validate() const;
};

/// Kantorovich cell means (w^n / A_k) * integral over R_k^w of f, for every
/// cell k in a rectangular index box. Cells outside the box have mean zero.
/// Values are stored with axis 0 varying fastest.
struct CellMeans {
  double w = 1.0;
  std::vector<IndexRange> index_box;
  std::vector<double> values;
  /// spacings[d][j] = t_{k+1} - t_k for k = index_box[d].first + j.
  std::vector<std::vector<double>> spacings;

  std::size_t dims() const { return index_box.size(); }
  std::vector<std::size_t> extents() const;
  /// Mean of cell k, or 0 outside the index box.
  double at(std::span<const long> k) const;
  /// A_k = product of the per-axis spacings.
  double cell_area(std::span<const long> k) const;
};

/// R_k^w = prod_i [t_{k_i} / w, t_{k_i + 1} / w].
Box cell_bounds(const SamplingScheme& scheme, double w, std::span<const long> k);

/// Exact cell means of a step function: per axis, the fraction of each cell
/// covered by each piece, contracted axis by axis. No quadrature involved.
CellMeans step_cell_means(const StepFunction& f, const SamplingScheme& scheme, double w);

/// Cell means of a function that vanishes outside `support`, by tensor
/// 10-point Gauss-Legendre quadrature over each cell clipped to the support.
CellMeans integrate_cell_means(const std::function<double(std::span<const double>)>& f,
                               const Box& support, const SamplingScheme& scheme, double w);

/// S_w bound to a kernel, a scheme and a truncation tolerance.
///
/// Axis i sums over nodes with |w x_i - t_k| <= R_i, where R_i is the factor's
/// truncation radius at the tolerance, intersected with the stored index box.
class KantorovichOperator {
 public:
  KantorovichOperator(ProductKernel kernel, SamplingScheme scheme, double truncation_tol = 1e-8);

  const ProductKernel& kernel() const { return kernel_; }
  const SamplingScheme& scheme() const { return scheme_; }
  const std::vector<double>& radii() const { return radii_; }

  /// Relative bound on the dropped series mass: prod_i (1 + tail_i) - 1.
  double truncation_bound() const { return truncation_bound_; }

  /// (S_w f)(x) from precomputed cell means.
  double evaluate(const CellMeans& means, std::span<const double> x) const;

  /// S_w f on the tensor grid grid[0] x grid[1] x ..., axis 0 fastest in the
  /// result. Requires a uniform scheme; throws std::invalid_argument otherwise.
  std::vector<double> evaluate_separable(const CellMeans& means,
                                         const std::vector<std::vector<double>>& grid) const;

 private:
  struct AxisWindow {
    long first = 0;  // offset into the index box
    std::vector<double> weights;
  };
  AxisWindow window(const CellMeans& means, std::size_t axis, double x) const;
  void check_means(const CellMeans& means) const;

  ProductKernel kernel_;
  SamplingScheme scheme_;
  std::vector<double> radii_;
  double truncation_bound_ = 0.0;
};

double evaluate_operator(const CellMeans& means, const ProductKernel& kernel,
                         const SamplingScheme& scheme, std::span<const double> x,
                         double truncation_tol = 1e-8);

std::vector<double> evaluate_operator_separable(const CellMeans& means, const ProductKernel& kernel,
                                                const SamplingScheme& scheme,
                                                const std::vector<std::vector<double>>& grid,
                                                double truncation_tol = 1e-8);

}  // namespace kantorovich
