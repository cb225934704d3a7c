#include "kantorovich/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "kantorovich/summation.hpp"

namespace kantorovich {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto e : shape) n *= e;
  return n;
}

// Sparse banded weights for one axis: output g reads input indices
// first[g], first[g] + 1, ... with the given weights.
struct AxisWeights {
  std::vector<long> first;
  std::vector<std::vector<double>> weights;
};

// Contracts `axis` of a tensor (axis 0 fastest). The output extent along
// `axis` is weights.first.size(). Terms of every output entry are added in
// increasing input index, so the result does not depend on anything else.
std::vector<double> contract_axis(const std::vector<double>& in, std::vector<std::size_t>& shape,
                                  std::size_t axis, const AxisWeights& weights) {
  std::size_t inner = 1;
  for (std::size_t d = 0; d < axis; ++d) inner *= shape[d];
  std::size_t outer = 1;
  for (std::size_t d = axis + 1; d < shape.size(); ++d) outer *= shape[d];
  const std::size_t extent_in = shape[axis];
  const std::size_t extent_out = weights.first.size();

  std::vector<double> out(inner * extent_out * outer, 0.0);
  std::vector<CompensatedSum> acc(inner);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t g = 0; g < extent_out; ++g) {
      std::fill(acc.begin(), acc.end(), CompensatedSum{});
      const auto& wg = weights.weights[g];
      for (std::size_t j = 0; j < wg.size(); ++j) {
        const std::size_t k = static_cast<std::size_t>(weights.first[g]) + j;
        const double wt = wg[j];
        const double* row = in.data() + inner * (k + extent_in * o);
        for (std::size_t i = 0; i < inner; ++i) acc[i].add(wt * row[i]);
      }
      double* dst = out.data() + inner * (g + extent_out * o);
      for (std::size_t i = 0; i < inner; ++i) dst[i] = acc[i].value();
    }
  }
  shape[axis] = extent_out;
  return out;
}

// Gauss-Legendre rule on [-1, 1], full symmetric node set.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss10() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, 10>;
    GaussRule r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.nodes.push_back(-x[i]);
      r.weights.push_back(w[i]);
      r.nodes.push_back(x[i]);
      r.weights.push_back(w[i]);
    }
    return r;
  }();
  return rule;
}

IndexRange cells_for_interval(const NodeSequence& axis, double w, double lo, double hi) {
  IndexRange cells = axis.cells_overlapping(w * lo, w * hi);
  if (const auto win = axis.node_window()) {
    // Explicit nodes must cover the support, otherwise part of f would be lost.
    if (axis.node(win->first) > w * lo || axis.node(win->last) < w * hi) {
      throw std::invalid_argument("explicit nodes do not cover the function support at this w");
    }
  }
  return cells;
}

void check_w(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("sampling rate w must be positive");
}

}  // namespace

std::vector<std::size_t> StepFunction::shape() const {
  std::vector<std::size_t> s;
  for (const auto& b : breaks) s.push_back(b.size() - 1);
  return s;
}

Box StepFunction::support() const {
  Box box;
  for (const auto& b : breaks) {
    box.lower.push_back(b.front());
    box.upper.push_back(b.back());
  }
  return box;
}

void StepFunction::validate() const {
  if (breaks.empty()) throw std::invalid_argument("step function needs at least one dimension");
  for (const auto& b : breaks) {
    if (b.size() < 2) throw std::invalid_argument("step function axis needs at least one piece");
    for (std::size_t i = 1; i < b.size(); ++i) {
      if (!(b[i] > b[i - 1])) throw std::invalid_argument("step function breaks must be strictly increasing");
    }
  }
  if (values.size() != product(shape())) {
    throw std::invalid_argument("step function value count does not match its grid");
  }
}

double StepFunction::operator()(std::span<const double> x) const {
  if (x.size() != dims()) throw std::invalid_argument("point dimension does not match step function");
  std::size_t index = 0;
  std::size_t stride = 1;
  for (std::size_t d = 0; d < dims(); ++d) {
    const auto& b = breaks[d];
    const auto it = std::lower_bound(b.begin(), b.end(), x[d]);  // first break >= x
    if (it == b.begin() || it == b.end()) return 0.0;
    index += stride * static_cast<std::size_t>(it - b.begin() - 1);
    stride *= b.size() - 1;
  }
  return values[index];
}

std::vector<std::size_t> CellMeans::extents() const {
  std::vector<std::size_t> e;
  for (const auto& r : index_box) e.push_back(static_cast<std::size_t>(r.size()));
  return e;
}

double CellMeans::at(std::span<const long> k) const {
  if (k.size() != dims()) throw std::invalid_argument("cell index dimension mismatch");
  std::size_t index = 0;
  std::size_t stride = 1;
  for (std::size_t d = 0; d < dims(); ++d) {
    const auto& r = index_box[d];
    if (k[d] < r.first || k[d] > r.last) return 0.0;
    index += stride * static_cast<std::size_t>(k[d] - r.first);
    stride *= static_cast<std::size_t>(r.size());
  }
  return values[index];
}

double CellMeans::cell_area(std::span<const long> k) const {
  if (k.size() != dims()) throw std::invalid_argument("cell index dimension mismatch");
  double area = 1.0;
  for (std::size_t d = 0; d < dims(); ++d) {
    const auto& r = index_box[d];
    if (k[d] < r.first || k[d] > r.last) throw std::out_of_range("cell outside the stored index box");
    area *= spacings[d][static_cast<std::size_t>(k[d] - r.first)];
  }
  return area;
}

Box cell_bounds(const SamplingScheme& scheme, double w, std::span<const long> k) {
  check_w(w);
  if (k.size() != scheme.dims()) throw std::invalid_argument("cell index dimension mismatch");
  Box box;
  for (std::size_t d = 0; d < k.size(); ++d) {
    box.lower.push_back(scheme.axis(d).node(k[d]) / w);
    box.upper.push_back(scheme.axis(d).node(k[d] + 1) / w);
  }
  return box;
}

CellMeans step_cell_means(const StepFunction& f, const SamplingScheme& scheme, double w) {
  check_w(w);
  f.validate();
  if (f.dims() != scheme.dims()) throw std::invalid_argument("step function and scheme dimensions differ");

  CellMeans means;
  means.w = w;
  std::vector<std::size_t> shape = f.shape();
  std::vector<double> data = f.values;
  for (std::size_t d = 0; d < f.dims(); ++d) {
    const auto& axis = scheme.axis(d);
    const auto& b = f.breaks[d];
    const IndexRange cells = cells_for_interval(axis, w, b.front(), b.back());
    means.index_box.push_back(cells);

    // Overlaps measured in node units, so a cell inside one piece gets weight
    // exactly spacing / spacing = 1.
    std::vector<double> scaled(b.size());
    for (std::size_t p = 0; p < b.size(); ++p) scaled[p] = w * b[p];
    AxisWeights aw;
    std::vector<double> spacing;
    for (long k = cells.first; k <= cells.last; ++k) {
      const double lo = axis.node(k);
      const double hi = axis.node(k + 1);
      const double delta = hi - lo;
      spacing.push_back(delta);
      // Pieces p with scaled[p] < hi and scaled[p + 1] > lo.
      auto p0 = std::upper_bound(scaled.begin(), scaled.end(), lo) - scaled.begin() - 1;
      p0 = std::max<long>(p0, 0);
      std::vector<double> weights;
      for (auto p = static_cast<std::size_t>(p0); p + 1 < scaled.size() && scaled[p] < hi; ++p) {
        const double overlap = std::min(hi, scaled[p + 1]) - std::max(lo, scaled[p]);
        weights.push_back(overlap > 0.0 ? overlap / delta : 0.0);
      }
      aw.first.push_back(p0);
      aw.weights.push_back(std::move(weights));
    }
    means.spacings.push_back(std::move(spacing));
    data = contract_axis(data, shape, d, aw);
  }
  means.values = std::move(data);
  return means;
}

CellMeans integrate_cell_means(const std::function<double(std::span<const double>)>& f,
                               const Box& support, const SamplingScheme& scheme, double w) {
  check_w(w);
  const std::size_t n = scheme.dims();
  if (support.dims() != n) throw std::invalid_argument("support and scheme dimensions differ");
  const auto& rule = gauss10();
  const std::size_t q = rule.nodes.size();

  CellMeans means;
  means.w = w;
  // Per axis and cell: quadrature abscissae (in x units) and weights already
  // divided by the cell width, so their sum is the covered cell fraction.
  std::vector<std::vector<std::vector<double>>> xs(n), ws(n);
  for (std::size_t d = 0; d < n; ++d) {
    if (!(support.lower[d] < support.upper[d])) throw std::invalid_argument("support box is empty");
    const auto& axis = scheme.axis(d);
    const IndexRange cells = cells_for_interval(axis, w, support.lower[d], support.upper[d]);
    means.index_box.push_back(cells);
    std::vector<double> spacing;
    for (long k = cells.first; k <= cells.last; ++k) {
      const double t0 = axis.node(k), t1 = axis.node(k + 1);
      spacing.push_back(t1 - t0);
      const double a = std::max(t0 / w, support.lower[d]);
      const double b = std::min(t1 / w, support.upper[d]);
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      const double cell_width = (t1 - t0) / w;
      std::vector<double> x(q), wt(q);
      for (std::size_t i = 0; i < q; ++i) {
        x[i] = mid + half * rule.nodes[i];
        wt[i] = b > a ? half * rule.weights[i] / cell_width : 0.0;
      }
      xs[d].push_back(std::move(x));
      ws[d].push_back(std::move(wt));
    }
    means.spacings.push_back(std::move(spacing));
  }

  const auto ext = means.extents();
  means.values.assign(product(ext), 0.0);
  std::vector<std::size_t> cell(n, 0), node(n, 0);
  std::vector<double> point(n);
  for (std::size_t c = 0; c < means.values.size(); ++c) {
    std::size_t rem = c;
    for (std::size_t d = 0; d < n; ++d) {
      cell[d] = rem % ext[d];
      rem /= ext[d];
    }
    CompensatedSum sum;
    std::fill(node.begin(), node.end(), 0);
    while (true) {
      double weight = 1.0;
      for (std::size_t d = 0; d < n; ++d) {
        point[d] = xs[d][cell[d]][node[d]];
        weight *= ws[d][cell[d]][node[d]];
      }
      if (weight != 0.0) sum.add(weight * f(point));
      std::size_t d = 0;
      while (d < n && ++node[d] == q) node[d++] = 0;
      if (d == n) break;
    }
    means.values[c] = sum.value();
  }
  return means;
}

KantorovichOperator::KantorovichOperator(ProductKernel kernel, SamplingScheme scheme,
                                         double truncation_tol)
    : kernel_(std::move(kernel)), scheme_(std::move(scheme)) {
  if (kernel_.dims() != scheme_.dims()) {
    throw std::invalid_argument("kernel and scheme dimensions differ");
  }
  double bound = 1.0;
  for (std::size_t d = 0; d < kernel_.dims(); ++d) {
    const auto& chi = kernel_.factor(d);
    const double r = truncation_radius(chi, truncation_tol);
    radii_.push_back(r);
    const double tail = chi.has_compact_support() ? 0.0 : lattice_tail_bound(chi, r);
    bound *= 1.0 + tail / std::min(1.0, scheme_.axis(d).min_spacing());
  }
  truncation_bound_ = bound - 1.0;
}

void KantorovichOperator::check_means(const CellMeans& means) const {
  if (means.dims() != scheme_.dims()) throw std::invalid_argument("cell means and scheme dimensions differ");
}

KantorovichOperator::AxisWindow KantorovichOperator::window(const CellMeans& means, std::size_t axis,
                                                            double x) const {
  const auto& nodes = scheme_.axis(axis);
  const auto& box = means.index_box[axis];
  const double v = means.w * x;
  IndexRange ks = nodes.nodes_within(v - radii_[axis], v + radii_[axis]);
  ks.first = std::max(ks.first, box.first);
  ks.last = std::min(ks.last, box.last);
  AxisWindow win;
  if (ks.empty()) return win;
  win.first = ks.first - box.first;
  const auto& chi = kernel_.factor(axis);
  win.weights.reserve(static_cast<std::size_t>(ks.size()));
  for (long k = ks.first; k <= ks.last; ++k) win.weights.push_back(chi(v - nodes.node(k)));
  return win;
}

double KantorovichOperator::evaluate(const CellMeans& means, std::span<const double> x) const {
  check_means(means);
  const std::size_t n = scheme_.dims();
  if (x.size() != n) throw std::invalid_argument("point dimension does not match the operator");
  std::vector<AxisWindow> wins;
  for (std::size_t d = 0; d < n; ++d) {
    wins.push_back(window(means, d, x[d]));
    if (wins.back().weights.empty()) return 0.0;
  }
  const auto ext = means.extents();
  std::vector<std::size_t> idx(n, 0);
  CompensatedSum sum;
  while (true) {
    double weight = 1.0;
    std::size_t offset = 0, stride = 1;
    for (std::size_t d = 0; d < n; ++d) {
      weight *= wins[d].weights[idx[d]];
      offset += stride * (static_cast<std::size_t>(wins[d].first) + idx[d]);
      stride *= ext[d];
    }
    sum.add(weight * means.values[offset]);
    std::size_t d = 0;
    while (d < n && ++idx[d] == wins[d].weights.size()) idx[d++] = 0;
    if (d == n) break;
  }
  return sum.value();
}

std::vector<double> KantorovichOperator::evaluate_separable(
    const CellMeans& means, const std::vector<std::vector<double>>& grid) const {
  check_means(means);
  if (!scheme_.is_uniform()) {
    throw std::invalid_argument("separable evaluation requires a uniform sampling scheme");
  }
  if (grid.size() != scheme_.dims()) throw std::invalid_argument("grid dimension does not match the operator");

  std::vector<std::size_t> shape = means.extents();
  std::vector<double> data = means.values;
  for (std::size_t d = 0; d < grid.size(); ++d) {
    AxisWeights aw;
    for (double x : grid[d]) {
      auto win = window(means, d, x);
      aw.first.push_back(win.first);
      aw.weights.push_back(std::move(win.weights));
    }
    data = contract_axis(data, shape, d, aw);
  }
  return data;
}

double evaluate_operator(const CellMeans& means, const ProductKernel& kernel,
                         const SamplingScheme& scheme, std::span<const double> x,
                         double truncation_tol) {
  return KantorovichOperator(kernel, scheme, truncation_tol).evaluate(means, x);
}

std::vector<double> evaluate_operator_separable(const CellMeans& means, const ProductKernel& kernel,
                                                const SamplingScheme& scheme,
                                                const std::vector<std::vector<double>>& grid,
                                                double truncation_tol) {
  return KantorovichOperator(kernel, scheme, truncation_tol).evaluate_separable(means, grid);
}

}  // namespace kantorovich
