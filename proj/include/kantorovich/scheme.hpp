#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace kantorovich {

/// Closed index range [first, last]; empty when first > last.
struct IndexRange {
  long first = 0;
  long last = -1;

  bool empty() const { return first > last; }
  long size() const { return empty() ? 0 : last - first + 1; }
};

/// Axis-aligned box, one [lower, upper] interval per dimension.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dims() const { return lower.size(); }
};

/// Strictly increasing node sequence t_k along one axis.
///
/// A uniform sequence is t_k = k for every integer k. An explicit sequence
/// stores nodes t_first, ..., t_{first + size - 1}; indices outside that
/// window do not exist.
class NodeSequence {
 public:
  static NodeSequence uniform();
  static NodeSequence explicit_nodes(std::vector<double> nodes, long first_index = 0);

  bool is_uniform() const { return uniform_; }

  /// Throws std::out_of_range for indices outside an explicit window.
  double node(long k) const;
  /// t_{k+1} - t_k.
  double spacing(long k) const;

  bool has_node(long k) const;
  /// Cell k spans [t_k, t_{k+1}] and exists when both nodes exist.
  bool has_cell(long k) const { return has_node(k) && has_node(k + 1); }

  /// Indices k with lo <= t_k <= hi.
  IndexRange nodes_within(double lo, double hi) const;
  /// Cells [t_k, t_{k+1}] whose interior meets (lo, hi).
  IndexRange cells_overlapping(double lo, double hi) const;

  /// Available node indices; nullopt for the uniform (unbounded) sequence.
  std::optional<IndexRange> node_window() const;

  double min_spacing() const;
  double max_spacing() const;

 private:
  bool uniform_ = true;
  long first_ = 0;
  std::vector<double> nodes_;
};

/// Tensor-product sampling scheme: one node sequence per dimension, with
/// spacing bounds delta_lo <= t_{k+1} - t_k <= delta_hi on every axis.
class SamplingScheme {
 public:
  static SamplingScheme uniform(std::size_t dims);
  /// Throws std::invalid_argument for an empty axis list.
  explicit SamplingScheme(std::vector<NodeSequence> axes);

  std::size_t dims() const { return axes_.size(); }
  const NodeSequence& axis(std::size_t i) const { return axes_.at(i); }
  bool is_uniform() const;

  double delta_lo() const { return delta_lo_; }
  double delta_hi() const { return delta_hi_; }

 private:
  std::vector<NodeSequence> axes_;
  double delta_lo_ = 1.0;
  double delta_hi_ = 1.0;
};

}  // namespace kantorovich
