#include "kantorovich/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kantorovich {

NodeSequence NodeSequence::uniform() { return NodeSequence{}; }

NodeSequence NodeSequence::explicit_nodes(std::vector<double> nodes, long first_index) {
  if (nodes.size() < 2) {
    throw std::invalid_argument("explicit node sequence needs at least two nodes");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i])) {
      throw std::invalid_argument("explicit node sequence contains a non-finite node");
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw std::invalid_argument("explicit nodes must be strictly increasing (index " +
                                  std::to_string(first_index + static_cast<long>(i)) + ")");
    }
  }
  NodeSequence seq;
  seq.uniform_ = false;
  seq.first_ = first_index;
  seq.nodes_ = std::move(nodes);
  return seq;
}

bool NodeSequence::has_node(long k) const {
  if (uniform_) return true;
  return k >= first_ && k < first_ + static_cast<long>(nodes_.size());
}

double NodeSequence::node(long k) const {
  if (uniform_) return static_cast<double>(k);
  if (!has_node(k)) {
    throw std::out_of_range("node index " + std::to_string(k) + " outside explicit range [" +
                            std::to_string(first_) + ", " +
                            std::to_string(first_ + static_cast<long>(nodes_.size()) - 1) + "]");
  }
  return nodes_[static_cast<std::size_t>(k - first_)];
}

double NodeSequence::spacing(long k) const { return node(k + 1) - node(k); }

IndexRange NodeSequence::nodes_within(double lo, double hi) const {
  if (!(lo <= hi)) return {};
  if (uniform_) {
    return {static_cast<long>(std::ceil(lo)), static_cast<long>(std::floor(hi))};
  }
  auto first = std::lower_bound(nodes_.begin(), nodes_.end(), lo);
  auto last = std::upper_bound(nodes_.begin(), nodes_.end(), hi);
  if (first >= last) return {};
  return {first_ + static_cast<long>(first - nodes_.begin()),
          first_ + static_cast<long>(last - nodes_.begin()) - 1};
}

IndexRange NodeSequence::cells_overlapping(double lo, double hi) const {
  if (!(lo < hi)) return {};
  if (uniform_) {
    // k + 1 > lo and k < hi.
    return {static_cast<long>(std::floor(lo)), static_cast<long>(std::ceil(hi)) - 1};
  }
  // Cells are indexed by their left node; t_{k+1} > lo and t_k < hi.
  auto right = std::upper_bound(nodes_.begin(), nodes_.end(), lo);  // first node > lo
  auto left_end = std::lower_bound(nodes_.begin(), nodes_.end(), hi);  // first node >= hi
  long first = first_ + static_cast<long>(right - nodes_.begin()) - 1;
  long last = first_ + static_cast<long>(left_end - nodes_.begin()) - 1;
  const long last_cell = first_ + static_cast<long>(nodes_.size()) - 2;
  first = std::max(first, first_);
  last = std::min(last, last_cell);
  if (first > last) return {};
  return {first, last};
}

std::optional<IndexRange> NodeSequence::node_window() const {
  if (uniform_) return std::nullopt;
  return IndexRange{first_, first_ + static_cast<long>(nodes_.size()) - 1};
}

double NodeSequence::min_spacing() const {
  if (uniform_) return 1.0;
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < nodes_.size(); ++i) m = std::min(m, nodes_[i] - nodes_[i - 1]);
  return m;
}

double NodeSequence::max_spacing() const {
  if (uniform_) return 1.0;
  double m = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) m = std::max(m, nodes_[i] - nodes_[i - 1]);
  return m;
}

SamplingScheme SamplingScheme::uniform(std::size_t dims) {
  if (dims == 0) throw std::invalid_argument("sampling scheme needs at least one dimension");
  return SamplingScheme(std::vector<NodeSequence>(dims, NodeSequence::uniform()));
}

SamplingScheme::SamplingScheme(std::vector<NodeSequence> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("sampling scheme needs at least one dimension");
  delta_lo_ = std::numeric_limits<double>::infinity();
  delta_hi_ = 0.0;
  for (const auto& a : axes_) {
    delta_lo_ = std::min(delta_lo_, a.min_spacing());
    delta_hi_ = std::max(delta_hi_, a.max_spacing());
  }
}

bool SamplingScheme::is_uniform() const {
  return std::all_of(axes_.begin(), axes_.end(), [](const NodeSequence& a) { return a.is_uniform(); });
}

}  // namespace kantorovich
