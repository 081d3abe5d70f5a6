#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wagerlab/bits.hpp"

namespace wagerlab::detail {

/// Incremental per-path bookkeeping for history-dependent rules (capital
/// trackers, stopping-time discovery, bankruptcy freezing).
///
/// Stores one bit path together with a node record for every prefix of it.
/// A query for an arbitrary history re-synchronises by longest common
/// prefix: extensions advance in O(new bits); a divergent query rolls back
/// to the fork point and replays from there. Evaluating one sequence start
/// to finish therefore costs O(1) amortised per step, and exhaustive
/// prefix-tree walks (push/pop order) stay linear in the number of nodes.
template <class Node>
class PathState {
 public:
  explicit PathState(Node initial) { nodes_.push_back(std::move(initial)); }

  /// `advance(prefix, bit, node)` must return the node after appending
  /// `bit` to `prefix`, where `node` is the record at `prefix`.
  template <class Advance>
  const Node& sync(const History& h, Advance&& advance) {
    const std::size_t keep = path_.common_prefix(h);
    if (keep < path_.size() && keep < h.size()) {  // genuine fork
      path_.truncate(keep);
      nodes_.resize(keep + 1);
    }
    while (path_.size() < h.size()) {
      const Bit b = h[path_.size()];
      Node next = advance(path_, b, nodes_.back());
      path_.push_back(b);
      nodes_.push_back(std::move(next));
    }
    return nodes_[h.size()];
  }

  const Node& at(std::size_t n) const { return nodes_[n]; }

 private:
  History path_;
  std::vector<Node> nodes_;
};

}  // namespace wagerlab::detail
