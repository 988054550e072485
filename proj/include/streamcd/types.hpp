#pragma once

#include <cstdint>

namespace streamcd {

// External node identifiers are arbitrary non-negative integers (dataset ids
// are sparse); graphs map them to dense internal indices.
using NodeId = std::uint64_t;

// Community labels are never reused within one partition's lifetime.
using CommunityId = std::uint64_t;

// Edge weights are finite and strictly positive for stored edges.
using Weight = double;

// One stream element: an observed interaction between two nodes.
struct EdgeEvent {
  NodeId source = 0;
  NodeId target = 0;
  Weight weight = 1.0;

  friend bool operator==(const EdgeEvent&, const EdgeEvent&) = default;
};

}  // namespace streamcd
