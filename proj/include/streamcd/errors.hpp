#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace streamcd {

struct NonPositiveWeight : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SelfLoopRejected : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnknownNode : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct UnknownCommunity : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct UnassignedNode : std::logic_error {
  using std::logic_error::logic_error;
};

struct AlreadyAssigned : std::logic_error {
  using std::logic_error::logic_error;
};

struct SelfMerge : std::logic_error {
  using std::logic_error::logic_error;
};

struct EmptyGraph : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MalformedLine : std::runtime_error {
  MalformedLine(std::size_t line_number, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
  std::size_t line;
};

struct EmptyInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooFewEdges : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoEventsProcessed : std::logic_error {
  using std::logic_error::logic_error;
};

struct UnknownNodeInPartitionFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace streamcd
