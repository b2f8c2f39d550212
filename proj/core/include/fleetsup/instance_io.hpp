#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "fleetsup/graph.hpp"

namespace fleetsup {

class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plain-text snapshot format:
//   n
//   <vertex> <reward>          (n+2 lines, vertex ascending)
//   <from> <to> <cost>         ((n+2)(n+1) lines, from-major, self-loops skipped)
// Numbers are written in shortest round-trip form; absent arcs are written as `inf`.
void write_instance(std::ostream& out, const StaticSnapshot& snapshot);
StaticSnapshot read_instance(std::istream& in);
StaticSnapshot read_instance_file(const std::string& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace fleetsup
