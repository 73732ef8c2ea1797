#pragma once

#include <stdexcept>
#include <string>

namespace homcount {

/// Malformed or inconsistent input data (files, graphs, labels).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A brute-force enumeration was refused because it would be too large.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace homcount
