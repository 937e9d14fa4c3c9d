#pragma once

#include <stdexcept>
#include <string>

namespace strideskip {

/// Bad or unreadable input: missing files, malformed headers, invalid options.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sampling graph has no source-to-sink path.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace strideskip
