#pragma once

#include <stdexcept>
#include <string>

namespace infocast {

class InvalidParameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class MalformedPacket : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UndefinedMetric : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised when a closed form cannot be represented in double precision.
class Unrepresentable : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

} // namespace infocast
