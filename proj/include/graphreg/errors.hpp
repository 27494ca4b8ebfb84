#pragma once

#include <stdexcept>
#include <string>

namespace graphreg {

/// Shapes of two operands do not agree, or a container is empty where
/// at least one element is required.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid parameters, malformed configuration files, out-of-range options.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A stopping policy was asked to act outside its domain (e.g. the
/// statistical rule with a single measurement).
class PolicyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A quality metric is undefined for the given inputs.
class MetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace graphreg
