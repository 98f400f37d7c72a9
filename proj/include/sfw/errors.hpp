#pragma once

#include <stdexcept>
#include <string>

namespace sfw {

/// Operand shapes or lengths disagree.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input that has no meaningful answer (zero tensor, empty shape, ...).
class DegenerateInput : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sfw
