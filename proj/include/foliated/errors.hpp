#pragma once

#include <stdexcept>
#include <string>

namespace foliated {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Matrix/vector dimensions disagree, or a triplet is out of range.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Scalars from incompatible coefficient fields, or a bad field descriptor.
class FieldError : public Error {
public:
    using Error::Error;
};

// An operator that should square to zero does not, or an image is not
// contained in the kernel it is quotiented into.
class ComplexViolation : public Error {
public:
    using Error::Error;
};

// Model data failed validation (Jacobi, subalgebra, zero slope, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class UnsupportedModel : public Error {
public:
    using Error::Error;
};

class WindowError : public Error {
public:
    using Error::Error;
};

// A symbol computation needs terms below the available depth.
class TruncationError : public Error {
public:
    using Error::Error;
};

class ModelMismatch : public Error {
public:
    using Error::Error;
};

class CapabilityError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& location, const std::string& message)
        : Error(location.empty() ? message : location + ": " + message), location_(location) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

}  // namespace foliated
