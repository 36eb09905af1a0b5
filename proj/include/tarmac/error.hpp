#pragma once

#include <stdexcept>
#include <string>

namespace tarmac {

// Root of every error the library throws. Subclasses map onto the failure
// classes callers need to tell apart (bad input vs. bad parameters vs. a
// broken caller contract).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class ContractError : public Error {
public:
    using Error::Error;
};

class EncodingError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

// Throws ContractError with `what` when `cond` is false.
void require(bool cond, const std::string& what);

}  // namespace tarmac
