#pragma once

#include <stdexcept>
#include <string>

namespace invctl {

// Root of everything the core throws. The C layer maps each subclass onto a
// status code, so new subclasses need a matching entry there.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Two series on different sampling grids were combined.
class GridMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace invctl
