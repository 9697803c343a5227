#pragma once

#include <stdexcept>
#include <string>

namespace bcpnn {

// Error taxonomy mirrors the CLI exit codes: config 2, data 3, numeric 4.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const { return 1; }
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
    int exit_code() const override { return 2; }
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
    int exit_code() const override { return 3; }
};

// Shape/layout mismatches are a species of data error.
class DimensionError : public DataError {
public:
    explicit DimensionError(const std::string& msg) : DataError(msg) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
    int exit_code() const override { return 4; }
};

} // namespace bcpnn
