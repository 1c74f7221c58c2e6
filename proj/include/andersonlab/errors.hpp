#pragma once

#include <stdexcept>
#include <string>

namespace andersonlab {

// Status codes shared by the C API and the CLI exit codes.
enum class Status : int {
    ok = 0,
    config_error = 1,
    numeric_error = 2,
    precondition_error = 3,
    io_error = 4,
};

class Error : public std::runtime_error {
  public:
    Error(Status s, const std::string& msg) : std::runtime_error(msg), status_(s) {}
    Status status() const { return status_; }

  private:
    Status status_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(Status::config_error, msg) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& msg) : Error(Status::numeric_error, msg) {}
};

// Refusal: inputs violate a documented precondition (degenerate energy in
// strict mode, unit gap violation, truncation above the spectral floor, ...).
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error(Status::precondition_error, msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(Status::io_error, msg) {}
};

}  // namespace andersonlab
