#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace miner {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad user input: missing files, not a git repository, malformed flags.
class InputError : public Error {
public:
    using Error::Error;
};

/// A file or payload does not conform to an expected format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Dataset written by a newer (or unknown) format version.
class UnsupportedVersionError : public FormatError {
public:
    using FormatError::FormatError;
};

/// HTTP/transport failure that survived the retry policy.
class NetworkError : public Error {
public:
    NetworkError(const std::string& msg, int status) : Error(msg), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

/// API rate limit exhausted; carries the advertised reset time (unix seconds).
class RateLimitError : public Error {
public:
    RateLimitError(const std::string& msg, std::int64_t reset_epoch_seconds)
        : Error(msg), reset_(reset_epoch_seconds) {}
    std::int64_t reset_epoch_seconds() const { return reset_; }

private:
    std::int64_t reset_;
};

} // namespace miner
