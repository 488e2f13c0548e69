#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chronopress {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input bytes (XML, CSV, JSON). Carries the byte offset where
// the parser gave up.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Well-formed input that does not have the expected structure.
class StructuralError : public Error {
public:
    using Error::Error;
};

// Input that parsed but violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

}  // namespace chronopress
