#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace postlr {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// A configured size bound (grade, depth, enumeration size) was exceeded.
class CapacityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace postlr
