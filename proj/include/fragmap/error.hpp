#pragma once

#include <stdexcept>
#include <string>

namespace fragmap {

enum class ErrorKind {
    Io,      // file could not be read or written
    Parse,   // file exists but is not in the expected format
    Invalid, // well-formed input violating a data invariant
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace fragmap
