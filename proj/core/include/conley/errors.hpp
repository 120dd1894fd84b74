#pragma once

#include <stdexcept>
#include <string>

namespace conley {

/// Malformed or inconsistent input data; maps to CLI exit code 3.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A configured cap was exceeded; maps to CLI exit code 2.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace conley
