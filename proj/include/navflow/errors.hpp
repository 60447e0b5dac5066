#pragma once

#include <stdexcept>
#include <string>

namespace navflow {

// Base error for all library failures.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid experiment configuration (CLI maps this to exit code 2).
struct config_error : error {
    using error::error;
};

// File system / stream failure (CLI maps this to exit code 3).
struct io_error : error {
    using error::error;
};

}  // namespace navflow
