#pragma once

#include <stdexcept>

namespace kgc {

// Invalid configuration or usage. The CLI maps this to exit code 2;
// every other exception maps to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kgc
