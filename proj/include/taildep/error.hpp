#pragma once

#include <stdexcept>

namespace taildep {

// Bad data handed to the library (non-finite entries, shape mismatch, ...).
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Tuning parameter outside its admissible range (k, kappa, delta, ...).
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// File could not be read or written, or its contents could not be parsed.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A generator configuration that can never produce a valid draw.
struct generation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace taildep
