#pragma once

#include <stdexcept>
#include <string>

namespace qta {

// Malformed arguments or files: wrong dimensions, bad letters, unreadable
// input. The CLI maps these to exit code 1.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical contract was violated: a gate that is not unitary, a matrix
// that is not Hermitian, a state that is not normalized. Exit code 2.
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The summed evolution operator mapped a state to numerical zero.
// `step` is the trajectory step at which it happened (-1 when unknown).
class AnnihilatedState : public ContractError {
public:
    explicit AnnihilatedState(int at_step = -1)
        : ContractError("state annihilated by the global operator" +
                        (at_step >= 0 ? " at step " + std::to_string(at_step) : std::string{})),
          step(at_step) {}

    int step;
};

} // namespace qta
