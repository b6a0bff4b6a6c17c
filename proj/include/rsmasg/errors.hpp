// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace rsmasg {

/// Raised when an argument violates a documented precondition or type invariant.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A (mean, variance) pair that no beta distribution on [0, scale] can match.
class InfeasibleMoments : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace rsmasg
