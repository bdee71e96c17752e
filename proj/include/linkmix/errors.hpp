// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#pragma once

#include <stdexcept>
#include <string>

namespace linkmix {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
  public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iterative evaluation failed to reach its accuracy target.
class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Two gamma-factor pole lattices coincide (or nearly so); the requested
/// series representation does not exist.
class PoleCollisionError : public std::runtime_error {
  public:
    explicit PoleCollisionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace linkmix
