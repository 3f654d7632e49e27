#pragma once

#include <stdexcept>
#include <string>

namespace wignerlab {

/// Invalid user-facing parameters (mesh sizes, quadrature, config files).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A caller violated a precondition (length mismatch, incompatible grids).
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Linear solve failed. Carries the block row and local index of the failing pivot
/// when the failure comes from the direct factorization (-1 otherwise).
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, long block_row = -1, long local_index = -1)
        : std::runtime_error(what), block_row_(block_row), local_index_(local_index) {}

    long block_row() const noexcept { return block_row_; }
    long local_index() const noexcept { return local_index_; }

private:
    long block_row_;
    long local_index_;
};

/// A request would exceed a hard size guard (dense materialization etc.).
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wignerlab
