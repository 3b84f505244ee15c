#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace finitopos {

/// Raised when two structures that must share a base or a boundary do not.
class ShapeMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an enumeration would exceed its candidate budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::uint64_t limit)
        : std::runtime_error(what + " exceeded budget of " + std::to_string(limit)), limit_(limit) {}
    std::uint64_t limit() const noexcept { return limit_; }

private:
    std::uint64_t limit_;
};

/// Raised when an operation is given data that fails validation.
class InvalidData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Default number of candidate families any single enumeration may visit.
/// FINITOPOS_BUDGET overrides it.
std::uint64_t default_budget();

/// Counts enumeration steps against a limit.
class Budget {
public:
    explicit Budget(std::uint64_t limit = default_budget(), std::string label = "enumeration")
        : limit_(limit), label_(std::move(label)) {}

    void charge(std::uint64_t n = 1) {
        used_ += n;
        if (used_ > limit_) throw BudgetExceeded(label_, limit_);
    }
    std::uint64_t used() const noexcept { return used_; }
    std::uint64_t limit() const noexcept { return limit_; }

private:
    std::uint64_t limit_;
    std::uint64_t used_ = 0;
    std::string label_;
};

/// Disjoint-set forest with path halving; roots are the least index of each class.
class UnionFind {
public:
    explicit UnionFind(std::size_t n = 0) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    /// Returns true when two distinct classes were merged.
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
        return true;
    }
    std::size_t size() const noexcept { return parent_.size(); }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace finitopos
