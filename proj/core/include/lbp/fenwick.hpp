#pragma once

#include <cstddef>
#include <vector>

namespace lbp {

// Fenwick tree over nonnegative leaf weights with prefix-sum sampling.
// Point updates and cumulative search are O(log n).
class FenwickTree {
public:
    FenwickTree() = default;
    explicit FenwickTree(size_t n) { reset(n); }

    void reset(size_t n) {
        n_ = n;
        tree_.assign(n + 1, 0.0);
        leaves_.assign(n, 0.0);
        top_ = 1;
        while (top_ * 2 <= n_) top_ *= 2;
        if (n_ == 0) top_ = 0;
    }

    size_t size() const { return n_; }
    double leaf(size_t i) const { return leaves_[i]; }
    const std::vector<double>& leaves() const { return leaves_; }

    void set(size_t i, double v) {
        const double delta = v - leaves_[i];
        if (delta == 0.0) return;
        leaves_[i] = v;
        for (size_t j = i + 1; j <= n_; j += j & (~j + 1)) tree_[j] += delta;
    }

    // Sum over [0, i).
    double prefix(size_t i) const {
        double s = 0.0;
        for (size_t j = i; j > 0; j -= j & (~j + 1)) s += tree_[j];
        return s;
    }

    double total() const { return prefix(n_); }

    // Smallest index i with prefix(i+1) > target; returns n when target is
    // at or beyond the total.
    size_t find(double target) const {
        size_t pos = 0;
        double acc = 0.0;
        for (size_t mask = top_; mask > 0; mask >>= 1) {
            const size_t next = pos + mask;
            if (next <= n_ && acc + tree_[next] <= target) {
                acc += tree_[next];
                pos = next;
            }
        }
        return pos;
    }

    // Rebuilds internal sums from a fresh leaf vector in O(n).
    void rebuild(std::vector<double> leaves) {
        leaves_ = std::move(leaves);
        n_ = leaves_.size();
        tree_.assign(n_ + 1, 0.0);
        for (size_t i = 0; i < n_; ++i) tree_[i + 1] += leaves_[i];
        for (size_t i = 1; i <= n_; ++i) {
            const size_t j = i + (i & (~i + 1));
            if (j <= n_) tree_[j] += tree_[i];
        }
        top_ = 1;
        while (top_ * 2 <= n_) top_ *= 2;
        if (n_ == 0) top_ = 0;
    }

private:
    size_t n_ = 0;
    size_t top_ = 0;
    std::vector<double> tree_;
    std::vector<double> leaves_;
};

}  // namespace lbp
