#pragma once

#include <cstdint>
#include <vector>

namespace lbp {

// Finite-support nonnegative weight function on the lattice, stored as a
// dense window indexed -radius..radius. Zero outside the window.
struct Kernel {
    int32_t radius = 0;
    std::vector<double> weights;  // size 2*radius+1, offset o at weights[o+radius]

    static Kernel zero();
    static Kernel box(int32_t radius, double weight = 1.0);
    static Kernel from_weights(int32_t radius, std::vector<double> weights);

    double at(int64_t offset) const {
        if (offset < -radius || offset > radius) return 0.0;
        return weights[static_cast<size_t>(offset + radius)];
    }

    double sum() const;
    bool is_zero() const;
    Kernel scaled(double s) const;
    Kernel mirrored() const;
};

}  // namespace lbp
