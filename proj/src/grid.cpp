#include "pwlab/grid.hpp"

#include <cmath>

#include "pwlab/errors.hpp"

namespace pwlab {

Grid1D::Grid1D(double min, double max, int n) : min_(min), max_(max), n_(n) {
    if (n < 2) throw ConfigError("grid needs at least 2 points");
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max))
        throw ConfigError("grid domain must satisfy min < max and be finite");
    spacing_ = (max - min) / (n - 1);
    symmetric_ = std::abs(min + max) <= 1e-12 * (max - min);
    points_.resize(n);
    for (int i = 0; i < n; ++i) points_[i] = min + i * spacing_;
    if (symmetric_) {
        for (int i = 0; i < n / 2; ++i) points_[i] = -points_[n - 1 - i];
        if (n % 2 == 1) points_[n / 2] = 0.0;
    }
}

} // namespace pwlab
