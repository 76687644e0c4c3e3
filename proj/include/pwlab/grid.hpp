#pragma once

#include <vector>

namespace pwlab {

// Uniform 1D grid. On a symmetric domain (min == -max) the points are
// constructed so that point(n-1-i) == -point(i) holds exactly in floating
// point; parity identities downstream depend on that.
class Grid1D {
public:
    Grid1D(double min, double max, int n);

    int size() const { return n_; }
    double min() const { return min_; }
    double max() const { return max_; }
    double spacing() const { return spacing_; }
    double point(int i) const { return points_[i]; }
    const std::vector<double>& points() const { return points_; }
    bool symmetric() const { return symmetric_; }

    bool same_as(const Grid1D& other) const {
        return n_ == other.n_ && min_ == other.min_ && max_ == other.max_;
    }

private:
    double min_, max_, spacing_;
    int n_;
    bool symmetric_;
    std::vector<double> points_;
};

} // namespace pwlab
