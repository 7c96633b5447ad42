#pragma once

#include <vector>

#include "scene3d/geometry.hpp"

namespace scene3d {

/// Natural cubic spline through (s_i, y_i) with strictly increasing s.
/// Two knots degrade to linear interpolation; evaluation clamps to the knot
/// range. Passes through every knot exactly and is C2 at interior knots.
class CubicSpline {
public:
    CubicSpline(std::vector<double> s, std::vector<double> y);

    double eval(double s) const;

    const std::vector<double>& knots() const { return s_; }

private:
    std::vector<double> s_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at knots
};

/// Component-wise natural cubic spline over 3D points.
class Spline3D {
public:
    Spline3D(const std::vector<double>& s, const std::vector<Vec3>& points);

    Vec3 eval(double s) const;

private:
    CubicSpline x_, y_, z_;
};

}  // namespace scene3d
