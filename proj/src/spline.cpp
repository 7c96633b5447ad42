#include "scene3d/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace scene3d {

CubicSpline::CubicSpline(std::vector<double> s, std::vector<double> y)
    : s_(std::move(s)), y_(std::move(y)) {
    const size_t n = s_.size();
    if (n != y_.size() || n < 1) throw std::invalid_argument("spline needs matching knot arrays");
    for (size_t i = 1; i < n; ++i)
        if (!(s_[i] > s_[i - 1]))
            throw std::invalid_argument("spline parameters must strictly increase");

    m_.assign(n, 0.0);
    if (n < 3) return;  // natural spline with <3 knots is linear (or constant)

    // Tridiagonal system for interior second derivatives (Thomas algorithm);
    // natural boundary: m_0 = m_{n-1} = 0.
    const size_t k = n - 2;
    std::vector<double> diag(k), rhs(k), upper(k);
    for (size_t i = 0; i < k; ++i) {
        const double h0 = s_[i + 1] - s_[i];
        const double h1 = s_[i + 2] - s_[i + 1];
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0;
    }
    for (size_t i = 1; i < k; ++i) {
        const double lower = (s_[i + 1] - s_[i]) / 6.0;  // sub-diagonal element
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    m_[k] = rhs[k - 1] / diag[k - 1];
    for (size_t i = k - 1; i >= 1; --i) m_[i] = (rhs[i - 1] - upper[i - 1] * m_[i + 1]) / diag[i - 1];
}

double CubicSpline::eval(double s) const {
    const size_t n = s_.size();
    if (n == 1) return y_[0];
    if (s <= s_.front()) s = s_.front();
    if (s >= s_.back()) s = s_.back();

    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    size_t i = static_cast<size_t>(it - s_.begin());
    i = std::min(std::max<size_t>(i, 1), n - 1) - 1;

    const double h = s_[i + 1] - s_[i];
    const double a = (s_[i + 1] - s) / h;
    const double b = (s - s_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

Spline3D::Spline3D(const std::vector<double>& s, const std::vector<Vec3>& points)
    : x_(s, [&] {
          std::vector<double> v(points.size());
          for (size_t i = 0; i < points.size(); ++i) v[i] = points[i].x();
          return v;
      }()),
      y_(s, [&] {
          std::vector<double> v(points.size());
          for (size_t i = 0; i < points.size(); ++i) v[i] = points[i].y();
          return v;
      }()),
      z_(s, [&] {
          std::vector<double> v(points.size());
          for (size_t i = 0; i < points.size(); ++i) v[i] = points[i].z();
          return v;
      }()) {}

Vec3 Spline3D::eval(double s) const { return {x_.eval(s), y_.eval(s), z_.eval(s)}; }

}  // namespace scene3d
