#include "doctest.h"

#include <cmath>

#include "scene3d/planner.hpp"
#include "scene3d/rng.hpp"
#include "scene3d/spline.hpp"

using namespace scene3d;

TEST_SUITE("spline") {

TEST_CASE("interpolates every knot") {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(12));
        std::vector<double> s(n), y(n);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += 0.5 + rng.uniform01() * 3.0;
            s[i] = acc;
            y[i] = rng.uniform(-10, 10);
        }
        const CubicSpline spline(s, y);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(spline.eval(s[i]) - y[i]) < 1e-9);
    }
}

TEST_CASE("two knots give the straight segment") {
    const CubicSpline line({0.0, 10.0}, {2.0, 12.0});
    for (double t = 0; t <= 10.0; t += 0.5)
        CHECK(line.eval(t) == doctest::Approx(2.0 + t).epsilon(1e-12));
}

TEST_CASE("C2 continuity at interior knots by finite differences") {
    std::vector<double> s{0, 1.5, 3.0, 4.2, 6.0, 7.5};
    std::vector<double> y{0, 2.0, -1.0, 3.0, 1.0, 4.0};
    const CubicSpline spline(s, y);
    const double h = 1e-4;
    for (size_t i = 1; i + 1 < s.size(); ++i) {
        const double left =
            (spline.eval(s[i] - 2 * h) - 2 * spline.eval(s[i] - h) + spline.eval(s[i])) / (h * h);
        const double right =
            (spline.eval(s[i]) - 2 * spline.eval(s[i] + h) + spline.eval(s[i] + 2 * h)) / (h * h);
        CHECK(std::abs(left - right) < 1e-3);  // FD noise dominates well before 1e-3
    }
}

TEST_CASE("invalid knot arrays are rejected") {
    CHECK_THROWS(CubicSpline({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}));
    CHECK_THROWS(CubicSpline({0.0, 1.0}, {1.0}));
    CHECK_THROWS(CubicSpline({}, {}));
}

TEST_CASE("smooth_trajectory: two waypoints make a constant-speed segment") {
    std::vector<PoseGoal> poses(2);
    poses[0].position = Vec3(0, 0, 0);
    poses[1].position = Vec3(10, 0, 0);
    const std::vector<std::vector<Vec3>> paths{{Vec3(0, 0, 0), Vec3(10, 0, 0)}};
    const Trajectory traj = smooth_trajectory(poses, paths, 2.0);

    REQUIRE(traj.samples.size() >= 3);
    CHECK(traj.samples.front().position.isApprox(Vec3(0, 0, 0), 1e-12));
    CHECK(traj.samples.back().position.isApprox(Vec3(10, 0, 0), 1e-12));
    CHECK(traj.samples.front().t == 0.0);
    CHECK(traj.samples.back().t == doctest::Approx(10.0));  // 1 cm/s
    for (size_t i = 1; i < traj.samples.size(); ++i) {
        CHECK(traj.samples[i].t > traj.samples[i - 1].t);
        const double speed = (traj.samples[i].position - traj.samples[i - 1].position).norm() /
                             (traj.samples[i].t - traj.samples[i - 1].t);
        CHECK(speed == doctest::Approx(1.0).epsilon(1e-9));
    }
    REQUIRE(traj.waypoint_indices.size() == 2);
    CHECK(traj.waypoint_indices[0] == 0);
    CHECK(traj.waypoint_indices[1] == traj.samples.size() - 1);
}

TEST_CASE("rotation interpolates along the geodesic: midpoint of 90 is 45") {
    std::vector<PoseGoal> poses(2);
    poses[0].position = Vec3(0, 0, 0);
    poses[0].rotation = Quat::Identity();
    poses[1].position = Vec3(0, 0, 0);  // rotation in place
    poses[1].rotation = Quat(Eigen::AngleAxisd(deg_to_rad(90), Vec3(0, 0, 1)));
    const std::vector<std::vector<Vec3>> paths{{Vec3(0, 0, 0), Vec3(0, 0, 0)}};
    const Trajectory traj = smooth_trajectory(poses, paths, 2.0, 0.1);

    REQUIRE(traj.samples.size() >= 3);
    const double t_end = traj.samples.back().t;
    CHECK(t_end == doctest::Approx(9.0));  // 90 deg at 0.1 s/deg

    // Find the midpoint sample (samples are evenly spaced in time).
    const double t_mid = t_end / 2;
    double best_err = 1e9;
    Quat q_mid;
    for (const auto& s : traj.samples) {
        if (std::abs(s.t - t_mid) < best_err) {
            best_err = std::abs(s.t - t_mid);
            q_mid = s.rotation;
        }
    }
    REQUIRE(best_err < 1e-9);  // 90/5 = 18 samples, the middle one is exact
    const Quat expected(Eigen::AngleAxisd(deg_to_rad(45), Vec3(0, 0, 1)));
    CHECK(quat_angle_deg(q_mid, expected) < 1e-9);
}

TEST_CASE("duplicate vertices collapse; degenerate plans are rejected") {
    std::vector<PoseGoal> poses(3);
    poses[0].position = Vec3(0, 0, 0);
    poses[1].position = Vec3(5, 0, 0);
    poses[2].position = Vec3(5, 0, 0);  // pure rotation leg with zero angle
    const std::vector<std::vector<Vec3>> paths{
        {Vec3(0, 0, 0), Vec3(2.5, 0, 0), Vec3(2.5, 0, 0), Vec3(5, 0, 0)},
        {Vec3(5, 0, 0), Vec3(5, 0, 0)}};
    const Trajectory traj = smooth_trajectory(poses, paths, 2.0);
    CHECK(traj.samples.back().position.isApprox(Vec3(5, 0, 0), 1e-12));
    // The degenerate third pose maps to the same sample as the second.
    REQUIRE(traj.waypoint_indices.size() == 3);
    CHECK(traj.waypoint_indices[1] == traj.waypoint_indices[2]);

    // All-identical poses: nothing to interpolate.
    std::vector<PoseGoal> still(2);
    still[0].position = still[1].position = Vec3(1, 2, 3);
    CHECK_THROWS(smooth_trajectory(still, {{Vec3(1, 2, 3), Vec3(1, 2, 3)}}, 2.0));
}

TEST_CASE("spline passes through interior path vertices") {
    std::vector<PoseGoal> poses(2);
    poses[0].position = Vec3(0, 0, 0);
    poses[1].position = Vec3(10, 0, 0);
    const std::vector<Vec3> path{Vec3(0, 0, 0), Vec3(3, 2, 0), Vec3(7, -1, 0), Vec3(10, 0, 0)};
    const Trajectory traj = smooth_trajectory(poses, {path}, 50.0);
    // Every path vertex appears on the sampled trajectory to within the
    // sampling density.
    for (const auto& v : path) {
        double best = 1e9;
        for (const auto& s : traj.samples) best = std::min(best, (s.position - v).norm());
        CHECK(best < 0.05);
    }
}

}  // TEST_SUITE
