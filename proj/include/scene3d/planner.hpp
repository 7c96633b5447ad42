#pragma once

#include <cstdint>
#include <vector>

#include "scene3d/rng.hpp"
#include "scene3d/scene.hpp"
#include "scene3d/waypoints.hpp"

namespace scene3d {

struct ObstacleBox {
    Vec3 min;
    Vec3 max;
    int source_id = -1;  // object the box came from
};

struct ObstacleSet {
    std::vector<ObstacleBox> boxes;
};

struct PlannerConfig {
    double step_size = 2.0;  // cm
    int max_iterations = 5000;
    double goal_bias = 0.05;
    double neighbor_radius_scale = 120.0;  // gamma in r = gamma (log n / n)^(1/3), cm
    std::uint64_t rng_seed = 0;
    int kmeans_k = 64;
    double resample_sigma_scale = 0.1;  // fraction of the target's largest OBB dimension
    int resample_max_attempts = 50;
    double samples_per_cm = 2.0;
    double rotation_seconds_per_deg = 0.1;  // time budget of in-place rotations
};

struct KMeansResult {
    std::vector<Vec3> centers;       // k entries
    std::vector<int> assignment;     // per input point
    std::vector<int> cluster_sizes;  // k entries; 0 marks an empty cluster
};

/// Lloyd's algorithm from k-means++ seeding; stops when the assignment is
/// stable or after 100 rounds. With k >= point count every point becomes its
/// own cluster and the surplus clusters stay empty.
KMeansResult kmeans_cluster(const std::vector<Vec3>& points, int k, std::uint64_t seed);

/// Cluster every static object's transformed mesh vertices and wrap each
/// cluster in an AABB grown by the manipulating object's axis-aligned half
/// extents, so the planner can treat the moving object as a point.
ObstacleSet build_obstacles(const Scene3D& scene, int manipulating_id, int k,
                            std::uint64_t seed);

bool point_in_obstacles(const Vec3& p, const ObstacleSet& obstacles);

/// Slab test of the segment against every box, boundary-inclusive (grazing
/// contacts within 1e-9 count as hits).
bool segment_collides(const Vec3& a, const Vec3& b, const ObstacleSet& obstacles);

struct PathResult {
    enum class Status { found, failure };  // failure = budget exhausted, not an error
    Status status = Status::failure;
    std::vector<Vec3> path;  // start .. goal when found
    double cost = 0.0;
    int iterations_used = 0;
};

/// RRT*: uniform sampling with goal bias inside `sampling_bounds`, fixed-step
/// steering, rewiring within gamma (log n / n)^(1/3). Deterministic for a
/// fixed seed. Throws if the start or goal is inside an obstacle or outside
/// the bounds; exhausting the iteration budget is a failure result instead.
PathResult plan_rrt_star(const Vec3& start, const Vec3& goal, const ObstacleSet& obstacles,
                         const Aabb& sampling_bounds, const PlannerConfig& cfg);

/// Union of the objects' world AABBs and any extra points, inflated by the
/// given fraction per axis: the planner's sampling volume.
Aabb planning_bounds(const Scene3D& scene, const std::vector<Vec3>& extra_points,
                     double inflate_fraction = 0.2);

/// Gaussian goal perturbation after a planning failure, restricted by the
/// per-step geometric rules (translation offsets keep their axis pattern and
/// z/direction signs). `previous` is the pose the step starts from; rotation
/// steps return the goal unchanged.
PoseGoal resample_waypoint(const PoseGoal& goal, const PlanStep& step, const Scene3D& scene,
                           const PoseGoal& previous, double sigma, std::uint64_t seed,
                           int attempt);

struct TrajectorySample {
    double t = 0.0;  // seconds; translation runs at 1 cm/s
    Vec3 position;
    Quat rotation;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<size_t> waypoint_indices;  // sample hitting each pose, start included
};

/// Fit one natural cubic spline through every path vertex (chord-length
/// parameterized) and interpolate rotation along each leg's constant-speed
/// geodesic. With `avoid` given, legs whose spline strays into an obstacle are
/// densified with polyline midpoints until the swept curve is clear.
Trajectory smooth_trajectory(const std::vector<PoseGoal>& poses,
                             const std::vector<std::vector<Vec3>>& leg_paths,
                             double samples_per_cm, double rotation_seconds_per_deg = 0.1,
                             const ObstacleSet* avoid = nullptr);

}  // namespace scene3d
