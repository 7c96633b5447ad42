#include "scene3d/planner.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <stdexcept>

#include "scene3d/spline.hpp"

namespace scene3d {

KMeansResult kmeans_cluster(const std::vector<Vec3>& points, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (points.empty()) throw std::invalid_argument("no points to cluster");
    const int n = static_cast<int>(points.size());

    KMeansResult res;
    if (k >= n) {
        // Every point its own cluster; the surplus stays empty.
        res.centers.assign(points.begin(), points.end());
        res.centers.resize(k, Vec3::Zero());
        res.assignment.resize(n);
        for (int i = 0; i < n; ++i) res.assignment[i] = i;
        res.cluster_sizes.assign(k, 0);
        for (int i = 0; i < n; ++i) res.cluster_sizes[i] = 1;
        return res;
    }

    Rng rng(seed);

    // k-means++ seeding.
    std::vector<Vec3> centers;
    centers.reserve(k);
    centers.push_back(points[rng.uniform_index(n)]);
    std::vector<double> d2(n);
    while (static_cast<int>(centers.size()) < k) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = (points[i] - centers[0]).squaredNorm();
            for (size_t c = 1; c < centers.size(); ++c)
                best = std::min(best, (points[i] - centers[c]).squaredNorm());
            d2[i] = best;
            sum += best;
        }
        if (sum <= 0.0) {
            centers.push_back(points[rng.uniform_index(n)]);
            continue;
        }
        double target = rng.uniform01() * sum;
        int pick = n - 1;
        for (int i = 0; i < n; ++i) {
            target -= d2[i];
            if (target <= 0.0) {
                pick = i;
                break;
            }
        }
        centers.push_back(points[pick]);
    }

    // Lloyd iterations until the assignment is stable.
    std::vector<int> assign(n, -1);
    for (int round = 0; round < 100; ++round) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = (points[i] - centers[0]).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (points[i] - centers[c]).squaredNorm();
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        std::vector<Vec3> sums(k, Vec3::Zero());
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            sums[assign[i]] += points[i];
            ++counts[assign[i]];
        }
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0) centers[c] = sums[c] / counts[c];
    }

    res.centers = std::move(centers);
    res.assignment = std::move(assign);
    res.cluster_sizes.assign(k, 0);
    for (int i = 0; i < n; ++i) ++res.cluster_sizes[res.assignment[i]];
    return res;
}

ObstacleSet build_obstacles(const Scene3D& scene, int manipulating_id, int k,
                            std::uint64_t seed) {
    const auto& mover = scene.object_by_id(manipulating_id);
    const Vec3 inflation = mover.obb.world_half_extents();

    ObstacleSet set;
    for (const auto& obj : scene.objects) {
        if (obj.id == manipulating_id) continue;
        std::vector<Vec3> pts(obj.mesh.vertices.size());
        for (size_t i = 0; i < pts.size(); ++i) pts[i] = obj.transformed_vertex(i);
        if (pts.empty()) continue;

        const KMeansResult clusters = kmeans_cluster(pts, k, derive_seed(seed, obj.id));
        const int kk = static_cast<int>(clusters.centers.size());
        std::vector<Aabb> boxes(kk);
        for (size_t i = 0; i < pts.size(); ++i) boxes[clusters.assignment[i]].expand(pts[i]);
        for (int c = 0; c < kk; ++c) {
            if (clusters.cluster_sizes[c] == 0) continue;
            Aabb b = boxes[c];
            b.inflate(inflation);
            set.boxes.push_back({b.min, b.max, obj.id});
        }
    }
    return set;
}

namespace {
constexpr double kBoundaryEps = 1e-9;
}

bool point_in_obstacles(const Vec3& p, const ObstacleSet& obstacles) {
    for (const auto& b : obstacles.boxes) {
        if (p.x() >= b.min.x() - kBoundaryEps && p.x() <= b.max.x() + kBoundaryEps &&
            p.y() >= b.min.y() - kBoundaryEps && p.y() <= b.max.y() + kBoundaryEps &&
            p.z() >= b.min.z() - kBoundaryEps && p.z() <= b.max.z() + kBoundaryEps)
            return true;
    }
    return false;
}

bool segment_collides(const Vec3& a, const Vec3& b, const ObstacleSet& obstacles) {
    const Vec3 d = b - a;
    for (const auto& box : obstacles.boxes) {
        double tmin = 0.0, tmax = 1.0;
        bool hit = true;
        for (int i = 0; i < 3 && hit; ++i) {
            const double lo = box.min[i] - kBoundaryEps;
            const double hi = box.max[i] + kBoundaryEps;
            if (std::abs(d[i]) < 1e-15) {
                if (a[i] < lo || a[i] > hi) hit = false;
            } else {
                double t1 = (lo - a[i]) / d[i];
                double t2 = (hi - a[i]) / d[i];
                if (t1 > t2) std::swap(t1, t2);
                tmin = std::max(tmin, t1);
                tmax = std::min(tmax, t2);
                if (tmin > tmax) hit = false;
            }
        }
        if (hit) return true;
    }
    return false;
}

Aabb planning_bounds(const Scene3D& scene, const std::vector<Vec3>& extra_points,
                     double inflate_fraction) {
    Aabb box;
    for (const auto& obj : scene.objects) {
        const Vec3 he = obj.obb.world_half_extents();
        box.expand(obj.obb.center - he);
        box.expand(obj.obb.center + he);
    }
    for (const auto& p : extra_points) box.expand(p);
    if (box.empty()) throw std::invalid_argument("nothing to bound");
    Vec3 pad = inflate_fraction * box.size();
    // Degenerate axes still need sampling room.
    for (int i = 0; i < 3; ++i) pad[i] = std::max(pad[i], 1.0);
    box.inflate(pad);
    return box;
}

PathResult plan_rrt_star(const Vec3& start, const Vec3& goal, const ObstacleSet& obstacles,
                         const Aabb& sampling_bounds, const PlannerConfig& cfg) {
    if (!sampling_bounds.contains(start) || !sampling_bounds.contains(goal))
        throw std::invalid_argument("start or goal outside the sampling volume");
    if (point_in_obstacles(start, obstacles))
        throw std::invalid_argument("start position is inside an obstacle");
    if (point_in_obstacles(goal, obstacles))
        throw std::invalid_argument("goal position is inside an obstacle");

    struct Node {
        Vec3 p;
        int parent;
        double cost;
    };
    std::vector<Node> nodes;
    std::vector<std::vector<int>> children;
    nodes.push_back({start, -1, 0.0});
    children.emplace_back();
    int goal_index = -1;

    Rng rng(cfg.rng_seed);
    const Vec3 lo = sampling_bounds.min, hi = sampling_bounds.max;

    auto propagate_cost = [&](int root) {
        std::vector<int> stack{root};
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int c : children[i]) {
                nodes[c].cost = nodes[i].cost + (nodes[c].p - nodes[i].p).norm();
                stack.push_back(c);
            }
        }
    };
    auto reparent = [&](int node, int new_parent) {
        const int old = nodes[node].parent;
        if (old >= 0) {
            auto& v = children[old];
            v.erase(std::find(v.begin(), v.end(), node));
        }
        nodes[node].parent = new_parent;
        children[new_parent].push_back(node);
        nodes[node].cost =
            nodes[new_parent].cost + (nodes[node].p - nodes[new_parent].p).norm();
        propagate_cost(node);
    };

    int used = 0;
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        used = iter + 1;
        // Goal-biased uniform sampling.
        Vec3 sample;
        if (rng.uniform01() < cfg.goal_bias) {
            sample = goal;
        } else {
            sample = {rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()),
                      rng.uniform(lo.z(), hi.z())};
        }

        // Nearest tree node.
        int nearest = 0;
        double nd = (nodes[0].p - sample).squaredNorm();
        for (size_t i = 1; i < nodes.size(); ++i) {
            const double d = (nodes[i].p - sample).squaredNorm();
            if (d < nd) {
                nd = d;
                nearest = static_cast<int>(i);
            }
        }
        const double dist = std::sqrt(nd);
        if (dist < 1e-12) continue;

        const Vec3 x_new =
            nodes[nearest].p + (sample - nodes[nearest].p) * (std::min(cfg.step_size, dist) / dist);
        if (segment_collides(nodes[nearest].p, x_new, obstacles)) continue;

        // Neighbourhood radius: gamma (log n / n)^(1/3), never below the step.
        const double n = static_cast<double>(nodes.size());
        const double radius =
            std::max(cfg.step_size,
                     cfg.neighbor_radius_scale * std::cbrt(std::log(n + 1.0) / (n + 1.0)));

        std::vector<int> neighbors;
        for (size_t i = 0; i < nodes.size(); ++i)
            if ((nodes[i].p - x_new).norm() <= radius) neighbors.push_back(static_cast<int>(i));

        // Choose the cheapest collision-free parent.
        int parent = nearest;
        double best_cost = nodes[nearest].cost + (x_new - nodes[nearest].p).norm();
        for (int i : neighbors) {
            const double c = nodes[i].cost + (x_new - nodes[i].p).norm();
            if (c < best_cost && !segment_collides(nodes[i].p, x_new, obstacles)) {
                best_cost = c;
                parent = i;
            }
        }
        const int new_index = static_cast<int>(nodes.size());
        nodes.push_back({x_new, parent, best_cost});
        children.emplace_back();
        children[parent].push_back(new_index);

        // Rewire the neighbourhood through the new node.
        for (int i : neighbors) {
            if (i == parent) continue;
            const double c = best_cost + (nodes[i].p - x_new).norm();
            if (c + 1e-12 < nodes[i].cost && !segment_collides(nodes[i].p, x_new, obstacles))
                reparent(i, new_index);
        }

        // Try to connect the goal.
        const double to_goal = (goal - x_new).norm();
        if (to_goal <= cfg.step_size && !segment_collides(x_new, goal, obstacles)) {
            if (goal_index < 0) {
                goal_index = static_cast<int>(nodes.size());
                nodes.push_back({goal, new_index, best_cost + to_goal});
                children.emplace_back();
                children[new_index].push_back(goal_index);
            } else if (best_cost + to_goal + 1e-12 < nodes[goal_index].cost) {
                reparent(goal_index, new_index);
            }
        }
    }

    PathResult result;
    result.iterations_used = used;
    if (goal_index < 0) return result;  // failure, not an error

    result.status = PathResult::Status::found;
    result.cost = nodes[goal_index].cost;
    std::vector<Vec3> rev;
    for (int i = goal_index; i >= 0; i = nodes[i].parent) rev.push_back(nodes[i].p);
    result.path.assign(rev.rbegin(), rev.rend());
    return result;
}

PoseGoal resample_waypoint(const PoseGoal& goal, const PlanStep& step, const Scene3D& scene,
                           const PoseGoal& previous, double sigma, std::uint64_t seed,
                           int attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt) + 1));
    PoseGoal out = goal;

    if (const auto* tt = std::get_if<TranslateTarObj>(&step)) {
        const auto& target = scene.object_by_id(tt->target);
        const double dx = tt->offset[0], dy = tt->offset[1], dz = tt->offset[2];

        bool perturb[3];
        bool keep_z_sign;
        if (dx == 0.0 && dy == 0.0 && dz == 0.0) {
            perturb[0] = perturb[1] = perturb[2] = true;
            keep_z_sign = false;
        } else if (dx == 0.0 && dy == 0.0 && dz != 0.0) {
            perturb[0] = perturb[1] = false;
            perturb[2] = true;
            keep_z_sign = true;
        } else if (dz == 0.0) {
            perturb[0] = perturb[1] = true;
            perturb[2] = false;
            keep_z_sign = false;
        } else {
            perturb[0] = perturb[1] = perturb[2] = true;
            keep_z_sign = true;
        }

        double off[3];
        for (int tries = 0; tries < 1000; ++tries) {
            for (int i = 0; i < 3; ++i)
                off[i] = tt->offset[i] + (perturb[i] ? sigma * rng.gaussian() : 0.0);
            if (!keep_z_sign || off[2] * dz > 0.0) break;
            if (tries == 999) off[2] = dz;  // keep the original rather than give up
        }
        out.position = target.position + off[0] * target.obb.axis(0) +
                       off[1] * target.obb.axis(1) + off[2] * target.obb.axis(2);
        return out;
    }

    if (const auto* td = std::get_if<TranslateDirecAxis>(&step)) {
        auto ref_position = [&](int id) {
            return id == td->obj ? previous.position : scene.object_by_id(id).position;
        };
        const Vec3 diff = ref_position(td->ref2) - ref_position(td->ref1);
        if (diff.norm() < 1e-9) return out;
        const Vec3 v = diff.normalized();
        double dist = td->distance;
        for (int tries = 0; tries < 1000; ++tries) {
            dist = td->distance + sigma * rng.gaussian();
            if (td->distance == 0.0 || dist * td->distance > 0.0) break;
            if (tries == 999) dist = td->distance;
        }
        out.position = previous.position + dist * v;
        return out;
    }

    return out;  // rotation steps keep their goal; only positions resample
}

namespace {

struct Leg {
    std::vector<Vec3> polyline;  // starts at the leg's first pose, deduped
    Quat rot_start;
    Quat rot_end;
    double rot_deg = 0.0;
    double s_begin = 0.0;  // chain parameter range
    double s_end = 0.0;
};

struct Chain {
    std::vector<double> s;
    std::vector<Vec3> points;
};

// Global knot chain: every leg vertex once, chord-length parameterized;
// in-place legs contribute no chord.
Chain build_chain(std::vector<Leg>& legs) {
    Chain chain;
    chain.s.push_back(0.0);
    chain.points.push_back(legs.front().polyline.front());
    for (auto& leg : legs) {
        leg.s_begin = chain.s.back();
        for (size_t i = 1; i < leg.polyline.size(); ++i) {
            const double step = (leg.polyline[i] - leg.polyline[i - 1]).norm();
            chain.s.push_back(chain.s.back() + step);
            chain.points.push_back(leg.polyline[i]);
        }
        leg.s_end = chain.s.back();
    }
    return chain;
}

}  // namespace

Trajectory smooth_trajectory(const std::vector<PoseGoal>& poses,
                             const std::vector<std::vector<Vec3>>& leg_paths,
                             double samples_per_cm, double rotation_seconds_per_deg,
                             const ObstacleSet* avoid) {
    if (poses.size() < 2) throw std::invalid_argument("need at least two poses");
    if (leg_paths.size() + 1 != poses.size())
        throw std::invalid_argument("need one path per consecutive pose pair");
    if (!(samples_per_cm > 0.0)) throw std::invalid_argument("samples_per_cm must be positive");

    // Assemble legs with duplicate consecutive vertices collapsed.
    std::vector<Leg> legs(leg_paths.size());
    bool any_motion = false;
    for (size_t i = 0; i < leg_paths.size(); ++i) {
        Leg& leg = legs[i];
        leg.rot_start = poses[i].rotation;
        leg.rot_end = poses[i + 1].rotation;
        leg.polyline.push_back(poses[i].position);
        for (const auto& p : leg_paths[i])
            if ((p - leg.polyline.back()).norm() > 1e-12) leg.polyline.push_back(p);
        if ((poses[i + 1].position - leg.polyline.back()).norm() > 1e-9)
            throw std::invalid_argument("leg path does not end at the next pose");
        leg.rot_deg = quat_angle_deg(leg.rot_start, leg.rot_end);
        if (leg.polyline.size() > 1 || leg.rot_deg > 1e-12) any_motion = true;
    }
    if (!any_motion)
        throw std::invalid_argument("fewer than two distinct poses; nothing to interpolate");

    // Fit the spline; when obstacles are supplied, densify any leg whose
    // smoothed curve cuts into one (the underlying polylines are known to be
    // collision-free, so added midpoints pull the spline back to them).
    Chain chain = build_chain(legs);
    std::unique_ptr<Spline3D> spline;
    auto rebuild = [&]() {
        chain = build_chain(legs);
        spline = chain.points.size() >= 2 ? std::make_unique<Spline3D>(chain.s, chain.points)
                                          : nullptr;
    };
    rebuild();

    if (avoid && spline) {
        const double ds = 0.1;  // 1 mm collision probe
        for (int round = 0; round < 12; ++round) {
            bool any_collision = false;
            for (auto& leg : legs) {
                if (leg.s_end - leg.s_begin < 1e-12) continue;
                const int m = std::max(1, static_cast<int>(std::ceil((leg.s_end - leg.s_begin) / ds)));
                Vec3 prev = spline->eval(leg.s_begin);
                bool collides = false;
                for (int j = 1; j <= m && !collides; ++j) {
                    const Vec3 p =
                        spline->eval(leg.s_begin + (leg.s_end - leg.s_begin) * j / m);
                    collides = segment_collides(prev, p, *avoid);
                    prev = p;
                }
                if (!collides) continue;
                any_collision = true;
                std::vector<Vec3> dense;
                dense.push_back(leg.polyline.front());
                for (size_t i = 1; i < leg.polyline.size(); ++i) {
                    dense.push_back(0.5 * (leg.polyline[i - 1] + leg.polyline[i]));
                    dense.push_back(leg.polyline[i]);
                }
                leg.polyline = std::move(dense);
            }
            if (!any_collision) break;
            rebuild();
            if (round == 11)
                throw std::runtime_error("smoothing could not keep the trajectory clear");
        }
    }

    Trajectory traj;
    traj.samples.push_back({0.0, poses[0].position, poses[0].rotation});
    traj.waypoint_indices.push_back(0);

    double t0 = 0.0;
    for (size_t i = 0; i < legs.size(); ++i) {
        const Leg& leg = legs[i];
        const double chord = leg.s_end - leg.s_begin;
        const bool translating = chord > 1e-12;
        // Translation runs at 1 cm/s; in-place rotations get their own budget.
        const double duration =
            translating ? chord : leg.rot_deg * rotation_seconds_per_deg;
        if (duration <= 1e-12) {
            traj.waypoint_indices.push_back(traj.samples.size() - 1);
            continue;
        }
        const int n = translating
                          ? std::max(1, static_cast<int>(std::ceil(chord * samples_per_cm)))
                          : std::max(1, static_cast<int>(std::ceil(leg.rot_deg / 5.0)));
        for (int j = 1; j <= n; ++j) {
            const double frac = static_cast<double>(j) / n;
            TrajectorySample s;
            s.t = t0 + frac * duration;
            if (j == n) {
                s.position = poses[i + 1].position;
                s.rotation = poses[i + 1].rotation;
            } else {
                s.position = translating ? spline->eval(leg.s_begin + frac * chord)
                                         : poses[i].position;
                s.rotation = leg.rot_start.slerp(frac, leg.rot_end).normalized();
            }
            traj.samples.push_back(std::move(s));
        }
        traj.waypoint_indices.push_back(traj.samples.size() - 1);
        t0 += duration;
    }
    return traj;
}

}  // namespace scene3d
