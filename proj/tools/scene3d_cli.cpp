// scene3d: reconstruct metric 3D scenes from precomputed depth/masks/meshes,
// answer spatial queries, diff two scenes, and plan smoothed collision-free
// object trajectories from motion-plan scripts.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "scene3d/io.hpp"
#include "scene3d/plan_dsl.hpp"
#include "scene3d/planner.hpp"
#include "scene3d/spatial.hpp"
#include "scene3d/text_format.hpp"
#include "scene3d/waypoints.hpp"

using namespace scene3d;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitPlanning = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixed2(double v) {
    if (std::abs(v) < 1e-9) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string vec_fixed2(const Vec3& v) {
    return "[" + fixed2(v.x()) + ", " + fixed2(v.y()) + ", " + fixed2(v.z()) + "]";
}

// Motion wording for diff reports (relations use behind/above/below instead).
const char* motion_word(Direction d) {
    switch (d) {
        case Direction::behind: return "back";
        case Direction::above: return "up";
        case Direction::below: return "down";
        default: return to_string(d);
    }
}

struct ReconstructArgs {
    std::string manifest_path;
    std::string out_path;
    int subdivision = 2;
    int inplane = 8;
    double alpha = 1.0;
    double beta = 1.0;
    int passes = 2;
};

int cmd_reconstruct(const ReconstructArgs& args) {
    const SceneManifest manifest = load_manifest(args.manifest_path);
    const CameraModel cam = manifest.camera();
    const DepthMap depth = load_pgm16_depth(manifest.depth_path);

    std::vector<ObjectInput> inputs;
    for (const auto& mo : manifest.objects) {
        ObjectInput in;
        in.id = mo.id;
        in.name = mo.name;
        in.initial_scale = mo.initial_scale;
        in.mask = load_pbm(mo.mask_path);
        try {
            in.mesh = load_obj(mo.mesh_path);
        } catch (const std::exception&) {
            throw std::runtime_error("object " + std::to_string(mo.id) + ": mesh not found: " +
                                     mo.mesh_path);
        }
        in.mesh_path = mo.mesh_path;
        inputs.push_back(std::move(in));
    }

    ShotAngle angle;
    if (manifest.shot_angle) {
        angle = *manifest.shot_angle;
    } else {
        const auto suggestion = infer_shot_angle(scene_extents(cam, depth), cam);
        angle = suggestion.resolved;
        std::cout << "shot angle inferred: " << to_string(angle) << " (confidence "
                  << fixed2(suggestion.confidence) << ")\n";
    }

    ReconstructionConfig cfg;
    cfg.templates.subdivision_level = args.subdivision;
    cfg.templates.inplane_count = args.inplane;
    cfg.alpha = args.alpha;
    cfg.beta = args.beta;
    cfg.scale_calibration_passes = args.passes;

    const Scene3D scene = build_scene(inputs, cam, depth, angle, cfg);
    save_scene(scene, args.out_path);

    for (const auto& o : scene.objects) {
        std::cout << "object " << o.id << " (" << o.name << "): position "
                  << vec_fixed2(o.position) << " cm, scale " << fixed2(o.scale) << ", size "
                  << vec_fixed2(2.0 * o.obb.half_extents) << " cm"
                  << (o.placed_off_plane ? " [off-plane ray fallback]" : "") << "\n";
    }
    std::cout << "scene written: " << args.out_path << "\n";
    return kExitOk;
}

int cmd_summarize(const std::string& scene_path) {
    const Scene3D scene = load_scene(scene_path, /*require_meshes=*/false);
    const SpatialSummary summary = summarize_scene(scene);
    std::cout << "scene: " << scene.objects.size() << " objects, shot angle "
              << to_string(scene.shot_angle) << "\n";
    std::cout << summary.text;
    return kExitOk;
}

int cmd_query(const std::string& scene_path, const std::string& query_file,
              const std::vector<std::string>& inline_queries) {
    const Scene3D scene = load_scene(scene_path, /*require_meshes=*/false);
    std::vector<std::string> lines = inline_queries;
    if (!query_file.empty()) {
        std::istringstream in(read_file(query_file));
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
                lines.push_back(line);
        }
    }
    if (lines.empty()) throw std::runtime_error("no queries given (use --file or --query)");

    for (size_t i = 0; i < lines.size(); ++i) {
        // Answers stream out as they are computed; a bad query aborts after
        // flushing the prior ones.
        const MetricQuery q = parse_query(lines[i]);
        const QueryAnswer a = answer_metric_query(scene, q);
        std::cout << i << ": " << a.to_text() << "\n" << std::flush;
    }
    return kExitOk;
}

int cmd_diff(const std::string& before_path, const std::string& after_path,
             const std::vector<double>& camera_delta) {
    const Scene3D before = load_scene(before_path, false);
    const Scene3D after = load_scene(after_path, false);
    std::optional<CameraDelta> delta;
    if (!camera_delta.empty()) {
        if (camera_delta.size() != 3)
            throw std::runtime_error("--camera-delta needs three angles (deg about world x y z)");
        delta = CameraDelta{Vec3(camera_delta[0], camera_delta[1], camera_delta[2])};
    }
    const SceneDiff diff = diff_scenes(before, after, delta);

    if (diff.camera_delta_deg)
        std::cout << "camera delta (deg about world x y z): "
                  << vec_fixed2(*diff.camera_delta_deg) << "\n";
    for (const auto& d : diff.objects) {
        const char* dir = motion_word(dominant_direction(d.translation_world));
        std::cout << "obj " << d.id << ": moved " << fixed2(d.total_distance) << " cm ("
                  << (d.total_distance < 1e-9 ? "none" : dir) << ")\n";
        std::cout << "obj " << d.id << " translation" << (delta ? " actual" : "")
                  << " (world): " << vec_fixed2(d.translation_world) << " cm\n";
        if (delta) {
            std::cout << "obj " << d.id << " apparent (world, camera change ignored): "
                      << vec_fixed2(d.apparent_translation_world) << " cm\n";
        }
        std::cout << "obj " << d.id << " apparent (camera frame): "
                  << vec_fixed2(d.apparent_translation_cam) << " cm\n";
        std::cout << "obj " << d.id << " rotation: " << fixed2(d.rotation_angle_deg)
                  << " deg about [" << fixed2(d.rotation_axis.x()) << ", "
                  << fixed2(d.rotation_axis.y()) << ", " << fixed2(d.rotation_axis.z())
                  << "]; per-axis z/y/x: " << vec_fixed2(d.euler_zyx_deg) << " deg\n";
        std::cout << "obj " << d.id << " tilt change: " << fixed2(d.tilt_change_deg) << " deg\n";
    }
    return kExitOk;
}

struct PlanArgs {
    std::string scene_path;
    std::string plan_path;
    std::string out_path;
    std::uint64_t seed = 0;
    PlannerConfig cfg;
    int threads = 1;
};

ObstacleSet build_obstacles_parallel(const Scene3D& scene, int manipulating_id, int k,
                                     std::uint64_t seed, int threads) {
    if (threads <= 1 || scene.objects.size() <= 1)
        return build_obstacles(scene, manipulating_id, k, seed);
    // Clustering is independent per object; boxes merge in object order, so
    // the result is identical for any thread count.
    std::vector<std::future<ObstacleSet>> futures;
    std::vector<int> ids;
    for (const auto& obj : scene.objects)
        if (obj.id != manipulating_id) ids.push_back(obj.id);
    for (int id : ids) {
        futures.push_back(std::async(std::launch::async, [&, id] {
            Scene3D pair;
            pair.camera = scene.camera;
            pair.objects.push_back(scene.object_by_id(manipulating_id));
            pair.objects.push_back(scene.object_by_id(id));
            return build_obstacles(pair, manipulating_id, k, seed);
        }));
    }
    ObstacleSet merged;
    for (auto& f : futures) {
        const ObstacleSet part = f.get();
        merged.boxes.insert(merged.boxes.end(), part.boxes.begin(), part.boxes.end());
    }
    return merged;
}

double resample_sigma(const Scene3D& scene, const PlanStep& step, double scale_factor) {
    int about_id = -1;
    if (const auto* tt = std::get_if<TranslateTarObj>(&step)) about_id = tt->target;
    if (const auto* td = std::get_if<TranslateDirecAxis>(&step)) about_id = td->ref2;
    if (about_id < 0 || !scene.has_object(about_id)) return 0.0;
    const auto& target = scene.object_by_id(about_id);
    return scale_factor * 2.0 * target.obb.half_extents.maxCoeff();
}

int cmd_plan(const PlanArgs& args) {
    const Scene3D scene = load_scene(args.scene_path, /*require_meshes=*/true);
    const PlanProgram program = parse_plan(read_file(args.plan_path));

    PlannerConfig cfg = args.cfg;
    cfg.rng_seed = args.seed;

    const ObstacleSet obstacles = build_obstacles_parallel(
        scene, program.manipulating_id, cfg.kmeans_k, derive_seed(args.seed, 0xB0CE5),
        args.threads);

    PoseGoal current = start_pose(scene, program.manipulating_id);
    std::vector<PoseGoal> poses{current};
    std::vector<std::vector<Vec3>> leg_paths;

    for (size_t i = 0; i < program.steps.size(); ++i) {
        const PlanStep& step = program.steps[i];
        const PoseGoal planned = resolve_step(scene, step, current);
        const double sigma = resample_sigma(scene, step, cfg.resample_sigma_scale);
        const std::uint64_t leg_seed = derive_seed(args.seed, i + 1);

        PoseGoal goal = planned;
        std::vector<Vec3> path;
        bool done = false;
        int resamples = 0;
        double cost = 0.0;

        for (int attempt = 0; attempt <= cfg.resample_max_attempts && !done; ++attempt) {
            if (attempt > 0) {
                goal = resample_waypoint(planned, step, scene, current, sigma, leg_seed, attempt);
                ++resamples;
            }
            const double leg_len = (goal.position - current.position).norm();
            if (leg_len < 1e-12) {  // rotation in place: nothing to search
                path = {current.position, goal.position};
                cost = 0.0;
                done = true;
                break;
            }
            if (point_in_obstacles(goal.position, obstacles)) continue;

            const Aabb bounds = planning_bounds(scene, {current.position, goal.position});
            PlannerConfig leg_cfg = cfg;
            leg_cfg.rng_seed = derive_seed(leg_seed, 0x77AA, attempt);
            const PathResult res =
                plan_rrt_star(current.position, goal.position, obstacles, bounds, leg_cfg);
            if (res.status == PathResult::Status::found) {
                path = res.path;
                cost = res.cost;
                done = true;
            }
        }

        if (!done) {
            std::cerr << "error: leg " << i + 1 << " failed after " << resamples
                      << " resamples; " << leg_paths.size() << " legs were planned\n";
            return kExitPlanning;
        }

        std::cout << "leg " << i + 1 << ": cost " << fixed2(cost) << " cm, resamples "
                  << resamples << "\n";
        current = goal;
        poses.push_back(goal);
        leg_paths.push_back(std::move(path));
    }

    const Trajectory traj = smooth_trajectory(poses, leg_paths, cfg.samples_per_cm,
                                              cfg.rotation_seconds_per_deg, &obstacles);
    save_trajectory(traj, args.out_path);
    std::cout << "trajectory: " << traj.samples.size() << " samples, "
              << fixed2(traj.samples.back().t) << " s -> " << args.out_path << "\n";
    return kExitOk;
}

struct MatchPoseArgs {
    std::string mesh_path;
    std::string mask_path;
    int subdivision = 2;
    int inplane = 8;
    double alpha = 1.0;
    double beta = 1.0;
};

int cmd_match_pose(const MatchPoseArgs& args) {
    const TriMesh mesh = load_obj(args.mesh_path);
    const BinaryMask mask = load_pbm(args.mask_path);
    TemplateConfig cfg;
    cfg.subdivision_level = args.subdivision;
    cfg.inplane_count = args.inplane;
    const TemplateSet templates = make_template_set(mesh, cfg);
    const RotationEstimate est = estimate_rotation(mask, mesh, templates, args.alpha, args.beta);

    const Quat& q = est.object_rotation;
    std::cout << "template index: " << est.template_index << "\n";
    std::cout << "rotation (w x y z): " << format_double(q.w()) << " " << format_double(q.x())
              << " " << format_double(q.y()) << " " << format_double(q.z()) << "\n";
    std::cout << "score: total=" << format_double(est.best_score.total)
              << " area_term=" << format_double(est.best_score.area_term)
              << " hu_term=" << format_double(est.best_score.hu_term) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metric 3D scene reconstruction, spatial queries and trajectory planning"};
    app.require_subcommand(1);

    ReconstructArgs rec;
    auto* reconstruct = app.add_subcommand("reconstruct", "build a scene from a manifest");
    reconstruct->add_option("manifest", rec.manifest_path, "scene manifest file")->required();
    reconstruct->add_option("out", rec.out_path, "output scene file")->required();
    reconstruct->add_option("--subdivision", rec.subdivision, "icosphere subdivision level");
    reconstruct->add_option("--inplane", rec.inplane, "in-plane rolls per viewpoint");
    reconstruct->add_option("--alpha", rec.alpha, "area term weight");
    reconstruct->add_option("--beta", rec.beta, "hu term weight");
    reconstruct->add_option("--passes", rec.passes, "scale calibration passes");

    std::string scene_path;
    auto* summarize = app.add_subcommand("summarize", "print the spatial context summary");
    summarize->add_option("scene", scene_path, "scene file")->required();

    std::string query_scene, query_file;
    std::vector<std::string> inline_queries;
    auto* query = app.add_subcommand("query", "answer metric queries about a scene");
    query->add_option("scene", query_scene, "scene file")->required();
    query->add_option("--file", query_file, "query file, one query per line");
    query->add_option("--query,-q", inline_queries, "inline query (repeatable)");

    std::string before_path, after_path;
    std::vector<double> camera_delta;
    auto* diff = app.add_subcommand("diff", "report per-object changes between two scenes");
    diff->add_option("before", before_path, "scene before")->required();
    diff->add_option("after", after_path, "scene after")->required();
    diff->add_option("--camera-delta", camera_delta,
                     "camera rotation change, deg about world x y z")
        ->expected(3);

    PlanArgs plan;
    auto* planc = app.add_subcommand("plan", "plan a trajectory for a motion-plan script");
    planc->add_option("scene", plan.scene_path, "scene file")->required();
    planc->add_option("plan", plan.plan_path, "motion plan text file")->required();
    planc->add_option("out", plan.out_path, "output trajectory file")->required();
    planc->add_option("--seed", plan.seed, "random seed for planning");
    planc->add_option("--step-size", plan.cfg.step_size, "RRT* steering step (cm)");
    planc->add_option("--max-iters", plan.cfg.max_iterations, "RRT* iteration budget");
    planc->add_option("--goal-bias", plan.cfg.goal_bias, "probability of sampling the goal");
    planc->add_option("--neighbor-scale", plan.cfg.neighbor_radius_scale,
                      "rewiring radius scale (cm)");
    planc->add_option("--kmeans-k", plan.cfg.kmeans_k, "clusters per obstacle object");
    planc->add_option("--resample-sigma-scale", plan.cfg.resample_sigma_scale,
                      "sigma as a fraction of the target's largest dimension");
    planc->add_option("--resample-attempts", plan.cfg.resample_max_attempts,
                      "goal resampling budget per leg");
    planc->add_option("--samples-per-cm", plan.cfg.samples_per_cm, "trajectory sample density");
    planc->add_option("--threads", plan.threads, "worker threads for obstacle clustering");

    MatchPoseArgs match;
    auto* matchc = app.add_subcommand("match-pose", "debug: template-match a mask to a mesh");
    matchc->add_option("mesh", match.mesh_path, "object mesh (OBJ)")->required();
    matchc->add_option("mask", match.mask_path, "observed mask (PBM)")->required();
    matchc->add_option("--subdivision", match.subdivision, "icosphere subdivision level");
    matchc->add_option("--inplane", match.inplane, "in-plane rolls per viewpoint");
    matchc->add_option("--alpha", match.alpha, "area term weight");
    matchc->add_option("--beta", match.beta, "hu term weight");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (reconstruct->parsed()) return cmd_reconstruct(rec);
        if (summarize->parsed()) return cmd_summarize(scene_path);
        if (query->parsed()) return cmd_query(query_scene, query_file, inline_queries);
        if (diff->parsed()) return cmd_diff(before_path, after_path, camera_delta);
        if (planc->parsed()) return cmd_plan(plan);
        if (matchc->parsed()) return cmd_match_pose(match);
    } catch (const PlanParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
