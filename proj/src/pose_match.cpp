#include "scene3d/pose_match.hpp"

#include <cmath>
#include <stdexcept>

namespace scene3d {

namespace {

double log_hu_reciprocal(double m) {
    // sgn(m) log(m) read as sgn(m) log|m|; vanishing moments contribute 0, as
    // does |m| ~ 1 where the reciprocal blows up.
    const double a = std::abs(m);
    if (a < 1e-30) return 0.0;
    const double denom = (m > 0 ? 1.0 : -1.0) * std::log(a);
    if (std::abs(denom) < 1e-12) return 0.0;
    return 1.0 / denom;
}

}  // namespace

ShapeFeatures compute_shape_features(const BinaryMask& mask, int resize_grid) {
    const MaskStats stats = mask_stats(mask);  // throws on empty mask
    const BinaryMask crop = crop_mask(mask, stats.bounding_rect);
    ShapeFeatures f;
    f.resized_area =
        static_cast<double>(mask_area(resize_mask(crop, resize_grid, resize_grid)));
    const HuVector hu = hu_moments(crop);
    for (int i = 0; i < 7; ++i) f.hu_transformed[i] = log_hu_reciprocal(hu[i]);
    return f;
}

MatchScore score_features(const ShapeFeatures& a, const ShapeFeatures& b, double alpha,
                          double beta) {
    MatchScore s;
    const double lo = std::min(a.resized_area, b.resized_area);
    const double hi = std::max(a.resized_area, b.resized_area);
    s.area_term = hi > 0.0 ? std::abs(1.0 - lo / hi) : 0.0;
    for (int i = 0; i < 7; ++i)
        s.hu_term += std::abs(a.hu_transformed[i] - b.hu_transformed[i]);
    s.total = alpha * s.area_term + beta * s.hu_term;
    return s;
}

MatchScore template_score(const BinaryMask& observed, const BinaryMask& template_mask,
                          double alpha, double beta) {
    return score_features(compute_shape_features(observed), compute_shape_features(template_mask),
                          alpha, beta);
}

TemplateSet make_template_set(const TriMesh& mesh, const TemplateConfig& config) {
    const double rho = mesh.bounding_radius();
    if (!(rho > 0.0)) throw std::invalid_argument("mesh has no extent");

    TemplateSet set;
    set.config = config;
    set.sphere_radius = config.sphere_radius_factor * rho;

    // Focal length framing the bounding sphere to frame_fill of the half-image;
    // with the default distance factor no vertex can leave the frustum.
    const double f = config.frame_fill * (config.resolution / 2.0) * set.sphere_radius / rho;
    set.camera = {f, f, config.resolution / 2.0, config.resolution / 2.0, config.resolution,
                  config.resolution};

    set.viewpoints =
        icosphere_viewpoints(config.subdivision_level, config.inplane_count, set.sphere_radius);
    set.masks.reserve(set.viewpoints.size());
    set.features.reserve(set.viewpoints.size());
    for (const auto& vp : set.viewpoints) {
        BinaryMask m = render_silhouette(mesh, Quat::Identity(), 1.0, vp, set.camera);
        if (mask_area(m) == 0)
            throw std::runtime_error("template render produced an empty silhouette");
        set.features.push_back(compute_shape_features(m, config.resize_grid));
        set.masks.push_back(std::move(m));
    }
    return set;
}

Viewpoint canonical_viewpoint(const TemplateSet& templates) {
    return {Quat::Identity(), Vec3(0, 0, -templates.sphere_radius)};
}

namespace {

// Aspect-preserving letterbox onto the comparison grid. The appendix area
// term deliberately ignores aspect; the overlap refinement must not, or
// transposed-aspect views (90 degree rolls) stay indistinguishable.
BinaryMask letterboxed_crop(const BinaryMask& mask, int grid) {
    const BinaryMask crop = crop_mask(mask, mask_stats(mask).bounding_rect);
    const int longest = std::max(crop.width, crop.height);
    const int w = std::max(1, crop.width * grid / longest);
    const int h = std::max(1, crop.height * grid / longest);
    const BinaryMask scaled = resize_mask(crop, w, h);
    BinaryMask out(grid, grid);
    const int x0 = (grid - w) / 2, y0 = (grid - h) / 2;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (scaled.at(x, y)) out.set(x0 + x, y0 + y);
    return out;
}

double overlap_ratio(const BinaryMask& a, const BinaryMask& b) {
    std::int64_t inter = 0, uni = 0;
    for (size_t i = 0; i < a.bits.size(); ++i) {
        const bool fa = a.bits[i] != 0, fb = b.bits[i] != 0;
        inter += fa && fb;
        uni += fa || fb;
    }
    return uni > 0 ? static_cast<double>(inter) / uni : 0.0;
}

}  // namespace

RotationEstimate estimate_rotation(const BinaryMask& observed, const TriMesh& mesh,
                                   const TemplateSet& templates, double alpha, double beta) {
    (void)mesh;  // the set was rendered from this mesh; kept for the contract
    if (templates.masks.empty()) throw std::invalid_argument("empty template set");
    const ShapeFeatures obs = compute_shape_features(observed, templates.config.resize_grid);

    std::vector<MatchScore> scores(templates.features.size());
    size_t best = 0;
    for (size_t j = 0; j < templates.features.size(); ++j) {
        scores[j] = score_features(obs, templates.features[j], alpha, beta);
        if (scores[j].total < scores[best].total) best = j;
    }

    // The appendix score cannot separate in-plane rotations: Hu moments are
    // rotation invariant and the crop-resized area nearly so, which leaves
    // roll siblings tied up to rasterization noise (exactly tied at 180
    // degrees). Silhouette overlap arbitrates the near-ties; exact overlap
    // ties still fall to the lowest index.
    const double margin = 0.5 * scores[best].total + 0.02;
    const BinaryMask obs_crop = letterboxed_crop(observed, templates.config.resize_grid);
    size_t winner = best;
    double best_overlap = -1.0;
    for (size_t j = 0; j < scores.size(); ++j) {
        if (scores[j].total > scores[best].total + margin) continue;
        const double ov = overlap_ratio(
            obs_crop, letterboxed_crop(templates.masks[j], templates.config.resize_grid));
        if (ov > best_overlap) {
            best_overlap = ov;
            winner = j;
        }
    }

    RotationEstimate result;
    result.template_index = winner;
    result.best_score = scores[winner];
    // A template viewed by camera rotation R equals the object rotated by R^-1
    // in front of the canonical camera.
    result.object_rotation =
        templates.viewpoints[winner].camera_rotation.conjugate().normalized();
    return result;
}

}  // namespace scene3d
