#pragma once

#include <vector>

#include "scene3d/mask.hpp"
#include "scene3d/mesh.hpp"
#include "scene3d/render.hpp"

namespace scene3d {

struct MatchScore {
    double area_term = 0.0;  // |1 - min(paA,paB)/max(paA,paB)|, in [0,1]
    double hu_term = 0.0;    // sum over the seven log-Hu reciprocal differences
    double total = 0.0;      // alpha * area_term + beta * hu_term
};

/// Shape signature used by the matcher: foreground area of the bounding-rect
/// crop resized to a common grid, plus the transformed Hu moments of the crop.
struct ShapeFeatures {
    double resized_area = 0.0;
    HuVector hu_transformed{};  // 1 / (sgn(m) log|m|), 0 for vanishing moments
};

struct TemplateConfig {
    int subdivision_level = 2;
    int inplane_count = 8;
    int resolution = 256;      // square template renders
    double frame_fill = 0.8;   // fraction of the half-image the object spans
    // Camera distance in bounding radii. Large enough that template
    // perspective is mild; scene objects usually sit at a similar or larger
    // distance-to-size ratio, so silhouettes stay comparable.
    double sphere_radius_factor = 12.0;
    int resize_grid = 128;     // common comparison grid for the area term
};

/// Rendered silhouettes of one mesh from every icosphere viewpoint, with the
/// per-template shape features precomputed. Read-only after construction.
struct TemplateSet {
    std::vector<Viewpoint> viewpoints;
    std::vector<BinaryMask> masks;
    std::vector<ShapeFeatures> features;
    TemplateConfig config;
    CameraModel camera;       // template render camera
    double sphere_radius = 0.0;
};

ShapeFeatures compute_shape_features(const BinaryMask& mask, int resize_grid = 128);

MatchScore score_features(const ShapeFeatures& a, const ShapeFeatures& b, double alpha,
                          double beta);

/// Appendix-style shape similarity of two masks: crop both to their bounding
/// rectangles, compare areas on a common resized grid and compare log-Hu
/// signatures of the crops. Lower is more similar; identical masks score 0.
MatchScore template_score(const BinaryMask& observed, const BinaryMask& template_mask,
                          double alpha = 1.0, double beta = 1.0);

TemplateSet make_template_set(const TriMesh& mesh, const TemplateConfig& config = {});

struct RotationEstimate {
    Quat object_rotation;  // relative to the canonical camera
    MatchScore best_score;
    size_t template_index = 0;
};

/// Best-scoring template against the observed mask; ties break toward the
/// lowest template index. The returned rotation reproduces the winning
/// template when the mesh is rendered from the canonical viewpoint.
RotationEstimate estimate_rotation(const BinaryMask& observed, const TriMesh& mesh,
                                   const TemplateSet& templates, double alpha = 1.0,
                                   double beta = 1.0);

/// Camera pose that reproduces template silhouettes for an object rotated by
/// the estimate: identity rotation at distance sphere_radius behind the origin.
Viewpoint canonical_viewpoint(const TemplateSet& templates);

}  // namespace scene3d
