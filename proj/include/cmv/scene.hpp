#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmv/consistency.hpp"
#include "cmv/triangulation.hpp"

namespace cmv {

enum class FieldMode { Rational, F64 };
enum class CurveKind { Conic, Plane3, Twisted, Chow };

struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

// One reproducible experiment: cameras, a space curve, optional per-view
// observations. Serialized with rationals as "p/q" strings and floats as
// JSON numbers; schema_version 1.
template <class K>
struct Scene {
    std::vector<Mat<K>> cameras;
    SpaceCurve<K> curve;
    std::optional<std::vector<ImageCurve<K>>> observations;
    std::optional<NoiseSpec> noise;

    Arrangement<K> arrangement() const
    {
        Arrangement<K> arr;
        for (const auto& m : cameras) arr.cameras.push_back(make_camera(m));
        return arr;
    }
};

struct SceneDocument {
    FieldMode field = FieldMode::Rational;
    std::optional<Scene<Rat>> rational;
    std::optional<Scene<double>> f64;
};

nlohmann::json scene_to_json(const SceneDocument& doc);
SceneDocument scene_from_json(const nlohmann::json& j);

// Random rational scene: integer entries in [-9, 9], rejecting degenerate
// configurations (rank-deficient cameras, equal centers, planes through
// centers, reducible conics, centers on the twisted cubic).
Scene<Rat> generate_scene(std::uint64_t seed, int n_cameras, CurveKind kind);

Scene<double> to_f64(const Scene<Rat>& s);

// Project the curve into every camera and attach the observations; float
// scenes optionally get chart-space Gaussian noise.
template <class K>
void attach_observations(Scene<K>& scene);
void apply_noise(Scene<double>& scene, double sigma, std::uint64_t seed);

nlohmann::json chow_to_json(const ChowForm<Rat>& c);
nlohmann::json chow_to_json(const ChowForm<double>& c);

std::string field_name(FieldMode m);
std::string kind_name(CurveKind k);

}  // namespace cmv
