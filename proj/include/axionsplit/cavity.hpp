#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "axionsplit/beam_optics.hpp"

namespace axionsplit::cavity {

enum class CavityKind { confocal, planar_concave, convex_concave, planar_planar };

std::string_view to_string(CavityKind kind);
CavityKind cavity_kind_from_string(std::string_view text);

/// Mirror as seen by the chief ray. Focal lengths are stored as magnitudes;
/// a convex mirror feeds -focal_magnitude to the focusing matrix.
struct MirrorSpec {
    enum class Shape { planar, concave, convex };

    Shape shape = Shape::planar;
    double focal_magnitude = 0.0;

    static MirrorSpec planar() { return {}; }
    static MirrorSpec concave(double focal) { return {Shape::concave, focal}; }
    static MirrorSpec convex(double focal) { return {Shape::convex, focal}; }

    /// Signed focal length; +inf for a planar mirror.
    double signed_focal() const;
    optics::TransferMatrix matrix() const;

    friend bool operator==(const MirrorSpec&, const MirrorSpec&) = default;
};

/// Parses "planar", "concave:<f>", "convex:<f>".
MirrorSpec mirror_from_string(std::string_view text);
std::string to_string(const MirrorSpec& mirror);

enum class ExtractionMirror { m1, m2 };
enum class Direction { forward, backward };

std::string_view to_string(ExtractionMirror mirror);
ExtractionMirror extraction_mirror_from_string(std::string_view text);

/// Geometry along the unfolded optical path. A forward traversal runs from
/// M1 (A) over the first gap, the field region (B to C) and the second gap
/// to M2 (D); a backward traversal retraces it to M1. The detector plane E
/// sits detector_distance behind the extraction mirror.
struct CavityConfig {
    CavityKind kind = CavityKind::confocal;
    double cavity_length = 14.0;
    double field_length = 10.0;
    double gap = 2.0;
    double detector_distance = 2.0;
    // Optional thin lens in front of the detector, lens_offset upstream of E.
    bool detector_lens = false;
    double lens_offset = 0.5;
    double detector_lens_focal = 0.25;
    MirrorSpec mirror1 = MirrorSpec::concave(12.5);
    MirrorSpec mirror2 = MirrorSpec::concave(12.5);
    int n_traversals = 15;
    double theta_split = 4e-10;
    ExtractionMirror extraction_mirror = ExtractionMirror::m2;
    bool split_on_backward = true;
    double coalesce_tol_position = 1e-12;
    double coalesce_tol_angle = 1e-16;
    optics::RayState initial_ray{};
    std::size_t max_beams = std::size_t{1} << 22;

    /// Throws ConfigError on any inconsistency (including
    /// field_length + 2 gap != cavity_length).
    void validate() const;
};

/// Table-1 geometry with the mirror pair of the requested cavity kind.
CavityConfig build_preset(CavityKind kind);

/// A chief ray carrying a fraction of the beam power.
struct WeightedBeam {
    optics::RayState ray;
    double weight = 1.0;
    int generation = 0;
    // Net number of split kicks (sum of branch signs). Each kick pair moves
    // the angle by 2 theta_split, so this is transverse momentum in those units.
    double momentum = 0.0;
};

/// Bifurcating population of chief rays. Weights sum to one.
class BeamEnsemble {
public:
    BeamEnsemble() = default;
    BeamEnsemble(std::vector<WeightedBeam> beams, double tol_position, double tol_angle);

    static BeamEnsemble single(const optics::RayState& ray, double tol_position,
                               double tol_angle);

    const std::vector<WeightedBeam>& beams() const { return beams_; }
    std::size_t size() const { return beams_.size(); }
    double tol_position() const { return tol_position_; }
    double tol_angle() const { return tol_angle_; }

    double total_weight() const;
    double mean_position() const;
    double mean_angle() const;
    /// Weighted RMS of positions about zero.
    double rms_position() const;
    double rms_angle() const;

private:
    std::vector<WeightedBeam> beams_;
    double tol_position_ = 0.0;
    double tol_angle_ = 0.0;
};

/// Applies a mirror to one ray. The accumulated transverse momentum is
/// kept; only the mirror's focusing acts (planar mirror = identity).
optics::RayState reflect_and_conserve(const optics::RayState& ray, const MirrorSpec& mirror);

/// Merges beams closer than both tolerances into their weight-weighted mean.
/// Deterministic: beams are visited in sorted (position, angle) order.
BeamEnsemble coalesce(const BeamEnsemble& ensemble);

/// Transport from one mirror to the other, splitting at the field entry and
/// kicking again at the exit. Stops at the far mirror plane before the
/// reflection. `beams_before_coalesce`, if given, receives the raw count.
BeamEnsemble traverse_to_mirror(const BeamEnsemble& ensemble, const CavityConfig& config,
                                Direction direction,
                                std::size_t* beams_before_coalesce = nullptr);

/// Reflects every beam off `mirror`.
BeamEnsemble reflect(const BeamEnsemble& ensemble, const MirrorSpec& mirror);

/// A full traversal: traverse_to_mirror followed by the far-mirror reflection.
BeamEnsemble traverse(const BeamEnsemble& ensemble, const CavityConfig& config,
                      Direction direction);

/// Carries a copy of the mirror-plane ensemble through the exit mirror,
/// the optional detector lens and detector_distance to the plane E.
BeamEnsemble to_detector(const BeamEnsemble& at_mirror, const CavityConfig& config);

/// Far mirror of a traversal in `direction`.
const MirrorSpec& far_mirror(const CavityConfig& config, Direction direction);

struct Snapshot {
    int traversal = 0;          // 1-based traversal index
    BeamEnsemble at_detector;
    std::size_t beams_before_coalesce = 0;
};

struct RunResult {
    std::vector<Snapshot> snapshots;
    BeamEnsemble final_ensemble;  // after the last reflection
};

/// Alternates forward/backward traversals. With M2 extraction every
/// traversal is sampled (behind the mirror just reached); with M1
/// extraction only traversals ending on M1, i.e. every second one.
RunResult run(const CavityConfig& config, bool record_detector = true);

}  // namespace axionsplit::cavity
