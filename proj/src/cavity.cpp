#include "axionsplit/cavity.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "axionsplit/errors.hpp"
#include "axionsplit/numeric.hpp"

namespace axionsplit::cavity {

using optics::RayState;
using optics::TransferMatrix;

std::string_view to_string(CavityKind kind) {
    switch (kind) {
        case CavityKind::confocal: return "confocal";
        case CavityKind::planar_concave: return "planar-concave";
        case CavityKind::convex_concave: return "convex-concave";
        case CavityKind::planar_planar: return "planar-planar";
    }
    return "?";
}

CavityKind cavity_kind_from_string(std::string_view text) {
    for (auto kind : {CavityKind::confocal, CavityKind::planar_concave, CavityKind::convex_concave,
                      CavityKind::planar_planar}) {
        if (text == to_string(kind)) return kind;
    }
    throw ConfigError("unknown cavity kind '" + std::string(text) + "'");
}

double MirrorSpec::signed_focal() const {
    switch (shape) {
        case Shape::planar: return std::numeric_limits<double>::infinity();
        case Shape::concave: return focal_magnitude;
        case Shape::convex: return -focal_magnitude;
    }
    return std::numeric_limits<double>::infinity();
}

TransferMatrix MirrorSpec::matrix() const {
    if (shape == Shape::planar) return TransferMatrix::identity();
    return optics::focusing_matrix(signed_focal());
}

namespace {

double parse_double(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

MirrorSpec mirror_from_string(std::string_view text) {
    if (text == "planar") return MirrorSpec::planar();
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ConfigError("mirror must be 'planar', 'concave:<f>' or 'convex:<f>', got '" +
                          std::string(text) + "'");
    }
    const auto shape = text.substr(0, colon);
    const double focal = parse_double(text.substr(colon + 1), "mirror focal length");
    if (!(focal > 0.0) || !std::isfinite(focal)) {
        throw ConfigError("mirror focal length magnitude must be positive and finite");
    }
    if (shape == "concave") return MirrorSpec::concave(focal);
    if (shape == "convex") return MirrorSpec::convex(focal);
    throw ConfigError("unknown mirror shape '" + std::string(shape) + "'");
}

std::string to_string(const MirrorSpec& mirror) {
    if (mirror.shape == MirrorSpec::Shape::planar) return "planar";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", mirror.focal_magnitude);
    return std::string(mirror.shape == MirrorSpec::Shape::concave ? "concave:" : "convex:") + buf;
}

std::string_view to_string(ExtractionMirror mirror) {
    return mirror == ExtractionMirror::m1 ? "M1" : "M2";
}

ExtractionMirror extraction_mirror_from_string(std::string_view text) {
    if (text == "M1" || text == "m1") return ExtractionMirror::m1;
    if (text == "M2" || text == "m2") return ExtractionMirror::m2;
    throw ConfigError("extraction mirror must be M1 or M2, got '" + std::string(text) + "'");
}

void CavityConfig::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ConfigError(msg);
    };
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto non_negative = [](double v) { return std::isfinite(v) && v >= 0.0; };

    require(positive(cavity_length), "cavity length must be positive");
    require(positive(field_length), "field length must be positive");
    require(non_negative(gap), "gap must be >= 0");
    require(non_negative(detector_distance), "detector distance must be >= 0");
    const double closure = field_length + 2.0 * gap - cavity_length;
    require(std::abs(closure) <= 1e-9 * cavity_length,
            "field_length + 2*gap must equal cavity_length");
    require(n_traversals >= 1, "n_traversals must be >= 1");
    require(non_negative(theta_split), "theta_split must be >= 0");
    require(non_negative(coalesce_tol_position) && non_negative(coalesce_tol_angle),
            "coalescing tolerances must be >= 0");
    require(max_beams >= 2, "max_beams must be >= 2");
    for (const auto* m : {&mirror1, &mirror2}) {
        if (m->shape != MirrorSpec::Shape::planar) {
            require(positive(m->focal_magnitude), "mirror focal magnitude must be positive");
        }
    }
    if (detector_lens) {
        require(non_negative(lens_offset) && lens_offset <= detector_distance,
                "lens_offset must lie between the exit mirror and the detector");
        require(std::isfinite(detector_lens_focal) && detector_lens_focal != 0.0,
                "detector lens focal length must be finite and non-zero");
    }
    require(std::isfinite(initial_ray.position) && std::isfinite(initial_ray.angle) &&
                std::abs(initial_ray.angle) < optics::kParaxialLimit,
            "initial ray must be finite and paraxial");
}

CavityConfig build_preset(CavityKind kind) {
    CavityConfig cfg;  // Table-1 geometry
    cfg.kind = kind;
    constexpr double concave_focal = 25.0 / 2.0;
    switch (kind) {
        case CavityKind::confocal:
            cfg.mirror1 = MirrorSpec::concave(concave_focal);
            cfg.mirror2 = MirrorSpec::concave(concave_focal);
            cfg.extraction_mirror = ExtractionMirror::m2;
            break;
        case CavityKind::planar_concave:
            cfg.mirror1 = MirrorSpec::concave(concave_focal);
            cfg.mirror2 = MirrorSpec::planar();
            cfg.extraction_mirror = ExtractionMirror::m1;
            break;
        case CavityKind::convex_concave:
            // Stability condition: f2 = f1 - d/2.
            cfg.mirror1 = MirrorSpec::concave(concave_focal);
            cfg.mirror2 = MirrorSpec::convex(concave_focal - cfg.cavity_length / 2.0);
            cfg.extraction_mirror = ExtractionMirror::m1;
            break;
        case CavityKind::planar_planar:
            cfg.mirror1 = MirrorSpec::planar();
            cfg.mirror2 = MirrorSpec::planar();
            cfg.extraction_mirror = ExtractionMirror::m2;
            break;
    }
    return cfg;
}

BeamEnsemble::BeamEnsemble(std::vector<WeightedBeam> beams, double tol_position, double tol_angle)
    : beams_(std::move(beams)), tol_position_(tol_position), tol_angle_(tol_angle) {
    for (const auto& b : beams_) {
        if (!(b.weight > 0.0 && b.weight <= 1.0)) {
            throw InvalidArgument("beam weight must lie in (0, 1]");
        }
    }
}

BeamEnsemble BeamEnsemble::single(const RayState& ray, double tol_position, double tol_angle) {
    return BeamEnsemble({WeightedBeam{optics::check_paraxial(ray), 1.0, 0, 0.0}}, tol_position,
                        tol_angle);
}

namespace {

template <typename F>
double weighted_sum(const std::vector<WeightedBeam>& beams, F&& value) {
    numeric::CompensatedSum acc;
    for (const auto& b : beams) acc.add(b.weight * value(b));
    return acc.value();
}

}  // namespace

double BeamEnsemble::total_weight() const {
    return weighted_sum(beams_, [](const WeightedBeam&) { return 1.0; });
}

double BeamEnsemble::mean_position() const {
    return weighted_sum(beams_, [](const WeightedBeam& b) { return b.ray.position; }) /
           total_weight();
}

double BeamEnsemble::mean_angle() const {
    return weighted_sum(beams_, [](const WeightedBeam& b) { return b.ray.angle; }) / total_weight();
}

double BeamEnsemble::rms_position() const {
    return std::sqrt(weighted_sum(beams_, [](const WeightedBeam& b) {
                         return b.ray.position * b.ray.position;
                     }) /
                     total_weight());
}

double BeamEnsemble::rms_angle() const {
    return std::sqrt(
        weighted_sum(beams_, [](const WeightedBeam& b) { return b.ray.angle * b.ray.angle; }) /
        total_weight());
}

RayState reflect_and_conserve(const RayState& ray, const MirrorSpec& mirror) {
    if (mirror.shape == MirrorSpec::Shape::planar) return optics::check_paraxial(ray);
    return mirror.matrix().apply(ray);
}

namespace {

bool within(double delta, double tol) { return delta == 0.0 || std::abs(delta) < tol; }

WeightedBeam merge(const std::vector<WeightedBeam>& beams, const std::vector<std::size_t>& members) {
    const WeightedBeam& first = beams[members.front()];
    if (members.size() == 1) return first;

    numeric::CompensatedSum w, wx, wa, wm;
    bool same_state = true;
    int generation = first.generation;
    for (auto idx : members) {
        const auto& b = beams[idx];
        w.add(b.weight);
        wx.add(b.weight * b.ray.position);
        wa.add(b.weight * b.ray.angle);
        wm.add(b.weight * b.momentum);
        same_state = same_state && b.ray == first.ray;
        generation = std::max(generation, b.generation);
    }
    WeightedBeam out;
    out.weight = std::min(w.value(), 1.0);
    out.ray = same_state ? first.ray : RayState{wx.value() / w.value(), wa.value() / w.value()};
    out.momentum = wm.value() / w.value();
    out.generation = generation;
    return out;
}

std::vector<WeightedBeam> coalesce_once(std::vector<WeightedBeam> beams, double tol_p,
                                        double tol_a) {
    std::sort(beams.begin(), beams.end(), [](const WeightedBeam& l, const WeightedBeam& r) {
        if (l.ray.position != r.ray.position) return l.ray.position < r.ray.position;
        if (l.ray.angle != r.ray.angle) return l.ray.angle < r.ray.angle;
        if (l.momentum != r.momentum) return l.momentum < r.momentum;
        return l.weight < r.weight;
    });

    // Beams within tol_p of the current anchor, keyed by angle, not yet merged.
    std::set<std::pair<double, std::size_t>> window;
    std::vector<WeightedBeam> out;
    out.reserve(beams.size());
    std::vector<bool> used(beams.size(), false);
    std::vector<std::size_t> members;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < beams.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        window.erase({beams[i].ray.angle, i});
        hi = std::max(hi, i + 1);
        while (hi < beams.size() && within(beams[hi].ray.position - beams[i].ray.position, tol_p)) {
            window.insert({beams[hi].ray.angle, hi});
            ++hi;
        }
        members.assign(1, i);
        const double a = beams[i].ray.angle;
        auto it = window.lower_bound({a - tol_a, 0});
        while (it != window.end() && it->first <= a + tol_a) {
            const std::size_t j = it->second;
            if (within(it->first - a, tol_a) && within(beams[j].ray.position - beams[i].ray.position, tol_p)) {
                members.push_back(j);
                used[j] = true;
                it = window.erase(it);
            } else {
                ++it;
            }
        }
        std::sort(members.begin(), members.end());
        out.push_back(merge(beams, members));
    }
    return out;
}

}  // namespace

BeamEnsemble coalesce(const BeamEnsemble& ensemble) {
    std::vector<WeightedBeam> beams = ensemble.beams();
    // A merged centroid can land within tolerance of a neighbouring cluster;
    // repeat until nothing changes.
    for (;;) {
        const auto before = beams.size();
        beams = coalesce_once(std::move(beams), ensemble.tol_position(), ensemble.tol_angle());
        if (beams.size() == before) break;
    }
    return BeamEnsemble(std::move(beams), ensemble.tol_position(), ensemble.tol_angle());
}

const MirrorSpec& far_mirror(const CavityConfig& config, Direction direction) {
    return direction == Direction::forward ? config.mirror2 : config.mirror1;
}

BeamEnsemble traverse_to_mirror(const BeamEnsemble& ensemble, const CavityConfig& config,
                                Direction direction, std::size_t* beams_before_coalesce) {
    const auto gap = optics::propagation_matrix(config.gap);
    const auto field = optics::propagation_matrix(config.field_length);
    const bool splits = direction == Direction::forward || config.split_on_backward;
    const double theta = config.theta_split;

    const std::size_t produced = ensemble.size() * (splits ? 2 : 1);
    if (produced > config.max_beams) {
        std::ostringstream msg;
        msg << "ensemble would grow to " << produced << " beams (limit " << config.max_beams
            << "); widen the coalescing tolerances or reduce n_traversals";
        throw GuardViolation(msg.str());
    }

    std::vector<WeightedBeam> out;
    out.reserve(produced);
    for (const auto& beam : ensemble.beams()) {
        const RayState at_field = gap.apply(beam.ray);
        if (!splits) {
            out.push_back({gap.apply(field.apply(at_field)), beam.weight, beam.generation,
                           beam.momentum});
            continue;
        }
        const auto [plus, minus] = optics::split(at_field, theta);
        for (auto [ray, sign] : {std::pair{plus, optics::BranchSign::plus},
                                 std::pair{minus, optics::BranchSign::minus}}) {
            const RayState at_exit = optics::angular_enhance(field.apply(ray), theta, sign);
            out.push_back({gap.apply(at_exit), 0.5 * beam.weight, beam.generation + 1,
                           beam.momentum + optics::sign_value(sign)});
        }
    }
    if (beams_before_coalesce) *beams_before_coalesce = out.size();
    return coalesce(BeamEnsemble(std::move(out), ensemble.tol_position(), ensemble.tol_angle()));
}

BeamEnsemble reflect(const BeamEnsemble& ensemble, const MirrorSpec& mirror) {
    std::vector<WeightedBeam> out = ensemble.beams();
    for (auto& b : out) b.ray = reflect_and_conserve(b.ray, mirror);
    return BeamEnsemble(std::move(out), ensemble.tol_position(), ensemble.tol_angle());
}

BeamEnsemble traverse(const BeamEnsemble& ensemble, const CavityConfig& config,
                      Direction direction) {
    return reflect(traverse_to_mirror(ensemble, config, direction), far_mirror(config, direction));
}

BeamEnsemble to_detector(const BeamEnsemble& at_mirror, const CavityConfig& config) {
    TransferMatrix relay;
    if (config.detector_lens) {
        const TransferMatrix steps[] = {
            optics::propagation_matrix(config.detector_distance - config.lens_offset),
            optics::focusing_matrix(config.detector_lens_focal),
            optics::propagation_matrix(config.lens_offset)};
        relay = optics::compose(steps);
    } else {
        relay = optics::propagation_matrix(config.detector_distance);
    }
    std::vector<WeightedBeam> out = at_mirror.beams();
    for (auto& b : out) b.ray = relay.apply(b.ray);
    return BeamEnsemble(std::move(out), at_mirror.tol_position(), at_mirror.tol_angle());
}

RunResult run(const CavityConfig& config, bool record_detector) {
    config.validate();
    RunResult result;
    BeamEnsemble ensemble = BeamEnsemble::single(config.initial_ray, config.coalesce_tol_position,
                                                 config.coalesce_tol_angle);
    Direction direction = Direction::forward;
    for (int t = 1; t <= config.n_traversals; ++t) {
        std::size_t raw = 0;
        BeamEnsemble at_mirror = traverse_to_mirror(ensemble, config, direction, &raw);
        const bool sampled = config.extraction_mirror == ExtractionMirror::m2 ||
                             direction == Direction::backward;
        if (record_detector && sampled) {
            result.snapshots.push_back({t, to_detector(at_mirror, config), raw});
        }
        ensemble = reflect(at_mirror, far_mirror(config, direction));
        direction = direction == Direction::forward ? Direction::backward : Direction::forward;
    }
    result.final_ensemble = std::move(ensemble);
    return result;
}

}  // namespace axionsplit::cavity
