#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "axionsplit/cavity.hpp"
#include "axionsplit/density_profile.hpp"
#include "axionsplit/sensitivity.hpp"

namespace axionsplit::scenario {

struct LaserSection {
    double wavelength_nm = 1064.0;
    double power_w = 1.0;
    double amplitude_photons_per_s = 5e18;
    double waist_m = 7.5e-4;
};

struct MagnetSection {
    double gradient_t_per_m = 200.0;
    double field_length_m = 10.0;
    bool modulated = true;  // recorded only; modulation is the on/off difference
};

struct AxionSection {
    double g_a_gev = 1e-12;    // hypothesised coupling for the mixing angle
    double g_ref_gev = 1e-6;   // coupling at which theta_split is quoted
    double m_a_ev = 0.0;
    double omega_ev = 1.165;  // 1064 nm photon
    double b_field_t = 1.0;
};

struct AnalysisSection {
    double hist_lo_m = 0.0;
    double hist_hi_m = 3e-3;
    double bin_width_m = 1e-4;
    double central_pixel_half_width_m = 1e-6;
    double sideband_pixel_center_m = 3.3e-3;
    double integration_time_s = 3e4;
    sensitivity::FitKind fit_kind = sensitivity::FitKind::linear;
    // Fit used by analyze / mass-scan when no series is supplied.
    double fit_slope = 0.0;
    double fit_intercept = 0.0;
    double fit_coefficient = 0.0;
    double fit_exponent = 0.0;
    double extraction_count = 12000.0;

    sensitivity::GrowthFit fit() const;
    profile::HistogramSpec histogram_spec() const;
};

/// Complete scenario document. The cavity field length lives in the magnet
/// section; load() copies it into the cavity config and checks
/// field_length + 2 gap = cavity_length.
struct Scenario {
    std::string name;
    cavity::CavityConfig cavity;
    LaserSection laser;
    MagnetSection magnet;
    AxionSection axion;
    AnalysisSection analysis;

    profile::GaussianProfile profile() const {
        return {laser.amplitude_photons_per_s, laser.waist_m, 0.0};
    }
};

/// `key=value` with a dotted key such as `cavity.theta_split_rad`.
struct Override {
    std::string key;
    std::string value;
};
Override parse_override(std::string_view text);

/// Reads the sectioned key=value document. Unknown sections or keys,
/// unparsable values and physical inconsistencies raise ConfigError.
Scenario load(std::istream& in, const std::vector<Override>& overrides = {});
Scenario load_file(const std::string& path, const std::vector<Override>& overrides = {});

/// Writes the document back with 17 significant digits.
void save(std::ostream& out, const Scenario& scenario);

std::vector<std::string> preset_names();
/// Raw text of an embedded preset; throws ConfigError for unknown names.
std::string_view preset_text(std::string_view name);
Scenario load_preset(std::string_view name, const std::vector<Override>& overrides = {});

}  // namespace axionsplit::scenario
