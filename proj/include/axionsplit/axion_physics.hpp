#pragma once

namespace axionsplit::axion {

inline constexpr double kFineStructure = 1.0 / 137.036;
inline constexpr double kCriticalField = 4.41e9;   // T
inline constexpr double kTeslaToEv2 = 195.0;       // eV^2 per T
inline constexpr double kInverseGevToInverseEv = 1e-9;

/// Inputs of the two-state photon-axion mixing matrix, in natural units.
/// Construct through make_mixing(): that is the only place units are converted.
struct MixingParameters {
    double omega_ev = 1.0;      // photon energy
    double g_inv_ev = 0.0;      // coupling, eV^-1
    double b_field_t = 1.0;     // external field
    double mass_ev = 0.0;       // axion mass
    bool vacuum_birefringence = true;  // include Q_gamma
};

/// g_a in GeV^-1, B in T, omega and m_a in eV. Throws InvalidArgument on
/// omega <= 0 or negative g_a, B, m_a.
MixingParameters make_mixing(double omega_ev, double g_a_inv_gev, double b_field_t,
                             double mass_ev, bool vacuum_birefringence = true);

/// Off-diagonal coupling term omega g B (eV^2).
double q_m(const MixingParameters& p);
/// Vacuum birefringence term omega^2 (7 alpha / 45 pi) (B / B_crit)^2 (eV^2).
double q_gamma(const MixingParameters& p);
/// Axion mass term -m_a^2 (eV^2).
double q_a(double mass_ev);

/// phi = atan2(2 Q_M, Q_gamma - Q_a) / 2. Throws InvalidArgument when both
/// arguments vanish (no mixing defined).
double mixing_angle(const MixingParameters& p);

/// Signal suppression sin^2(2 phi); 1 at maximal mixing.
double suppression_factor(const MixingParameters& p);

/// Largest m_a whose suppression_factor is still >= threshold, found by
/// bisection. Throws InvalidArgument if threshold is outside (0, 1), or if
/// even m_a = 0 falls below the threshold.
double max_measurable_mass(const MixingParameters& p, double threshold);

/// Splitting angle calibrated at one reference point.
struct SplitCalibration {
    double theta_ref = 4e-10;    // rad
    double g_ref = 1e-6;         // GeV^-1
    double grad_b_ref = 200.0;   // T/m
    double field_length_ref = 10.0;  // m
};

/// theta_ref scaled linearly in coupling, field gradient and field length.
double theta_split_from_coupling(double g_a, double grad_b, double field_length,
                                 const SplitCalibration& cal = {});

}  // namespace axionsplit::axion
