#ifndef QKDCOEX_UNITS_HPP
#define QKDCOEX_UNITS_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

// Unit conversions and small statistical helpers shared by every module.
//
// Convention used throughout the library: all physics is computed in linear
// units (watts, transmission ratios, Hz); decibel quantities appear only at
// the configuration and reporting boundaries. Variable names carry their
// unit as a suffix (x_db, p_dbm, length_km, ...) so that unit mistakes are
// grep-able.

namespace qkdcoex {

// CODATA exact values.
inline constexpr double kPlanckJs = 6.62607015e-34;
inline constexpr double kLightSpeedMs = 299792458.0;

inline constexpr double kLn10 = 2.302585092994045684;

// Validated telecom range for wavelengths handled by this library.
inline constexpr double kMinWavelengthNm = 1200.0;
inline constexpr double kMaxWavelengthNm = 1700.0;

inline bool wavelength_in_range(double lambda_nm) {
    return lambda_nm >= kMinWavelengthNm && lambda_nm <= kMaxWavelengthNm;
}

inline void validate_wavelength(double lambda_nm) {
    if (!std::isfinite(lambda_nm) || !wavelength_in_range(lambda_nm)) {
        throw std::domain_error("wavelength_nm outside validated range [1200, 1700]");
    }
}

// x dB of attenuation as a transmission ratio, 10^(-x/10).
inline double db_to_linear(double x_db) {
    return std::pow(10.0, -x_db / 10.0);
}

// Inverse of db_to_linear. Zero transmission maps to +inf dB.
inline double linear_to_db(double ratio) {
    if (ratio < 0.0) {
        throw std::domain_error("linear_to_db: negative transmission ratio");
    }
    if (ratio == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return -10.0 * std::log10(ratio);
}

inline double dbm_to_watts(double p_dbm) {
    return 1e-3 * std::pow(10.0, p_dbm / 10.0);
}

// Zero watts maps to -inf dBm.
inline double watts_to_dbm(double p_w) {
    if (p_w < 0.0) {
        throw std::domain_error("watts_to_dbm: negative power");
    }
    if (p_w == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(p_w / 1e-3);
}

// Binary entropy in bits, with the exact h(0) = h(1) = 0 boundary.
inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("binary_entropy: p outside [0, 1]");
    }
    if (p == 0.0 || p == 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// One-sided Hoeffding deviation sqrt(n/2 * ln(1/epsilon)); observed counts n
// are bounded by their expectation within +-delta except with probability
// epsilon.
inline double hoeffding_delta(double n, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::domain_error("hoeffding_delta: epsilon outside (0, 1)");
    }
    if (n < 0.0) {
        throw std::domain_error("hoeffding_delta: negative count");
    }
    if (n == 0.0) {
        return 0.0;
    }
    return std::sqrt(0.5 * n * std::log(1.0 / epsilon));
}

inline double photon_energy_j(double lambda_nm) {
    validate_wavelength(lambda_nm);
    return kPlanckJs * kLightSpeedMs / (lambda_nm * 1e-9);
}

// dB/km to linear attenuation coefficient in 1/km (nepers).
inline double db_per_km_to_nepers(double alpha_db_per_km) {
    return alpha_db_per_km * kLn10 / 10.0;
}

} // namespace qkdcoex

#endif // QKDCOEX_UNITS_HPP
