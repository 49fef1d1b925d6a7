#ifndef QKDCOEX_CALIBRATION_HPP
#define QKDCOEX_CALIBRATION_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qkdcoex/scenario.hpp"

// Two-stage calibration of the free model parameters against measured
// points, and the ideal-system comparison built on the calibrated scenario.

namespace qkdcoex {

struct CalibrationTargets {
    // Composite jitter+broadening loss from the receiver loss table.
    double temporal_loss_db = 1.9;
    // Secret key rate without any classical channel (read off the
    // zero-power baseline of the measured curves).
    double baseline_skr_bps = 0.0;
    // One measured coexistence point fixing the Raman coefficient.
    std::optional<double> noise_launch_dbm;
    std::optional<double> noise_skr_bps;
};

struct CalibrationReport {
    bool converged = false;
    std::string diagnostic;
    double fitted_broadened_fwhm_ps = 0.0;
    double fitted_e_opt = 0.0;
    std::optional<double> fitted_rho_per_km_ghz;
    bool rho_unfitted = false;
    // Model-vs-target residuals at the fitted parameters.
    double residual_temporal_db = 0.0;
    double residual_baseline_bps = 0.0;
    std::optional<double> residual_noise_bps;
};

namespace detail {

// Bisection for a monotone function with known bracket; returns the midpoint
// after enough iterations for ~1e-12 relative bracket width.
template <typename F>
double bisect(F&& f, double lo, double hi, bool increasing, int iterations = 64) {
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = f(mid);
        const bool go_up = increasing ? v < 0.0 : v > 0.0;
        if (go_up) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline Scenario without_classical(const Scenario& base) {
    Scenario s = base;
    s.plan.channels.clear();
    return s;
}

} // namespace detail

// Stage 1 fits the broadened pulse width to the composite temporal loss and
// the intrinsic error floor to the zero-power baseline rate; stage 2 fits
// the Raman coefficient to one coexistence point. Deterministic.
inline CalibrationReport calibrate(Scenario& scenario, const CalibrationTargets& targets) {
    scenario.validate();
    CalibrationReport report;

    // Stage 1a: broadened width from the composite temporal loss.
    {
        auto loss_of = [&scenario](double width_ps) {
            ReceiverModel rx = scenario.receiver;
            rx.pulse.broadened_fwhm_ps = width_ps;
            return compute_temporal(rx).temporal_loss_db;
        };
        const double lo = scenario.receiver.pulse.fwhm_ps;
        const double hi = 2000.0;
        if (loss_of(lo) > targets.temporal_loss_db) {
            report.diagnostic = "temporal target below unbroadened loss; bracket [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "] ps";
            return report;
        }
        if (loss_of(hi) < targets.temporal_loss_db) {
            report.diagnostic = "temporal target above achievable loss; bracket [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "] ps";
            return report;
        }
        const double width = detail::bisect(
            [&](double w) { return loss_of(w) - targets.temporal_loss_db; }, lo, hi,
            /*increasing=*/true, 48);
        scenario.receiver.pulse.broadened_fwhm_ps = width;
        report.fitted_broadened_fwhm_ps = width;
        report.residual_temporal_db =
            compute_temporal(scenario.receiver).temporal_loss_db - targets.temporal_loss_db;
    }

    // Stage 1b: intrinsic error floor from the zero-power baseline rate.
    {
        if (!(targets.baseline_skr_bps > 0.0)) {
            report.diagnostic = "baseline_skr_bps target missing";
            return report;
        }
        const Scenario baseline = detail::without_classical(scenario);
        const TemporalFactors tf = compute_temporal(baseline.receiver);
        auto skr_of = [&baseline, &tf](double e_opt) {
            Scenario s = baseline;
            s.protocol.e_opt_z = e_opt;
            s.protocol.e_opt_x = e_opt;
            return evaluate_with(s, tf).skr_bps;
        };
        const double lo = 0.0;
        const double hi = 0.25;
        if (skr_of(lo) < targets.baseline_skr_bps) {
            report.diagnostic = "baseline target above model maximum " +
                                std::to_string(skr_of(lo)) + " bps at e_opt = 0";
            return report;
        }
        const double e_opt =
            skr_of(hi) > targets.baseline_skr_bps
                ? hi
                : detail::bisect(
                      [&](double e) { return skr_of(e) - targets.baseline_skr_bps; }, lo, hi,
                      /*increasing=*/false, 48);
        scenario.protocol.e_opt_z = e_opt;
        scenario.protocol.e_opt_x = e_opt;
        report.fitted_e_opt = e_opt;
        report.residual_baseline_bps = skr_of(e_opt) - targets.baseline_skr_bps;
    }

    // Stage 2: Raman coefficient from the coexistence point.
    if (targets.noise_launch_dbm && targets.noise_skr_bps) {
        if (!(*targets.noise_skr_bps > 0.0)) {
            report.diagnostic = "noise target rate must be positive; the zero-key region does "
                                "not pin rho";
            return report;
        }
        const Scenario at_power = with_total_launch_dbm(scenario, *targets.noise_launch_dbm);
        const TemporalFactors tf = compute_temporal(at_power.receiver);
        auto skr_of = [&at_power, &tf](double log10_rho) {
            Scenario s = at_power;
            s.raman.rho_per_km_ghz = std::pow(10.0, log10_rho);
            return evaluate_with(s, tf).skr_bps;
        };
        const double lo = -17.0;
        const double hi = -7.0;
        if (skr_of(lo) < *targets.noise_skr_bps) {
            report.diagnostic = "noise target above zero-noise rate; bracket rho in [1e-17, 1e-7]";
            return report;
        }
        if (skr_of(hi) > *targets.noise_skr_bps) {
            report.diagnostic = "noise target below rate at rho = 1e-7; bracket exhausted";
            return report;
        }
        const double log_rho = detail::bisect(
            [&](double lr) { return skr_of(lr) - *targets.noise_skr_bps; }, lo, hi,
            /*increasing=*/false, 64);
        scenario.raman.rho_per_km_ghz = std::pow(10.0, log_rho);
        report.fitted_rho_per_km_ghz = scenario.raman.rho_per_km_ghz;
        report.residual_noise_bps = skr_of(log_rho) - *targets.noise_skr_bps;
    } else {
        report.rho_unfitted = true;
    }

    report.converged = true;
    if (report.rho_unfitted) {
        report.diagnostic = "rho not fitted: no coexistence target supplied";
    }
    return report;
}

// Ideal-system variants. The matched variant removes jitter, sends
// Fourier-limited pulses and matches the FBG and the detection gate to the
// pulse in bandwidth and shape; the lossless variant additionally removes
// the signal insertion loss of the receiver filter block while keeping its
// calibrated noise rejection; the SNSPD variant only changes the detector
// response.
inline Scenario make_matched_ideal(const Scenario& base) {
    Scenario s = base;
    s.receiver.jitter = JitterModel{0.0, 0.0, 0.0};
    s.receiver.pulse.chirped = false;
    s.receiver.pulse.broadened_fwhm_ps = s.receiver.pulse.fwhm_ps;
    s.receiver.pulse.effective_spectral_fwhm_ghz = 0.0;
    s.receiver.ideal_matched_filter = true;
    s.receiver.gate.window_ps = s.receiver.pulse.fwhm_ps;
    return s;
}

inline Scenario make_lossless_block(const Scenario& matched) {
    Scenario s = matched;
    double noise_insertion = 0.0;
    for (const auto& f : s.link.rx_filters) noise_insertion += f.model_insertion_q_db(0.0);
    s.receiver.noise_insertion_override_db = noise_insertion;
    return s;
}

inline Scenario make_snspd(const Scenario& base, double jitter_fwhm_ps = 30.0) {
    Scenario s = base;
    s.receiver.jitter = JitterModel{jitter_fwhm_ps, 0.0, 0.0};
    return s;
}

struct IdealComparison {
    BoundaryResult baseline;
    BoundaryResult matched;   // no jitter, Fourier-limited pulse, matched filter and gate
    BoundaryResult lossless;  // matched plus lossless filter block
    BoundaryResult snspd;     // baseline with 30 ps detector jitter
    double total_gain_db = 0.0;    // lossless vs baseline
    double matched_gain_db = 0.0;  // matched vs baseline
    double lossless_gain_db = 0.0; // lossless vs matched
    double snspd_gain_db = 0.0;    // snspd vs baseline
};

inline IdealComparison ideal_comparison(const Scenario& base) {
    IdealComparison cmp;
    cmp.baseline = max_tolerable_launch_power(base);
    cmp.matched = max_tolerable_launch_power(make_matched_ideal(base));
    cmp.lossless = max_tolerable_launch_power(make_lossless_block(make_matched_ideal(base)));
    cmp.snspd = max_tolerable_launch_power(make_snspd(base));
    cmp.total_gain_db = cmp.lossless.launch_dbm - cmp.baseline.launch_dbm;
    cmp.matched_gain_db = cmp.matched.launch_dbm - cmp.baseline.launch_dbm;
    cmp.lossless_gain_db = cmp.lossless.launch_dbm - cmp.matched.launch_dbm;
    cmp.snspd_gain_db = cmp.snspd.launch_dbm - cmp.baseline.launch_dbm;
    return cmp;
}

struct LengthBoundaryPoint {
    double length_km = 0.0;
    BoundaryResult boundary;
};

// Feasibility boundary over fiber length (the positive-key region edge).
inline std::vector<LengthBoundaryPoint> boundary_vs_length(const Scenario& base, double from_km,
                                                           double to_km, double step_km) {
    if (!(step_km > 0.0) || to_km < from_km)
        throw std::domain_error("boundary_vs_length: bad range");
    std::vector<LengthBoundaryPoint> out;
    const int n = static_cast<int>(std::floor((to_km - from_km) / step_km + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) {
        LengthBoundaryPoint p;
        p.length_km = from_km + step_km * i;
        p.boundary = max_tolerable_launch_power(with_fiber_length(base, p.length_km));
        out.push_back(p);
    }
    return out;
}

} // namespace qkdcoex

#endif // QKDCOEX_CALIBRATION_HPP
