#ifndef QKDCOEX_SCENARIO_HPP
#define QKDCOEX_SCENARIO_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkdcoex/decoy.hpp"
#include "qkdcoex/link.hpp"
#include "qkdcoex/raman.hpp"
#include "qkdcoex/temporal.hpp"
#include "qkdcoex/units.hpp"

// End-to-end composition: link transmission -> Raman and leakage noise ->
// temporal acceptance -> detection statistics -> finite-key rate.

namespace qkdcoex {

struct ReceiverModel {
    DetectorParams detectors;
    GateModel gate;
    PulseModel pulse;
    JitterModel jitter;
    double fbg_fwhm_ghz = 47.0;
    FilterShape fbg_shape = FilterShape::gaussian;
    // Effective in-band width for broadband noise (FWHM times an optional
    // shape correction, kept as one configurable number).
    double noise_bandwidth_ghz = 47.0;
    double window_offset_ps = 0.0;
    // Table value of the composite jitter+broadening loss; printed in the
    // budget report and used as the stage-1 calibration target. It is never
    // part of the static transmission.
    double temporal_table_row_db = 1.9;
    // Ideal mode: FBG matched to the Fourier-limited pulse in shape and
    // bandwidth (no mismatch loss, matched noise bandwidth).
    bool ideal_matched_filter = false;
    // Idealized filter block: the flagged receiver elements keep their noise
    // rejection but add no signal loss; the noise-path insertion stays at
    // the given value (set when constructing the ideal-comparison variants).
    std::optional<double> noise_insertion_override_db;
};

struct Scenario {
    LinkTopology link;
    ClassicalPlan plan;
    ReceiverModel receiver;
    ProtocolParams protocol;
    SecurityParams security;
    RamanCoefficient raman;
    double quantum_wavelength_nm = 1310.0;

    void validate() const {
        link.validate();
        receiver.pulse.validate();
        receiver.jitter.validate();
        receiver.gate.validate();
        receiver.detectors.validate();
        protocol.validate();
        security.validate();
        raman.validate();
        validate_wavelength(quantum_wavelength_nm);
        for (const auto& ch : plan.channels) validate_wavelength(ch.wavelength_nm);
    }
};

// Temporal and spectral factors that depend only on pulse, jitter, gate and
// filter; constant across launch-power or calibration iterations.
struct TemporalFactors {
    double acceptance = 1.0;
    double temporal_loss_db = 0.0;
    double duty = 0.5;
    double mismatch_db = 0.0;
    double noise_bandwidth_ghz = 47.0;
};

inline TemporalFactors compute_temporal(const ReceiverModel& rx) {
    TemporalFactors tf;
    tf.acceptance = window_acceptance(rx.pulse, rx.jitter, rx.gate, rx.window_offset_ps);
    tf.temporal_loss_db = linear_to_db(tf.acceptance);
    tf.duty = noise_duty_cycle(rx.gate);
    if (rx.ideal_matched_filter) {
        tf.mismatch_db = 0.0;
        tf.noise_bandwidth_ghz = matched_noise_bandwidth_ghz(rx.pulse);
    } else {
        tf.mismatch_db = spectral_mismatch_db(rx.pulse, rx.fbg_fwhm_ghz, rx.fbg_shape);
        tf.noise_bandwidth_ghz = rx.noise_bandwidth_ghz;
    }
    return tf;
}

struct ScenarioResult {
    // Link and noise
    double received_classical_dbm = 0.0;
    NoiseBudget noise;
    double noise_click_total_hz = 0.0; // both detectors, before gating
    // Transmission pieces (dB)
    double fiber_loss_q_db = 0.0;
    double tx_insertion_q_db = 0.0;
    double rx_signal_insertion_db = 0.0;
    double rx_noise_insertion_db = 0.0;
    double static_transmission_db = 0.0; // everything except acceptance and eta
    TemporalFactors temporal;
    // Detection statistics
    DetectionRates rates;
    TallySet tallies;
    // Finite-key outcome
    double qber_z = 0.5;
    double phi_x = 0.5;       // raw X-basis error rate
    double phi_x_upper = 0.5; // finite-key phase error bound
    DecoyBounds bounds;
    double key_bits = 0.0;
    double skr_bps = 0.0;
    double acquisition_s = 0.0;
};

namespace detail {

inline double rx_signal_insertion_db(const LinkTopology& link, double mismatch_db,
                                     bool zero_ideal_block) {
    double db = 0.0;
    for (const auto& f : link.rx_filters) {
        if (zero_ideal_block && f.ideal_block) continue;
        db += f.model_insertion_q_db(mismatch_db);
    }
    return db;
}

// Broadband in-band noise passes the receiver chain at the peak filter
// transmission; the spectral mismatch applies to the signal only.
inline double rx_noise_insertion_db(const LinkTopology& link) {
    double db = 0.0;
    for (const auto& f : link.rx_filters) db += f.model_insertion_q_db(0.0);
    return db;
}

} // namespace detail

inline ScenarioResult evaluate_with(const Scenario& s, const TemporalFactors& tf,
                                    TallyMode mode = TallyMode::expected,
                                    std::mt19937_64* rng = nullptr) {
    ScenarioResult r;
    r.temporal = tf;

    const double total_km = s.link.total_length_km();
    r.fiber_loss_q_db = linear_to_db(s.link.fiber_transmittance(Band::quantum, 0.0, total_km));
    r.tx_insertion_q_db = s.link.tx_insertion_q_db();
    const bool ideal_block = s.receiver.noise_insertion_override_db.has_value();
    r.rx_signal_insertion_db = detail::rx_signal_insertion_db(s.link, tf.mismatch_db, ideal_block);
    r.rx_noise_insertion_db = ideal_block ? *s.receiver.noise_insertion_override_db
                                          : detail::rx_noise_insertion_db(s.link);
    r.static_transmission_db = r.fiber_loss_q_db + r.tx_insertion_q_db + r.rx_signal_insertion_db;

    const double received_w = received_classical_power_w(s.link, s.plan);
    r.received_classical_dbm = watts_to_dbm(received_w);

    if (s.plan.direction == Direction::co) {
        r.noise.raman_forward_w = raman_over_link(s.link, s.plan, s.raman, tf.noise_bandwidth_ghz);
    } else {
        r.noise.raman_backward_w = raman_over_link(s.link, s.plan, s.raman, tf.noise_bandwidth_ghz);
    }
    r.noise.leakage_w = leakage_power_w(received_w, s.link.rx_isolation_c_db());
    r.noise_click_total_hz = noise_click_rate_hz(r.noise.total_w(), r.rx_noise_insertion_db,
                                                 s.receiver.detectors.eta, s.quantum_wavelength_nm);

    const double t_static = db_to_linear(r.static_transmission_db);
    r.rates = expected_click_rate(t_static, s.protocol, s.receiver.detectors, tf.acceptance,
                                  r.noise_click_total_hz, s.receiver.gate);
    r.tallies = synthesize_tallies(r.rates, s.security.n_z_block, mode, rng);

    const KeyResult key = analyze_block(r.tallies, s.protocol, s.security);
    r.bounds = key.bounds;
    r.qber_z = key.qber_z;
    r.phi_x = key.phi_x_raw;
    r.phi_x_upper = key.bounds.phi_x;
    r.key_bits = key.key_bits;
    r.skr_bps = key.skr_bps;
    r.acquisition_s = r.tallies.acquisition_s;
    return r;
}

// Deterministic end-to-end evaluation of one scenario.
inline ScenarioResult evaluate(const Scenario& s) {
    s.validate();
    return evaluate_with(s, compute_temporal(s.receiver));
}

enum class SweepParameter { launch_power, fiber_length };

struct SweepPoint {
    double parameter_value = 0.0;
    ScenarioResult result;
};

// Rescales the total fiber length, preserving the relative span layout and
// the relative positions of in-line attenuators.
inline Scenario with_fiber_length(const Scenario& base, double length_km) {
    if (!(length_km > 0.0)) throw std::domain_error("with_fiber_length: length must be > 0");
    Scenario s = base;
    const double old_total = base.link.total_length_km();
    if (old_total <= 0.0) throw std::domain_error("with_fiber_length: degenerate base link");
    const double scale = length_km / old_total;
    for (auto& span : s.link.spans) span.length_km *= scale;
    for (auto& a : s.link.lumped) a.position_km *= scale;
    return s;
}

inline Scenario with_total_launch_dbm(const Scenario& base, double total_dbm) {
    Scenario s = base;
    set_total_launch_dbm(s.plan, total_dbm);
    return s;
}

inline std::vector<SweepPoint> sweep(const Scenario& base, SweepParameter param,
                                     double from, double to, double step) {
    if (!(step > 0.0) || to < from) throw std::domain_error("sweep: bad range");
    base.validate();
    std::vector<SweepPoint> out;
    const TemporalFactors tf = compute_temporal(base.receiver);
    const int n = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) {
        const double v = from + step * i;
        SweepPoint p;
        p.parameter_value = v;
        if (param == SweepParameter::launch_power) {
            p.result = evaluate_with(with_total_launch_dbm(base, v), tf);
        } else {
            p.result = evaluate_with(with_fiber_length(base, v), tf);
        }
        out.push_back(std::move(p));
    }
    return out;
}

struct BoundaryResult {
    bool has_key = false;    // positive key somewhere in the bracket
    bool unbounded = false;  // still positive at the bracket top
    double launch_dbm = 0.0; // largest power with key length > 0
};

inline constexpr double kBoundaryBracketLowDbm = -30.0;
inline constexpr double kBoundaryBracketHighDbm = 35.0;

// Largest tolerable total launch power, by bisection on the (monotone) key
// length sign to 0.05 dB.
inline BoundaryResult max_tolerable_launch_power(const Scenario& base,
                                                 double low_dbm = kBoundaryBracketLowDbm,
                                                 double high_dbm = kBoundaryBracketHighDbm,
                                                 double tol_db = 0.05) {
    base.validate();
    const TemporalFactors tf = compute_temporal(base.receiver);
    auto positive = [&](double p_dbm) {
        return evaluate_with(with_total_launch_dbm(base, p_dbm), tf).key_bits > 0.0;
    };
    BoundaryResult r;
    if (!positive(low_dbm)) return r;
    r.has_key = true;
    if (positive(high_dbm)) {
        r.unbounded = true;
        r.launch_dbm = high_dbm;
        return r;
    }
    double lo = low_dbm;
    double hi = high_dbm;
    while (hi - lo > tol_db) {
        const double mid = 0.5 * (lo + hi);
        if (positive(mid)) lo = mid;
        else hi = mid;
    }
    r.launch_dbm = lo;
    return r;
}

} // namespace qkdcoex

#endif // QKDCOEX_SCENARIO_HPP
