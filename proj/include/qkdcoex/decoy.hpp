#ifndef QKDCOEX_DECOY_HPP
#define QKDCOEX_DECOY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "qkdcoex/temporal.hpp"
#include "qkdcoex/units.hpp"

// Detection statistics and finite-key analysis for the simplified time-bin
// BB84 protocol with one decoy intensity. The Z basis carries the key; the
// single X-basis state only feeds the phase-error estimate.

namespace qkdcoex {

struct ProtocolParams {
    double rep_rate_hz = 2.5e9;
    double mu1 = 0.5;  // signal mean photon number
    double mu2 = 0.2;  // decoy mean photon number
    double p_mu1 = 0.7;
    double p_za = 0.9; // Alice Z-basis probability
    double p_zb = 0.5; // Bob Z-basis probability (passive splitter)
    double e_opt_z = 0.01; // intrinsic error floor, Z
    double e_opt_x = 0.01; // intrinsic error floor, X

    void validate() const {
        if (!(rep_rate_hz > 0.0)) throw std::domain_error("ProtocolParams: rep_rate <= 0");
        if (!(mu1 > mu2 && mu2 > 0.0 && mu1 <= 1.0))
            throw std::domain_error("ProtocolParams: require mu1 > mu2 > 0 and mu1 <= 1");
        for (double p : {p_mu1, p_za, p_zb})
            if (!(p > 0.0 && p < 1.0))
                throw std::domain_error("ProtocolParams: probabilities must be in (0, 1)");
        for (double e : {e_opt_z, e_opt_x})
            if (!(e >= 0.0 && e <= 0.5))
                throw std::domain_error("ProtocolParams: e_opt outside [0, 0.5]");
    }

    double p_of(int intensity) const { return intensity == 0 ? p_mu1 : 1.0 - p_mu1; }
    double mu_of(int intensity) const { return intensity == 0 ? mu1 : mu2; }

    // Poisson photon-number weight tau_n = sum_k p_k e^{-k} k^n / n!.
    double tau(int n) const {
        double t = 0.0;
        for (int k = 0; k < 2; ++k) {
            const double mu = mu_of(k);
            double term = std::exp(-mu);
            for (int i = 1; i <= n; ++i) term *= mu / i;
            t += p_of(k) * term;
        }
        return t;
    }
};

struct DetectorParams {
    double eta = 0.25;        // detection efficiency at 1310 nm
    double dark_z_hz = 91.0;  // free-running dark count rates
    double dark_x_hz = 108.0;
    double dead_z_s = 32e-6;
    double dead_x_s = 40e-6;

    void validate() const {
        if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("DetectorParams: eta outside [0, 1]");
        for (double v : {dark_z_hz, dark_x_hz, dead_z_s, dead_x_s})
            if (v < 0.0) throw std::domain_error("DetectorParams: negative rate or time");
    }
};

struct SecurityParams {
    double eps_sec = 1e-9;
    double eps_cor = 1e-9;
    double n_z_block = 8e6; // privacy amplification block, bits
    double f_ec = 1.05;     // error correction efficiency

    void validate() const {
        for (double e : {eps_sec, eps_cor})
            if (!(e > 0.0 && e < 1.0)) throw std::domain_error("SecurityParams: epsilon outside (0, 1)");
        if (!(n_z_block > 0.0)) throw std::domain_error("SecurityParams: block size <= 0");
        if (!(f_ec >= 1.0)) throw std::domain_error("SecurityParams: f_ec < 1");
    }
};

// Expected-value detection model for one basis. Index 0 is the signal
// intensity mu1, index 1 the decoy mu2.
struct BasisRates {
    std::array<double, 2> sifted_rate_hz{};  // dead-time corrected
    std::array<double, 2> error_rate{};
    double signal_rate_hz = 0.0;     // sifted, signal photons only
    double background_rate_hz = 0.0; // sifted, noise + dark
    double detector_raw_hz = 0.0;    // per physical detector, before dead time
    double dead_time_factor = 1.0;

    double total_rate_hz() const { return sifted_rate_hz[0] + sifted_rate_hz[1]; }

    double qber() const {
        const double n = total_rate_hz();
        if (n <= 0.0) return 0.5;
        return (sifted_rate_hz[0] * error_rate[0] + sifted_rate_hz[1] * error_rate[1]) / n;
    }
};

struct DetectionRates {
    BasisRates z;
    BasisRates x;
};

// QBER from signal, noise and dark rates; noise and dark clicks land in
// either bin with equal probability and are erroneous half of the time.
inline double expected_error_rates(double signal_rate_hz, double noise_rate_hz,
                                   double dark_rate_hz, double e_opt) {
    const double total = signal_rate_hz + noise_rate_hz + dark_rate_hz;
    if (total <= 0.0) return 0.5;
    return (e_opt * signal_rate_hz + 0.5 * (noise_rate_hz + dark_rate_hz)) / total;
}

// Measured rate of a detector with dead time tau under raw rate r.
inline double dead_time_corrected(double raw_hz, double tau_s) {
    return raw_hz / (1.0 + raw_hz * tau_s);
}

namespace detail {

inline BasisRates basis_rates(double t_total, const ProtocolParams& prot,
                              double eta, double acceptance, double p_alice,
                              double p_route, double noise_rate_hz, double dark_rate_hz,
                              double duty, double rep, double dead_s, double e_opt) {
    BasisRates r;
    // Accepted background probability per qubit slot.
    const double p_bg = (noise_rate_hz * p_route + dark_rate_hz) * duty / rep;
    double raw_sift[2];
    double detector_raw = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double p_sig = 1.0 - std::exp(-prot.mu_of(k) * t_total * eta * acceptance);
        const double p_sig_routed = p_route * p_sig;
        const double p_click = 1.0 - (1.0 - p_sig_routed) * (1.0 - p_bg);
        detector_raw += rep * prot.p_of(k) * p_click;
        raw_sift[k] = rep * prot.p_of(k) * p_alice * p_click;
        const double denom = p_sig_routed + p_bg;
        r.error_rate[k] = denom > 0.0 ? (e_opt * p_sig_routed + 0.5 * p_bg) / denom : 0.5;
        r.signal_rate_hz += rep * prot.p_of(k) * p_alice * p_sig_routed;
    }
    r.detector_raw_hz = detector_raw;
    r.dead_time_factor = detector_raw > 0.0 ? dead_time_corrected(detector_raw, dead_s) / detector_raw
                                            : 1.0;
    for (int k = 0; k < 2; ++k) r.sifted_rate_hz[k] = raw_sift[k] * r.dead_time_factor;
    r.signal_rate_hz *= r.dead_time_factor;
    r.background_rate_hz = r.total_rate_hz() - r.signal_rate_hz;
    return r;
}

} // namespace detail

// Sifted detection rates per basis and intensity. t_total is the static
// optical transmission of the quantum path (excluding detector efficiency
// and the temporal acceptance, both passed separately); noise_rate_hz is the
// free-running in-band noise click rate summed over both detectors.
inline DetectionRates expected_click_rate(double t_total, const ProtocolParams& prot,
                                          const DetectorParams& det, double acceptance,
                                          double noise_rate_hz, const GateModel& gate) {
    prot.validate();
    det.validate();
    if (!(t_total >= 0.0 && t_total <= 1.0))
        throw std::domain_error("expected_click_rate: transmission outside [0, 1]");
    if (!(acceptance >= 0.0 && acceptance <= 1.0))
        throw std::domain_error("expected_click_rate: acceptance outside [0, 1]");
    const double duty = noise_duty_cycle(gate);
    DetectionRates rates;
    rates.z = detail::basis_rates(t_total, prot, det.eta, acceptance, prot.p_za, prot.p_zb,
                                  noise_rate_hz, det.dark_z_hz, duty, prot.rep_rate_hz,
                                  det.dead_z_s, prot.e_opt_z);
    rates.x = detail::basis_rates(t_total, prot, det.eta, acceptance, 1.0 - prot.p_za,
                                  1.0 - prot.p_zb, noise_rate_hz, det.dark_x_hz, duty,
                                  prot.rep_rate_hz, det.dead_x_s, prot.e_opt_x);
    return rates;
}

struct BasisTally {
    std::array<double, 2> n{}; // detections per intensity (mu1, mu2)
    std::array<double, 2> m{}; // errors per intensity

    double n_total() const { return n[0] + n[1]; }
    double m_total() const { return m[0] + m[1]; }

    void validate() const {
        for (int k = 0; k < 2; ++k)
            if (m[k] < 0.0 || n[k] < m[k]) throw std::domain_error("BasisTally: require 0 <= m <= n");
    }
};

struct TallySet {
    BasisTally z;
    BasisTally x;
    double acquisition_s = 0.0;

    double qber_z() const { return z.n_total() > 0.0 ? z.m_total() / z.n_total() : 0.5; }
    double phi_x_raw() const { return x.n_total() > 0.0 ? x.m_total() / x.n_total() : 0.5; }
};

enum class TallyMode { expected, poisson };

// Accumulates the detection statistics of one privacy amplification block.
// Expected-value mode fills the mean counts; Poisson mode draws them from a
// seeded generator for bound-validation studies.
inline TallySet synthesize_tallies(const DetectionRates& rates, double n_z_block,
                                   TallyMode mode = TallyMode::expected,
                                   std::mt19937_64* rng = nullptr) {
    const double r_z = rates.z.total_rate_hz();
    if (!(r_z > 0.0)) throw std::runtime_error("synthesize_tallies: no Z-basis detections, no key");
    TallySet t;
    t.acquisition_s = n_z_block / r_z;
    for (int k = 0; k < 2; ++k) {
        t.z.n[k] = rates.z.sifted_rate_hz[k] * t.acquisition_s;
        t.z.m[k] = t.z.n[k] * rates.z.error_rate[k];
        t.x.n[k] = rates.x.sifted_rate_hz[k] * t.acquisition_s;
        t.x.m[k] = t.x.n[k] * rates.x.error_rate[k];
    }
    if (mode == TallyMode::poisson) {
        if (rng == nullptr)
            throw std::invalid_argument("synthesize_tallies: poisson mode requires a generator");
        for (BasisTally* b : {&t.z, &t.x}) {
            for (int k = 0; k < 2; ++k) {
                std::poisson_distribution<long long> pn(b->n[k]);
                const double n = static_cast<double>(pn(*rng));
                const double e = b->n[k] > 0.0 ? std::min(1.0, b->m[k] / b->n[k]) : 0.0;
                std::binomial_distribution<long long> pm(static_cast<long long>(n), e);
                b->n[k] = n;
                b->m[k] = static_cast<double>(pm(*rng));
            }
        }
    }
    return t;
}

// Finite-sampling correction for estimating the Z-basis single-photon phase
// error from the X-basis sample (random-sampling-without-replacement bound).
inline double phase_error_correction(double a, double b, double c, double d) {
    if (b <= 0.0) return 0.0;
    if (b >= 1.0 || c <= 0.0 || d <= 0.0) return 0.5;
    const double arg = std::max(1.0, (c + d) / (c * d * (1.0 - b) * b) / (a * a));
    return std::sqrt((c + d) * (1.0 - b) * b / (c * d * std::log(2.0)) * std::log2(arg));
}

struct DecoyBounds {
    double s_z0 = 0.0;  // vacuum-event lower bound, Z
    double s_z1 = 0.0;  // single-photon lower bound, Z
    double s_x0 = 0.0;
    double s_x1 = 0.0;
    double s_z0_upper = 0.0;
    double v_x1 = 0.0;  // single-photon error upper bound, X
    double phi_x = 0.5; // single-photon phase error upper bound
    bool clamped = false; // some bound hit its physical limit
};

namespace detail {

struct BasisBounds {
    double s0 = 0.0;
    double s1 = 0.0;
    double s0_upper = 0.0;
    bool clamped = false;
};

inline BasisBounds one_decoy_bounds(const BasisTally& tally, const ProtocolParams& p,
                                    double eps1) {
    BasisBounds out;
    const double n_tot = tally.n_total();
    const double m_tot = tally.m_total();
    const double dn = hoeffding_delta(n_tot, eps1);
    const double dm = hoeffding_delta(n_tot, eps1); // range of the error sum is n_tot
    const double mu1 = p.mu1;
    const double mu2 = p.mu2;

    auto scaled = [&p](double count, int k) { return std::exp(p.mu_of(k)) / p.p_of(k) * count; };
    const double n1_plus = scaled(tally.n[0] + dn, 0);
    const double n2_minus = scaled(std::max(0.0, tally.n[1] - dn), 1);

    const double tau0 = p.tau(0);
    const double tau1 = p.tau(1);

    double s0 = tau0 * (mu1 * n2_minus - mu2 * n1_plus) / (mu1 - mu2);
    if (s0 < 0.0) {
        s0 = 0.0;
        out.clamped = true;
    }
    out.s0 = std::min(s0, n_tot);

    // Vacuum events are errors with probability 1/2, so twice the observed
    // errors (padded for fluctuations) bounds them from above.
    out.s0_upper = std::min(n_tot, 2.0 * (m_tot + dm));

    double s1 = tau1 * mu1 / (mu2 * (mu1 - mu2)) *
                (n2_minus - (mu2 * mu2) / (mu1 * mu1) * n1_plus -
                 (mu1 * mu1 - mu2 * mu2) / (mu1 * mu1) * out.s0_upper / tau0);
    if (s1 < 0.0) {
        s1 = 0.0;
        out.clamped = true;
    }
    out.s1 = std::min(s1, n_tot - out.s0);
    return out;
}

} // namespace detail

// Lower bounds on the vacuum and single-photon detections and upper bound on
// the single-photon phase error, from the observed one-decoy tallies.
inline DecoyBounds vacuum_and_single_bounds(const TallySet& tallies, const ProtocolParams& prot,
                                            const SecurityParams& sec) {
    prot.validate();
    sec.validate();
    tallies.z.validate();
    tallies.x.validate();
    const double eps1 = sec.eps_sec / 19.0;

    DecoyBounds b;
    const auto z = detail::one_decoy_bounds(tallies.z, prot, eps1);
    const auto x = detail::one_decoy_bounds(tallies.x, prot, eps1);
    b.s_z0 = z.s0;
    b.s_z1 = z.s1;
    b.s_z0_upper = z.s0_upper;
    b.s_x0 = x.s0;
    b.s_x1 = x.s1;
    b.clamped = z.clamped || x.clamped;

    const double dm_x = hoeffding_delta(tallies.x.m_total(), eps1);
    auto scaled = [&prot](double count, int k) {
        return std::exp(prot.mu_of(k)) / prot.p_of(k) * count;
    };
    const double m1_plus = scaled(tallies.x.m[0] + dm_x, 0);
    const double m2_minus = scaled(std::max(0.0, tallies.x.m[1] - dm_x), 1);
    b.v_x1 = std::max(0.0, prot.tau(1) * (m1_plus - m2_minus) / (prot.mu1 - prot.mu2));

    if (b.s_x1 <= 0.0) {
        b.phi_x = 0.5;
        b.clamped = true;
        return b;
    }
    const double ratio = std::min(0.5, b.v_x1 / b.s_x1);
    b.phi_x = std::min(0.5, ratio + phase_error_correction(eps1, ratio, b.s_z1, b.s_x1));
    return b;
}

struct KeyResult {
    DecoyBounds bounds;
    double qber_z = 0.5;
    double phi_x_raw = 0.5;
    double key_bits = 0.0;
    double skr_bps = 0.0;
};

// Extractable secret key length of one block.
inline double secret_key_length(const TallySet& tallies, const DecoyBounds& bounds,
                                const SecurityParams& sec) {
    sec.validate();
    const double qber = tallies.qber_z();
    const double l = bounds.s_z0 + bounds.s_z1 * (1.0 - binary_entropy(bounds.phi_x)) -
                     sec.f_ec * tallies.z.n_total() * binary_entropy(qber) -
                     6.0 * std::log2(19.0 / sec.eps_sec) - std::log2(2.0 / sec.eps_cor);
    return std::max(0.0, std::floor(l));
}

inline KeyResult analyze_block(const TallySet& tallies, const ProtocolParams& prot,
                               const SecurityParams& sec) {
    KeyResult r;
    r.bounds = vacuum_and_single_bounds(tallies, prot, sec);
    r.qber_z = tallies.qber_z();
    r.phi_x_raw = tallies.phi_x_raw();
    r.key_bits = secret_key_length(tallies, r.bounds, sec);
    r.skr_bps = tallies.acquisition_s > 0.0 ? r.key_bits / tallies.acquisition_s : 0.0;
    return r;
}

} // namespace qkdcoex

#endif // QKDCOEX_DECOY_HPP
