#ifndef QKDCOEX_RAMAN_HPP
#define QKDCOEX_RAMAN_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qkdcoex/link.hpp"
#include "qkdcoex/units.hpp"

// Spontaneous Raman scattering from the classical band into the quantum
// band, composed piecewise over the link, plus the residual leakage through
// the receiver isolation chain.

namespace qkdcoex {

// Scattered power fraction per km and GHz for anti-Stokes scattering from
// the classical band into the quantum channel. Calibrated, not tabulated.
struct RamanCoefficient {
    double rho_per_km_ghz = 0.0;

    void validate() const {
        if (rho_per_km_ghz < 0.0) throw std::domain_error("RamanCoefficient: rho < 0");
    }
};

struct NoiseBudget {
    double raman_forward_w = 0.0;
    double raman_backward_w = 0.0;
    double leakage_w = 0.0;

    double total_w() const { return raman_forward_w + raman_backward_w + leakage_w; }
};

// In-band Raman power at the end of a uniform segment for a co-propagating
// pump entering with P_pump_w. Alphas are linear attenuation coefficients in
// 1/km; B is the in-band filter bandwidth in GHz.
inline double raman_forward_segment(double p_pump_w, double rho_per_km_ghz, double b_ghz,
                                    double alpha_c_np_km, double alpha_q_np_km, double l_km) {
    if (l_km < 0.0) throw std::domain_error("raman_forward_segment: negative length");
    if (l_km == 0.0) return 0.0;
    const double gen = p_pump_w * rho_per_km_ghz * b_ghz;
    const double d = alpha_c_np_km - alpha_q_np_km;
    if (std::abs(d) < 1e-9) {
        const double alpha = 0.5 * (alpha_c_np_km + alpha_q_np_km);
        return gen * l_km * std::exp(-alpha * l_km);
    }
    return gen * (std::exp(-alpha_q_np_km * l_km) - std::exp(-alpha_c_np_km * l_km)) / d;
}

// In-band Raman power exiting at the pump-input end of a uniform segment
// (backscatter for a counter-propagating pump).
inline double raman_backward_segment(double p_pump_w, double rho_per_km_ghz, double b_ghz,
                                     double alpha_c_np_km, double alpha_q_np_km, double l_km) {
    if (l_km < 0.0) throw std::domain_error("raman_backward_segment: negative length");
    if (l_km == 0.0) return 0.0;
    const double gen = p_pump_w * rho_per_km_ghz * b_ghz;
    const double s = alpha_c_np_km + alpha_q_np_km;
    if (s < 1e-12) return gen * l_km;
    return gen * (1.0 - std::exp(-s * l_km)) / s;
}

namespace detail {

struct Segment {
    double length_km;
    double alpha_q_np_km;
    double alpha_c_np_km;
    double boundary_loss_q_db; // lumped loss at the segment's far end
    double boundary_loss_c_db;
};

// Splits the spans at every lumped-loss position, walking from transmitter
// to receiver. Lumped elements sit on the boundary of the segment they end.
inline std::vector<Segment> segment_link(const LinkTopology& link) {
    std::vector<double> cuts;
    cuts.push_back(0.0);
    double pos = 0.0;
    for (const auto& s : link.spans) {
        pos += s.length_km;
        cuts.push_back(pos);
    }
    const double total = pos;
    for (const auto& a : link.lumped) cuts.push_back(std::min(a.position_km, total));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        double start = 0.0;
        const FiberSpan* span = &link.spans.front();
        for (const auto& s : link.spans) {
            if (mid >= start && mid <= start + s.length_km) {
                span = &s;
                break;
            }
            start += s.length_km;
        }
        Segment seg;
        seg.length_km = cuts[i + 1] - cuts[i];
        seg.alpha_q_np_km = db_per_km_to_nepers(span->alpha_q_db_per_km);
        seg.alpha_c_np_km = db_per_km_to_nepers(span->alpha_c_db_per_km);
        seg.boundary_loss_q_db = 0.0;
        seg.boundary_loss_c_db = 0.0;
        for (const auto& a : link.lumped) {
            if (std::abs(a.position_km - cuts[i + 1]) < 1e-12) {
                seg.boundary_loss_q_db += a.loss_q_db;
                seg.boundary_loss_c_db += a.loss_c_db;
            }
        }
        segs.push_back(seg);
    }
    // A lumped element exactly at the transmitter attenuates the pump before
    // any fiber; fold it into the launch.
    return segs;
}

inline double lumped_at_transmitter_db(const LinkTopology& link, Band band) {
    double db = 0.0;
    for (const auto& a : link.lumped)
        if (a.position_km == 0.0) db += band == Band::quantum ? a.loss_q_db : a.loss_c_db;
    return db;
}

} // namespace detail

// In-band Raman noise power arriving at the receiver end of the fiber, for
// the whole classical plan. Iterates the segments in pump propagation order;
// noise already generated is attenuated at the quantum-band values, the pump
// at the classical-band values.
inline double raman_over_link(const LinkTopology& link, const ClassicalPlan& plan,
                              const RamanCoefficient& rho, double b_ghz) {
    rho.validate();
    if (plan.channels.empty() || rho.rho_per_km_ghz == 0.0 || b_ghz == 0.0) return 0.0;

    const auto segs = detail::segment_link(link);

    // All channels see identical propagation, so run a unit pump through the
    // geometry and scale by the summed launch power afterwards.
    double noise = 0.0;
    if (plan.direction == Direction::co) {
        // A lumped element at exactly z = 0 attenuates the pump before any
        // fiber; for a counter-propagating pump it sits behind everything.
        double pump = db_to_linear(plan.tx_mux_insertion_c_db +
                                   detail::lumped_at_transmitter_db(link, Band::classical));
        for (const auto& seg : segs) {
            noise *= std::exp(-seg.alpha_q_np_km * seg.length_km);
            noise += raman_forward_segment(pump, 1.0, b_ghz, seg.alpha_c_np_km,
                                           seg.alpha_q_np_km, seg.length_km);
            pump *= std::exp(-seg.alpha_c_np_km * seg.length_km);
            noise *= db_to_linear(seg.boundary_loss_q_db);
            pump *= db_to_linear(seg.boundary_loss_c_db);
        }
    } else {
        // Counter-propagating: the pump enters at the quantum-receiver end.
        // Walk away from the receiver; backscatter generated in a segment
        // exits at its receiver-facing boundary and is then attenuated by
        // everything between that boundary and the receiver.
        double pump = db_to_linear(plan.tx_mux_insertion_c_db);
        double att_q_to_receiver = 1.0;
        for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
            // The boundary element at the far (receiver-facing) end of this
            // segment is crossed by the pump before the segment and by the
            // noise after it.
            pump *= db_to_linear(it->boundary_loss_c_db);
            att_q_to_receiver *= db_to_linear(it->boundary_loss_q_db);
            noise += att_q_to_receiver *
                     raman_backward_segment(pump, 1.0, b_ghz, it->alpha_c_np_km,
                                            it->alpha_q_np_km, it->length_km);
            pump *= std::exp(-it->alpha_c_np_km * it->length_km);
            att_q_to_receiver *= std::exp(-it->alpha_q_np_km * it->length_km);
        }
    }

    double power_rho_sum = 0.0;
    for (const auto& ch : plan.channels)
        power_rho_sum += dbm_to_watts(ch.launch_power_dbm) * rho.rho_per_km_ghz;
    return noise * power_rho_sum;
}

// Classical power leaking through the receiver chain to the detectors.
inline double leakage_power_w(double received_classical_w,
                              const std::vector<double>& isolation_db) {
    if (received_classical_w < 0.0)
        throw std::domain_error("leakage_power_w: negative input power");
    double total_db = 0.0;
    for (double iso : isolation_db) {
        if (iso < 0.0) throw std::domain_error("leakage_power_w: negative isolation");
        total_db += iso;
    }
    return received_classical_w * db_to_linear(total_db);
}

// Converts in-band noise power at the receiver input into a free-running
// click rate at the detectors (before temporal gating).
inline double noise_click_rate_hz(double in_band_noise_w, double insertion_1310_db,
                                  double eta_det, double lambda_q_nm) {
    if (!(eta_det >= 0.0 && eta_det <= 1.0))
        throw std::domain_error("noise_click_rate_hz: eta outside [0, 1]");
    if (in_band_noise_w < 0.0)
        throw std::domain_error("noise_click_rate_hz: negative noise power");
    return in_band_noise_w * db_to_linear(insertion_1310_db) * eta_det /
           photon_energy_j(lambda_q_nm);
}

} // namespace qkdcoex

#endif // QKDCOEX_RAMAN_HPP
