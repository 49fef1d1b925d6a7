#ifndef QKDCOEX_LINK_HPP
#define QKDCOEX_LINK_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkdcoex/units.hpp"

// Physical link description: fiber spans, lumped attenuators, the quantum
// add/drop multiplexers and the receiver filter chain, plus the classical
// channel plan sharing the fiber.

namespace qkdcoex {

enum class Band { quantum, classical };

// Wavelengths below this are treated as the quantum (O-band) path, above as
// the classical (C-band) path.
inline constexpr double kBandSplitNm = 1400.0;

inline Band band_of(double lambda_nm) {
    return lambda_nm < kBandSplitNm ? Band::quantum : Band::classical;
}

struct FiberSpan {
    double length_km = 0.0;
    double alpha_q_db_per_km = 0.3644; // at the quantum wavelength
    double alpha_c_db_per_km = 0.21;   // at the classical band center

    void validate() const {
        if (length_km < 0.0) throw std::domain_error("FiberSpan: negative length");
        if (!(alpha_q_db_per_km > 0.0 && alpha_q_db_per_km < 2.0))
            throw std::domain_error("FiberSpan: alpha_q_db_per_km outside (0, 2)");
        if (!(alpha_c_db_per_km > 0.0 && alpha_c_db_per_km < 2.0))
            throw std::domain_error("FiberSpan: alpha_c_db_per_km outside (0, 2)");
    }
};

// In-line attenuator. Wavelength-flat by default (same dB in both bands);
// both values are explicit so bend-loss type elements can differ.
struct LumpedLoss {
    double position_km = 0.0;
    double loss_q_db = 0.0;
    double loss_c_db = 0.0;
};

// One element of the mux/filter cascade. insertion_q_db is the value shown
// in the loss table and used for the signal path; elements flagged
// spectral_model (the FBG) instead contribute peak_insertion_q_db plus the
// computed spectral mismatch, and the table value is kept for reporting.
struct FilterElement {
    std::string name;
    double insertion_q_db = 0.0;
    double isolation_c_db = 0.0;
    bool isolation_lower_bound = false;
    bool spectral_model = false;
    double peak_insertion_q_db = 0.0;
    bool ideal_block = false; // part of the receiver filter block idealized in ideal mode

    double model_insertion_q_db(double mismatch_db) const {
        return spectral_model ? peak_insertion_q_db + mismatch_db : insertion_q_db;
    }
};

struct ClassicalChannel {
    double wavelength_nm = 1550.1;
    double launch_power_dbm = 0.0;
};

enum class Direction { co, counter };

struct ClassicalPlan {
    std::vector<ClassicalChannel> channels;
    Direction direction = Direction::co;
    // Transmitter-side DWDM/CWDM insertion and receiver demux insertion at
    // 1550 nm. Neither is stated in the loss table; both are absorbed into
    // the classical-band calibration.
    double tx_mux_insertion_c_db = 0.47;
    double rx_demux_insertion_c_db = 0.47;

    double total_launch_w() const {
        double w = 0.0;
        for (const auto& ch : channels) w += dbm_to_watts(ch.launch_power_dbm);
        return w;
    }

    double total_launch_dbm() const { return watts_to_dbm(total_launch_w()); }
};

// Distributes a total launch power equally over the plan's channels.
inline void set_total_launch_dbm(ClassicalPlan& plan, double total_dbm) {
    if (plan.channels.empty()) return;
    const double per_channel = total_dbm - 10.0 * std::log10(static_cast<double>(plan.channels.size()));
    for (auto& ch : plan.channels) ch.launch_power_dbm = per_channel;
}

struct LinkTopology {
    std::vector<FiberSpan> spans;    // propagation order, transmitter to receiver
    std::vector<LumpedLoss> lumped;  // positions measured from the transmitter
    std::vector<FilterElement> tx_filters; // quantum add mux (before the fiber)
    std::vector<FilterElement> rx_filters; // receiver chain (after the fiber)

    double total_length_km() const {
        double l = 0.0;
        for (const auto& s : spans) l += s.length_km;
        return l;
    }

    void validate() const {
        if (spans.empty()) throw std::domain_error("LinkTopology: at least one span required");
        for (const auto& s : spans) s.validate();
        const double total = total_length_km();
        for (const auto& a : lumped) {
            if (a.position_km < 0.0 || a.position_km > total)
                throw std::domain_error("LinkTopology: lumped loss outside link");
            if (a.loss_q_db < 0.0 || a.loss_c_db < 0.0)
                throw std::domain_error("LinkTopology: negative lumped loss");
        }
        for (const auto& f : rx_filters) {
            if (f.insertion_q_db < 0.0 || f.isolation_c_db < 0.0)
                throw std::domain_error("LinkTopology: negative filter loss");
        }
    }

    // Transmission ratio of the fiber path (spans plus in-line attenuators)
    // between two positions, at the given band. Lumped elements are counted
    // on half-open intervals (from, to] so that transmittance is exactly
    // multiplicative over concatenated intervals; an element at position 0
    // belongs to intervals starting at 0.
    double fiber_transmittance(Band band, double from_km, double to_km) const {
        const double total = total_length_km();
        if (from_km < 0.0 || to_km > total + 1e-12 || from_km > to_km)
            throw std::out_of_range("fiber_transmittance: positions outside link");

        double db = 0.0;
        double start = 0.0;
        for (const auto& s : spans) {
            const double end = start + s.length_km;
            const double lo = std::max(from_km, start);
            const double hi = std::min(to_km, end);
            if (hi > lo) {
                const double alpha = band == Band::quantum ? s.alpha_q_db_per_km
                                                           : s.alpha_c_db_per_km;
                db += alpha * (hi - lo);
            }
            start = end;
        }
        for (const auto& a : lumped) {
            const bool inside = (a.position_km > from_km && a.position_km <= to_km) ||
                                (a.position_km == 0.0 && from_km == 0.0);
            if (inside) db += band == Band::quantum ? a.loss_q_db : a.loss_c_db;
        }
        return db_to_linear(db);
    }

    double tx_insertion_q_db() const {
        double db = 0.0;
        for (const auto& f : tx_filters) db += f.insertion_q_db;
        return db;
    }

    // Receiver-chain isolation values protecting the quantum detectors from
    // 1550 nm light. Lower-bound table entries are used as-is, which gives
    // an upper bound on the leakage.
    std::vector<double> rx_isolation_c_db() const {
        std::vector<double> iso;
        for (const auto& f : rx_filters)
            if (f.isolation_c_db > 0.0) iso.push_back(f.isolation_c_db);
        return iso;
    }
};

// Per-wavelength transmission over the fiber path, band chosen from lambda.
inline double transmittance(const LinkTopology& link, double lambda_nm,
                            double from_km, double to_km) {
    validate_wavelength(lambda_nm);
    return link.fiber_transmittance(band_of(lambda_nm), from_km, to_km);
}

// Total classical power at the receiver demux classical port, in watts.
// Covers transmitter mux, the full fiber path and the demux port insertion.
inline double received_classical_power_w(const LinkTopology& link, const ClassicalPlan& plan) {
    if (plan.channels.empty()) return 0.0;
    const double t_fiber = link.fiber_transmittance(Band::classical, 0.0, link.total_length_km());
    const double t_mux = db_to_linear(plan.tx_mux_insertion_c_db + plan.rx_demux_insertion_c_db);
    return plan.total_launch_w() * t_fiber * t_mux;
}

inline double received_classical_power_dbm(const LinkTopology& link, const ClassicalPlan& plan) {
    return watts_to_dbm(received_classical_power_w(link, plan));
}

// Itemized filter loss table (the receiver excess-loss budget).
struct BudgetRow {
    std::string name;
    double insertion_1310_db = 0.0;
    double isolation_1550_db = 0.0; // 0 when the element has no isolation entry
    bool isolation_lower_bound = false;
    bool dynamic = false; // computed temporal loss, not a static optical element
};

struct LossBudget {
    std::vector<BudgetRow> rows;
    double total_insertion_1310_db = 0.0;
    double rx_chain_isolation_1550_db = 0.0; // sum over receiver-side elements

    static LossBudget build(const LinkTopology& link, double temporal_row_db) {
        LossBudget b;
        auto add = [&b](const FilterElement& f) {
            b.rows.push_back({f.name, f.insertion_q_db, f.isolation_c_db,
                              f.isolation_lower_bound, false});
            b.total_insertion_1310_db += f.insertion_q_db;
        };
        for (const auto& f : link.tx_filters) add(f);
        for (const auto& f : link.rx_filters) {
            add(f);
            b.rx_chain_isolation_1550_db += f.isolation_c_db;
        }
        if (temporal_row_db > 0.0) {
            b.rows.push_back({"Detector jitter and FBG broadening", temporal_row_db,
                              0.0, false, true});
            b.total_insertion_1310_db += temporal_row_db;
        }
        return b;
    }
};

} // namespace qkdcoex

#endif // QKDCOEX_LINK_HPP
