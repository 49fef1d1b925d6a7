#ifndef QKDCOEX_REPORT_HPP
#define QKDCOEX_REPORT_HPP

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkdcoex/calibration.hpp"
#include "qkdcoex/config.hpp"
#include "qkdcoex/scenario.hpp"

// Machine-readable CSV / JSON emission and the literature comparison table.

namespace qkdcoex {

inline std::string fmt_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline nlohmann::json result_json(const ScenarioResult& r) {
    nlohmann::json j;
    j["received_classical_dbm"] = r.received_classical_dbm;
    j["noise"] = {{"raman_forward_w", r.noise.raman_forward_w},
                  {"raman_backward_w", r.noise.raman_backward_w},
                  {"leakage_w", r.noise.leakage_w},
                  {"total_w", r.noise.total_w()}};
    j["noise_click_total_hz"] = r.noise_click_total_hz;
    j["transmission"] = {{"fiber_loss_1310_db", r.fiber_loss_q_db},
                         {"tx_insertion_1310_db", r.tx_insertion_q_db},
                         {"rx_signal_insertion_db", r.rx_signal_insertion_db},
                         {"rx_noise_insertion_db", r.rx_noise_insertion_db},
                         {"static_total_db", r.static_transmission_db}};
    j["temporal"] = {{"acceptance", r.temporal.acceptance},
                     {"loss_db", r.temporal.temporal_loss_db},
                     {"duty_cycle", r.temporal.duty},
                     {"spectral_mismatch_db", r.temporal.mismatch_db},
                     {"noise_bandwidth_ghz", r.temporal.noise_bandwidth_ghz}};
    j["rates"] = {{"sifted_z_hz", r.rates.z.total_rate_hz()},
                  {"sifted_x_hz", r.rates.x.total_rate_hz()},
                  {"z_signal_hz", r.rates.z.signal_rate_hz},
                  {"z_background_hz", r.rates.z.background_rate_hz}};
    j["qber_z"] = r.qber_z;
    j["phi_x"] = r.phi_x;
    j["phi_x_upper"] = r.phi_x_upper;
    j["bounds"] = {{"s_z0", r.bounds.s_z0},
                   {"s_z1", r.bounds.s_z1},
                   {"s_x1", r.bounds.s_x1},
                   {"v_x1", r.bounds.v_x1},
                   {"clamped", r.bounds.clamped}};
    j["key_bits"] = r.key_bits;
    j["skr_bps"] = r.skr_bps;
    j["acquisition_s"] = r.acquisition_s;
    return j;
}

inline const char* kSweepHeader =
    "launch_power_dbm,received_power_dbm,noise_rate_hz,qber_z,phi_x,skr_bps";

inline std::string sweep_row(double launch_dbm, const ScenarioResult& r) {
    std::ostringstream out;
    out << fmt_num(launch_dbm) << ',' << fmt_num(r.received_classical_dbm) << ','
        << fmt_num(r.noise_click_total_hz) << ',' << fmt_num(r.qber_z) << ','
        << fmt_num(r.phi_x) << ',' << fmt_num(r.skr_bps);
    return out.str();
}

inline std::string sweep_csv(const std::vector<SweepPoint>& points, SweepParameter param,
                             const Scenario& base) {
    std::ostringstream out;
    if (param == SweepParameter::launch_power) {
        out << kSweepHeader << '\n';
        for (const auto& p : points) out << sweep_row(p.parameter_value, p.result) << '\n';
    } else {
        out << "fiber_length_km," << kSweepHeader << '\n';
        const double launch = base.plan.channels.empty()
                                  ? -std::numeric_limits<double>::infinity()
                                  : base.plan.total_launch_dbm();
        for (const auto& p : points)
            out << fmt_num(p.parameter_value) << ',' << sweep_row(launch, p.result) << '\n';
    }
    return out.str();
}

inline std::string budget_csv(const LossBudget& b) {
    std::ostringstream out;
    out << "name,insertion_1310_db,isolation_1550_db,isolation_lower_bound,dynamic\n";
    for (const auto& row : b.rows) {
        out << row.name << ',' << fmt_num(row.insertion_1310_db) << ','
            << (row.isolation_1550_db > 0.0 ? fmt_num(row.isolation_1550_db) : "") << ','
            << (row.isolation_lower_bound ? "true" : "false") << ','
            << (row.dynamic ? "true" : "false") << '\n';
    }
    out << "TOTAL," << fmt_num(b.total_insertion_1310_db) << ','
        << fmt_num(b.rx_chain_isolation_1550_db) << ",,\n";
    return out.str();
}

inline nlohmann::json budget_json(const LossBudget& b) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : b.rows) {
        rows.push_back({{"name", row.name},
                        {"insertion_1310_db", row.insertion_1310_db},
                        {"isolation_1550_db", row.isolation_1550_db},
                        {"isolation_lower_bound", row.isolation_lower_bound},
                        {"dynamic", row.dynamic}});
    }
    return {{"rows", rows},
            {"total_insertion_1310_db", b.total_insertion_1310_db},
            {"rx_chain_isolation_1550_db", b.rx_chain_isolation_1550_db}};
}

inline nlohmann::json calibration_json(const CalibrationReport& r) {
    nlohmann::json j;
    j["converged"] = r.converged;
    j["diagnostic"] = r.diagnostic;
    j["fitted_broadened_fwhm_ps"] = r.fitted_broadened_fwhm_ps;
    j["fitted_e_opt"] = r.fitted_e_opt;
    if (r.fitted_rho_per_km_ghz) j["fitted_rho_per_km_ghz"] = *r.fitted_rho_per_km_ghz;
    j["rho_unfitted"] = r.rho_unfitted;
    j["residual_temporal_db"] = r.residual_temporal_db;
    j["residual_baseline_bps"] = r.residual_baseline_bps;
    if (r.residual_noise_bps) j["residual_noise_bps"] = *r.residual_noise_bps;
    // The measured launch powers may or may not include the transmitter mux
    // loss; the fitted rho absorbs that ambiguity.
    j["note"] = "rho absorbs transmitter-side mux loss ambiguity and the in-band "
                "bandwidth convention";
    return j;
}

inline nlohmann::json boundary_json(const BoundaryResult& b) {
    return {{"has_key", b.has_key},
            {"unbounded", b.unbounded},
            {"max_tolerable_launch_dbm", b.launch_dbm}};
}

inline nlohmann::json ideal_json(const IdealComparison& c) {
    nlohmann::json j;
    j["baseline"] = boundary_json(c.baseline);
    j["matched_filtering"] = boundary_json(c.matched);
    j["lossless_filter_block"] = boundary_json(c.lossless);
    j["snspd"] = boundary_json(c.snspd);
    j["total_gain_db"] = c.total_gain_db;
    j["matched_gain_db"] = c.matched_gain_db;
    j["lossless_gain_db"] = c.lossless_gain_db;
    j["snspd_gain_db"] = c.snspd_gain_db;
    return j;
}

// ---- literature comparison -------------------------------------------------

struct LiteratureRow {
    std::string variable; // discrete | continuous
    std::string band;     // O | C | S
    double fiber_km = 0.0;
    double att_db = 0.0;
    bool att_estimated = false;
    double launch_dbm = 0.0;
    double skr_bps = 0.0;
    std::string finite_key; // yes | no
    std::string reference;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

inline std::vector<LiteratureRow> load_literature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open literature file: " + path);
    std::vector<LiteratureRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (line.rfind("variable,", 0) == 0) continue; // header
        const auto f = split_csv_line(line);
        if (f.size() != 9)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 9 fields, got " + std::to_string(f.size()));
        LiteratureRow r;
        r.variable = f[0];
        r.band = f[1];
        try {
            r.fiber_km = std::stod(f[2]);
            r.att_db = std::stod(f[3]);
            r.att_estimated = f[4] == "true";
            r.launch_dbm = std::stod(f[5]);
            r.skr_bps = std::stod(f[6]);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed number");
        }
        r.finite_key = f[7];
        r.reference = f[8];
        if (r.variable != "discrete" && r.variable != "continuous")
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": variable must be discrete or continuous");
        rows.push_back(r);
    }
    return rows;
}

inline const char* kComparisonHeader =
    "variable,band,fiber_length_km,att_quantum_db,att_estimated,launch_power_dbm,"
    "skr_bps,finite_key,reference";

inline std::string comparison_row(const LiteratureRow& r) {
    std::ostringstream out;
    out << r.variable << ',' << r.band << ',' << fmt_num(r.fiber_km) << ',' << fmt_num(r.att_db)
        << ',' << (r.att_estimated ? "true" : "false") << ',' << fmt_num(r.launch_dbm) << ','
        << fmt_num(r.skr_bps) << ',' << r.finite_key << ',' << r.reference;
    return out.str();
}

// Simulated point with the same columns as the literature table.
inline LiteratureRow simulated_row(const Scenario& s, const ScenarioResult& r) {
    LiteratureRow row;
    row.variable = "discrete";
    row.band = s.quantum_wavelength_nm < 1400.0 ? "O" : "C";
    row.fiber_km = s.link.total_length_km();
    row.att_db = linear_to_db(s.link.fiber_transmittance(Band::quantum, 0.0, row.fiber_km));
    row.att_estimated = false;
    row.launch_dbm = s.plan.channels.empty() ? -std::numeric_limits<double>::infinity()
                                             : s.plan.total_launch_dbm();
    row.skr_bps = r.skr_bps;
    row.finite_key = "yes";
    row.reference = "simulated";
    return row;
}

inline std::string comparison_csv(const std::vector<LiteratureRow>& literature,
                                  const std::vector<LiteratureRow>& simulated) {
    std::ostringstream out;
    out << kComparisonHeader << '\n';
    for (const auto& r : literature) out << comparison_row(r) << '\n';
    for (const auto& r : simulated) out << comparison_row(r) << '\n';
    return out.str();
}

} // namespace qkdcoex

#endif // QKDCOEX_REPORT_HPP
