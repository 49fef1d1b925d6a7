#ifndef QKDCOEX_CONFIG_HPP
#define QKDCOEX_CONFIG_HPP

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkdcoex/calibration.hpp"
#include "qkdcoex/scenario.hpp"

// Plain-text scenario configuration. Nested key-value lines grouped in
// sections; repeated elements use 1-based numeric indices
// (span.1.length_km = 95.5). Keys carry their unit so unit errors stay
// grep-able. Every omitted key falls back to a documented default and is
// echoed in the provenance log.

namespace qkdcoex {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace cfg {

using Section = std::map<std::string, std::string>;
using RawConfig = std::map<std::string, Section>;

inline const std::vector<std::string>& required_sections() {
    static const std::vector<std::string> sections{"link", "plan", "receiver", "protocol",
                                                   "security"};
    return sections;
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            raw[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        raw[section][key] = value;
    }
    return raw;
}

// Applies one "section.key=value" override on top of the parsed file.
inline void apply_override(RawConfig& raw, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + spec + "': expected section.key=value");
    const std::string path = trim(spec.substr(0, eq));
    const std::string value = trim(spec.substr(eq + 1));
    const auto dot = path.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override '" + spec + "': key must be section-qualified");
    raw[path.substr(0, dot)][path.substr(dot + 1)] = value;
}

class SectionReader {
public:
    SectionReader(const RawConfig& raw, std::string section, std::vector<std::string>* provenance)
        : section_(std::move(section)), provenance_(provenance) {
        const auto it = raw.find(section_);
        if (it != raw.end()) data_ = &it->second;
    }

    bool present() const { return data_ != nullptr; }

    double number(const std::string& key, double fallback) {
        const std::string* v = lookup(key);
        if (v == nullptr) {
            note_default(key, format_double(fallback));
            return fallback;
        }
        return parse_double(key, *v);
    }

    bool boolean(const std::string& key, bool fallback) {
        const std::string* v = lookup(key);
        if (v == nullptr) {
            note_default(key, fallback ? "true" : "false");
            return fallback;
        }
        if (*v == "true") return true;
        if (*v == "false") return false;
        throw ConfigError(where(key) + ": expected true or false, got '" + *v + "'");
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const std::string* v = lookup(key);
        if (v == nullptr) {
            note_default(key, fallback);
            return fallback;
        }
        return *v;
    }

    std::optional<double> optional_number(const std::string& key) {
        const std::string* v = lookup(key);
        if (v == nullptr) return std::nullopt;
        return parse_double(key, *v);
    }

    // Marks a key as read without applying a default (used when another
    // form of the same setting takes precedence).
    void consume(const std::string& key) { (void)lookup(key); }

    // Indexed groups: returns per-index key/value maps for prefix.N.field.
    std::map<int, Section> group(const std::string& prefix) {
        std::map<int, Section> out;
        if (data_ == nullptr) return out;
        for (const auto& [key, value] : *data_) {
            if (key.rfind(prefix + ".", 0) != 0) continue;
            used_.insert(key);
            const std::string rest = key.substr(prefix.size() + 1);
            const auto dot = rest.find('.');
            if (dot == std::string::npos)
                throw ConfigError(where(key) + ": expected " + prefix + ".<index>.<field>");
            int index = 0;
            try {
                index = std::stoi(rest.substr(0, dot));
            } catch (const std::exception&) {
                throw ConfigError(where(key) + ": bad group index");
            }
            if (index < 1) throw ConfigError(where(key) + ": group indices start at 1");
            out[index][rest.substr(dot + 1)] = value;
        }
        return out;
    }

    void finish() const {
        if (data_ == nullptr) return;
        for (const auto& [key, value] : *data_) {
            (void)value;
            if (used_.find(key) == used_.end())
                throw ConfigError("unknown key '" + key + "' in section [" + section_ + "]");
        }
    }

    double parse_double(const std::string& key, const std::string& v) const {
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0')
            throw ConfigError(where(key) + ": expected a number, got '" + v + "'");
        return x;
    }

    static std::string format_double(double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", x);
        return buf;
    }

private:
    const std::string* lookup(const std::string& key) {
        if (data_ == nullptr) return nullptr;
        const auto it = data_->find(key);
        if (it == data_->end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    void note_default(const std::string& key, const std::string& value) {
        if (provenance_ != nullptr)
            provenance_->push_back(section_ + "." + key + " = " + value + " (default)");
    }

    std::string where(const std::string& key) const { return "[" + section_ + "] " + key; }

    std::string section_;
    const Section* data_ = nullptr;
    std::set<std::string> used_;
    std::vector<std::string>* provenance_;
};

inline double group_number(const SectionReader& reader, const Section& fields,
                           const std::string& context, const std::string& key, double fallback,
                           bool required = false) {
    const auto it = fields.find(key);
    if (it == fields.end()) {
        if (required) throw ConfigError(context + ": missing required field '" + key + "'");
        return fallback;
    }
    return reader.parse_double(context + "." + key, it->second);
}

inline FilterElement parse_filter(SectionReader& reader, const std::string& context,
                                  const Section& fields) {
    FilterElement f;
    for (const auto& [key, value] : fields) {
        if (key == "name") {
            f.name = value;
        } else if (key == "insertion_1310_db") {
            f.insertion_q_db = reader.parse_double(context, value);
        } else if (key == "isolation_1550_db") {
            f.isolation_c_db = reader.parse_double(context, value);
        } else if (key == "isolation_lower_bound") {
            f.isolation_lower_bound = value == "true";
        } else if (key == "spectral_model") {
            f.spectral_model = value == "true";
        } else if (key == "peak_insertion_1310_db") {
            f.peak_insertion_q_db = reader.parse_double(context, value);
        } else if (key == "ideal_block") {
            f.ideal_block = value == "true";
        } else {
            throw ConfigError(context + ": unknown filter field '" + key + "'");
        }
    }
    return f;
}

} // namespace cfg

struct ParsedScenario {
    Scenario scenario;
    CalibrationTargets targets;
    std::vector<std::string> provenance; // defaulted keys, one line each
};

// Default receiver chain: the measured filter cascade of the setup.
inline std::vector<FilterElement> default_tx_filters() {
    return {{"CWDM 1", 0.8, 45.0, true, false, 0.0, false}};
}

inline std::vector<FilterElement> default_rx_filters() {
    return {{"CWDM 2", 0.6, 45.0, true, false, 0.0, false},
            {"CWDM 3", 0.8, 45.0, true, false, 0.0, true},
            {"Filter Spool", 1.0, 32.9, false, false, 0.0, true},
            {"FBG and circulator", 4.0, 30.0, true, true, 1.8, true}};
}

inline ParsedScenario build_scenario(cfg::RawConfig raw) {
    using cfg::SectionReader;

    std::vector<std::string> missing;
    for (const auto& name : cfg::required_sections())
        if (raw.find(name) == raw.end()) missing.push_back(name);
    if (!missing.empty()) {
        std::string what = "missing required sections:";
        for (const auto& m : missing) what += " [" + m + "]";
        throw ConfigError(what);
    }
    static const std::set<std::string> known{"link", "plan", "receiver", "protocol",
                                            "security", "calibration"};
    for (const auto& [name, body] : raw) {
        (void)body;
        if (known.find(name) == known.end())
            throw ConfigError("unknown section [" + name + "]");
    }

    ParsedScenario out;
    Scenario& s = out.scenario;

    // [link]
    {
        SectionReader link(raw, "link", &out.provenance);
        s.quantum_wavelength_nm = link.number("quantum_wavelength_nm", 1310.0);
        const auto spans = link.group("span");
        if (spans.empty()) {
            s.link.spans.push_back({95.5, 0.3644, 0.21});
            out.provenance.push_back("link.span.1 = 95.5 km, 0.3644 / 0.21 dB/km (default)");
        } else {
            for (const auto& [idx, fields] : spans) {
                const std::string ctx = "[link] span." + std::to_string(idx);
                for (const auto& [key, value] : fields) {
                    (void)value;
                    if (key != "length_km" && key != "attenuation_1310_db_per_km" &&
                        key != "attenuation_1550_db_per_km")
                        throw ConfigError(ctx + ": unknown span field '" + key + "'");
                }
                FiberSpan span;
                span.length_km = cfg::group_number(link, fields, ctx, "length_km", 0.0, true);
                span.alpha_q_db_per_km =
                    cfg::group_number(link, fields, ctx, "attenuation_1310_db_per_km", 0.3644);
                span.alpha_c_db_per_km =
                    cfg::group_number(link, fields, ctx, "attenuation_1550_db_per_km", 0.21);
                s.link.spans.push_back(span);
            }
        }
        for (const auto& [idx, fields] : link.group("attenuator")) {
            const std::string ctx = "[link] attenuator." + std::to_string(idx);
            for (const auto& [key, value] : fields) {
                (void)value;
                if (key != "position_km" && key != "loss_1310_db" && key != "loss_1550_db")
                    throw ConfigError(ctx + ": unknown attenuator field '" + key + "'");
            }
            LumpedLoss a;
            a.position_km = cfg::group_number(link, fields, ctx, "position_km", 0.0, true);
            a.loss_q_db = cfg::group_number(link, fields, ctx, "loss_1310_db", 0.0, true);
            a.loss_c_db = cfg::group_number(link, fields, ctx, "loss_1550_db", a.loss_q_db);
            s.link.lumped.push_back(a);
        }
        const auto txf = link.group("tx_filter");
        if (txf.empty()) {
            s.link.tx_filters = default_tx_filters();
            out.provenance.push_back("link.tx_filter.1 = CWDM 1, 0.8 dB / >45 dB (default)");
        } else {
            for (const auto& [idx, fields] : txf)
                s.link.tx_filters.push_back(
                    cfg::parse_filter(link, "[link] tx_filter." + std::to_string(idx), fields));
        }
        link.finish();
    }

    // [plan]
    {
        SectionReader plan(raw, "plan", &out.provenance);
        const std::string dir = plan.text("direction", "co");
        if (dir == "co") s.plan.direction = Direction::co;
        else if (dir == "counter") s.plan.direction = Direction::counter;
        else throw ConfigError("[plan] direction: expected co or counter");
        s.plan.tx_mux_insertion_c_db = plan.number("tx_mux_insertion_1550_db", 0.47);
        s.plan.rx_demux_insertion_c_db = plan.number("rx_demux_insertion_1550_db", 0.47);

        const auto explicit_channels = plan.group("channel");
        if (!explicit_channels.empty()) {
            for (const char* key : {"channel_count", "grid_center_nm", "grid_spacing_ghz",
                                    "total_launch_power_dbm"})
                plan.consume(key);
            for (const auto& [idx, fields] : explicit_channels) {
                const std::string ctx = "[plan] channel." + std::to_string(idx);
                ClassicalChannel ch;
                ch.wavelength_nm = cfg::group_number(plan, fields, ctx, "wavelength_nm", 0.0, true);
                ch.launch_power_dbm =
                    cfg::group_number(plan, fields, ctx, "launch_power_dbm", 0.0, true);
                s.plan.channels.push_back(ch);
            }
        } else {
            const auto count = static_cast<int>(plan.number("channel_count", 13.0));
            const double center_nm = plan.number("grid_center_nm", 1550.1);
            const double spacing_ghz = plan.number("grid_spacing_ghz", 100.0);
            const double total_dbm = plan.number("total_launch_power_dbm", 8.9);
            if (count < 0) throw ConfigError("[plan] channel_count: negative");
            const double spacing_nm =
                spacing_ghz * 1e9 * (center_nm * 1e-9) * (center_nm * 1e-9) / kLightSpeedMs * 1e9;
            for (int i = 0; i < count; ++i) {
                const double offset = static_cast<double>(i) - 0.5 * (count - 1);
                s.plan.channels.push_back({center_nm + offset * spacing_nm, 0.0});
            }
            set_total_launch_dbm(s.plan, total_dbm);
        }
        plan.finish();
    }

    // [receiver]
    {
        SectionReader rx(raw, "receiver", &out.provenance);
        const auto rxf = rx.group("rx_filter");
        if (rxf.empty()) {
            s.link.rx_filters = default_rx_filters();
            out.provenance.push_back("receiver.rx_filter.* = Table chain (default)");
        } else {
            for (const auto& [idx, fields] : rxf)
                s.link.rx_filters.push_back(
                    cfg::parse_filter(rx, "[receiver] rx_filter." + std::to_string(idx), fields));
        }
        s.receiver.detectors.eta = rx.number("detector_efficiency", 0.25);
        s.receiver.detectors.dark_z_hz = rx.number("dark_count_z_hz", 91.0);
        s.receiver.detectors.dark_x_hz = rx.number("dark_count_x_hz", 108.0);
        s.receiver.detectors.dead_z_s = rx.number("dead_time_z_us", 32.0) * 1e-6;
        s.receiver.detectors.dead_x_s = rx.number("dead_time_x_us", 40.0) * 1e-6;
        s.receiver.jitter.fwhm_ps = rx.number("jitter_fwhm_ps", 50.0);
        s.receiver.jitter.tail_weight = rx.number("jitter_tail_weight", 0.0);
        s.receiver.jitter.tail_tau_ps = rx.number("jitter_tail_tau_ps", 0.0);
        const std::string family = rx.text("pulse_family", "sech2");
        if (family == "sech2") s.receiver.pulse.family = PulseFamily::sech2;
        else if (family == "gaussian") s.receiver.pulse.family = PulseFamily::gaussian;
        else throw ConfigError("[receiver] pulse_family: expected sech2 or gaussian");
        s.receiver.pulse.fwhm_ps = rx.number("pulse_fwhm_ps", 26.0);
        s.receiver.pulse.chirped = rx.boolean("pulse_chirped", true);
        s.receiver.pulse.broadened_fwhm_ps =
            rx.number("pulse_broadened_fwhm_ps", s.receiver.pulse.fwhm_ps);
        s.receiver.pulse.effective_spectral_fwhm_ghz =
            rx.number("pulse_effective_spectral_fwhm_ghz", 0.0);
        s.receiver.fbg_fwhm_ghz = rx.number("fbg_fwhm_ghz", 47.0);
        const std::string shape = rx.text("fbg_shape", "gaussian");
        if (shape == "gaussian") s.receiver.fbg_shape = FilterShape::gaussian;
        else if (shape == "sech2") s.receiver.fbg_shape = FilterShape::sech2;
        else if (shape == "rectangular") s.receiver.fbg_shape = FilterShape::rectangular;
        else throw ConfigError("[receiver] fbg_shape: expected gaussian, sech2 or rectangular");
        s.receiver.noise_bandwidth_ghz = rx.number("noise_bandwidth_ghz", 47.0);
        s.receiver.gate.window_ps = rx.number("window_ps", 100.0);
        s.receiver.gate.bins_per_qubit = static_cast<int>(rx.number("bins_per_qubit", 2.0));
        s.receiver.window_offset_ps = rx.number("window_offset_ps", 0.0);
        s.receiver.temporal_table_row_db = rx.number("temporal_table_row_db", 1.9);
        rx.finish();
    }

    // [protocol]
    {
        SectionReader prot(raw, "protocol", &out.provenance);
        const double rep_ghz = prot.number("repetition_rate_ghz", 2.5);
        s.protocol.rep_rate_hz = rep_ghz * 1e9;
        s.receiver.gate.period_ps = 1e3 / rep_ghz;
        s.protocol.mu1 = prot.number("mu1", 0.5);
        s.protocol.mu2 = prot.number("mu2", 0.2);
        s.protocol.p_mu1 = prot.number("p_mu1", 0.7);
        s.protocol.p_za = prot.number("p_z_alice", 0.9);
        s.protocol.p_zb = prot.number("p_z_bob", 0.5);
        s.protocol.e_opt_z = prot.number("e_opt_z", 0.006);
        s.protocol.e_opt_x = prot.number("e_opt_x", 0.006);
        prot.finish();
    }

    // [security]
    {
        SectionReader sec(raw, "security", &out.provenance);
        s.security.eps_sec = sec.number("eps_sec", 1e-9);
        s.security.eps_cor = sec.number("eps_cor", 1e-9);
        s.security.n_z_block = sec.number("block_size_bits", 8e6);
        s.security.f_ec = sec.number("error_correction_efficiency", 1.05);
        sec.finish();
    }

    // [calibration] (optional)
    {
        SectionReader cal(raw, "calibration", &out.provenance);
        if (cal.present()) {
            s.raman.rho_per_km_ghz = cal.number("raman_rho_per_km_ghz", 0.0);
            out.targets.temporal_loss_db =
                cal.number("target_temporal_loss_db", s.receiver.temporal_table_row_db);
            out.targets.baseline_skr_bps = cal.number("target_baseline_skr_bps", 0.0);
            out.targets.noise_launch_dbm = cal.optional_number("target_noise_launch_dbm");
            out.targets.noise_skr_bps = cal.optional_number("target_noise_skr_bps");
            cal.finish();
        } else {
            out.targets.temporal_loss_db = s.receiver.temporal_table_row_db;
        }
    }

    try {
        s.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invariant violation: ") + e.what());
    }
    return out;
}

inline ParsedScenario parse_config(const std::string& text,
                                   const std::vector<std::string>& overrides = {}) {
    cfg::RawConfig raw = cfg::parse_raw(text);
    for (const auto& o : overrides) cfg::apply_override(raw, o);
    return build_scenario(std::move(raw));
}

// Canonical text form; parsing it back yields an equivalent scenario.
inline std::string serialize_config(const Scenario& s, const CalibrationTargets& targets) {
    std::ostringstream out;
    auto num = [](double x) { // full precision so the round trip is bit-exact
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };

    out << "[link]\n";
    out << "quantum_wavelength_nm = " << num(s.quantum_wavelength_nm) << "\n";
    for (std::size_t i = 0; i < s.link.spans.size(); ++i) {
        const auto& span = s.link.spans[i];
        const std::string p = "span." + std::to_string(i + 1) + ".";
        out << p << "length_km = " << num(span.length_km) << "\n";
        out << p << "attenuation_1310_db_per_km = " << num(span.alpha_q_db_per_km) << "\n";
        out << p << "attenuation_1550_db_per_km = " << num(span.alpha_c_db_per_km) << "\n";
    }
    for (std::size_t i = 0; i < s.link.lumped.size(); ++i) {
        const auto& a = s.link.lumped[i];
        const std::string p = "attenuator." + std::to_string(i + 1) + ".";
        out << p << "position_km = " << num(a.position_km) << "\n";
        out << p << "loss_1310_db = " << num(a.loss_q_db) << "\n";
        out << p << "loss_1550_db = " << num(a.loss_c_db) << "\n";
    }
    auto emit_filter = [&out, &num](const std::string& p, const FilterElement& f) {
        out << p << "name = " << f.name << "\n";
        out << p << "insertion_1310_db = " << num(f.insertion_q_db) << "\n";
        out << p << "isolation_1550_db = " << num(f.isolation_c_db) << "\n";
        out << p << "isolation_lower_bound = " << (f.isolation_lower_bound ? "true" : "false")
            << "\n";
        if (f.spectral_model) {
            out << p << "spectral_model = true\n";
            out << p << "peak_insertion_1310_db = " << num(f.peak_insertion_q_db) << "\n";
        }
        out << p << "ideal_block = " << (f.ideal_block ? "true" : "false") << "\n";
    };
    for (std::size_t i = 0; i < s.link.tx_filters.size(); ++i)
        emit_filter("tx_filter." + std::to_string(i + 1) + ".", s.link.tx_filters[i]);

    out << "\n[plan]\n";
    out << "direction = " << (s.plan.direction == Direction::co ? "co" : "counter") << "\n";
    out << "tx_mux_insertion_1550_db = " << num(s.plan.tx_mux_insertion_c_db) << "\n";
    out << "rx_demux_insertion_1550_db = " << num(s.plan.rx_demux_insertion_c_db) << "\n";
    for (std::size_t i = 0; i < s.plan.channels.size(); ++i) {
        const std::string p = "channel." + std::to_string(i + 1) + ".";
        out << p << "wavelength_nm = " << num(s.plan.channels[i].wavelength_nm) << "\n";
        out << p << "launch_power_dbm = " << num(s.plan.channels[i].launch_power_dbm) << "\n";
    }

    out << "\n[receiver]\n";
    for (std::size_t i = 0; i < s.link.rx_filters.size(); ++i)
        emit_filter("rx_filter." + std::to_string(i + 1) + ".", s.link.rx_filters[i]);
    out << "detector_efficiency = " << num(s.receiver.detectors.eta) << "\n";
    out << "dark_count_z_hz = " << num(s.receiver.detectors.dark_z_hz) << "\n";
    out << "dark_count_x_hz = " << num(s.receiver.detectors.dark_x_hz) << "\n";
    out << "dead_time_z_us = " << num(s.receiver.detectors.dead_z_s * 1e6) << "\n";
    out << "dead_time_x_us = " << num(s.receiver.detectors.dead_x_s * 1e6) << "\n";
    out << "jitter_fwhm_ps = " << num(s.receiver.jitter.fwhm_ps) << "\n";
    out << "jitter_tail_weight = " << num(s.receiver.jitter.tail_weight) << "\n";
    out << "jitter_tail_tau_ps = " << num(s.receiver.jitter.tail_tau_ps) << "\n";
    out << "pulse_family = "
        << (s.receiver.pulse.family == PulseFamily::sech2 ? "sech2" : "gaussian") << "\n";
    out << "pulse_fwhm_ps = " << num(s.receiver.pulse.fwhm_ps) << "\n";
    out << "pulse_chirped = " << (s.receiver.pulse.chirped ? "true" : "false") << "\n";
    out << "pulse_broadened_fwhm_ps = " << num(s.receiver.pulse.broadened_fwhm_ps) << "\n";
    out << "pulse_effective_spectral_fwhm_ghz = "
        << num(s.receiver.pulse.effective_spectral_fwhm_ghz) << "\n";
    out << "fbg_fwhm_ghz = " << num(s.receiver.fbg_fwhm_ghz) << "\n";
    const char* shape = s.receiver.fbg_shape == FilterShape::gaussian
                            ? "gaussian"
                            : (s.receiver.fbg_shape == FilterShape::sech2 ? "sech2" : "rectangular");
    out << "fbg_shape = " << shape << "\n";
    out << "noise_bandwidth_ghz = " << num(s.receiver.noise_bandwidth_ghz) << "\n";
    out << "window_ps = " << num(s.receiver.gate.window_ps) << "\n";
    out << "bins_per_qubit = " << s.receiver.gate.bins_per_qubit << "\n";
    out << "window_offset_ps = " << num(s.receiver.window_offset_ps) << "\n";
    out << "temporal_table_row_db = " << num(s.receiver.temporal_table_row_db) << "\n";

    out << "\n[protocol]\n";
    out << "repetition_rate_ghz = " << num(s.protocol.rep_rate_hz / 1e9) << "\n";
    out << "mu1 = " << num(s.protocol.mu1) << "\n";
    out << "mu2 = " << num(s.protocol.mu2) << "\n";
    out << "p_mu1 = " << num(s.protocol.p_mu1) << "\n";
    out << "p_z_alice = " << num(s.protocol.p_za) << "\n";
    out << "p_z_bob = " << num(s.protocol.p_zb) << "\n";
    out << "e_opt_z = " << num(s.protocol.e_opt_z) << "\n";
    out << "e_opt_x = " << num(s.protocol.e_opt_x) << "\n";

    out << "\n[security]\n";
    out << "eps_sec = " << num(s.security.eps_sec) << "\n";
    out << "eps_cor = " << num(s.security.eps_cor) << "\n";
    out << "block_size_bits = " << num(s.security.n_z_block) << "\n";
    out << "error_correction_efficiency = " << num(s.security.f_ec) << "\n";

    out << "\n[calibration]\n";
    out << "raman_rho_per_km_ghz = " << num(s.raman.rho_per_km_ghz) << "\n";
    out << "target_temporal_loss_db = " << num(targets.temporal_loss_db) << "\n";
    out << "target_baseline_skr_bps = " << num(targets.baseline_skr_bps) << "\n";
    if (targets.noise_launch_dbm)
        out << "target_noise_launch_dbm = " << num(*targets.noise_launch_dbm) << "\n";
    if (targets.noise_skr_bps)
        out << "target_noise_skr_bps = " << num(*targets.noise_skr_bps) << "\n";
    return out.str();
}

} // namespace qkdcoex

#endif // QKDCOEX_CONFIG_HPP
