#ifndef QKDCOEX_TEMPORAL_HPP
#define QKDCOEX_TEMPORAL_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qkdcoex/units.hpp"

// Pulse shape, detector jitter and gating-window model. Produces the signal
// acceptance of the detection window, the noise duty cycle, and the spectral
// mismatch between the laser pulse and the FBG filter.

namespace qkdcoex {

inline constexpr double kFwhmToSigma = 2.3548200450309493; // Gaussian FWHM / sigma
inline constexpr double kSech2FwhmFactor = 1.7627471740390860; // sech^2 FWHM / tau
inline constexpr double kSech2Tbp = 0.3148340021349775;  // sech^2 time-bandwidth product
inline constexpr double kGaussTbp = 0.4412712003053032;  // Gaussian time-bandwidth product

enum class PulseFamily { gaussian, sech2 };
enum class FilterShape { gaussian, sech2, rectangular };

struct PulseModel {
    PulseFamily family = PulseFamily::sech2;
    double fwhm_ps = 26.0;
    bool chirped = true;
    // Width after the (chirped) FBG; equals fwhm_ps for an unbroadened pulse.
    double broadened_fwhm_ps = 26.0;
    // Effective spectral width of the chirped pulse. Zero means Fourier-limited.
    double effective_spectral_fwhm_ghz = 0.0;

    void validate() const {
        if (!(fwhm_ps > 0.0)) throw std::domain_error("PulseModel: fwhm_ps must be > 0");
        if (broadened_fwhm_ps < fwhm_ps)
            throw std::domain_error("PulseModel: broadened_fwhm_ps < fwhm_ps");
    }
};

// Detector response. Gaussian core of the given FWHM plus an optional late
// exponential tail (diffusion tail of free-running InGaAs APDs); tail_weight
// zero gives the plain Gaussian model.
struct JitterModel {
    double fwhm_ps = 50.0;
    double tail_weight = 0.0;
    double tail_tau_ps = 0.0;

    double sigma_ps() const { return fwhm_ps / kFwhmToSigma; }

    void validate() const {
        if (fwhm_ps < 0.0) throw std::domain_error("JitterModel: negative fwhm");
        if (tail_weight < 0.0 || tail_weight >= 1.0)
            throw std::domain_error("JitterModel: tail_weight outside [0, 1)");
        if (tail_weight > 0.0 && !(tail_tau_ps > 0.0))
            throw std::domain_error("JitterModel: tail_weight set but tail_tau_ps <= 0");
    }
};

struct GateModel {
    double window_ps = 100.0;
    int bins_per_qubit = 2;
    double period_ps = 400.0; // 2.5 GHz qubit rate

    void validate() const {
        if (!(window_ps > 0.0)) throw std::domain_error("GateModel: window must be > 0");
        if (bins_per_qubit < 1) throw std::domain_error("GateModel: bins_per_qubit < 1");
        if (window_ps > period_ps / bins_per_qubit + 1e-12)
            throw std::domain_error("GateModel: window exceeds period / bins_per_qubit");
    }
};

// Probability a uniformly-timed noise photon falls inside an accepted window.
inline double noise_duty_cycle(const GateModel& gate) {
    gate.validate();
    return gate.bins_per_qubit * gate.window_ps / gate.period_ps;
}

// Arrival-time density on a uniform grid, normalized to unit area.
struct ArrivalDistribution {
    double t0_ps = 0.0;
    double dt_ps = 0.05;
    std::vector<double> density;

    double time_at(std::size_t i) const { return t0_ps + dt_ps * static_cast<double>(i); }

    double peak_time_ps() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < density.size(); ++i)
            if (density[i] > density[best]) best = i;
        return time_at(best);
    }

    double integral() const {
        if (density.size() < 2) return 0.0;
        double s = 0.5 * (density.front() + density.back());
        for (std::size_t i = 1; i + 1 < density.size(); ++i) s += density[i];
        return s * dt_ps;
    }

    // Trapezoid integral over [a, b] with linear interpolation at the edges.
    double integrate(double a, double b) const {
        if (density.size() < 2 || b <= a) return 0.0;
        const double tmax = time_at(density.size() - 1);
        a = std::max(a, t0_ps);
        b = std::min(b, tmax);
        if (b <= a) return 0.0;

        auto value_at = [this, tmax](double t) {
            const double x = (t - t0_ps) / dt_ps;
            const auto i = static_cast<std::size_t>(std::clamp(std::floor(x), 0.0,
                                                    static_cast<double>(density.size() - 2)));
            const double f = x - static_cast<double>(i);
            return density[i] * (1.0 - f) + density[i + 1] * f;
        };

        const auto ia = static_cast<std::size_t>(std::ceil((a - t0_ps) / dt_ps - 1e-12));
        const auto ib = static_cast<std::size_t>(std::floor((b - t0_ps) / dt_ps + 1e-12));
        double s = 0.0;
        if (ia > ib) { // both endpoints inside one cell
            return 0.5 * (value_at(a) + value_at(b)) * (b - a);
        }
        if (time_at(ia) > a)
            s += 0.5 * (value_at(a) + density[ia]) * (time_at(ia) - a);
        for (std::size_t i = ia; i < ib; ++i)
            s += 0.5 * (density[i] + density[i + 1]) * dt_ps;
        if (b > time_at(ib))
            s += 0.5 * (density[ib] + value_at(b)) * (b - time_at(ib));
        return s;
    }
};

namespace detail {

// Intensity profile of the (broadened) pulse, sampled symmetrically around 0.
inline std::vector<double> sample_pulse(const PulseModel& pulse, double dt,
                                        double& half_extent_ps) {
    const double width = std::max(pulse.broadened_fwhm_ps, pulse.fwhm_ps);
    double extent;
    if (pulse.family == PulseFamily::gaussian) {
        extent = 6.0 * width / kFwhmToSigma;
    } else {
        extent = 12.0 * width / kSech2FwhmFactor;
    }
    extent = std::max(extent, 2.0 * dt);
    const auto half_n = static_cast<std::size_t>(std::ceil(extent / dt));
    half_extent_ps = static_cast<double>(half_n) * dt;
    std::vector<double> samples(2 * half_n + 1);
    if (pulse.family == PulseFamily::gaussian) {
        const double sigma = std::max(width / kFwhmToSigma, 0.25 * dt);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double t = -half_extent_ps + dt * static_cast<double>(i);
            samples[i] = std::exp(-0.5 * t * t / (sigma * sigma));
        }
    } else {
        const double tau = std::max(width / kSech2FwhmFactor, 0.25 * dt);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double t = -half_extent_ps + dt * static_cast<double>(i);
            const double s = 1.0 / std::cosh(t / tau);
            samples[i] = s * s;
        }
    }
    return samples;
}

inline void normalize_grid(std::vector<double>& v, double dt) {
    if (v.size() < 2) return;
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
    s *= dt;
    if (s > 0.0)
        for (auto& x : v) x /= s;
}

} // namespace detail

// Convolution of the (broadened) pulse intensity profile with the detector
// response, on a grid of at most 0.1 ps resolution. The exponential tail is
// applied as an exact recursive filter on the Gaussian-convolved profile.
inline ArrivalDistribution arrival_distribution(const PulseModel& pulse,
                                                const JitterModel& jitter,
                                                double dt_ps = 0.05) {
    pulse.validate();
    jitter.validate();
    if (!(dt_ps > 0.0 && dt_ps <= 0.1))
        throw std::domain_error("arrival_distribution: grid step outside (0, 0.1] ps");

    double pulse_half = 0.0;
    std::vector<double> base = detail::sample_pulse(pulse, dt_ps, pulse_half);
    double t0 = -pulse_half;

    const double sigma = jitter.sigma_ps();
    if (sigma > 0.25 * dt_ps) {
        const auto half_k = static_cast<std::size_t>(std::ceil(6.0 * sigma / dt_ps));
        std::vector<double> kernel(2 * half_k + 1);
        for (std::size_t i = 0; i < kernel.size(); ++i) {
            const double t = dt_ps * (static_cast<double>(i) - static_cast<double>(half_k));
            kernel[i] = std::exp(-0.5 * t * t / (sigma * sigma));
        }
        detail::normalize_grid(kernel, dt_ps);
        std::vector<double> out(base.size() + kernel.size() - 1, 0.0);
        for (std::size_t i = 0; i < base.size(); ++i) {
            const double b = base[i];
            if (b == 0.0) continue;
            for (std::size_t j = 0; j < kernel.size(); ++j) out[i + j] += b * kernel[j] * dt_ps;
        }
        base = std::move(out);
        t0 -= static_cast<double>(half_k) * dt_ps;
    }

    if (jitter.tail_weight > 0.0) {
        const double tau = jitter.tail_tau_ps;
        const auto extra = static_cast<std::size_t>(std::ceil(16.0 * tau / dt_ps));
        std::vector<double> density(base.size() + extra, 0.0);
        const double decay = std::exp(-dt_ps / tau);
        const double gain = 1.0 - decay;
        double y = 0.0;
        const double w = jitter.tail_weight;
        for (std::size_t i = 0; i < density.size(); ++i) {
            const double b = i < base.size() ? base[i] : 0.0;
            y = decay * y + gain * b;
            density[i] = (1.0 - w) * b + w * y;
        }
        base = std::move(density);
    }

    detail::normalize_grid(base, dt_ps);
    ArrivalDistribution dist;
    dist.t0_ps = t0;
    dist.dt_ps = dt_ps;
    dist.density = std::move(base);
    return dist;
}

// Fraction of the arrival distribution inside the detection window. The
// window is centered on the distribution peak; offset_ps shifts it.
inline double window_acceptance(const ArrivalDistribution& dist, const GateModel& gate,
                                double offset_ps = 0.0) {
    gate.validate();
    const double center = dist.peak_time_ps() + offset_ps;
    return dist.integrate(center - 0.5 * gate.window_ps, center + 0.5 * gate.window_ps);
}

inline double window_acceptance(const PulseModel& pulse, const JitterModel& jitter,
                                const GateModel& gate, double offset_ps = 0.0,
                                double dt_ps = 0.05) {
    return window_acceptance(arrival_distribution(pulse, jitter, dt_ps), gate, offset_ps);
}

// Spectral width of the Fourier-limited pulse, GHz.
inline double fourier_limited_spectral_fwhm_ghz(const PulseModel& pulse) {
    const double tbp = pulse.family == PulseFamily::gaussian ? kGaussTbp : kSech2Tbp;
    return 1e3 * tbp / pulse.fwhm_ps;
}

inline double pulse_spectral_fwhm_ghz(const PulseModel& pulse) {
    return pulse.effective_spectral_fwhm_ghz > 0.0 ? pulse.effective_spectral_fwhm_ghz
                                                   : fourier_limited_spectral_fwhm_ghz(pulse);
}

// Equivalent noise bandwidth (integral of the peak-normalized transmission)
// of a filter of the given shape and FWHM.
inline double equivalent_noise_bandwidth_ghz(FilterShape shape, double fwhm_ghz) {
    switch (shape) {
        case FilterShape::gaussian: return fwhm_ghz * 0.5 * std::sqrt(M_PI / std::log(2.0));
        case FilterShape::sech2: return fwhm_ghz * 2.0 / kSech2FwhmFactor;
        case FilterShape::rectangular: return fwhm_ghz;
    }
    return fwhm_ghz;
}

// Noise bandwidth of a filter matched to the Fourier-limited pulse spectrum.
inline double matched_noise_bandwidth_ghz(const PulseModel& pulse) {
    const FilterShape shape = pulse.family == PulseFamily::gaussian ? FilterShape::gaussian
                                                                    : FilterShape::sech2;
    return equivalent_noise_bandwidth_ghz(shape, fourier_limited_spectral_fwhm_ghz(pulse));
}

namespace detail {

inline double shape_value(FilterShape shape, double nu, double fwhm) {
    switch (shape) {
        case FilterShape::gaussian: {
            const double s = fwhm / kFwhmToSigma;
            return std::exp(-0.5 * nu * nu / (s * s));
        }
        case FilterShape::sech2: {
            const double a = fwhm / kSech2FwhmFactor;
            const double c = 1.0 / std::cosh(nu / a);
            return c * c;
        }
        case FilterShape::rectangular:
            return std::abs(nu) <= 0.5 * fwhm ? 1.0 : 0.0;
    }
    return 0.0;
}

} // namespace detail

// Overlap loss between the pulse spectrum and the filter transmission, dB.
// A chirped pulse uses its calibrated effective (Gaussian) spectral width;
// a Fourier-limited pulse uses the spectral shape of its family.
inline double spectral_mismatch_db(const PulseModel& pulse, double filter_fwhm_ghz,
                                   FilterShape filter_shape = FilterShape::gaussian) {
    if (!(filter_fwhm_ghz > 0.0))
        throw std::domain_error("spectral_mismatch_db: filter width must be > 0");
    const double w = pulse_spectral_fwhm_ghz(pulse);
    const FilterShape pulse_shape =
        pulse.effective_spectral_fwhm_ghz > 0.0
            ? FilterShape::gaussian
            : (pulse.family == PulseFamily::gaussian ? FilterShape::gaussian : FilterShape::sech2);

    const double extent = 8.0 * std::max(w, filter_fwhm_ghz);
    const int n = 40001;
    const double step = 2.0 * extent / (n - 1);
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double nu = -extent + step * i;
        const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        const double s = detail::shape_value(pulse_shape, nu, w);
        num += weight * s * detail::shape_value(filter_shape, nu, filter_fwhm_ghz);
        den += weight * s;
    }
    return linear_to_db(num / den);
}

} // namespace qkdcoex

#endif // QKDCOEX_TEMPORAL_HPP
