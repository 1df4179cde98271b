#include "qkr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qkr/evolution.hpp"
#include "qkr/worker_pool.hpp"

namespace qkr {

namespace {

struct Line {
    double intercept = 0;
    double slope = 0;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) throw UsageError("least squares: abscissae are all equal");
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

std::vector<double> logs(std::span<const double> v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::log(x); });
    return out;
}

void require_same_length(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size()) throw UsageError("time and value series differ in length");
}

// Indices i with lo <= t_i <= hi.
std::pair<std::size_t, std::size_t> window_range(std::span<const double> t, Window w) {
    std::size_t first = 0;
    while (first < t.size() && t[first] < w.lo) ++first;
    std::size_t last = first;
    while (last < t.size() && t[last] <= w.hi) ++last;
    return {first, last};
}

}  // namespace

PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> y) {
    require_same_length(t, y);
    if (t.size() < 5) throw UsageError("fit_power_law: window shorter than 5 points");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!(t[i] > 0) || !(y[i] > 0)) throw UsageError("fit_power_law: values must be positive");
    const auto lt = logs(t);
    const auto ly = logs(y);
    const Line line = least_squares(lt, ly);
    PowerLawFit fit;
    fit.exponent = line.slope;
    fit.prefactor = std::exp(line.intercept);
    fit.points = t.size();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = ly[i] - (line.intercept + line.slope * lt[i]);
        fit.residual += r * r;
    }
    return fit;
}

PowerLawFit fit_power_law(const EntanglementTrace& trace, Window window) {
    const auto t = trace.times();
    const auto y = trace.von_neumann_series();
    const auto [first, last] = window_range(t, window);
    return fit_power_law(std::span(t).subspan(first, last - first),
                         std::span(y).subspan(first, last - first));
}

LogFit fit_log_model(std::span<const double> t, std::span<const double> y) {
    require_same_length(t, y);
    if (t.size() < 2) throw UsageError("fit_log_model: needs at least two points");
    const Line line = least_squares(logs(t), y);
    return {line.intercept, line.slope};
}

CrossoverResult detect_crossover(std::span<const double> t_all, std::span<const double> y_all,
                                 std::optional<Window> window) {
    require_same_length(t_all, y_all);
    const Window w = window.value_or(Window{1.0, std::numeric_limits<double>::infinity()});
    const auto [first, last] = window_range(t_all, Window{std::max(w.lo, 1.0), w.hi});
    const std::size_t n = last - first;
    if (n < 50) throw UsageError("detect_crossover: needs at least 50 samples in the window");
    const auto t = t_all.subspan(first, n);
    const auto y = y_all.subspan(first, n);
    for (std::size_t i = 0; i < n; ++i)
        if (!(y[i] > 0)) throw UsageError("detect_crossover: S_vN must be positive in the window");

    const auto lt = logs(t);
    const auto ly = logs(y);
    constexpr std::size_t kMinSegment = 4;

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    CrossoverFit best_fit;
    for (std::size_t k = kMinSegment; k + kMinSegment <= n; ++k) {
        const Line early = least_squares(std::span(lt).first(k), std::span(ly).first(k));
        const Line late = least_squares(std::span(lt).subspan(k), y.subspan(k));
        const double c = std::exp(early.intercept);
        double res = 0;
        for (std::size_t i = 0; i < k; ++i) {
            const double r = y[i] - c * std::exp(early.slope * lt[i]);
            res += r * r / t[i];
        }
        for (std::size_t i = k; i < n; ++i) {
            const double r = y[i] - (late.intercept + late.slope * lt[i]);
            res += r * r / t[i];
        }
        if (res < best) {
            best = res;
            best_k = k;
            best_fit.t_star = t[k];
            best_fit.mu = early.slope;
            best_fit.prefactor = c;
            best_fit.late = {late.intercept, late.slope};
            best_fit.residual = res;
        }
    }
    best_fit.window = {t.front(), t.back()};

    CrossoverResult result;
    result.fit = best_fit;
    const bool interior = best_k > kMinSegment && best_k + kMinSegment < n;
    result.status = interior ? CrossoverStatus::Found : CrossoverStatus::NoCrossover;
    return result;
}

CrossoverResult detect_crossover(const EntanglementTrace& trace, std::optional<Window> window) {
    const auto t = trace.times();
    const auto y = trace.von_neumann_series();
    return detect_crossover(t, y, window);
}

Window early_window(double t_star) { return {3.0, t_star / 2.0}; }

double scaling_exponent(std::span<const std::pair<double, double>> k_tstar) {
    if (k_tstar.size() < 4) throw UsageError("scaling_exponent: needs at least 4 (K, t*) pairs");
    std::vector<double> lk, lt;
    for (const auto& [k, ts] : k_tstar) {
        if (!(k > 0) || !(ts > 0)) throw UsageError("scaling_exponent: pairs must be positive");
        lk.push_back(std::log(k));
        lt.push_back(std::log(ts));
    }
    return least_squares(lk, lt).slope;
}

FrequencyEstimate dominant_frequency(std::span<const double> t_all, std::span<const double> y_all,
                                     double t_min) {
    require_same_length(t_all, y_all);
    std::size_t first = 0;
    while (first < t_all.size() && t_all[first] <= t_min) ++first;
    const std::size_t m = t_all.size() - first;
    if (m < 256) throw UsageError("dominant_frequency: needs at least 256 samples after t_min");
    const auto t = t_all.subspan(first);
    const auto y = y_all.subspan(first);

    const LogFit trend = fit_log_model(t, y);
    std::vector<double> d(m);
    double scale = 0, rms = 0;
    for (std::size_t i = 0; i < m; ++i) {
        d[i] = y[i] - (trend.a + trend.b * std::log(t[i]));
        scale = std::max(scale, std::abs(y[i]));
        rms += d[i] * d[i];
    }
    rms = std::sqrt(rms / m);

    FrequencyEstimate est;
    est.samples = m;
    if (rms <= 1e-12 * std::max(1.0, scale)) return est;

    for (std::size_t i = 0; i < m; ++i)
        d[i] *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (m - 1)));

    const std::size_t bins = m / 2;
    std::vector<double> power(bins + 1, 0.0);
    for (std::size_t k = 1; k <= bins; ++k) {
        // rotate by a fixed twiddle; renormalised every 64 samples
        const cplx w = std::polar(1.0, -2.0 * std::numbers::pi * k / m);
        cplx z{1.0, 0.0};
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < m; ++i) {
            acc += d[i] * z;
            z *= w;
            if ((i & 63) == 63) z = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * (i + 1) % m) / m);
        }
        power[k] = std::norm(acc);
    }

    const auto peak = static_cast<std::size_t>(std::max_element(power.begin() + 1, power.end()) - power.begin());
    if (!(power[peak] > 0)) return est;
    double offset = 0;
    if (peak > 1 && peak < bins && power[peak - 1] > 0 && power[peak + 1] > 0) {
        const double a = std::log(power[peak - 1]);
        const double b = std::log(power[peak]);
        const double c = std::log(power[peak + 1]);
        const double denom = a - 2.0 * b + c;
        if (denom < 0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    }
    est.status = FrequencyStatus::Found;
    est.bin = peak;
    est.nu = (static_cast<double>(peak) + offset) / static_cast<double>(m);
    return est;
}

FrequencyEstimate dominant_frequency(const EntanglementTrace& trace, double t_min) {
    const auto t = trace.times();
    const auto y = trace.von_neumann_series();
    return dominant_frequency(t, y, t_min);
}

double oscillation_rms(std::span<const double> t_all, std::span<const double> y_all, Window window, int width) {
    require_same_length(t_all, y_all);
    if (width < 1) throw UsageError("oscillation_rms: width must be >= 1");
    std::size_t first = 0;
    while (first < t_all.size() && t_all[first] <= window.lo) ++first;
    std::size_t last = first;
    while (last < t_all.size() && t_all[last] <= window.hi) ++last;
    const std::size_t n = last - first;
    const auto half = static_cast<std::size_t>(width / 2);
    if (n < 2 * half + 3) throw UsageError("oscillation_rms: window too short for the smoothing width");
    const auto t = t_all.subspan(first, n);
    const auto y = y_all.subspan(first, n);
    const LogFit trend = fit_log_model(t, y);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = y[i] - (trend.a + trend.b * std::log(t[i]));

    double acc = 0;
    std::size_t count = 0;
    for (std::size_t i = half; i + half < n; ++i) {
        double mean = 0;
        for (std::size_t j = i - half; j <= i + half; ++j) mean += d[j];
        mean /= static_cast<double>(2 * half + 1);
        acc += (d[i] - mean) * (d[i] - mean);
        ++count;
    }
    return std::sqrt(acc / static_cast<double>(count));
}

double quality_factor(const ResonanceSpec& res, double half_width_eps) {
    ResonanceSpec shifted = res;
    shifted.detuning = res.detuning + half_width_eps;
    ResonanceSpec exact = res;
    exact.detuning = 0;
    const double hbar = effective_planck(exact);
    return hbar / std::abs(hbar - effective_planck(shifted));
}

ResonanceCurve build_resonance_curve(const SystemConfig& config, std::span<const double> eps_list,
                                     const ResonanceScanOptions& options) {
    if (eps_list.empty()) throw UsageError("resonance scan: empty detuning list");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i - 1]))
            throw UsageError("resonance scan: detunings must be strictly increasing");
    const auto zero = std::find(eps_list.begin(), eps_list.end(), 0.0);
    if (zero == eps_list.end()) throw UsageError("resonance scan: detuning list must include 0");
    const auto zero_index = static_cast<std::size_t>(zero - eps_list.begin());
    require_valid(config);

    ResonanceCurve curve;
    curve.traces.resize(eps_list.size());
    auto errors = run_indexed(eps_list.size(), options.workers, [&](std::size_t i) {
        SystemConfig run = config;
        run.resonance.detuning = eps_list[i];
        curve.traces[i] = evolve(run);
    });
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i]) continue;
        std::ostringstream msg;
        msg << "resonance scan: run at eps = " << eps_list[i] << " failed: ";
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            msg << e.what();
        }
        throw std::runtime_error(msg.str());
    }

    if (options.t_min) {
        curve.t_min = *options.t_min;
    } else {
        const auto cross = detect_crossover(curve.traces[zero_index]);
        if (!cross.found())
            throw std::runtime_error("resonance scan: no crossover in the eps = 0 run; pass t_min explicitly");
        curve.t_min = cross.fit.t_star;
    }

    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const auto est = dominant_frequency(curve.traces[i], curve.t_min);
        curve.samples.push_back({eps_list[i], est.found() ? est.nu : 0.0, est.found()});
    }
    curve.peak_nu = curve.samples[zero_index].nu;

    // Half-width: nearest detuning on the positive side (or the negative side
    // if none) where nu falls below half its resonant value.
    auto search = [&](auto begin, auto end) -> std::optional<double> {
        for (auto it = begin; it != end; ++it)
            if (it->nu < 0.5 * curve.peak_nu) return std::abs(it->eps);
        return std::nullopt;
    };
    const auto& s = curve.samples;
    if (zero_index + 1 < s.size()) {
        curve.half_width_eps = search(s.begin() + zero_index + 1, s.end());
    } else {
        curve.half_width_eps = search(s.rbegin() + 1, s.rend());
    }
    if (curve.half_width_eps && curve.peak_nu > 0) {
        curve.q_factor = quality_factor(config.resonance, *curve.half_width_eps);
    }
    return curve;
}

}  // namespace qkr
