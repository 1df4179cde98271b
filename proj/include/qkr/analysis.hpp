#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qkr/entanglement.hpp"
#include "qkr/model.hpp"

namespace qkr {

/// Inclusive time window in kicks.
struct Window {
    double lo = 0;
    double hi = 0;
};

struct PowerLawFit {
    double exponent = 0;
    double prefactor = 0;
    double residual = 0;  // sum of squared residuals in log-log space
    std::size_t points = 0;
};

/// Least-squares slope of ln y against ln t. Needs >= 5 points, all positive.
PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> y);
/// Power law fitted to the S_vN column of a trace over `window`.
PowerLawFit fit_power_law(const EntanglementTrace& trace, Window window);

struct LogFit {
    double a = 0;  // y ~ a + b ln t
    double b = 0;
};

LogFit fit_log_model(std::span<const double> t, std::span<const double> y);

struct CrossoverFit {
    double t_star = 0;
    double mu = 0;         // early exponent
    double prefactor = 0;  // early model c t^mu
    LogFit late;           // late model a + b ln t
    double residual = 0;   // weighted residual at the chosen breakpoint
    Window window;
};

enum class CrossoverStatus { Found, NoCrossover };

struct CrossoverResult {
    CrossoverStatus status = CrossoverStatus::NoCrossover;
    CrossoverFit fit;

    bool found() const { return status == CrossoverStatus::Found; }
};

/// Two-segment splice: c t^mu before the breakpoint, a + b ln t from it on.
/// The breakpoint minimises sum_i (y_i - model_i)^2 / t_i, the 1/t weight
/// being the d(ln t) measure of unit-spaced kicks. Each segment keeps at
/// least 4 points; a minimum at either end of the candidate range means
/// NoCrossover. Needs >= 50 samples in the window, all positive.
CrossoverResult detect_crossover(std::span<const double> t, std::span<const double> y,
                                 std::optional<Window> window = std::nullopt);
CrossoverResult detect_crossover(const EntanglementTrace& trace,
                                 std::optional<Window> window = std::nullopt);

/// Early growth window [3, t*/2] used for the reported exponent.
Window early_window(double t_star);

/// Least-squares slope of ln t* against ln K. Needs >= 4 positive pairs.
double scaling_exponent(std::span<const std::pair<double, double>> k_tstar);

enum class FrequencyStatus { Found, NoPeak };

struct FrequencyEstimate {
    FrequencyStatus status = FrequencyStatus::NoPeak;
    double nu = 0;  // cycles per kick
    std::size_t bin = 0;
    std::size_t samples = 0;

    bool found() const { return status == FrequencyStatus::Found; }
};

/// Dominant late-time frequency of y(t) for t > t_min: subtract a fitted
/// a + b ln t, apply a Hann taper, take the periodogram at k/M, pick the
/// largest non-DC bin and refine it by parabolic interpolation of the log
/// power. Needs >= 256 samples past t_min.
FrequencyEstimate dominant_frequency(std::span<const double> t, std::span<const double> y, double t_min);
FrequencyEstimate dominant_frequency(const EntanglementTrace& trace, double t_min);

/// RMS of the log-detrended signal on (lo, hi] after removing a centred
/// moving average `width` samples wide. Measures oscillation amplitude
/// around the slow trend.
double oscillation_rms(std::span<const double> t, std::span<const double> y, Window window, int width);

struct ResonanceSample {
    double eps = 0;
    double nu = 0;  // 0 when no peak was found
    bool peak_found = false;
};

struct ResonanceCurve {
    std::vector<ResonanceSample> samples;
    double t_min = 0;  // late-time cut used for every spectrum
    double peak_nu = 0;
    std::optional<double> half_width_eps;
    std::optional<double> q_factor;
    std::vector<EntanglementTrace> traces;  // one per sample, same order
};

struct ResonanceScanOptions {
    int workers = 1;
    std::optional<double> t_min;  // default: crossover of the eps = 0 run
};

/// One evolution per detuning (eps must be strictly increasing and contain 0),
/// nu(eps) from dominant_frequency, half-width at nu < nu(0)/2 and
/// Q = hbar_s / |hbar_s - hbar'_s(half-width)|.
ResonanceCurve build_resonance_curve(const SystemConfig& config, std::span<const double> eps_list,
                                     const ResonanceScanOptions& options = {});

/// Q from a half-width, relative to the exact resonance of `res`.
double quality_factor(const ResonanceSpec& res, double half_width_eps);

}  // namespace qkr
