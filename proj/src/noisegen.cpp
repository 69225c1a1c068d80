#include "velplane/noisegen.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <mutex>
#include <random>
#include <string>

#include "velplane/errors.hpp"
#include "velplane/ordinal.hpp"

namespace velplane {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* plan) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
    auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (raw == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(raw);
}

// Half spectrum X_0 .. X_{n/2} of a real series.
std::vector<std::complex<double>> forward_real(std::span<const double> x) {
    const std::size_t n = x.size();
    auto in = fftw_buffer<double>(n);
    auto out = fftw_buffer<fftw_complex>(n / 2 + 1);
    Plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    std::copy(x.begin(), x.end(), in.get());
    fftw_execute(plan.get());
    std::vector<std::complex<double>> spectrum(n / 2 + 1);
    for (std::size_t j = 0; j < spectrum.size(); ++j) spectrum[j] = {out[j][0], out[j][1]};
    return spectrum;
}

// Real series of length n from a Hermitian half spectrum, scaled by 1/n.
std::vector<double> inverse_real(const std::vector<std::complex<double>>& spectrum, std::size_t n) {
    auto in = fftw_buffer<fftw_complex>(n / 2 + 1);
    auto out = fftw_buffer<double>(n);
    Plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        in[j][0] = spectrum[j].real();
        in[j][1] = spectrum[j].imag();
    }
    fftw_execute(plan.get());
    std::vector<double> x(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = out[i] * scale;
    return x;
}

void check_spec(const NoiseSpec& spec) {
    if (spec.length < kMinNoiseLength) {
        throw ValidationError("noise length must be >= 1024");
    }
    if (!(spec.exponent >= 0.0 && spec.exponent <= kMaxNoiseExponent)) {
        throw ValidationError("noise exponent k must lie in [0, 4]");
    }
}

std::string ladder_label(double k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "k=%g", k);
    return buf;
}

}  // namespace

std::vector<double> uniform_noise(std::size_t length, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::vector<double> x(length);
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    for (auto& v : x) v = static_cast<double>(engine() >> 11) * kScale - 0.5;
    return x;
}

std::vector<double> generate_fk_noise(const NoiseSpec& spec) {
    check_spec(spec);
    const auto white = uniform_noise(spec.length, spec.seed);
    auto spectrum = forward_real(white);
    spectrum[0] = 0.0;
    const double half_k = 0.5 * spec.exponent;
    // The half-spectrum representation is Hermitian by construction; the
    // Nyquist bin (even lengths) stays real because the gain is real.
    for (std::size_t j = 1; j < spectrum.size(); ++j) {
        spectrum[j] *= std::pow(static_cast<double>(j), -half_k);
    }
    return inverse_real(spectrum, spec.length);
}

Periodogram periodogram(std::span<const double> series) {
    if (series.size() < 2) throw ValidationError("periodogram needs at least 2 samples");
    const auto spectrum = forward_real(series);
    const std::size_t n = series.size();
    Periodogram pg;
    const std::size_t bins = n / 2;
    pg.frequencies.reserve(bins);
    pg.power.reserve(bins);
    for (std::size_t j = 1; j <= bins; ++j) {
        pg.frequencies.push_back(static_cast<double>(j));
        pg.power.push_back(std::norm(spectrum[j]) / static_cast<double>(n));
    }
    return pg;
}

SlopeFit spectral_slope(std::span<const double> series, const SlopeBand& band) {
    if (series.size() < kMinNoiseLength) throw ValidationError("spectral slope needs at least 1024 samples");
    if (!(band.decades > 0.0) || !(band.top_exclusion >= 0.0 && band.top_exclusion < 1.0)) {
        throw ValidationError("invalid slope band");
    }
    for (double v : series) {
        if (!std::isfinite(v)) throw ValidationError("non-finite sample");
    }
    const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
    if (*lo_it == *hi_it) throw InputError("zero variance");

    const auto pg = periodogram(series);
    const double top = std::floor((1.0 - band.top_exclusion) * static_cast<double>(pg.frequencies.size()));
    const double centre = std::sqrt(top);
    const double half_width = std::pow(10.0, 0.5 * band.decades);
    const double f_lo = std::max(1.0, centre / half_width);
    const double f_hi = std::min(top, centre * half_width);

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < pg.frequencies.size(); ++i) {
        const double f = pg.frequencies[i];
        if (f < f_lo || f > f_hi) continue;
        if (!(pg.power[i] > 0.0)) continue;
        xs.push_back(std::log(f));
        ys.push_back(std::log(pg.power[i]));
    }
    if (xs.size() < 3) throw InputError("too few spectral bins for a slope fit");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }

    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.bins = xs.size();

    std::vector<double> residuals(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        residuals[i] = ys[i] - (fit.intercept + fit.slope * xs[i]);
    }
    const double max_residual = *std::max_element(residuals.begin(), residuals.end());
    auto mid = residuals.begin() + static_cast<std::ptrdiff_t>(residuals.size() / 2);
    std::nth_element(residuals.begin(), mid, residuals.end());
    fit.line_dominated = max_residual - *mid > std::log(1e4);
    return fit;
}

std::vector<PlanePoint> reference_ladder(std::span<const double> exponents, std::size_t length,
                                         std::uint64_t seed, int dimension, int delay) {
    std::vector<PlanePoint> points;
    points.reserve(exponents.size());
    for (double k : exponents) {
        const auto series = generate_fk_noise({k, length, seed});
        points.push_back(plane_point(ordinal_distribution(series, dimension, delay), ladder_label(k)));
    }
    return points;
}

}  // namespace velplane
