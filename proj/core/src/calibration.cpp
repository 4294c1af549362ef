#include "bkgtfk/calibration.hpp"

#include "bkgtfk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bkgtfk {

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw DomainError(std::string(name) + " must be positive and finite, got " +
                          std::to_string(value));
    }
}

}  // namespace

double log_target(double theta) {
    if (!std::isfinite(theta) || theta <= 0.0) {
        throw DomainError("log_target: theta must be positive, got " + std::to_string(theta));
    }
    return std::log(theta);
}

ModelCalibration::ModelCalibration(double a, double theta, double sigma, double r0)
    : a_(a), theta_(theta), sigma_(sigma), r0_(r0) {
    require_positive(a, "a");
    require_positive(theta, "theta");
    require_positive(r0, "r0");
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw DomainError("sigma must be non-negative and finite, got " + std::to_string(sigma));
    }
    b_ = bkgtfk::log_target(theta);
    x0_ = std::log(r0);
}

FeatureVector features(const ModelCalibration& calib, double tenor) noexcept {
    return {calib.a(), calib.sigma(), calib.theta(), calib.r0(), tenor};
}

NormalizationStats::NormalizationStats(const std::array<Moments, kFeatureCount>& moments)
    : moments_(moments) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const auto& m = moments_[i];
        if (!std::isfinite(m.mean) || !std::isfinite(m.stdev) || m.stdev <= 0.0) {
            throw ConfigError("normalization stats for '" + std::string(kFeatureNames[i]) +
                              "' need finite mean and positive stdev");
        }
    }
}

NormalizationStats NormalizationStats::reference() {
    return NormalizationStats({{
        {0.2199, 0.1139},  // a
        {0.6415, 0.2739},  // sigma
        {0.0469, 0.0137},  // theta
        {0.0401, 0.0186},  // r0
        {5.9707, 6.6736},  // tenor
    }});
}

NormalizationStats NormalizationStats::from_samples(std::span<const FeatureVector> samples) {
    if (samples.empty()) {
        throw ConfigError("cannot compute normalization stats from an empty sample");
    }
    std::array<Moments, kFeatureCount> out{};
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        double sum = 0.0;
        for (const auto& s : samples) sum += s[i];
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& s : samples) ss += (s[i] - mean) * (s[i] - mean);
        double stdev = std::sqrt(ss / n);
        // Constant feature: relative spread at rounding level.
        if (!(stdev > 1e-12 * std::max(1.0, std::abs(mean)))) stdev = 1.0;
        out[i] = {mean, stdev};
    }
    return NormalizationStats(out);
}

FeatureVector normalize(const FeatureVector& raw, const NormalizationStats& stats) noexcept {
    FeatureVector z{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        z[i] = (raw[i] - stats.moments()[i].mean) / stats.moments()[i].stdev;
    }
    return z;
}

FeatureVector denormalize(const FeatureVector& z, const NormalizationStats& stats) noexcept {
    FeatureVector raw{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        raw[i] = z[i] * stats.moments()[i].stdev + stats.moments()[i].mean;
    }
    return raw;
}

}  // namespace bkgtfk
