#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace bkgtfk {

/// Natural log of a positive rate. Throws DomainError for theta <= 0 or non-finite theta.
double log_target(double theta);

/// One Black-Karasinski parameter point.
///
/// The log short rate x = ln r follows dx = a (b - x) dt + sigma dW with b = ln(theta).
/// sigma = 0 is accepted and gives the deterministic limit; every other field must be
/// strictly positive and finite.
class ModelCalibration {
public:
    ModelCalibration(double a, double theta, double sigma, double r0);

    double a() const noexcept { return a_; }
    double theta() const noexcept { return theta_; }
    double sigma() const noexcept { return sigma_; }
    double r0() const noexcept { return r0_; }

    /// b = ln(theta), the mean-reversion level of the log rate.
    double log_target() const noexcept { return b_; }
    /// x0 = ln(r0).
    double log_r0() const noexcept { return x0_; }

    friend bool operator==(const ModelCalibration&, const ModelCalibration&) = default;

private:
    double a_;
    double theta_;
    double sigma_;
    double r0_;
    double b_;
    double x0_;
};

// Network input features, fixed order (a, sigma, theta, r0, tenor).
inline constexpr std::size_t kFeatureCount = 5;
using FeatureVector = std::array<double, kFeatureCount>;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "a", "sigma", "theta", "r0", "tenor"};

FeatureVector features(const ModelCalibration& calib, double tenor) noexcept;

struct Moments {
    double mean = 0.0;
    double stdev = 1.0;

    friend bool operator==(const Moments&, const Moments&) = default;
};

/// Per-feature z-score statistics in the fixed feature order.
class NormalizationStats {
public:
    explicit NormalizationStats(const std::array<Moments, kFeatureCount>& moments);

    /// Frozen reference table (a, sigma, theta, r0, tenor) used by the golden tests.
    static NormalizationStats reference();

    /// Recomputed from a sample of feature vectors (population stdev). A feature that is
    /// constant over the sample gets stdev 1 so that it normalizes to zero.
    static NormalizationStats from_samples(std::span<const FeatureVector> samples);

    const Moments& operator[](std::size_t i) const { return moments_.at(i); }
    const std::array<Moments, kFeatureCount>& moments() const noexcept { return moments_; }

    friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;

private:
    std::array<Moments, kFeatureCount> moments_;
};

FeatureVector normalize(const FeatureVector& raw, const NormalizationStats& stats) noexcept;
FeatureVector denormalize(const FeatureVector& z, const NormalizationStats& stats) noexcept;

}  // namespace bkgtfk
