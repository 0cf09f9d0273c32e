#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hrkl {

/// One univariate series. `x` is strictly increasing; |x| = |y| >= 2.
struct TimeSeries {
    std::string id;
    std::vector<double> x;
    std::vector<double> y;
    bool degenerate = false;  // y had (numerically) zero variance

    std::size_t size() const noexcept { return y.size(); }
};

struct Dataset {
    std::vector<TimeSeries> series;
    std::optional<std::vector<int>> labels;

    std::size_t size() const noexcept { return series.size(); }
    std::vector<std::string> ids() const;
    /// Throws ValidationError on duplicate ids, bad label count or a broken
    /// series invariant.
    void validate() const;
};

struct Standardized {
    std::vector<double> values;
    bool degenerate = false;
};

/// z-score with the population standard deviation. Zero-variance input maps
/// to all zeros with `degenerate` set.
Standardized standardize_series(std::span<const double> y);

/// Affine map of `x` onto [0, 1]. Requires strictly increasing input.
std::vector<double> normalize_time(std::span<const double> x);

enum class CsvLayout { Long, Wide };

struct LoadOptions {
    CsvLayout layout = CsvLayout::Long;
    bool standardize = true;
};

/// Long layout: header `series_id,t,value`. Wide layout: `t,<id1>,<id2>,...`.
/// Times are normalized to [0,1] per series; values are z-scored unless
/// `standardize` is false. Series keep first-appearance order.
Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options = {});

/// Writes the long layout at 17 significant digits.
void write_long_csv(const Dataset& data, const std::filesystem::path& path);

/// `series_id,label` rows. Labels are attached in dataset order.
void attach_labels(Dataset& data, const std::filesystem::path& path);
void write_labels_csv(const Dataset& data, const std::filesystem::path& path);

struct SyntheticOptions {
    std::size_t length = 100;
    bool high_noise_sine = true;  // force one class-0 series to the top noise level
};

/// 60 standardized series, six classes of ten: sine, line, sine plus trend,
/// white noise, step, sinc. Labels 0..5.
Dataset generate_synthetic(std::uint64_t seed, const SyntheticOptions& options = {});

/// `count` standardized series of length `n`: white noise over a weaker
/// smoothed random-walk drift. All labels 0.
Dataset generate_gait_like(std::uint64_t seed, std::size_t count, std::size_t n);

struct CorruptionSpec {
    std::size_t sections = 2;
    double frac = 0.15;  // fraction of n per section
};

/// Zeroes `sections` disjoint runs of round(frac*n) points placed uniformly at
/// random. Values are not re-standardized.
TimeSeries corrupt(const TimeSeries& series, std::uint64_t seed, const CorruptionSpec& spec);

}  // namespace hrkl
