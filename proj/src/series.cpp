#include "hrkl/series.hpp"

#include "hrkl/csv_io.hpp"
#include "hrkl/errors.hpp"
#include "hrkl/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace hrkl {

std::vector<std::string> Dataset::ids() const {
    std::vector<std::string> out;
    out.reserve(series.size());
    for (const auto& s : series) out.push_back(s.id);
    return out;
}

void Dataset::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& s : series) {
        if (!seen.insert(s.id).second) throw ValidationError("duplicate series id '" + s.id + "'");
        if (s.x.size() != s.y.size()) throw ValidationError("series '" + s.id + "': |x| != |y|");
        if (s.y.size() < 2) throw ValidationError("series '" + s.id + "' has fewer than 2 points");
        for (std::size_t i = 1; i < s.x.size(); ++i)
            if (!(s.x[i] > s.x[i - 1]))
                throw ValidationError("series '" + s.id + "': time not strictly increasing");
    }
    if (labels && labels->size() != series.size())
        throw ValidationError("label count does not match series count");
}

Standardized standardize_series(std::span<const double> y) {
    const double n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);

    Standardized out;
    out.values.assign(y.size(), 0.0);
    if (!(sd >= 1e-12)) {
        out.degenerate = true;
        return out;
    }
    for (std::size_t i = 0; i < y.size(); ++i) out.values[i] = (y[i] - mean) / sd;
    return out;
}

std::vector<double> normalize_time(std::span<const double> x) {
    if (x.size() < 2) throw ValidationError("need at least 2 time points");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw ValidationError("time values must be strictly increasing");
    const double lo = x.front();
    const double span = x.back() - lo;
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - lo) / span;
    out.front() = 0.0;
    out.back() = 1.0;
    return out;
}

namespace {

TimeSeries finish_series(std::string id, std::vector<double> t, std::vector<double> v,
                         bool standardize) {
    if (v.size() < 2) throw ValidationError("series '" + id + "' has fewer than 2 rows");
    TimeSeries s;
    s.id = std::move(id);
    try {
        s.x = normalize_time(t);
    } catch (const ValidationError& e) {
        throw ValidationError("series '" + s.id + "': " + e.what());
    }
    if (standardize) {
        auto z = standardize_series(v);
        s.y = std::move(z.values);
        s.degenerate = z.degenerate;
    } else {
        s.y = std::move(v);
    }
    return s;
}

std::vector<double> uniform_grid(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    return x;
}

std::string series_name(const char* prefix, std::size_t index) {
    std::ostringstream os;
    os << prefix << '_' << (index < 10 ? "0" : "") << index;
    return os.str();
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options) {
    CsvTable t = read_csv(path);
    Dataset data;

    if (options.layout == CsvLayout::Long) {
        if (t.header.size() != 3 || t.header[0] != "series_id" || t.header[1] != "t" ||
            t.header[2] != "value")
            throw ParseError("long layout expects header 'series_id,t,value'", 1);
        std::vector<std::string> order;
        std::unordered_map<std::string, std::pair<std::vector<double>, std::vector<double>>> cols;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            if (row[0].empty()) throw ParseError("empty series_id", t.line_numbers[r]);
            double tv = parse_double(row[1], t.line_numbers[r]);
            double vv = parse_double(row[2], t.line_numbers[r]);
            auto [it, inserted] = cols.try_emplace(row[0]);
            if (inserted) order.push_back(row[0]);
            it->second.first.push_back(tv);
            it->second.second.push_back(vv);
        }
        for (const auto& id : order) {
            auto& [tv, vv] = cols[id];
            data.series.push_back(finish_series(id, std::move(tv), std::move(vv), options.standardize));
        }
    } else {
        if (t.header.size() < 2 || t.header[0] != "t")
            throw ParseError("wide layout expects header 't,<id1>,<id2>,...'", 1);
        const std::size_t cols = t.header.size() - 1;
        std::vector<double> tv;
        std::vector<std::vector<double>> vv(cols);
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            tv.push_back(parse_double(t.rows[r][0], t.line_numbers[r]));
            for (std::size_t c = 0; c < cols; ++c)
                vv[c].push_back(parse_double(t.rows[r][c + 1], t.line_numbers[r]));
        }
        for (std::size_t c = 0; c < cols; ++c)
            data.series.push_back(finish_series(t.header[c + 1], tv, std::move(vv[c]), options.standardize));
    }
    data.validate();
    return data;
}

void write_long_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "series_id,t,value\n";
    for (const auto& s : data.series)
        for (std::size_t i = 0; i < s.size(); ++i)
            os << s.id << ',' << format_double(s.x[i]) << ',' << format_double(s.y[i]) << '\n';
    write_text_file(path, os.str());
}

void attach_labels(Dataset& data, const std::filesystem::path& path) {
    IdLabels rows = read_id_labels(path);
    std::unordered_map<std::string, int> by_id;
    for (std::size_t i = 0; i < rows.ids.size(); ++i) by_id[rows.ids[i]] = rows.labels[i];
    std::vector<int> labels;
    for (const auto& s : data.series) {
        auto it = by_id.find(s.id);
        if (it == by_id.end()) throw ValidationError("no label for series '" + s.id + "'");
        labels.push_back(it->second);
    }
    data.labels = std::move(labels);
}

void write_labels_csv(const Dataset& data, const std::filesystem::path& path) {
    if (!data.labels) throw ValidationError("dataset has no labels");
    write_id_labels({data.ids(), *data.labels}, path, "label");
}

Dataset generate_synthetic(std::uint64_t seed, const SyntheticOptions& options) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr std::size_t per_class = 10;
    static const char* names[] = {"sine", "line", "trend", "noise", "step", "sinc"};

    const std::size_t n = options.length;
    const auto x = uniform_grid(n);
    Dataset data;
    data.labels.emplace();

    for (std::size_t cls = 0; cls < 6; ++cls) {
        for (std::size_t k = 0; k < per_class; ++k) {
            std::mt19937_64 rng(derive_seed(seed, {cls, k}));
            auto unif = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
            auto sign = [&] { return unif(0.0, 1.0) < 0.5 ? -1.0 : 1.0; };
            std::normal_distribution<double> gauss(0.0, 1.0);

            std::vector<double> y(n, 0.0);
            double noise = 0.0;
            switch (cls) {
                case 0: {  // sine
                    const double amp = unif(0.5, 2.0), freq = unif(2.0, 8.0), phase = unif(0.0, two_pi);
                    noise = unif(0.05, 0.5);
                    if (options.high_noise_sine && k == 4) noise = 0.5;
                    for (std::size_t i = 0; i < n; ++i) y[i] = amp * std::sin(two_pi * freq * x[i] + phase);
                    break;
                }
                case 1: {  // line
                    const double slope = sign() * unif(0.5, 2.0), icpt = unif(-1.0, 1.0);
                    noise = unif(0.05, 0.2);
                    for (std::size_t i = 0; i < n; ++i) y[i] = slope * x[i] + icpt;
                    break;
                }
                case 2: {  // sine plus linear trend
                    const double amp = unif(0.5, 2.0), freq = unif(2.0, 8.0), phase = unif(0.0, two_pi);
                    const double slope = sign() * unif(0.5, 2.0), icpt = unif(-1.0, 1.0);
                    noise = unif(0.05, 0.2);
                    for (std::size_t i = 0; i < n; ++i)
                        y[i] = amp * std::sin(two_pi * freq * x[i] + phase) + slope * x[i] + icpt;
                    break;
                }
                case 3:  // white noise
                    noise = 1.0;
                    break;
                case 4: {  // Heaviside step
                    const double at = unif(0.2, 0.8), height = sign() * unif(0.5, 2.0);
                    noise = unif(0.05, 0.2);
                    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] >= at ? height : 0.0;
                    break;
                }
                default: {  // sinc
                    const double centre = unif(0.3, 0.7), width = unif(0.05, 0.2), amp = unif(0.5, 2.0);
                    noise = unif(0.05, 0.2);
                    for (std::size_t i = 0; i < n; ++i) {
                        const double u = std::numbers::pi * (x[i] - centre) / width;
                        y[i] = amp * (std::abs(u) < 1e-12 ? 1.0 : std::sin(u) / u);
                    }
                    break;
                }
            }
            for (auto& v : y) v += noise * gauss(rng);

            auto z = standardize_series(y);
            TimeSeries s;
            s.id = series_name(names[cls], k);
            s.x = x;
            s.y = std::move(z.values);
            s.degenerate = z.degenerate;
            data.series.push_back(std::move(s));
            data.labels->push_back(static_cast<int>(cls));
        }
    }
    return data;
}

Dataset generate_gait_like(std::uint64_t seed, std::size_t count, std::size_t n) {
    if (count < 1) throw ValidationError("count must be >= 1");
    if (n < 10) throw ValidationError("n must be >= 10");
    constexpr std::size_t half_window = 2;
    // Noise dominates; the drift is the weaker part.
    constexpr double drift_ratio = 0.5;

    const auto x = uniform_grid(n);
    Dataset data;
    data.labels.emplace(count, 0);
    for (std::size_t j = 0; j < count; ++j) {
        std::mt19937_64 rng(derive_seed(seed, {j}));
        std::normal_distribution<double> gauss(0.0, 1.0);

        std::vector<double> walk(n);
        double acc = 0.0;
        for (auto& w : walk) w = (acc += gauss(rng));

        std::vector<double> smooth(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t lo = i >= half_window ? i - half_window : 0;
            const std::size_t hi = std::min(n - 1, i + half_window);
            double sum = 0.0;
            for (std::size_t k = lo; k <= hi; ++k) sum += walk[k];
            smooth[i] = sum / static_cast<double>(hi - lo + 1);
        }
        auto base = standardize_series(smooth).values;
        for (auto& v : base) v = drift_ratio * v + gauss(rng);

        auto z = standardize_series(base);
        TimeSeries s;
        s.id = series_name("gait", j);
        s.x = x;
        s.y = std::move(z.values);
        s.degenerate = z.degenerate;
        data.series.push_back(std::move(s));
    }
    return data;
}

TimeSeries corrupt(const TimeSeries& series, std::uint64_t seed, const CorruptionSpec& spec) {
    if (spec.sections < 1) throw ValidationError("sections must be >= 1");
    if (spec.frac < 0.0 || static_cast<double>(spec.sections) * spec.frac > 0.8 + 1e-12)
        throw ValidationError("sections * frac must lie in [0, 0.8]");

    const std::size_t n = series.size();
    const auto run = static_cast<std::size_t>(std::llround(spec.frac * static_cast<double>(n)));
    TimeSeries out = series;
    if (run == 0) return out;
    if (run > n) throw PlacementError("section longer than series");

    std::mt19937_64 rng(derive_seed(seed, {n, spec.sections, run}));
    std::uniform_int_distribution<std::size_t> start_dist(0, n - run);
    std::vector<std::size_t> starts(spec.sections);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (auto& s : starts) s = start_dist(rng);
        std::sort(starts.begin(), starts.end());
        bool disjoint = true;
        // A gap of at least one point keeps the runs distinct.
        for (std::size_t i = 1; i < starts.size() && disjoint; ++i)
            disjoint = starts[i] > starts[i - 1] + run;
        if (!disjoint) continue;
        for (auto s : starts) std::fill_n(out.y.begin() + static_cast<std::ptrdiff_t>(s), run, 0.0);
        return out;
    }
    throw PlacementError("could not place " + std::to_string(spec.sections) +
                         " disjoint sections after 1000 attempts");
}

}  // namespace hrkl
