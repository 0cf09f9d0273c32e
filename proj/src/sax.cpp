#include "hrkl/baselines.hpp"

#include "hrkl/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

namespace hrkl {

void SaxConfig::validate() const {
    if (window < 1 || word_length < 1 || word_length > window)
        throw ValidationError("SAX needs 1 <= word_length <= window");
    if (alphabet < 2 || alphabet > 10) throw ValidationError("SAX alphabet must lie in [2, 10]");
}

std::vector<double> sax_breakpoints(std::size_t alphabet) {
    if (alphabet < 2 || alphabet > 10) throw ValidationError("SAX alphabet must lie in [2, 10]");
    const boost::math::normal_distribution<double> unit;
    std::vector<double> cuts;
    for (std::size_t i = 1; i < alphabet; ++i)
        cuts.push_back(boost::math::quantile(unit, static_cast<double>(i) / static_cast<double>(alphabet)));
    return cuts;
}

namespace {

/// Piecewise aggregate approximation; points straddling a segment boundary
/// contribute fractionally to both sides.
std::vector<double> paa(std::span<const double> v, std::size_t segments) {
    const std::size_t n = v.size();
    std::vector<double> out(segments, 0.0);
    // Work in units of 1/(n*segments): point i covers [i*segments, (i+1)*segments),
    // segment s covers [s*n, (s+1)*n).
    for (std::size_t s = 0; s < segments; ++s) {
        const std::size_t lo = s * n, hi = (s + 1) * n;
        double acc = 0.0;
        for (std::size_t i = lo / segments; i < n && i * segments < hi; ++i) {
            const std::size_t a = std::max(lo, i * segments), b = std::min(hi, (i + 1) * segments);
            if (b > a) acc += v[i] * static_cast<double>(b - a);
        }
        out[s] = acc / static_cast<double>(n);
    }
    return out;
}

}  // namespace

std::string sax_word(std::span<const double> segment, const SaxConfig& cfg) {
    cfg.validate();
    if (segment.size() != cfg.window) throw ValidationError("segment length differs from SAX window");
    const auto z = standardize_series(segment);
    const auto cuts = sax_breakpoints(cfg.alphabet);
    std::string word;
    for (double m : paa(z.values, cfg.word_length)) {
        const auto idx = std::upper_bound(cuts.begin(), cuts.end(), m) - cuts.begin();
        word += static_cast<char>('a' + idx);
    }
    return word;
}

BopHistogram sax_bop_histogram(std::span<const double> series, const SaxConfig& cfg) {
    cfg.validate();
    if (series.size() < cfg.window) throw ValidationError("series shorter than SAX window");
    BopHistogram h;
    std::string previous;
    for (std::size_t start = 0; start + cfg.window <= series.size(); ++start) {
        std::string w = sax_word(series.subspan(start, cfg.window), cfg);
        if (cfg.numerosity_reduction && w == previous) continue;
        ++h[w];
        previous = std::move(w);
    }
    return h;
}

double bop_distance(const BopHistogram& a, const BopHistogram& b) {
    double acc = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        double ca = 0, cb = 0;
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            ca = static_cast<double>((ia++)->second);
        } else if (ia == a.end() || ib->first < ia->first) {
            cb = static_cast<double>((ib++)->second);
        } else {
            ca = static_cast<double>((ia++)->second);
            cb = static_cast<double>((ib++)->second);
        }
        acc += (ca - cb) * (ca - cb);
    }
    return std::sqrt(acc);
}

DistanceMatrix sax_bop_distance_matrix(const Dataset& data, const SaxConfig& cfg) {
    std::vector<BopHistogram> hist;
    for (const auto& s : data.series) hist.push_back(sax_bop_histogram(s.y, cfg));
    const auto J = static_cast<Eigen::Index>(data.size());
    DistanceMatrix d;
    d.ids = data.ids();
    d.metric = Metric::Euclidean;
    d.P = Eigen::MatrixXd::Zero(J, J);
    for (Eigen::Index i = 0; i < J; ++i)
        for (Eigen::Index j = i + 1; j < J; ++j)
            d.P(i, j) = d.P(j, i) = bop_distance(hist[static_cast<std::size_t>(i)], hist[static_cast<std::size_t>(j)]);
    return d;
}

}  // namespace hrkl
