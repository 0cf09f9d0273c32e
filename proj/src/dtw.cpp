#include "hrkl/baselines.hpp"

#include "hrkl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrkl {

double dtw_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ValidationError("DTW needs non-empty series");
    const std::size_t m = b.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    // Two rolling rows of the (|a|+1) x (|b|+1) cost table.
    std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= m; ++j) {
            const double d = a[i - 1] - b[j - 1];
            cur[j] = d * d + std::min({prev[j], cur[j - 1], prev[j - 1]});
        }
        std::swap(prev, cur);
    }
    return std::sqrt(prev[m]);
}

DistanceMatrix dtw_distance_matrix(const Dataset& data) {
    const auto J = static_cast<Eigen::Index>(data.size());
    DistanceMatrix d;
    d.ids = data.ids();
    d.metric = Metric::Euclidean;
    d.P = Eigen::MatrixXd::Zero(J, J);
    for (Eigen::Index i = 0; i < J; ++i)
        for (Eigen::Index j = i + 1; j < J; ++j)
            d.P(i, j) = d.P(j, i) = dtw_distance(data.series[static_cast<std::size_t>(i)].y,
                                                 data.series[static_cast<std::size_t>(j)].y);
    return d;
}

}  // namespace hrkl
