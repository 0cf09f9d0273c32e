#include "hrkl/metrics.hpp"

#include "hrkl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hrkl {

namespace {

double entropy(const std::vector<double>& counts, double n) {
    double h = 0.0;
    for (double c : counts)
        if (c > 0) h -= (c / n) * std::log(c / n);
    return h;
}

}  // namespace

MetricReport cluster_metrics(std::span<const int> truth, std::span<const int> pred) {
    if (truth.size() != pred.size())
        throw ValidationError("truth has " + std::to_string(truth.size()) + " labels, prediction has " +
                              std::to_string(pred.size()));
    if (truth.empty()) throw ValidationError("no labels to score");

    std::map<int, std::size_t> class_index;
    for (int t : truth) {
        if (t < 0) throw ValidationError("truth labels must be non-negative");
        class_index.emplace(t, 0);
    }
    std::size_t next = 0;
    for (auto& [label, idx] : class_index) idx = next++;

    MetricReport report;
    std::map<int, std::size_t> cluster_index;
    for (int p : pred) {
        if (p >= 0) cluster_index.emplace(p, 0);
        else ++report.n_outliers;
    }
    next = 0;
    for (auto& [label, idx] : cluster_index) idx = next++;
    report.n_clusters = cluster_index.size();

    const std::size_t n_classes = class_index.size();
    const std::size_t n_columns = report.n_clusters + report.n_outliers;
    report.contingency.assign(n_classes, std::vector<std::size_t>(n_columns, 0));
    std::size_t outlier_column = report.n_clusters;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const std::size_t row = class_index[truth[i]];
        const std::size_t col = pred[i] >= 0 ? cluster_index[pred[i]] : outlier_column++;
        ++report.contingency[row][col];
    }

    const double n = static_cast<double>(truth.size());
    std::vector<double> class_tot(n_classes, 0.0), cluster_tot(n_columns, 0.0);
    for (std::size_t c = 0; c < n_classes; ++c)
        for (std::size_t k = 0; k < n_columns; ++k) {
            class_tot[c] += static_cast<double>(report.contingency[c][k]);
            cluster_tot[k] += static_cast<double>(report.contingency[c][k]);
        }
    const double h_c = entropy(class_tot, n);
    const double h_k = entropy(cluster_tot, n);

    // H(C|K) and H(K|C) from the joint table.
    double h_c_given_k = 0.0, h_k_given_c = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c)
        for (std::size_t k = 0; k < n_columns; ++k) {
            const double a = static_cast<double>(report.contingency[c][k]);
            if (a == 0) continue;
            h_c_given_k -= (a / n) * std::log(a / cluster_tot[k]);
            h_k_given_c -= (a / n) * std::log(a / class_tot[c]);
        }

    report.homogeneity = h_c == 0.0 ? 1.0 : 1.0 - h_c_given_k / h_c;
    report.completeness = h_k == 0.0 ? 1.0 : 1.0 - h_k_given_c / h_k;
    report.homogeneity = std::clamp(report.homogeneity, 0.0, 1.0);
    report.completeness = std::clamp(report.completeness, 0.0, 1.0);
    const double denom = report.homogeneity + report.completeness;
    report.v_measure = denom == 0.0 ? 0.0 : 2.0 * report.homogeneity * report.completeness / denom;
    return report;
}

}  // namespace hrkl
