#pragma once

#include <span>
#include <vector>

namespace hrkl {

struct MetricReport {
    double homogeneity = 0.0;
    double completeness = 0.0;
    double v_measure = 0.0;
    std::size_t n_clusters = 0;   // excluding outliers
    std::size_t n_outliers = 0;
    /// contingency[class][cluster]; every outlier is its own trailing column.
    std::vector<std::vector<std::size_t>> contingency;
};

/// Entropy-based homogeneity, completeness and V-measure (natural log). A
/// predicted label of -1 counts as a singleton cluster of its own. Throws
/// ValidationError on length mismatch or negative truth labels.
MetricReport cluster_metrics(std::span<const int> truth, std::span<const int> pred);

}  // namespace hrkl
