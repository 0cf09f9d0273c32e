#include "hrkl/clustering.hpp"
#include "hrkl/embedding.hpp"
#include "hrkl/errors.hpp"
#include "oracles/naive_linkage.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace hrkl;

namespace {

Eigen::MatrixXd line_distances(const std::vector<double>& x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd D(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) D(i, j) = std::abs(x[i] - x[j]);
    return D;
}

std::set<std::size_t> leaves_of(const Dendrogram& d, std::size_t node) {
    if (node < d.leaves) return {node};
    const Merge& m = d.merges[node - d.leaves];
    auto a = leaves_of(d, m.left);
    auto b = leaves_of(d, m.right);
    a.insert(b.begin(), b.end());
    return a;
}

}  // namespace

TEST_CASE("three points on a line") {
    const Dendrogram d = hac_single_linkage(line_distances({0, 1, 10}));
    REQUIRE(d.merges.size() == 2);
    CHECK(d.merges[0].left == 0);
    CHECK(d.merges[0].right == 1);
    CHECK(d.merges[0].height == 1.0);
    CHECK(d.merges[0].size == 2);
    CHECK(d.merges[1].left == 2);
    CHECK(d.merges[1].right == 3);
    CHECK(d.merges[1].height == 9.0);
    CHECK(d.merges[1].size == 3);
    CHECK(cut_dendrogram(d, 2).labels == std::vector<int>{0, 0, 1});
    CHECK(cut_dendrogram(d, 1).labels == std::vector<int>{0, 0, 0});
    CHECK(cut_dendrogram(d, 3).labels == std::vector<int>{0, 1, 2});
    CHECK_THROWS_AS(cut_dendrogram(d, 0), ValidationError);
    CHECK_THROWS_AS(cut_dendrogram(d, 4), ValidationError);
}

TEST_CASE("single linkage matches brute-force agglomeration") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10; ++trial) {
        Embedding e;
        e.E.resize(25, 3);
        for (Eigen::Index i = 0; i < 25; ++i) {
            e.series_ids.push_back("p" + std::to_string(i));
            for (Eigen::Index k = 0; k < 3; ++k) e.E(i, k) = nd(rng);
        }
        e.kernels = {"a", "b", "c"};
        const Dendrogram d = hac_single_linkage(e, Metric::Euclidean);
        const auto ref = oracle::naive_single_linkage(euclidean_distances(e).P);
        REQUIRE(d.merges.size() == ref.size());
        for (std::size_t m = 0; m < ref.size(); ++m) {
            CHECK(d.merges[m].height == doctest::Approx(ref[m].height).epsilon(1e-12));
            CHECK(leaves_of(d, 25 + m) == ref[m].members);
            CHECK(d.merges[m].size == ref[m].members.size());
            CHECK(d.merges[m].left < d.merges[m].right);
        }
    }
}

TEST_CASE("merge heights never decrease") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(15);
        for (auto& v : x) v = u(rng);
        const Dendrogram d = hac_single_linkage(line_distances(x));
        for (std::size_t m = 1; m < d.merges.size(); ++m) CHECK(d.merges[m].height >= d.merges[m - 1].height);
    }
}

TEST_CASE("cut yields components of the thresholded graph") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 100);
    std::vector<double> x(20);
    for (auto& v : x) v = u(rng);
    const Dendrogram d = hac_single_linkage(line_distances(x));
    for (std::size_t c = 1; c <= 20; ++c) {
        const ClusterLabels l = cut_dendrogram(d, c);
        CHECK(l.count == static_cast<int>(c));
        CHECK(l.outliers() == 0);
        CHECK(l.labels[0] == 0);
        int seen = 0;
        for (int v : l.labels) {
            CHECK(v <= seen);
            if (v == seen) ++seen;
        }
    }
}

TEST_CASE("cosine metric on embeddings") {
    Embedding e;
    e.series_ids = {"a", "b", "c"};
    e.kernels = {"x", "y"};
    e.E.resize(3, 2);
    e.E << 1, 0, 5, 0.1, 0, 1;
    const ClusterLabels l = cut_dendrogram(hac_single_linkage(e, Metric::Cosine), 2);
    CHECK(l.labels == std::vector<int>{0, 0, 1});
}
