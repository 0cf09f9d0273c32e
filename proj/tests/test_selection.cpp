#include "hrkl/clustering.hpp"
#include "hrkl/sweep.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace hrkl;

namespace {

BicMatrix make(const Eigen::MatrixXd& v, std::vector<std::string> kernels) {
    BicMatrix b;
    for (Eigen::Index j = 0; j < v.rows(); ++j) b.series_ids.push_back("s" + std::to_string(j));
    b.kernels = std::move(kernels);
    b.values = v;
    return b;
}

}  // namespace

TEST_CASE("cluster kernel minimizes the summed BIC") {
    Eigen::MatrixXd v(3, 2);
    v << 1, 2, 3, 0, 2, 2;
    const BicMatrix b = make(v, {"SE", "PER"});
    const std::vector<std::size_t> members{0, 2};
    CHECK(select_cluster_kernel_index(b, members) == 0);
    CHECK(select_cluster_kernel(b, members) == "SE");
    const std::vector<std::size_t> single{1};
    CHECK(select_cluster_kernel(b, single) == "PER");
    BicMatrix shifted = b;
    shifted.values.array() += 1234.5;
    CHECK(select_cluster_kernel_index(shifted, members) == 0);
}

TEST_CASE("ties go to the smaller kernel string") {
    Eigen::MatrixXd v(1, 3);
    v << 4, 4, 4;
    const BicMatrix b = make(v, {"SE", "PER", "LIN"});
    const std::vector<std::size_t> all{0};
    CHECK(select_cluster_kernel(b, all) == "LIN");
}

TEST_CASE("shared kernel") {
    Eigen::MatrixXd one(1, 3);
    one << 5, -1, 2;
    CHECK(select_shared_kernel(make(one, {"SE", "PER", "LIN"})) == "PER");

    std::mt19937_64 rng(6);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd v(6, 5);
        for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = nd(rng);
        const std::vector<std::string> names{"SE", "PER", "LIN", "SE*LIN", "PER+SE"};
        const BicMatrix b = make(v, names);
        std::vector<std::size_t> perm(5);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Eigen::MatrixXd pv(6, 5);
        std::vector<std::string> pn(5);
        for (std::size_t k = 0; k < 5; ++k) {
            pv.col(static_cast<Eigen::Index>(k)) = v.col(static_cast<Eigen::Index>(perm[k]));
            pn[k] = names[perm[k]];
        }
        CHECK(select_shared_kernel(make(pv, pn)) == select_shared_kernel(b));
    }
}

TEST_CASE("describe_clusters skips outliers") {
    Eigen::MatrixXd v(4, 2);
    v << 1, 9, 2, 8, 9, 1, 0, 0;
    const BicMatrix b = make(v, {"SE", "LIN+PER*SE"});
    ClusterLabels labels;
    labels.labels = {0, 0, 1, -1};
    labels.count = 2;
    const auto d = describe_clusters(b, labels);
    REQUIRE(d.size() == 2);
    CHECK(d[0].cluster == 0);
    CHECK(d[0].members == std::vector<std::size_t>{0, 1});
    CHECK(d[0].kernel == "SE");
    CHECK(d[0].sentences == std::vector<std::string>{"a smooth function"});
    CHECK(d[1].kernel == "LIN+PER*SE");
    CHECK(d[1].sentences.size() == 2);
    ClusterLabels none;
    none.labels = {-1, -1, -1, -1};
    CHECK(describe_clusters(b, none).empty());
}
