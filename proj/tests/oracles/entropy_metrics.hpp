#pragma once

#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

struct Hcv {
    double h, c, v;
};

// Conditional-entropy definitions written out term by term. Outliers (-1)
// are replaced by fresh singleton ids before counting.
inline Hcv homogeneity_completeness(const std::vector<int>& truth, std::vector<int> pred) {
    int next = 1000000;
    for (int& p : pred)
        if (p == -1) p = next++;
    const double n = static_cast<double>(truth.size());
    std::map<int, double> nc, nk;
    std::map<std::pair<int, int>, double> nck;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        nc[truth[i]] += 1;
        nk[pred[i]] += 1;
        nck[{truth[i], pred[i]}] += 1;
    }
    double HC = 0, HK = 0, HCgK = 0, HKgC = 0;
    for (auto [c, v] : nc) HC -= v / n * std::log(v / n);
    for (auto [k, v] : nk) HK -= v / n * std::log(v / n);
    for (auto [ck, v] : nck) {
        HCgK -= v / n * std::log(v / nk[ck.second]);
        HKgC -= v / n * std::log(v / nc[ck.first]);
    }
    const double h = HC == 0 ? 1.0 : 1.0 - HCgK / HC;
    const double c = HK == 0 ? 1.0 : 1.0 - HKgC / HK;
    const double v = h + c == 0 ? 0.0 : 2 * h * c / (h + c);
    return {h, c, v};
}

}  // namespace oracle
