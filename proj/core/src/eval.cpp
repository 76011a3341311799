#include "mfpca/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace mfpca {

RocCurve roc_auc(std::span<const LabeledScore> entries) {
    std::size_t positives = 0;
    for (const LabeledScore& e : entries) {
        if (!std::isfinite(e.score))
            throw std::invalid_argument("roc_auc: scores must be finite");
        if (e.positive) ++positives;
    }
    const std::size_t negatives = entries.size() - positives;
    if (positives == 0 || negatives == 0)
        throw std::invalid_argument("roc_auc: need at least one positive and one negative label");

    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return entries[a].score > entries[b].score;
    });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double score = entries[order[i]].score;
        // Consume the whole tied-score group before emitting a point.
        while (i < order.size() && entries[order[i]].score == score) {
            if (entries[order[i]].positive)
                ++tp;
            else
                ++fp;
            ++i;
        }
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                                static_cast<double>(tp) / static_cast<double>(positives)});
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const RocPoint& a = curve.points[k - 1];
        const RocPoint& b = curve.points[k];
        auc += (b.fpr - a.fpr) * (b.tpr + a.tpr) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

void write_roc_csv(const RocCurve& curve, std::ostream& out) {
    out << "fpr,tpr\n";
    char buf[80];
    for (const RocPoint& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.fpr, p.tpr);
        out << buf;
    }
}

}  // namespace mfpca
