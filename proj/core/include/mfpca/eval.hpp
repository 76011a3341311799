#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace mfpca {

struct LabeledScore {
    double score = 0.0;
    bool positive = false;  // ground-truth anomaly label
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

// ROC from sweeping the decision threshold over all distinct score values
// (score > t flags positive); points run from (0,0) to (1,1) with both rates
// non-decreasing. AUC is the trapezoidal area, which equals the Mann-Whitney
// statistic P(score+ > score-) + 1/2 P(score+ == score-).
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

RocCurve roc_auc(std::span<const LabeledScore> entries);

// CSV lines "fpr,tpr", one point per line, after a header row.
void write_roc_csv(const RocCurve& curve, std::ostream& out);

}  // namespace mfpca
