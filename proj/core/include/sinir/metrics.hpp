#ifndef SINIR_METRICS_HPP
#define SINIR_METRICS_HPP

#include <string>
#include <vector>

#include "sinir/tensor.hpp"

namespace sinir {

/// Quality summary for one reference/test pair. rmse is reported on the
/// 8-bit scale (range values span 255 counts). ms_ssim_levels records how
/// many dyadic levels actually contributed; fewer than five means the
/// images were too small for the full stack.
struct MetricReport {
    double ssim = 0.0;
    double ms_ssim = 0.0;
    double rmse = 0.0;
    int ms_ssim_levels = 0;
};

MetricReport evaluate(const ImageTensor& reference, const ImageTensor& test);

/// One corruption-sweep data point.
struct SweepEntry {
    double shuffle_pct = 0.0;
    double rmse = 0.0;
};

/// Checks that reconstruction error does not degrade as the shuffle rate
/// grows: entries are ordered by ascending shuffle_pct and every step must
/// keep rmse non-increasing. Needs at least three points to say anything.
struct TrendReport {
    bool monotone_non_increasing = false;
    std::vector<SweepEntry> ordered;
    std::string detail;
};

TrendReport trend_check(std::vector<SweepEntry> entries);

}  // namespace sinir

#endif
