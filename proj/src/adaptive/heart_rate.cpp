#include "gram/adaptive/heart_rate.h"

#include <algorithm>
#include <cmath>

#include "gram/core/errors.h"

namespace gram::adaptive {

HeartRateResult characterize_heart_rate(const std::vector<HeartSample>& samples,
                                        const HeartRateConfig& config) {
    if (samples.empty()) throw InsufficientBasal("no heart-rate samples");
    std::vector<HeartSample> ordered = samples;
    std::sort(ordered.begin(), ordered.end(),
              [](const HeartSample& a, const HeartSample& b) { return a.t < b.t; });
    const double start = ordered.front().t;
    if (ordered.back().t - start < config.basal_window)
        throw InsufficientBasal("series covers " +
                                std::to_string(ordered.back().t - start) + " s, needs " +
                                std::to_string(config.basal_window));

    double sum = 0.0;
    int b = 0;
    for (const auto& s : ordered)
        if (s.t - start <= config.basal_window) { sum += s.bpm; ++b; }
    HeartRateResult out;
    out.basal = sum / b;
    if (b > 1) {
        double ss = 0.0;
        for (const auto& s : ordered)
            if (s.t - start <= config.basal_window) {
                const double d = s.bpm - out.basal;
                ss += d * d;
            }
        out.deviation = std::sqrt(ss / (b - 1));
    }
    out.threshold_excited = out.basal + config.c_excited * out.deviation;
    out.threshold_relaxed = out.basal - config.c_relaxed * out.deviation;

    for (const auto& s : ordered) {
        if (s.t - start <= config.basal_window) continue;
        HeartReading reading{s.t, s.bpm, HeartState::Normal};
        if (s.bpm > out.threshold_excited) reading.state = HeartState::Anxious;
        else if (s.bpm < out.threshold_relaxed) reading.state = HeartState::Relaxed;
        out.readings.push_back(reading);
    }
    return out;
}

}  // namespace gram::adaptive
