#pragma once

#include <vector>

namespace gram::adaptive {

enum class HeartState { Anxious, Normal, Relaxed };

struct HeartSample {
    double t = 0.0;    // seconds
    double bpm = 0.0;
};

struct HeartReading {
    double t = 0.0;
    double bpm = 0.0;
    HeartState state = HeartState::Normal;
};

struct HeartRateConfig {
    double basal_window = 120.0;  // T_B seconds
    double c_excited = 0.4;       // C_e
    double c_relaxed = 0.2;       // C_r
};

struct HeartRateResult {
    double basal = 0.0;      // f_b
    double deviation = 0.0;  // d
    double threshold_excited = 0.0;  // T_e = f_b + C_e * d
    double threshold_relaxed = 0.0;  // T_r = f_b - C_r * d
    std::vector<HeartReading> readings;  // samples after the basal window
};

/// Classifies heart-rate samples after estimating the basal rate over
/// the first T_B seconds: anxious above T_e (strictly), relaxed below
/// T_r (strictly), normal between. Raises InsufficientBasal when the
/// series does not cover T_B.
HeartRateResult characterize_heart_rate(const std::vector<HeartSample>& samples,
                                        const HeartRateConfig& config = {});

}  // namespace gram::adaptive
