#pragma once

#include "ehl/recorder.hpp"

#include <string>
#include <vector>

namespace ehl {

/// One irregularly-sampled channel: parallel time/value arrays, times in
/// seconds, strictly increasing.
struct SampleStream {
    std::vector<double> t;
    std::vector<double> v;
};

/// Channels of one session after the power-on trim. Values are in the
/// recorded units (millivolts); the rate channel is in Hz.
struct SessionStreams {
    int session_index = 0; // index within the source log
    std::uint64_t power_on_t_ms = 0;
    SampleStream sc1, sc2, piezo, rate;
    size_t n() const { return sc1.t.size(); }
};

struct PreprocessResult {
    std::vector<SessionStreams> sessions;
    std::vector<std::string> warnings;
};

/// Drops the first 30 s of every session (power-on transient) and derives
/// the sampling-rate channel: rate_i = 1/(t_i - t_{i-1}); the first sample
/// takes the second's rate. Sessions left with fewer than two samples are
/// skipped with a warning.
PreprocessResult preprocess(const RecordLog& log, double trim_s = 30.0);

/// Linear resampling onto a uniform grid t_first + k/fs, k = 0..N-1, covering
/// [t_first, t_last] without extrapolation. Requires >= 2 points and strictly
/// increasing times.
SampleStream resample_linear(const SampleStream& in, double fs = 100.0);

} // namespace ehl
