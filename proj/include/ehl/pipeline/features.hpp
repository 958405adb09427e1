#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ehl {

inline constexpr int kWindowSamples = 124; // 1.24 s at 100 Hz
inline constexpr int kWindowHop = 62;      // 50 % overlap
inline constexpr int kFeaturesPerChannel = 20;
inline constexpr double kPipelineFs = 100.0;

/// Selected input channels, in canonical order sc1, sc2, piezo, sr.
struct ChannelSet {
    bool sc1 = true;
    bool sc2 = true;
    bool piezo = true;
    bool sr = true;

    int count() const { return int(sc1) + int(sc2) + int(piezo) + int(sr); }
    void validate() const;

    /// Parses a comma list like "sc1,piezo"; unknown names throw.
    static ChannelSet parse(const std::string& list);
    std::string to_string() const;
};

struct BurgResult {
    std::vector<double> a; // AR polynomial coefficients a1..ap
    std::vector<double> k; // reflection coefficients k1..kp
};

/// Burg's method: reflection coefficients minimizing the summed forward and
/// backward prediction error, with the Levinson update of the polynomial.
/// Model convention: x[n] = -sum_k a_k x[n-k] + e[n].
/// An all-equal input is degenerate and yields all-zero coefficients.
BurgResult burg_ar(std::span<const double> x, int order = 4);

/// Names of the 20 per-channel values, in extraction order.
const std::array<std::string, kFeaturesPerChannel>& feature_names();

/// The per-channel feature vector. Time-domain statistics over x plus
/// spectral statistics over the magnitude DFT bins k = 1..N/2 (DC excluded).
/// Degenerate inputs (constant signal, zero spectrum) produce zeros as
/// documented per feature.
std::array<double, kFeaturesPerChannel> channel_features(std::span<const double> x,
                                                         double fs = kPipelineFs);

/// One analysis window: values per selected channel plus ground-truth labels.
struct Window {
    double start_t = 0;
    std::vector<std::vector<double>> channels; // kWindowSamples values each
    std::string place;
    std::string activity;
};

/// Slices uniformly sampled per-session channels into 50 %-overlapping
/// windows. All channel series must share the grid `t`. Labels are assigned
/// by majority over the window's sample times; a 50/50 tie takes the later
/// label. Returns windows in temporal order.
std::vector<Window> make_windows(
    const std::vector<double>& t, const std::vector<std::vector<double>>& channels,
    const std::function<std::pair<std::string, std::string>(double)>& labels_at);

/// Concatenates channel_features over the window's channels.
std::vector<double> extract_features(const Window& w, double fs = kPipelineFs);

} // namespace ehl
