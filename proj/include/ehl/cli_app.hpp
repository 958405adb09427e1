#pragma once

#include "ehl/pipeline/classify.hpp"
#include "ehl/pipeline/features.hpp"
#include "ehl/recorder.hpp"

#include <string>
#include <vector>

namespace ehl {

/// Ground-truth label timeline: labels apply from t_s until the next row.
struct TruthTimeline {
    std::vector<double> t_s;
    std::vector<std::string> place;
    std::vector<std::string> activity;

    std::pair<std::string, std::string> labels_at(double t) const;
};

TruthTimeline parse_truth_csv(const std::string& text);

/// Rows of a features CSV: identity columns plus the feature matrix.
struct FeatureTable {
    ChannelSet channels;
    std::vector<int> user;
    std::vector<int> session;
    std::vector<double> window_start_s;
    std::vector<std::string> place;
    std::vector<std::string> activity;
    Matrix features;

    size_t n() const { return features.size(); }
    void append(const FeatureTable& other);
};

/// Full lifelog feature pipeline for one recorded log: trim, rate channel,
/// 100 Hz linear resampling, 50 %-overlap windows, per-channel features.
FeatureTable compute_features(const RecordLog& log, const TruthTimeline& truth,
                              const ChannelSet& channels, int user = 0);

std::string features_to_csv(const FeatureTable& table);
FeatureTable parse_features_csv(const std::string& text);

/// Command-line entry point (subcommands simulate, zero-energy, features,
/// evaluate, calibrate). Returns the process exit code: 0 ok, 2 usage or
/// input error, 1 internal error.
int cli_main(int argc, const char* const* argv);

} // namespace ehl
