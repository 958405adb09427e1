#pragma once

#include "ehl/pipeline/classify.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ehl {

/// Mode filter over the trailing n labels: out[i] = mode(labels[i-n+1..i]).
/// Ties go to the tied label that occurs latest in the span.
std::vector<std::string> majority_vote(const std::vector<std::string>& labels, int n);

/// Support-weighted mean of per-class F1: sum_c (support_c/N) * F1_c, with
/// F1 = 2PR/(P+R) and defined 0 when P+R == 0.
double weighted_f_measure(const std::vector<std::string>& y_true,
                          const std::vector<std::string>& y_pred);

enum class CvScheme { PD10Fold, PiLouo };

struct ClassStats {
    std::string label;
    std::uint64_t support = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

struct EvalReport {
    CvScheme scheme = CvScheme::PD10Fold;
    int majority_n = 1;
    std::vector<std::string> classes;
    std::vector<std::vector<std::uint64_t>> confusion; // [true][pred]
    std::vector<ClassStats> per_class;
    double weighted_f = 0; // mean over users of the per-user weighted F
    std::vector<std::string> warnings;

    /// Confusion matrix as CSV (first column = true label).
    std::string confusion_csv() const;
    std::string summary() const;
};

struct CvOptions {
    int majority_n = 1;
    int folds = 10;
    std::uint64_t seed = 0;
    Hyper hyper;
    /// When true, PD majority voting smooths over the reassembled full
    /// temporal sequence instead of each test fold separately.
    bool majority_over_full_sequence = false;
};

/// Person-dependent (stratified k-fold within each user, reports averaged
/// over users) or person-independent (leave-one-user-out) cross-validation.
/// Rows must be in temporal order within each user; standardization and
/// model fitting use training folds only. Majority voting is applied to
/// temporally ordered test predictions before scoring.
EvalReport cross_validate(const Matrix& X, const std::vector<std::string>& y,
                          const std::vector<int>& user_ids, CvScheme scheme,
                          ModelKind model_kind, const CvOptions& opt = {});

/// The PD scheme's stratified fold assignment (per class: seeded shuffle,
/// round-robin deal). Folds come back sorted, i.e. in temporal order.
/// Redraws with a warning when a class would be missing from some training
/// fold; throws after the retry budget.
std::vector<std::vector<size_t>> stratified_fold_assignment(
    const std::vector<size_t>& rows, const std::vector<std::string>& y, int n_folds,
    std::uint64_t seed, std::vector<std::string>& warnings);

} // namespace ehl
