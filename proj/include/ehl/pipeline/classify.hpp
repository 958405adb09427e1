#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ehl {

using Matrix = std::vector<std::vector<double>>;

enum class ModelKind { Knn, DTree, LogReg, Gnb };

ModelKind parse_model_kind(const std::string& name);
std::string model_kind_name(ModelKind kind);

struct Hyper {
    int knn_k = 5;
    int tree_max_depth = 0; // 0 = unlimited
    int tree_min_split = 2;
    double logreg_lr = 0.5;
    int logreg_iters = 300;
    double logreg_l2 = 1e-4;
    double gnb_var_floor = 1e-9;
};

/// Per-feature z-score standardization; statistics are fit on training data
/// only and applied unchanged to test data.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stdev;

    static Standardizer fit(const Matrix& X);
    std::vector<double> apply(const std::vector<double>& row) const;
    Matrix apply(const Matrix& X) const;
};

/// A trained classifier. Training is deterministic given (data, hyper, seed);
/// prediction returns one integer label per row. A single-class training set
/// yields a trivial model that always predicts that class.
class Model {
public:
    static Model train(ModelKind kind, const Matrix& X, const std::vector<int>& y,
                       const Hyper& hp = {}, std::uint64_t seed = 0);
    std::vector<int> predict(const Matrix& X) const;
    int predict_one(const std::vector<double>& row) const;

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
};

} // namespace ehl
