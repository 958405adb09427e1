#include "ehl/pipeline/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ehl {

ModelKind parse_model_kind(const std::string& name) {
    if (name == "knn") return ModelKind::Knn;
    if (name == "dtree") return ModelKind::DTree;
    if (name == "logreg") return ModelKind::LogReg;
    if (name == "gnb") return ModelKind::Gnb;
    throw std::invalid_argument("unknown model '" + name + "' (valid: knn, dtree, logreg, gnb)");
}

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::Knn: return "knn";
    case ModelKind::DTree: return "dtree";
    case ModelKind::LogReg: return "logreg";
    case ModelKind::Gnb: return "gnb";
    }
    return "?";
}

Standardizer Standardizer::fit(const Matrix& X) {
    if (X.empty()) throw std::invalid_argument("cannot standardize empty matrix");
    size_t f = X[0].size();
    Standardizer s;
    s.mean.assign(f, 0.0);
    s.stdev.assign(f, 0.0);
    for (const auto& row : X)
        for (size_t j = 0; j < f; ++j) s.mean[j] += row[j];
    for (double& m : s.mean) m /= static_cast<double>(X.size());
    for (const auto& row : X)
        for (size_t j = 0; j < f; ++j) {
            double d = row[j] - s.mean[j];
            s.stdev[j] += d * d;
        }
    for (double& v : s.stdev) {
        v = std::sqrt(v / static_cast<double>(X.size()));
        if (v == 0.0) v = 1.0; // constant feature passes through centered
    }
    return s;
}

std::vector<double> Standardizer::apply(const std::vector<double>& row) const {
    std::vector<double> out(row.size());
    for (size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / stdev[j];
    return out;
}

Matrix Standardizer::apply(const Matrix& X) const {
    Matrix out;
    out.reserve(X.size());
    for (const auto& row : X) out.push_back(apply(row));
    return out;
}

namespace {

void check_finite(const Matrix& X) {
    for (const auto& row : X)
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
}

struct TreeNode {
    int feature = -1;      // -1 for leaves
    double threshold = 0;
    int left = -1, right = -1;
    int label = 0;
};

} // namespace

struct Model::Impl {
    ModelKind kind = ModelKind::Knn;
    Hyper hp;
    int trivial_label = -1; // >= 0 when the training set had one class

    // knn
    Matrix train_x;
    std::vector<int> train_y;

    // dtree
    std::vector<TreeNode> nodes;

    // logreg: weights[c] = bias + per-feature coefficients
    Matrix weights;
    std::vector<int> class_ids;

    // gnb
    Matrix gnb_mean, gnb_var;
    std::vector<double> gnb_log_prior;

    int predict_row(const std::vector<double>& x) const;
};

namespace {

int majority_label(const std::vector<int>& y, const std::vector<int>& idx) {
    std::map<int, int> counts;
    for (int i : idx) counts[y[i]]++;
    int best = y[idx[0]], best_n = -1;
    for (auto [label, n] : counts)
        if (n > best_n) { best = label; best_n = n; }
    return best;
}

double gini_from_counts(const std::map<int, int>& counts, int total) {
    double g = 1.0;
    for (auto [label, n] : counts) {
        double p = static_cast<double>(n) / total;
        g -= p * p;
    }
    return g;
}

void build_tree(Model::Impl& impl, const Matrix& X, const std::vector<int>& y) {
    const auto f = static_cast<int>(X[0].size());
    struct Job {
        std::vector<int> idx;
        int node;
        int depth;
    };
    impl.nodes.push_back({});
    std::vector<Job> stack;
    std::vector<int> all(X.size());
    std::iota(all.begin(), all.end(), 0);
    stack.push_back({std::move(all), 0, 0});

    while (!stack.empty()) {
        Job job = std::move(stack.back());
        stack.pop_back();
        auto& idx = job.idx;

        std::map<int, int> counts;
        for (int i : idx) counts[y[i]]++;
        bool pure = counts.size() == 1;
        bool depth_hit = impl.hp.tree_max_depth > 0 && job.depth >= impl.hp.tree_max_depth;
        if (pure || depth_hit || static_cast<int>(idx.size()) < impl.hp.tree_min_split) {
            impl.nodes[job.node].label = majority_label(y, idx);
            continue;
        }

        double parent_gini = gini_from_counts(counts, static_cast<int>(idx.size()));
        double best_score = parent_gini - 1e-12; // require strict improvement
        int best_feature = -1;
        double best_threshold = 0;

        std::vector<int> order(idx);
        for (int feat = 0; feat < f; ++feat) {
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return X[a][feat] < X[b][feat];
            });
            std::map<int, int> left_counts;
            int n_left = 0;
            const int n = static_cast<int>(order.size());
            for (int i = 0; i + 1 < n; ++i) {
                left_counts[y[order[i]]]++;
                ++n_left;
                double a = X[order[i]][feat], b = X[order[i + 1]][feat];
                if (a == b) continue;
                std::map<int, int> right_counts = counts;
                for (auto [label, cnt] : left_counts) {
                    right_counts[label] -= cnt;
                    if (right_counts[label] == 0) right_counts.erase(label);
                }
                double score =
                    (n_left * gini_from_counts(left_counts, n_left) +
                     (n - n_left) * gini_from_counts(right_counts, n - n_left)) /
                    n;
                if (score < best_score) {
                    best_score = score;
                    best_feature = feat;
                    best_threshold = a + 0.5 * (b - a);
                }
            }
        }

        if (best_feature < 0) {
            impl.nodes[job.node].label = majority_label(y, idx);
            continue;
        }

        std::vector<int> left_idx, right_idx;
        for (int i : idx)
            (X[i][best_feature] <= best_threshold ? left_idx : right_idx).push_back(i);

        int li = static_cast<int>(impl.nodes.size());
        impl.nodes.push_back({});
        int ri = static_cast<int>(impl.nodes.size());
        impl.nodes.push_back({});
        impl.nodes[job.node].feature = best_feature;
        impl.nodes[job.node].threshold = best_threshold;
        impl.nodes[job.node].left = li;
        impl.nodes[job.node].right = ri;
        stack.push_back({std::move(left_idx), li, job.depth + 1});
        stack.push_back({std::move(right_idx), ri, job.depth + 1});
    }
}

void train_logreg(Model::Impl& impl, const Matrix& X, const std::vector<int>& y) {
    const auto n = X.size();
    const auto f = X[0].size();
    const auto c = impl.class_ids.size();
    std::map<int, int> to_local;
    for (size_t i = 0; i < c; ++i) to_local[impl.class_ids[i]] = static_cast<int>(i);

    impl.weights.assign(c, std::vector<double>(f + 1, 0.0));
    std::vector<double> logits(c), probs(c);
    Matrix grad(c, std::vector<double>(f + 1, 0.0));

    for (int it = 0; it < impl.hp.logreg_iters; ++it) {
        for (auto& g : grad) std::fill(g.begin(), g.end(), 0.0);
        for (size_t i = 0; i < n; ++i) {
            double mx = -std::numeric_limits<double>::infinity();
            for (size_t k = 0; k < c; ++k) {
                double z = impl.weights[k][f];
                for (size_t j = 0; j < f; ++j) z += impl.weights[k][j] * X[i][j];
                logits[k] = z;
                mx = std::max(mx, z);
            }
            double zs = 0;
            for (size_t k = 0; k < c; ++k) {
                probs[k] = std::exp(logits[k] - mx);
                zs += probs[k];
            }
            int yi = to_local[y[i]];
            for (size_t k = 0; k < c; ++k) {
                double err = probs[k] / zs - (static_cast<int>(k) == yi ? 1.0 : 0.0);
                for (size_t j = 0; j < f; ++j) grad[k][j] += err * X[i][j];
                grad[k][f] += err;
            }
        }
        for (size_t k = 0; k < c; ++k) {
            for (size_t j = 0; j <= f; ++j) {
                double g = grad[k][j] / static_cast<double>(n);
                if (j < f) g += impl.hp.logreg_l2 * impl.weights[k][j];
                impl.weights[k][j] -= impl.hp.logreg_lr * g;
            }
        }
    }
}

void train_gnb(Model::Impl& impl, const Matrix& X, const std::vector<int>& y) {
    const auto f = X[0].size();
    const auto c = impl.class_ids.size();
    std::map<int, int> to_local;
    for (size_t i = 0; i < c; ++i) to_local[impl.class_ids[i]] = static_cast<int>(i);

    impl.gnb_mean.assign(c, std::vector<double>(f, 0.0));
    impl.gnb_var.assign(c, std::vector<double>(f, 0.0));
    impl.gnb_log_prior.assign(c, 0.0);
    std::vector<int> counts(c, 0);
    for (size_t i = 0; i < X.size(); ++i) {
        int k = to_local[y[i]];
        counts[k]++;
        for (size_t j = 0; j < f; ++j) impl.gnb_mean[k][j] += X[i][j];
    }
    for (size_t k = 0; k < c; ++k)
        for (size_t j = 0; j < f; ++j) impl.gnb_mean[k][j] /= counts[k];
    for (size_t i = 0; i < X.size(); ++i) {
        int k = to_local[y[i]];
        for (size_t j = 0; j < f; ++j) {
            double d = X[i][j] - impl.gnb_mean[k][j];
            impl.gnb_var[k][j] += d * d;
        }
    }
    for (size_t k = 0; k < c; ++k) {
        for (size_t j = 0; j < f; ++j)
            impl.gnb_var[k][j] = std::max(impl.gnb_var[k][j] / counts[k], impl.hp.gnb_var_floor);
        impl.gnb_log_prior[k] =
            std::log(static_cast<double>(counts[k]) / static_cast<double>(X.size()));
    }
}

} // namespace

int Model::Impl::predict_row(const std::vector<double>& x) const {
    if (trivial_label >= 0) return trivial_label;
    switch (kind) {
    case ModelKind::Knn: {
        const int k = std::min<int>(hp.knn_k, static_cast<int>(train_x.size()));
        // (distance^2, index) of the k nearest training rows
        std::vector<std::pair<double, int>> best;
        best.reserve(k + 1);
        for (size_t i = 0; i < train_x.size(); ++i) {
            double d = 0;
            const auto& r = train_x[i];
            for (size_t j = 0; j < x.size(); ++j) {
                double diff = x[j] - r[j];
                d += diff * diff;
            }
            if (static_cast<int>(best.size()) < k || d < best.back().first) {
                auto it = std::lower_bound(best.begin(), best.end(),
                                           std::pair<double, int>{d, static_cast<int>(i)});
                best.insert(it, {d, static_cast<int>(i)});
                if (static_cast<int>(best.size()) > k) best.pop_back();
            }
        }
        std::map<int, std::pair<int, double>> votes; // label -> (count, dist sum)
        for (auto [d, i] : best) {
            auto& v = votes[train_y[i]];
            v.first++;
            v.second += d;
        }
        int out = best.front().second >= 0 ? train_y[best.front().second] : 0;
        int best_n = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (auto [label, v] : votes) {
            if (v.first > best_n || (v.first == best_n && v.second < best_d)) {
                out = label;
                best_n = v.first;
                best_d = v.second;
            }
        }
        return out;
    }
    case ModelKind::DTree: {
        int node = 0;
        while (nodes[node].feature >= 0)
            node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left
                                                                   : nodes[node].right;
        return nodes[node].label;
    }
    case ModelKind::LogReg: {
        size_t f = x.size();
        int arg = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < weights.size(); ++k) {
            double z = weights[k][f];
            for (size_t j = 0; j < f; ++j) z += weights[k][j] * x[j];
            if (z > best) {
                best = z;
                arg = static_cast<int>(k);
            }
        }
        return class_ids[arg];
    }
    case ModelKind::Gnb: {
        int arg = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < gnb_mean.size(); ++k) {
            double ll = gnb_log_prior[k];
            for (size_t j = 0; j < x.size(); ++j) {
                double d = x[j] - gnb_mean[k][j];
                ll -= 0.5 * (d * d / gnb_var[k][j] + std::log(2.0 * M_PI * gnb_var[k][j]));
            }
            if (ll > best) {
                best = ll;
                arg = static_cast<int>(k);
            }
        }
        return class_ids[arg];
    }
    }
    return 0;
}

Model Model::train(ModelKind kind, const Matrix& X, const std::vector<int>& y, const Hyper& hp,
                   std::uint64_t) {
    if (X.empty() || X.size() != y.size())
        throw std::invalid_argument("training data is empty or misaligned");
    check_finite(X);

    auto impl = std::make_shared<Impl>();
    impl->kind = kind;
    impl->hp = hp;

    std::vector<int> classes(y);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    impl->class_ids = classes;
    if (classes.size() < 2) {
        impl->trivial_label = classes[0];
        Model m;
        m.impl_ = std::move(impl);
        return m;
    }

    switch (kind) {
    case ModelKind::Knn:
        impl->train_x = X;
        impl->train_y = y;
        break;
    case ModelKind::DTree:
        build_tree(*impl, X, y);
        break;
    case ModelKind::LogReg:
        train_logreg(*impl, X, y);
        break;
    case ModelKind::Gnb:
        train_gnb(*impl, X, y);
        break;
    }
    Model m;
    m.impl_ = std::move(impl);
    return m;
}

std::vector<int> Model::predict(const Matrix& X) const {
    check_finite(X);
    std::vector<int> out;
    out.reserve(X.size());
    for (const auto& row : X) out.push_back(impl_->predict_row(row));
    return out;
}

int Model::predict_one(const std::vector<double>& row) const {
    return impl_->predict_row(row);
}

} // namespace ehl
