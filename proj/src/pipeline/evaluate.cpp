#include "ehl/pipeline/evaluate.hpp"

#include "ehl/rng.hpp"
#include "ehl/util.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ehl {

std::vector<std::string> majority_vote(const std::vector<std::string>& labels, int n) {
    if (n < 1) throw std::invalid_argument("majority size must be >= 1");
    if (n == 1) return labels;
    std::vector<std::string> out;
    out.reserve(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        size_t lo = i + 1 >= static_cast<size_t>(n) ? i + 1 - n : 0;
        std::map<std::string, std::pair<int, size_t>> votes; // count, last index
        for (size_t j = lo; j <= i; ++j) {
            auto& v = votes[labels[j]];
            v.first++;
            v.second = j;
        }
        const std::string* best = nullptr;
        int best_n = -1;
        size_t best_last = 0;
        for (const auto& [label, v] : votes) {
            if (v.first > best_n || (v.first == best_n && v.second > best_last)) {
                best = &label;
                best_n = v.first;
                best_last = v.second;
            }
        }
        out.push_back(*best);
    }
    return out;
}

namespace {

struct Counts {
    std::uint64_t tp = 0, fp = 0, fn = 0, support = 0;
};

std::map<std::string, Counts> class_counts(const std::vector<std::string>& y_true,
                                           const std::vector<std::string>& y_pred) {
    std::map<std::string, Counts> c;
    for (size_t i = 0; i < y_true.size(); ++i) {
        c[y_true[i]].support++;
        if (y_true[i] == y_pred[i]) {
            c[y_true[i]].tp++;
        } else {
            c[y_true[i]].fn++;
            c[y_pred[i]].fp++;
        }
    }
    return c;
}

double f1_of(const Counts& c) {
    double p = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
    double r = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
    return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

} // namespace

double weighted_f_measure(const std::vector<std::string>& y_true,
                          const std::vector<std::string>& y_pred) {
    if (y_true.empty()) throw std::invalid_argument("empty label sequences");
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("label sequences differ in length");
    auto counts = class_counts(y_true, y_pred);
    double wf = 0;
    for (const auto& [label, c] : counts)
        wf += static_cast<double>(c.support) / y_true.size() * f1_of(c);
    return wf;
}

std::string EvalReport::confusion_csv() const {
    std::ostringstream os;
    os << "true\\pred";
    for (const auto& c : classes) os << ',' << c;
    os << "\n";
    for (size_t i = 0; i < classes.size(); ++i) {
        os << classes[i];
        for (size_t j = 0; j < classes.size(); ++j) os << ',' << confusion[i][j];
        os << "\n";
    }
    return os.str();
}

std::string EvalReport::summary() const {
    std::ostringstream os;
    os << "scheme: " << (scheme == CvScheme::PD10Fold ? "pd (10-fold per user)" : "pi (louo)")
       << "  majority: " << majority_n << "\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "weighted F-measure: %.4f\n", weighted_f);
    os << buf;
    os << "per-class precision/recall/F1:\n";
    for (const auto& cs : per_class) {
        std::snprintf(buf, sizeof(buf), "  %-20s P=%.4f R=%.4f F1=%.4f support=%llu\n",
                      cs.label.c_str(), cs.precision, cs.recall, cs.f1,
                      static_cast<unsigned long long>(cs.support));
        os << buf;
    }
    for (const auto& w : warnings) os << "warning: " << w << "\n";
    return os.str();
}

namespace {

struct UserRows {
    int user = 0;
    std::vector<size_t> rows; // in temporal order
};

std::vector<UserRows> group_users(const std::vector<int>& user_ids) {
    std::map<int, std::vector<size_t>> by_user;
    for (size_t i = 0; i < user_ids.size(); ++i) by_user[user_ids[i]].push_back(i);
    std::vector<UserRows> out;
    for (auto& [u, rows] : by_user) out.push_back({u, std::move(rows)});
    return out;
}

struct PairAccumulator {
    std::vector<std::string> y_true, y_pred;
};

} // namespace

// Per class: seeded shuffle, round-robin deal. Redrawn with a new seed
// (warning recorded) if some class is missing from a training fold; only a
// single-sample class can keep failing, which is an error after the retry
// budget.
std::vector<std::vector<size_t>> stratified_fold_assignment(
    const std::vector<size_t>& rows, const std::vector<std::string>& y, int n_folds,
    std::uint64_t seed, std::vector<std::string>& warnings) {
    std::map<std::string, std::vector<size_t>> by_class;
    for (size_t r : rows) by_class[y[r]].push_back(r);

    for (int attempt = 0; attempt < 25; ++attempt) {
        std::vector<std::vector<size_t>> folds(n_folds);
        std::uint64_t h = hash_combine(seed, attempt);
        for (auto& [label, members] : by_class) {
            std::vector<size_t> shuffled = members;
            for (size_t i = shuffled.size(); i > 1; --i) {
                h = mix64(h);
                std::swap(shuffled[i - 1], shuffled[h % i]);
            }
            for (size_t i = 0; i < shuffled.size(); ++i)
                folds[i % n_folds].push_back(shuffled[i]);
        }
        bool ok = true;
        for (int fi = 0; fi < n_folds && ok; ++fi) {
            if (folds[fi].empty()) continue;
            // training set = all other folds; every class must appear there
            std::set<std::string> train_classes;
            for (int fj = 0; fj < n_folds; ++fj) {
                if (fj == fi) continue;
                for (size_t r : folds[fj]) train_classes.insert(y[r]);
            }
            for (const auto& [label, members] : by_class)
                if (!train_classes.count(label)) { ok = false; break; }
        }
        if (ok) {
            for (auto& f : folds) std::sort(f.begin(), f.end()); // temporal order
            return folds;
        }
        warnings.push_back("fold draw " + std::to_string(attempt) +
                           " left a class out of a training fold; redrawing");
    }
    throw std::runtime_error("cannot stratify folds: a class has too few samples");
}

EvalReport cross_validate(const Matrix& X, const std::vector<std::string>& y,
                          const std::vector<int>& user_ids, CvScheme scheme,
                          ModelKind model_kind, const CvOptions& opt) {
    if (X.empty() || X.size() != y.size() || X.size() != user_ids.size())
        throw std::invalid_argument("features/labels/users misaligned");
    if (opt.majority_n < 1) throw std::invalid_argument("majority_n must be >= 1");

    auto users = group_users(user_ids);
    if (scheme == CvScheme::PiLouo && users.size() < 2)
        throw std::invalid_argument("person-independent CV requires >= 2 users");

    EvalReport rep;
    rep.scheme = scheme;
    rep.majority_n = opt.majority_n;

    // label <-> id mapping (sorted, deterministic)
    std::set<std::string> label_set(y.begin(), y.end());
    rep.classes.assign(label_set.begin(), label_set.end());
    std::map<std::string, int> to_id;
    for (size_t i = 0; i < rep.classes.size(); ++i)
        to_id[rep.classes[i]] = static_cast<int>(i);

    std::vector<PairAccumulator> per_user_pairs;

    if (scheme == CvScheme::PD10Fold) {
        for (const auto& ur : users) {
            int n_folds = std::min<int>(opt.folds, static_cast<int>(ur.rows.size()));
            if (n_folds < 2)
                throw std::invalid_argument("user " + std::to_string(ur.user) +
                                            " has too few rows for cross-validation");
            auto folds = stratified_fold_assignment(ur.rows, y, n_folds,
                                                    hash_combine(opt.seed, ur.user), rep.warnings);
            PairAccumulator acc;
            std::map<size_t, std::string> full_pred; // for full-sequence smoothing
            for (int fi = 0; fi < n_folds; ++fi) {
                if (folds[fi].empty()) continue;
                Matrix train_x;
                std::vector<int> train_y;
                for (int fj = 0; fj < n_folds; ++fj) {
                    if (fj == fi) continue;
                    for (size_t r : folds[fj]) {
                        train_x.push_back(X[r]);
                        train_y.push_back(to_id[y[r]]);
                    }
                }
                auto std_ = Standardizer::fit(train_x);
                auto model = Model::train(model_kind, std_.apply(train_x), train_y, opt.hyper,
                                          hash_combine(opt.seed, fi));
                std::vector<std::string> fold_true, fold_pred;
                for (size_t r : folds[fi]) {
                    int p = model.predict_one(std_.apply(X[r]));
                    fold_true.push_back(y[r]);
                    fold_pred.push_back(rep.classes[p]);
                }
                if (opt.majority_over_full_sequence) {
                    for (size_t j = 0; j < folds[fi].size(); ++j)
                        full_pred[folds[fi][j]] = fold_pred[j];
                } else {
                    fold_pred = majority_vote(fold_pred, opt.majority_n);
                    for (size_t j = 0; j < fold_true.size(); ++j) {
                        acc.y_true.push_back(fold_true[j]);
                        acc.y_pred.push_back(fold_pred[j]);
                    }
                }
            }
            if (opt.majority_over_full_sequence) {
                std::vector<std::string> seq_pred, seq_true;
                for (size_t r : ur.rows) {
                    seq_pred.push_back(full_pred.at(r));
                    seq_true.push_back(y[r]);
                }
                seq_pred = majority_vote(seq_pred, opt.majority_n);
                acc.y_true = std::move(seq_true);
                acc.y_pred = std::move(seq_pred);
            }
            per_user_pairs.push_back(std::move(acc));
        }
    } else {
        for (const auto& held : users) {
            Matrix train_x;
            std::vector<int> train_y;
            for (const auto& other : users) {
                if (other.user == held.user) continue;
                for (size_t r : other.rows) {
                    train_x.push_back(X[r]);
                    train_y.push_back(to_id[y[r]]);
                }
            }
            auto std_ = Standardizer::fit(train_x);
            auto model = Model::train(model_kind, std_.apply(train_x), train_y, opt.hyper,
                                      hash_combine(opt.seed, held.user));
            PairAccumulator acc;
            std::vector<std::string> preds;
            for (size_t r : held.rows) {
                int p = model.predict_one(std_.apply(X[r]));
                preds.push_back(rep.classes[p]);
                acc.y_true.push_back(y[r]);
            }
            acc.y_pred = majority_vote(preds, opt.majority_n);
            per_user_pairs.push_back(std::move(acc));
        }
    }

    // aggregate: weighted F averaged over users, confusion summed
    rep.confusion.assign(rep.classes.size(),
                         std::vector<std::uint64_t>(rep.classes.size(), 0));
    double wf_sum = 0;
    for (const auto& acc : per_user_pairs) {
        wf_sum += weighted_f_measure(acc.y_true, acc.y_pred);
        for (size_t i = 0; i < acc.y_true.size(); ++i)
            rep.confusion[to_id[acc.y_true[i]]][to_id[acc.y_pred[i]]]++;
    }
    rep.weighted_f = wf_sum / static_cast<double>(per_user_pairs.size());

    for (size_t i = 0; i < rep.classes.size(); ++i) {
        ClassStats cs;
        cs.label = rep.classes[i];
        std::uint64_t tp = rep.confusion[i][i], fp = 0, fn = 0;
        for (size_t j = 0; j < rep.classes.size(); ++j) {
            if (j == i) continue;
            fn += rep.confusion[i][j];
            fp += rep.confusion[j][i];
        }
        cs.support = tp + fn;
        cs.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        cs.recall = cs.support > 0 ? static_cast<double>(tp) / cs.support : 0.0;
        cs.f1 = cs.precision + cs.recall > 0
                    ? 2.0 * cs.precision * cs.recall / (cs.precision + cs.recall)
                    : 0.0;
        rep.per_class.push_back(cs);
    }
    return rep;
}

} // namespace ehl
