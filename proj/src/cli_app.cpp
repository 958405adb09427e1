#include "ehl/cli_app.hpp"

#include "ehl/pipeline/evaluate.hpp"
#include "ehl/pipeline/preprocess.hpp"
#include "ehl/pipeline/targets.hpp"
#include "ehl/simulator.hpp"
#include "ehl/util.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

namespace ehl {

std::pair<std::string, std::string> TruthTimeline::labels_at(double t) const {
    auto it = std::upper_bound(t_s.begin(), t_s.end(), t);
    size_t idx = it == t_s.begin() ? 0 : static_cast<size_t>(it - t_s.begin()) - 1;
    return {place[idx], activity[idx]};
}

TruthTimeline parse_truth_csv(const std::string& text) {
    TruthTimeline tl;
    int lineno = 0;
    bool header_seen = false;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? eol : eol - pos);
        pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
        ++lineno;
        line = strip(line);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "t_s,place,activity") throw ParseError("bad truth header", lineno);
            header_seen = true;
            continue;
        }
        auto cols = split_char(line, ',');
        if (cols.size() != 3) throw ParseError("expected 3 columns", lineno);
        double t;
        try {
            t = std::stod(cols[0]);
        } catch (const std::exception&) {
            throw ParseError("bad time value", lineno);
        }
        if (!tl.t_s.empty() && t <= tl.t_s.back())
            throw ParseError("truth times must strictly increase", lineno);
        tl.t_s.push_back(t);
        tl.place.push_back(strip(cols[1]));
        tl.activity.push_back(strip(cols[2]));
    }
    if (tl.t_s.empty()) throw ParseError("truth file has no rows", lineno);
    return tl;
}

void FeatureTable::append(const FeatureTable& other) {
    if (!features.empty() && !other.features.empty() &&
        features[0].size() != other.features[0].size())
        throw std::invalid_argument("feature tables have different widths");
    user.insert(user.end(), other.user.begin(), other.user.end());
    session.insert(session.end(), other.session.begin(), other.session.end());
    window_start_s.insert(window_start_s.end(), other.window_start_s.begin(),
                          other.window_start_s.end());
    place.insert(place.end(), other.place.begin(), other.place.end());
    activity.insert(activity.end(), other.activity.begin(), other.activity.end());
    features.insert(features.end(), other.features.begin(), other.features.end());
}

FeatureTable compute_features(const RecordLog& log, const TruthTimeline& truth,
                              const ChannelSet& channels, int user) {
    channels.validate();
    FeatureTable table;
    table.channels = channels;

    auto pre = preprocess(log);
    for (const auto& sess : pre.sessions) {
        std::vector<const SampleStream*> selected;
        if (channels.sc1) selected.push_back(&sess.sc1);
        if (channels.sc2) selected.push_back(&sess.sc2);
        if (channels.piezo) selected.push_back(&sess.piezo);
        if (channels.sr) selected.push_back(&sess.rate);

        std::vector<std::vector<double>> resampled;
        std::vector<double> grid;
        for (const auto* st : selected) {
            auto rs = resample_linear(*st, kPipelineFs);
            if (grid.empty()) grid = rs.t;
            resampled.push_back(std::move(rs.v));
        }

        auto windows = make_windows(grid, resampled, [&](double t) {
            return truth.labels_at(t);
        });
        for (const auto& w : windows) {
            table.user.push_back(user);
            table.session.push_back(sess.session_index);
            table.window_start_s.push_back(w.start_t);
            table.place.push_back(w.place);
            table.activity.push_back(w.activity);
            table.features.push_back(extract_features(w));
        }
    }
    return table;
}

std::string features_to_csv(const FeatureTable& table) {
    std::ostringstream os;
    os << "# channels: " << table.channels.to_string() << "\n";
    os << "# per-channel features:";
    for (size_t i = 0; i < feature_names().size(); ++i)
        os << (i ? "," : " ") << feature_names()[i];
    os << "\n";
    size_t width = table.n() ? table.features[0].size()
                             : static_cast<size_t>(table.channels.count()) * kFeaturesPerChannel;
    os << "user,session,window_start_s,place,activity";
    for (size_t j = 0; j < width; ++j) os << ",f_" << j;
    os << "\n";
    for (size_t i = 0; i < table.n(); ++i) {
        os << table.user[i] << ',' << table.session[i] << ','
           << fmt_double(table.window_start_s[i]) << ',' << table.place[i] << ','
           << table.activity[i];
        for (double v : table.features[i]) os << ',' << fmt_double(v);
        os << "\n";
    }
    return os.str();
}

FeatureTable parse_features_csv(const std::string& text) {
    FeatureTable table;
    int lineno = 0;
    bool header_seen = false;
    size_t width = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? eol : eol - pos);
        pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
        ++lineno;
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (starts_with(line, "# channels:"))
                table.channels = ChannelSet::parse(strip(line.substr(11)));
            continue;
        }
        if (!header_seen) {
            if (!starts_with(line, "user,session,window_start_s,place,activity"))
                throw ParseError("bad features header", lineno);
            width = split_char(line, ',').size() - 5;
            header_seen = true;
            continue;
        }
        auto cols = split_char(line, ',');
        if (cols.size() != width + 5) throw ParseError("wrong column count", lineno);
        try {
            table.user.push_back(std::stoi(cols[0]));
            table.session.push_back(std::stoi(cols[1]));
            table.window_start_s.push_back(std::stod(cols[2]));
        } catch (const std::exception&) {
            throw ParseError("bad numeric field", lineno);
        }
        table.place.push_back(cols[3]);
        table.activity.push_back(cols[4]);
        std::vector<double> row(width);
        for (size_t j = 0; j < width; ++j) {
            try {
                row[j] = std::stod(cols[5 + j]);
            } catch (const std::exception&) {
                throw ParseError("bad feature value in f_" + std::to_string(j), lineno);
            }
        }
        table.features.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError("missing features header", lineno);
    return table;
}

namespace {

// Written output paths, removed again if a later step fails.
class OutputGuard {
public:
    void write(const std::string& path, const std::string& content) {
        write_file(path, content);
        written_.push_back(path);
    }
    void discard_all() {
        for (const auto& p : written_) std::remove(p.c_str());
    }

private:
    std::vector<std::string> written_;
};

double mean_sampling_rate(const RecordLog& log) {
    double pairs = 0, span = 0;
    for (const auto& sess : log.sessions()) {
        if (sess.samples.size() < 2) continue;
        pairs += static_cast<double>(sess.samples.size() - 1);
        span += static_cast<double>(sess.samples.back().t_ms - sess.samples.front().t_ms) / 1000.0;
    }
    return span > 0 ? pairs / span : 0.0;
}

Scenario constant_scenario(double lux, double duration) {
    Scenario sc;
    sc.places.push_back({"bench", lux, 0.0, 0.0, 0.0});
    sc.activities.push_back({"rest", ActivityClass::Static, 0.0, 0.0, 0.0, 0.0});
    sc.segments.push_back({0, 0, duration});
    sc.finalize();
    return sc;
}

int cmd_simulate(const std::string& scenario_path, const std::string& config_path,
                 const std::string& mode_name, const std::string& out_log,
                 const std::string& out_trace, const std::string& out_truth,
                 bool seed_set, std::uint64_t seed) {
    if (!std::filesystem::exists(scenario_path)) {
        std::cerr << "scenario not found: " << scenario_path << "\n";
        return 2;
    }
    DeviceConfig cfg = config_path.empty() ? DeviceConfig{} : load_config(config_path);
    Scenario sc = load_scenario(scenario_path);
    sc.seed = seed_set ? seed : cfg.seed;
    RunMode mode = mode_name == "baseline" ? RunMode::Baseline : RunMode::Proposed;

    RunResult res = run(sc, cfg, mode);

    OutputGuard out;
    try {
        out.write(out_log, export_csv(res.log));
        out.write(out_trace, trace_to_csv(res.trace));
        if (!out_truth.empty()) out.write(out_truth, scenario_truth_csv(sc));
    } catch (...) {
        out.discard_all();
        throw;
    }

    std::printf("samples: %llu\n", static_cast<unsigned long long>(res.log.sample_count()));
    std::printf("mean sampling rate: %.3f Hz\n", mean_sampling_rate(res.log));
    if (res.dropped_samples > 0)
        std::printf("dropped (log full): %llu\n",
                    static_cast<unsigned long long>(res.dropped_samples));
    return 0;
}

int cmd_zero_energy(const std::string& trace_path) {
    PowerTrace trace = trace_from_csv(read_file(trace_path));
    ZeroEnergyReport rep = zero_energy_rate(trace);
    std::printf("zero-energy time: %.4g s\n", rep.zero_energy_time);
    std::printf("battery time: %.4g s\n", rep.battery_time);
    std::printf("zero-energy rate: %.4f\n", rep.zero_energy_rate);
    return 0;
}

int cmd_features(const std::string& log_path, const std::string& truth_path,
                 const std::string& channels_list, const std::string& out_path, int user) {
    ChannelSet channels = ChannelSet::parse(channels_list);
    RecordLog log =
        import_csv(read_file(log_path), std::numeric_limits<std::uint64_t>::max());
    TruthTimeline truth = parse_truth_csv(read_file(truth_path));
    FeatureTable table = compute_features(log, truth, channels, user);
    write_file(out_path, features_to_csv(table));
    std::printf("windows: %zu\n", table.n());
    return 0;
}

int cmd_evaluate(const std::vector<std::string>& feature_paths, const std::string& model_name,
                 const std::string& scheme_name, int majority_n, const std::string& target_name_,
                 std::uint64_t seed, int folds, bool full_sequence,
                 const std::string& out_confusion) {
    ModelKind kind = parse_model_kind(model_name);
    Target target = parse_target(target_name_);
    CvScheme scheme;
    if (scheme_name == "pd") scheme = CvScheme::PD10Fold;
    else if (scheme_name == "pi") scheme = CvScheme::PiLouo;
    else throw std::invalid_argument("unknown scheme '" + scheme_name + "' (valid: pd, pi)");

    FeatureTable table;
    for (const auto& p : feature_paths) {
        FeatureTable part = parse_features_csv(read_file(p));
        if (table.n() == 0 && table.features.empty()) table.channels = part.channels;
        table.append(part);
    }
    if (table.n() == 0) throw std::invalid_argument("no feature rows to evaluate");

    std::vector<std::string> labels;
    labels.reserve(table.n());
    for (size_t i = 0; i < table.n(); ++i)
        labels.push_back(target_label(target, table.place[i], table.activity[i]));

    CvOptions opt;
    opt.majority_n = majority_n;
    opt.folds = folds;
    opt.seed = seed;
    opt.majority_over_full_sequence = full_sequence;
    EvalReport rep = cross_validate(table.features, labels, table.user, scheme, kind, opt);

    std::printf("model: %s  target: %s\n", model_kind_name(kind).c_str(),
                target_name(target).c_str());
    std::fputs(rep.summary().c_str(), stdout);
    write_file(out_confusion, rep.confusion_csv());
    return 0;
}

int cmd_calibrate(const std::string& config_path, double lux, double target_rate,
                  double duration) {
    DeviceConfig cfg = config_path.empty() ? DeviceConfig{} : load_config(config_path);
    Scenario sc = constant_scenario(lux, duration);
    sc.seed = cfg.seed;

    auto rate_for_scale = [&](double scale) {
        DeviceConfig c = cfg;
        c.sc1.l_sat = cfg.sc1.l_sat * scale;
        c.sc2.l_sat = cfg.sc2.l_sat * scale;
        RunResult res = run(sc, c, RunMode::Proposed);
        return mean_sampling_rate(res.log);
    };

    // rate decreases as l_sat grows (less harvest); bisect the scale
    double lo = 0.05, hi = 20.0;
    if (rate_for_scale(lo) < target_rate || rate_for_scale(hi) > target_rate)
        throw std::runtime_error("target rate out of reach for this config");
    for (int it = 0; it < 48; ++it) {
        double mid = 0.5 * (lo + hi);
        if (rate_for_scale(mid) >= target_rate) lo = mid;
        else hi = mid;
    }
    double scale = 0.5 * (lo + hi);
    std::printf("achieved rate: %.4f Hz at %g lux\n", rate_for_scale(scale), lux);
    std::printf("suggested config:\n");
    std::printf("sc1_l_sat = %.1flx\n", cfg.sc1.l_sat * scale);
    std::printf("sc2_l_sat = %.1flx\n", cfg.sc2.l_sat * scale);
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"energy-harvesting lifelogger: device simulator and recognition pipeline"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run the device model over a scenario");
    std::string scenario_path, config_path, mode_name = "proposed";
    std::string out_log, out_trace, out_truth;
    std::uint64_t seed = 0;
    sim->add_option("--scenario", scenario_path, "scenario file")->required();
    sim->add_option("--config", config_path, "device config file (defaults when omitted)");
    sim->add_option("--mode", mode_name, "proposed | baseline")
        ->check(CLI::IsMember({"proposed", "baseline"}));
    sim->add_option("--out-log", out_log, "record log CSV output")->required();
    sim->add_option("--out-trace", out_trace, "power trace CSV output")->required();
    sim->add_option("--out-truth", out_truth, "ground-truth label CSV output");
    auto* seed_opt = sim->add_option("--seed", seed, "scenario noise seed (overrides config)");

    // zero-energy
    auto* ze = app.add_subcommand("zero-energy", "zero-energy rate of a power trace");
    std::string trace_path;
    ze->add_option("--trace", trace_path, "power trace CSV")->required();

    // features
    auto* feat = app.add_subcommand("features", "extract window features from a record log");
    std::string log_path, truth_path, channels_list = "sc1,sc2,piezo,sr", feat_out;
    int user = 0;
    feat->add_option("--log", log_path, "record log CSV")->required();
    feat->add_option("--truth", truth_path, "ground-truth label CSV")->required();
    feat->add_option("--channels", channels_list, "subset of sc1,sc2,piezo,sr");
    feat->add_option("--out", feat_out, "features CSV output")->required();
    feat->add_option("--user", user, "user id written into the table");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "cross-validated recognition accuracy");
    std::vector<std::string> feature_paths;
    std::string model_name = "knn", scheme_name = "pd", target = "place8";
    std::string out_confusion = "confusion.csv";
    int majority_n = 1, folds = 10;
    std::uint64_t ev_seed = 0;
    bool full_sequence = false;
    ev->add_option("--features", feature_paths, "features CSV (repeatable)")->required();
    ev->add_option("--model", model_name, "knn | dtree | logreg | gnb");
    ev->add_option("--scheme", scheme_name, "pd | pi");
    ev->add_option("--majority", majority_n, "majority voting sample count");
    ev->add_option("--target", target, "place14 | place8 | activity5 | activity2");
    ev->add_option("--seed", ev_seed, "fold shuffling seed");
    ev->add_option("--folds", folds, "fold count for the pd scheme");
    ev->add_flag("--full-sequence", full_sequence,
                 "smooth the reassembled sequence instead of each fold");
    ev->add_option("--out-confusion", out_confusion, "confusion matrix CSV output");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "solve l_sat for a target record rate");
    std::string cal_config;
    double cal_lux = 500.0, cal_rate = 2.15, cal_duration = 60.0;
    cal->add_option("--config", cal_config, "device config file");
    cal->add_option("--lux", cal_lux, "calibration illuminance");
    cal->add_option("--target-rate", cal_rate, "target mean record rate in Hz");
    cal->add_option("--duration", cal_duration, "simulated seconds per probe");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(scenario_path, config_path, mode_name, out_log, out_trace,
                                out_truth, seed_opt->count() > 0, seed);
        if (ze->parsed()) return cmd_zero_energy(trace_path);
        if (feat->parsed())
            return cmd_features(log_path, truth_path, channels_list, feat_out, user);
        if (ev->parsed())
            return cmd_evaluate(feature_paths, model_name, scheme_name, majority_n, target,
                                ev_seed, folds, full_sequence, out_confusion);
        if (cal->parsed()) return cmd_calibrate(cal_config, cal_lux, cal_rate, cal_duration);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace ehl
