// Acceptance checks for the simulator and recognition pipeline. Each
// criterion prints one [PASS]/[FAIL] line; the process exits non-zero if any
// selected criterion fails. Run a single criterion with --criterion N.

#include "ehl/cli_app.hpp"
#include "ehl/pipeline/evaluate.hpp"
#include "ehl/pipeline/features.hpp"
#include "ehl/pipeline/preprocess.hpp"
#include "ehl/pipeline/targets.hpp"
#include "ehl/simulator.hpp"
#include "ehl/util.hpp"

#include "../support/naive_features.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace ehl;

namespace {

const std::string kDataDir = EHL_DATA_DIR;

struct Outcome {
    bool pass = false;
    std::string details;
};

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// runs tasks over all hardware threads, preserving per-index results
template <typename T>
std::vector<T> parallel_map(int n, const std::function<T(int)>& fn) {
    std::vector<T> results(n);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) results[i] = fn(i);
    };
    unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return results;
}

Scenario constant_scenario(double lux, double duration) {
    Scenario sc;
    sc.places.push_back({"bench", lux, 0.0, 0.0, 0.0});
    sc.activities.push_back({"rest", ActivityClass::Static, 0.0, 0.0, 0.0, 0.0});
    sc.segments.push_back({0, 0, duration});
    sc.finalize();
    return sc;
}

double inter_record_rate(const RecordLog& log) {
    double pairs = 0, span = 0;
    for (const auto& s : log.sessions()) {
        if (s.samples.size() < 2) continue;
        pairs += static_cast<double>(s.samples.size() - 1);
        span += static_cast<double>(s.samples.back().t_ms - s.samples.front().t_ms) / 1000.0;
    }
    return span > 0 ? pairs / span : 0.0;
}

// --- criterion 1: record-rate calibration ---------------------------------

Outcome criterion1() {
    double t0 = now_s();
    DeviceConfig cfg; // shipped defaults
    RunResult res = run(constant_scenario(500.0, 60.0), cfg, RunMode::Proposed);
    double rate = inter_record_rate(res.log);
    double elapsed = now_s() - t0;

    bool rate_ok = std::fabs(rate - 2.15) <= 0.1 * 2.15;
    bool time_ok = elapsed < 5.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "rate %.4f Hz (target 2.15 +-10%%), %llu records, %.2f s",
                  rate, static_cast<unsigned long long>(res.log.sample_count()), elapsed);
    return {rate_ok && time_ok, buf};
}

// --- criterion 2: Active implies Capacitor under fuzzing ------------------

Outcome criterion2() {
    double t0 = now_s();
    DeviceConfig cfg;
    long violations = 0;
    long steps_total = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> jump(-250.0, 250.0);
        auto st = make_device_state(cfg.cmp_power_fall, cfg.cmp_power_rise,
                                    cfg.cmp_mode_offset, cfg.v_cap_initial);
        std::vector<Event> ev;
        double lux = 400.0;
        for (int k = 0; k < 50000; ++k) {
            lux = std::clamp(lux + jump(rng), 0.0, 25000.0);
            double h = harvest_current(cfg.sc1, lux) + harvest_current(cfg.sc2, lux);
            ev.clear();
            device_step(st, h, cfg.dt, cfg.budget, cfg.cap, ev);
            ++steps_total;
            if (st.mcu_mode == McuMode::Active && st.power_source != PowerSource::Capacitor)
                ++violations;
        }
    }
    double elapsed = now_s() - t0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%ld violations in %ld fuzzed steps, %.2f s", violations,
                  steps_total, elapsed);
    return {violations == 0 && steps_total >= 1000000 && elapsed < 30.0, buf};
}

// --- criterion 3: recovery after darkness ----------------------------------

Outcome criterion3() {
    Scenario sc;
    sc.places.push_back({"dark", 0.0, 0.0, 0.0, 0.0});
    sc.places.push_back({"bright", 500.0, 30.0, 0.0, 0.0});
    sc.activities.push_back({"rest", ActivityClass::Static, 0.01, 1.0, 0.0, 0.0});
    sc.segments.push_back({0, 0, 120.0});
    sc.segments.push_back({1, 0, 60.0});
    sc.finalize();

    DeviceConfig cfg;
    int ok_seeds = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        sc.seed = seed;
        RunResult res = run(sc, cfg, RunMode::Proposed);
        bool recovered = false;
        for (const auto& sess : res.log.sessions())
            for (const auto& s : sess.samples) recovered |= s.t_ms > 120000;
        ok_seeds += recovered;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "recovered on %d/20 seeds", ok_seeds);
    return {ok_seeds == 20, buf};
}

// --- criterion 4: zero-energy dominance on the 9 h office day --------------

Outcome criterion4() {
    double t0 = now_s();
    Scenario office = load_scenario(kDataDir + "/office_9h.txt");
    DeviceConfig cfg = load_config(kDataDir + "/default_config.txt");

    struct SeedResult {
        double proposed = 0, baseline = 0;
    };
    auto results = parallel_map<SeedResult>(20, [&](int i) {
        Scenario sc = office;
        sc.seed = static_cast<std::uint64_t>(i + 1);
        SeedResult r;
        r.proposed = zero_energy_rate(run(sc, cfg, RunMode::Proposed).trace).zero_energy_rate;
        r.baseline = zero_energy_rate(run(sc, cfg, RunMode::Baseline).trace).zero_energy_rate;
        return r;
    });

    int ok = 0;
    double min_prop = 1.0, max_base = 0.0;
    for (const auto& r : results) {
        ok += r.proposed > 0.99 && r.proposed > r.baseline;
        min_prop = std::min(min_prop, r.proposed);
        max_base = std::max(max_base, r.baseline);
    }
    double elapsed = now_s() - t0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d/20 seeds ok; min proposed %.4f, max baseline %.4f, %.1f s", ok, min_prop,
                  max_base, elapsed);
    return {ok == 20 && elapsed < 120.0, buf};
}

// --- criterion 5: feature extractor equals the naive oracle ----------------

Outcome criterion5() {
    std::mt19937_64 rng(20250810);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    int checked = 0, mismatches = 0;
    double worst = 0;
    for (int w = 0; w < 100; ++w) {
        for (int kind = 0; kind < 4; ++kind) {
            std::vector<double> x(kWindowSamples);
            switch (kind) {
            case 0: {
                double v = 1200;
                for (double& s : x) s = (v += 25.0 * g(rng));
                break;
            }
            case 1: {
                double f = 0.5 + 20.0 * u(rng), ph = 6.28 * u(rng);
                for (int i = 0; i < kWindowSamples; ++i)
                    x[i] = 300 * std::sin(2 * M_PI * f * i / 100.0 + ph) + 8 * g(rng);
                break;
            }
            case 2:
                for (double& s : x) s = 150.0 * g(rng);
                break;
            default:
                for (double& s : x) s = (u(rng) < 0.06) ? 900.0 * g(rng) : 2.0 + 0.1 * g(rng);
            }
            auto fast = channel_features(x, 100.0);
            auto ref = naive::features(x, 100.0);
            for (size_t i = 0; i < fast.size(); ++i) {
                double scale = std::max({std::fabs(fast[i]), std::fabs(ref[i]), 1e-30});
                double rel = std::fabs(fast[i] - ref[i]) / scale;
                if (std::fabs(fast[i] - ref[i]) >= 1e-15 && rel > 1e-9) ++mismatches;
                else worst = std::max(worst, rel);
                ++checked;
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d values checked, %d beyond 1e-9, worst rel %.2e",
                  checked, mismatches, worst);
    return {mismatches == 0 && checked == 400 * kFeaturesPerChannel, buf};
}

// --- criterion 6: Burg AR(4) recovery ---------------------------------------

Outcome criterion6() {
    // closed-form first reflection coefficient, 100 random inputs
    std::mt19937_64 rng(606);
    std::normal_distribution<double> g(0.0, 1.0);
    int k1_ok = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x(128);
        for (double& v : x) v = g(rng);
        double num = 0, den = 0;
        for (size_t i = 1; i < x.size(); ++i) {
            num += x[i] * x[i - 1];
            den += x[i] * x[i] + x[i - 1] * x[i - 1];
        }
        double closed = -2.0 * num / den;
        if (std::fabs(burg_ar(x, 4).k[0] - closed) < 1e-12) ++k1_ok;
    }

    // noiseless AR(4), two stable pole pairs, impulse-excited, length 1024
    auto coeffs = [](double r1, double th1, double r2, double th2) {
        double p1 = -2 * r1 * std::cos(th1), q1 = r1 * r1;
        double p2 = -2 * r2 * std::cos(th2), q2 = r2 * r2;
        return std::vector<double>{p1 + p2, q1 + q2 + p1 * p2, p1 * q2 + p2 * q1, q1 * q2};
    };
    auto a_true = coeffs(0.98, 0.3 * M_PI, 0.95, 0.7 * M_PI);
    std::vector<double> x(1024, 0.0);
    for (int n = 0; n < 1024; ++n) {
        double acc = n == 0 ? 1.0 : 0.0;
        for (int k = 1; k <= 4; ++k)
            if (n >= k) acc -= a_true[k - 1] * x[n - k];
        x[n] = acc;
    }
    auto got = burg_ar(x, 4);
    double err = 0;
    for (int i = 0; i < 4; ++i) err = std::max(err, std::fabs(got.a[i] - a_true[i]));

    // NOTE: the 1e-6 bound is not reachable by the Burg recursion. Its greedy
    // forward+backward estimates carry a finite-sample bias on deterministic
    // AR data (O(1/N) for undamped poles, percent-level for damped ones); the
    // implementation here matches an independent reference to 1e-16, and only
    // an exact least-squares fit attains 1e-6 on such data. The bound is
    // asserted as given, so this criterion is expected to fail.
    bool recovery_ok = err < 1e-6;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "k1 closed-form %d/100 at 1e-12; AR(4) recovery err %.3e vs bound 1e-6 "
                  "(estimator bias floor, see NOTE in source)",
                  k1_ok, err);
    return {k1_ok == 100 && recovery_ok, buf};
}

// --- criterion 7: weighted F-measure ----------------------------------------

Outcome criterion7() {
    using L = std::vector<std::string>;
    bool ok = true;
    std::ostringstream details;

    L t1 = {"a", "b", "c"};
    ok &= weighted_f_measure(t1, t1) == 1.0;

    L t2 = {"a", "a", "b", "b"}, p2 = {"b", "b", "a", "a"};
    ok &= weighted_f_measure(t2, p2) == 0.0;

    // true [A,A,A,B], pred [A,A,B,B]: per the definition,
    //   F1_A = 2*(1)*(2/3)/(1+2/3) = 4/5, F1_B = 2*(1/2)*(1)/(3/2) = 2/3,
    //   weighted = 0.75*4/5 + 0.25*2/3 = 23/30 = 0.766666...
    L t3 = {"A", "A", "A", "B"}, p3 = {"A", "A", "B", "B"};
    double wf = weighted_f_measure(t3, p3);
    ok &= std::fabs(wf - 23.0 / 30.0) < 1e-12;
    details << "trivial cases exact; confusion example " << wf << " vs 23/30";
    return {ok, details.str()};
}

// --- criterion 8: end-to-end pipeline over six synthetic users --------------

DeviceConfig user_config(const DeviceConfig& base, int u) {
    DeviceConfig cfg = base;
    double c = u - 2.5; // -2.5 .. 2.5 across six users
    cfg.piezo.sensitivity *= 1.0 + 0.06 * c;
    cfg.sc1.voc_max *= 1.0 + 0.035 * c;
    cfg.sc2.voc_max *= 1.0 - 0.030 * c;
    cfg.sc1.l_knee *= 1.0 + 0.10 * c;
    cfg.sc2.l_knee *= 1.0 - 0.08 * c;
    return cfg;
}

Outcome criterion8() {
    double t0 = now_s();
    Scenario base = load_scenario(kDataDir + "/default_scenario.txt");
    DeviceConfig base_cfg = load_config(kDataDir + "/default_config.txt");

    auto tables = parallel_map<FeatureTable>(6, [&](int u) {
        Scenario sc = base;
        double lux_scale = 1.0 + 0.07 * (u - 2.5); // wearer height / positioning
        for (auto& p : sc.places) {
            p.lux_mean *= lux_scale;
            p.lux_std *= lux_scale;
        }
        sc.seed = 1000 + static_cast<std::uint64_t>(u);
        DeviceConfig cfg = user_config(base_cfg, u);
        RunResult res = run(sc, cfg, RunMode::Proposed);
        TruthTimeline truth = parse_truth_csv(scenario_truth_csv(sc));
        return compute_features(res.log, truth, ChannelSet{}, u);
    });

    FeatureTable all;
    all.channels = tables[0].channels;
    for (const auto& t : tables) all.append(t);

    auto labels_for = [&](Target target) {
        std::vector<std::string> out;
        out.reserve(all.n());
        for (size_t i = 0; i < all.n(); ++i)
            out.push_back(target_label(target, all.place[i], all.activity[i]));
        return out;
    };

    CvOptions opt;
    opt.seed = 8;
    auto place_labels = labels_for(Target::Place8);
    auto act_labels = labels_for(Target::Activity2);

    EvalReport pd_place = cross_validate(all.features, place_labels, all.user,
                                         CvScheme::PD10Fold, ModelKind::Knn, opt);
    EvalReport pd_act = cross_validate(all.features, act_labels, all.user, CvScheme::PD10Fold,
                                       ModelKind::Knn, opt);
    EvalReport pi_place = cross_validate(all.features, place_labels, all.user, CvScheme::PiLouo,
                                         ModelKind::Knn, opt);

    double elapsed = now_s() - t0;
    bool ok = pd_place.weighted_f >= 0.85 && pd_act.weighted_f >= 0.90 &&
              pd_place.weighted_f >= pi_place.weighted_f && elapsed < 300.0;
    char buf[220];
    std::snprintf(buf, sizeof(buf),
                  "knn: PD place8 %.4f (>=0.85), PD activity2 %.4f (>=0.90), PI place8 %.4f "
                  "(PD>=PI), %zu windows, %.1f s",
                  pd_place.weighted_f, pd_act.weighted_f, pi_place.weighted_f, all.n(), elapsed);
    return {ok, buf};
}

// --- criterion 9: majority voting never hurts slow label streams ------------

Outcome criterion9() {
    const char* names[] = {"w", "x", "y", "z"};
    int ok_seeds = 0;
    double worst_delta = 1.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> seg_len(120, 240);
        std::uniform_real_distribution<double> noise_level(0.08, 0.18);
        std::uniform_int_distribution<int> pick(0, 3);

        std::vector<std::string> truth, noisy;
        double p_noise = noise_level(rng);
        int last = -1;
        for (int s = 0; s < 14; ++s) {
            int label = pick(rng);
            while (label == last) label = pick(rng);
            last = label;
            int len = seg_len(rng);
            for (int i = 0; i < len; ++i) truth.push_back(names[label]);
        }
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (const auto& s : truth) {
            if (u(rng) < p_noise) {
                int other = pick(rng);
                while (names[other] == s) other = pick(rng);
                noisy.push_back(names[other]);
            } else {
                noisy.push_back(s);
            }
        }
        double raw = weighted_f_measure(truth, noisy);
        double smoothed = weighted_f_measure(truth, majority_vote(noisy, 20));
        worst_delta = std::min(worst_delta, smoothed - raw);
        ok_seeds += smoothed >= raw;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d/20 seeds non-decreasing, worst delta %+.4f", ok_seeds,
                  worst_delta);
    return {ok_seeds == 20, buf};
}

// --- criterion 10: determinism and recorder round-trip ----------------------

Outcome criterion10() {
    Scenario sc = load_scenario(kDataDir + "/default_scenario.txt");
    DeviceConfig cfg = load_config(kDataDir + "/default_config.txt");
    sc.seed = 7;
    RunResult a = run(sc, cfg, RunMode::Proposed);
    RunResult b = run(sc, cfg, RunMode::Proposed);
    bool identical = export_csv(a.log) == export_csv(b.log) &&
                     trace_to_csv(a.trace) == trace_to_csv(b.trace);

    std::mt19937_64 rng(1010);
    std::uniform_int_distribution<int> n_sessions(1, 4), n_samples(0, 60);
    std::uniform_int_distribution<int> mv(0, 65535);
    int roundtrips_ok = 0;
    for (int i = 0; i < 100; ++i) {
        RecordLog log(1 << 20);
        std::uint64_t t = rng() % 50000;
        int ns = n_sessions(rng);
        for (int s = 0; s < ns; ++s) {
            log.begin_session(t);
            int k = n_samples(rng);
            for (int j = 0; j < k; ++j) {
                t += 1 + rng() % 1500;
                log.append({t, static_cast<std::uint16_t>(mv(rng)),
                            static_cast<std::uint16_t>(mv(rng)),
                            static_cast<std::uint16_t>(mv(rng))});
            }
            t += 1 + rng() % 8000;
        }
        roundtrips_ok += import_csv(export_csv(log), log.capacity_bytes()) == log;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "byte-identical reruns: %s; round-trips %d/100",
                  identical ? "yes" : "no", roundtrips_ok);
    return {identical && roundtrips_ok == 100, buf};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> fn;
};

const Criterion kCriteria[] = {
    {1, "record-rate calibration (2.15 Hz +-10% at 500 lux)", criterion1},
    {2, "state-machine safety (Active implies Capacitor)", criterion2},
    {3, "recovery after darkness", criterion3},
    {4, "zero-energy dominance on the 9 h office day", criterion4},
    {5, "feature extractor equals the naive oracle (1e-9)", criterion5},
    {6, "Burg AR(4) recovery and reflection closed form", criterion6},
    {7, "weighted F-measure correctness", criterion7},
    {8, "end-to-end pipeline accuracy over six users", criterion8},
    {9, "majority voting never hurts slow label streams", criterion9},
    {10, "determinism and recorder round-trip", criterion10},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %d: %s -- %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                    out.details.c_str());
        std::fflush(stdout);
        failures += !out.pass;
    }
    return failures == 0 ? 0 : 1;
}
