#include "ehl/pipeline/features.hpp"

#include "ehl/util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ehl {

void ChannelSet::validate() const {
    if (count() == 0) throw std::invalid_argument("channel set must be non-empty");
}

ChannelSet ChannelSet::parse(const std::string& list) {
    ChannelSet cs{false, false, false, false};
    for (const auto& name : split_char(list, ',')) {
        std::string n = strip(name);
        if (n == "sc1") cs.sc1 = true;
        else if (n == "sc2") cs.sc2 = true;
        else if (n == "piezo") cs.piezo = true;
        else if (n == "sr") cs.sr = true;
        else
            throw std::invalid_argument("unknown channel '" + n +
                                        "' (valid: sc1, sc2, piezo, sr)");
    }
    cs.validate();
    return cs;
}

std::string ChannelSet::to_string() const {
    std::string out;
    for (auto [on, name] : {std::pair{sc1, "sc1"}, {sc2, "sc2"}, {piezo, "piezo"}, {sr, "sr"}}) {
        if (!on) continue;
        if (!out.empty()) out += ',';
        out += name;
    }
    return out;
}

BurgResult burg_ar(std::span<const double> x, int order) {
    const auto n = static_cast<int>(x.size());
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    if (n <= order) throw std::invalid_argument("series must be longer than the order");

    BurgResult res;
    res.a.assign(order, 0.0);
    res.k.assign(order, 0.0);

    bool all_equal = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
    if (all_equal) return res;

    std::vector<double> f(x.begin(), x.end());
    std::vector<double> b(x.begin(), x.end());
    std::vector<double> a(order + 1, 0.0);
    a[0] = 1.0;

    for (int m = 1; m <= order; ++m) {
        double num = 0, den = 0;
        for (int i = m; i < n; ++i) {
            num += f[i] * b[i - 1];
            den += f[i] * f[i] + b[i - 1] * b[i - 1];
        }
        double k = den != 0.0 ? -2.0 * num / den : 0.0;
        res.k[m - 1] = k;
        // in-place lattice update; b shifts by one position
        for (int i = n - 1; i >= m; --i) {
            double bi = b[i - 1];
            b[i] = bi + k * f[i];
            f[i] = f[i] + k * bi;
        }
        for (int j = 1; j <= m / 2; ++j) {
            double aj = a[j] + k * a[m - j];
            a[m - j] += k * a[j];
            a[j] = aj;
        }
        a[m] = k;
    }
    std::copy(a.begin() + 1, a.end(), res.a.begin());
    return res;
}

const std::array<std::string, kFeaturesPerChannel>& feature_names() {
    static const std::array<std::string, kFeaturesPerChannel> names = {
        "mean",      "std",          "mad",
        "max",       "min",          "sum_sq",
        "entropy",   "iqr",          "burg_a1",
        "burg_a2",   "burg_a3",      "burg_a4",
        "range",     "rms",          "spec_skew",
        "spec_kurt", "max_freq_hz",  "spec_centroid_hz",
        "band_energy_frac",          "mean_psd"};
    return names;
}

namespace {

double quantile_linear(const std::vector<double>& sorted, double q) {
    double h = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Magnitude DFT bins 1..N/2. Twiddles for the pipeline's window length are
// cached; other lengths compute them directly.
std::vector<double> dft_magnitudes(std::span<const double> x) {
    const auto n = static_cast<int>(x.size());
    const int kmax = n / 2;
    static std::vector<double> table; // [k-1][i] pairs of cos,sin for n == kWindowSamples
    static std::once_flag once;
    if (n == kWindowSamples) {
        std::call_once(once, [] {
            table.resize(2 * (kWindowSamples / 2) * kWindowSamples);
            for (int k = 1; k <= kWindowSamples / 2; ++k)
                for (int i = 0; i < kWindowSamples; ++i) {
                    double ang = -2.0 * M_PI * k * i / kWindowSamples;
                    table[((k - 1) * kWindowSamples + i) * 2] = std::cos(ang);
                    table[((k - 1) * kWindowSamples + i) * 2 + 1] = std::sin(ang);
                }
        });
    }
    std::vector<double> mags(kmax);
    for (int k = 1; k <= kmax; ++k) {
        double re = 0, im = 0;
        if (n == kWindowSamples) {
            const double* tw = &table[(k - 1) * kWindowSamples * 2];
            for (int i = 0; i < n; ++i) {
                re += x[i] * tw[2 * i];
                im += x[i] * tw[2 * i + 1];
            }
        } else {
            for (int i = 0; i < n; ++i) {
                double ang = -2.0 * M_PI * k * i / n;
                re += x[i] * std::cos(ang);
                im += x[i] * std::sin(ang);
            }
        }
        mags[k - 1] = std::hypot(re, im);
    }
    return mags;
}

} // namespace

std::array<double, kFeaturesPerChannel> channel_features(std::span<const double> x, double fs) {
    const auto n = static_cast<int>(x.size());
    if (n < 8) throw std::invalid_argument("window too short");

    std::array<double, kFeaturesPerChannel> out{};

    double sum = 0, sum_sq = 0;
    double vmax = x[0], vmin = x[0];
    for (double v : x) {
        sum += v;
        sum_sq += v * v;
        vmax = std::max(vmax, v);
        vmin = std::min(vmin, v);
    }
    double mean = sum / n;
    double var = 0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= n;

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    double med = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    std::vector<double> absdev(x.size());
    for (int i = 0; i < n; ++i) absdev[i] = std::abs(x[i] - med);
    double mad = median_of(std::move(absdev));

    // Shannon entropy (natural log) of a 10-bin histogram over [min, max]
    double entropy = 0;
    if (vmax > vmin) {
        int counts[10] = {0};
        for (double v : x) {
            int bin = static_cast<int>((v - vmin) / (vmax - vmin) * 10.0);
            counts[std::min(bin, 9)]++;
        }
        for (int c : counts) {
            if (c == 0) continue;
            double p = static_cast<double>(c) / n;
            entropy -= p * std::log(p);
        }
    }

    double iqr = quantile_linear(sorted, 0.75) - quantile_linear(sorted, 0.25);
    BurgResult burg = burg_ar(x, 4);

    // a constant signal has no AC spectrum; skip the DFT so that the spectral
    // statistics are exactly zero rather than rounding noise
    std::vector<double> mags(static_cast<size_t>(n / 2), 0.0);
    if (vmax > vmin) mags = dft_magnitudes(x);
    const auto kmax = static_cast<int>(mags.size());
    double mag_sum = 0, energy = 0;
    for (double m : mags) {
        mag_sum += m;
        energy += m * m;
    }

    double spec_skew = 0, spec_kurt = 0;
    {
        double mu = mag_sum / kmax;
        double m2 = 0, m3 = 0, m4 = 0;
        for (double m : mags) {
            double d = m - mu;
            m2 += d * d;
            m3 += d * d * d;
            m4 += d * d * d * d;
        }
        m2 /= kmax;
        m3 /= kmax;
        m4 /= kmax;
        if (m2 > 0) {
            spec_skew = m3 / std::pow(m2, 1.5);
            spec_kurt = m4 / (m2 * m2) - 3.0;
        }
    }

    double max_freq_hz = 0;
    if (mag_sum > 0) {
        int arg = static_cast<int>(std::max_element(mags.begin(), mags.end()) - mags.begin());
        max_freq_hz = static_cast<double>(arg + 1) * fs / n;
    }

    double centroid = 0;
    if (mag_sum > 0) {
        double acc = 0;
        for (int k = 1; k <= kmax; ++k) acc += (static_cast<double>(k) * fs / n) * mags[k - 1];
        centroid = acc / mag_sum;
    }

    double band_frac = 0;
    if (energy > 0) {
        double low = 0;
        for (int k = 1; k <= kmax; ++k)
            if (static_cast<double>(k) * fs / n <= 5.0) low += mags[k - 1] * mags[k - 1];
        band_frac = low / energy;
    }

    double mean_psd = energy / (fs * n) / kmax;

    out[0] = mean;
    out[1] = std::sqrt(var);
    out[2] = mad;
    out[3] = vmax;
    out[4] = vmin;
    out[5] = sum_sq;
    out[6] = entropy;
    out[7] = iqr;
    out[8] = burg.a[0];
    out[9] = burg.a[1];
    out[10] = burg.a[2];
    out[11] = burg.a[3];
    out[12] = vmax - vmin;
    out[13] = std::sqrt(sum_sq / n);
    out[14] = spec_skew;
    out[15] = spec_kurt;
    out[16] = max_freq_hz;
    out[17] = centroid;
    out[18] = band_frac;
    out[19] = mean_psd;
    return out;
}

std::vector<Window> make_windows(
    const std::vector<double>& t, const std::vector<std::vector<double>>& channels,
    const std::function<std::pair<std::string, std::string>(double)>& labels_at) {
    for (const auto& ch : channels)
        if (ch.size() != t.size())
            throw std::invalid_argument("channel length does not match time grid");

    std::vector<Window> out;
    if (t.size() < kWindowSamples) return out;
    for (size_t start = 0; start + kWindowSamples <= t.size(); start += kWindowHop) {
        Window w;
        w.start_t = t[start];
        w.channels.reserve(channels.size());
        for (const auto& ch : channels)
            w.channels.emplace_back(ch.begin() + start, ch.begin() + start + kWindowSamples);

        // majority label over the window; a 50/50 tie takes the later label
        std::map<std::string, std::pair<int, size_t>> place_votes, act_votes;
        for (size_t i = start; i < start + kWindowSamples; ++i) {
            auto [pl, ac] = labels_at(t[i]);
            auto& pv = place_votes[pl];
            pv.first++;
            pv.second = i;
            auto& av = act_votes[ac];
            av.first++;
            av.second = i;
        }
        auto pick = [](const std::map<std::string, std::pair<int, size_t>>& votes) {
            std::string best;
            int best_n = -1;
            size_t best_last = 0;
            for (const auto& [name, v] : votes) {
                if (v.first > best_n || (v.first == best_n && v.second > best_last)) {
                    best = name;
                    best_n = v.first;
                    best_last = v.second;
                }
            }
            return best;
        };
        w.place = pick(place_votes);
        w.activity = pick(act_votes);
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<double> extract_features(const Window& w, double fs) {
    std::vector<double> out;
    out.reserve(w.channels.size() * kFeaturesPerChannel);
    for (const auto& ch : w.channels) {
        auto f = channel_features(ch, fs);
        out.insert(out.end(), f.begin(), f.end());
    }
    return out;
}

} // namespace ehl
