#include "ehl/pipeline/preprocess.hpp"

#include <cmath>
#include <stdexcept>

namespace ehl {

PreprocessResult preprocess(const RecordLog& log, double trim_s) {
    if (log.empty()) throw std::invalid_argument("record log is empty");
    PreprocessResult out;
    int idx = -1;
    for (const auto& sess : log.sessions()) {
        ++idx;
        SessionStreams ss;
        ss.session_index = idx;
        ss.power_on_t_ms = sess.power_on_t_ms;
        double cutoff_ms = static_cast<double>(sess.power_on_t_ms) + trim_s * 1000.0;
        for (const auto& s : sess.samples) {
            if (static_cast<double>(s.t_ms) < cutoff_ms) continue;
            double t = static_cast<double>(s.t_ms) / 1000.0;
            ss.sc1.t.push_back(t);
            ss.sc1.v.push_back(s.sc1_mv);
            ss.sc2.t.push_back(t);
            ss.sc2.v.push_back(s.sc2_mv);
            ss.piezo.t.push_back(t);
            ss.piezo.v.push_back(s.piezo_mv);
        }
        if (ss.n() < 2) {
            out.warnings.push_back("session " + std::to_string(idx) +
                                   " skipped: fewer than 2 samples after trim");
            continue;
        }
        ss.rate.t = ss.sc1.t;
        ss.rate.v.resize(ss.n());
        for (size_t i = 1; i < ss.n(); ++i)
            ss.rate.v[i] = 1.0 / (ss.rate.t[i] - ss.rate.t[i - 1]);
        ss.rate.v[0] = ss.rate.v[1];
        out.sessions.push_back(std::move(ss));
    }
    return out;
}

SampleStream resample_linear(const SampleStream& in, double fs) {
    if (in.t.size() < 2) throw std::invalid_argument("resample needs >= 2 points");
    if (!(fs > 0)) throw std::invalid_argument("fs must be > 0");
    for (size_t i = 1; i < in.t.size(); ++i) {
        if (in.t[i] == in.t[i - 1])
            throw std::invalid_argument("duplicate timestamps in stream");
        if (in.t[i] < in.t[i - 1])
            throw std::invalid_argument("timestamps must increase");
    }
    SampleStream out;
    double t0 = in.t.front();
    double t_last = in.t.back();
    auto n = static_cast<size_t>(std::floor((t_last - t0) * fs + 1e-9)) + 1;
    out.t.reserve(n);
    out.v.reserve(n);
    size_t seg = 0;
    for (size_t k = 0; k < n; ++k) {
        double t = t0 + static_cast<double>(k) / fs;
        if (t > t_last) t = t_last;
        while (seg + 2 < in.t.size() && in.t[seg + 1] < t) ++seg;
        double u = (t - in.t[seg]) / (in.t[seg + 1] - in.t[seg]);
        out.t.push_back(t);
        out.v.push_back(in.v[seg] + u * (in.v[seg + 1] - in.v[seg]));
    }
    return out;
}

} // namespace ehl
