#include "ehl/recorder.hpp"

#include "ehl/util.hpp"

#include <sstream>

namespace ehl {

std::uint64_t RecordLog::size_bytes() const {
    std::uint64_t n = 0;
    for (const auto& s : sessions_)
        n += kSessionHeaderBytes + kRecordBytes * s.samples.size();
    return n;
}

std::uint64_t RecordLog::sample_count() const {
    std::uint64_t n = 0;
    for (const auto& s : sessions_) n += s.samples.size();
    return n;
}

void RecordLog::begin_session(std::uint64_t power_on_t_ms) {
    if (!sessions_.empty() && power_on_t_ms < sessions_.back().power_on_t_ms)
        throw std::invalid_argument("sessions must be ordered by power-on time");
    if (size_bytes() + kSessionHeaderBytes > capacity_bytes_)
        throw CapacityError("log full: no room for session header");
    sessions_.push_back({power_on_t_ms, {}});
}

void RecordLog::append(const Sample& s) {
    if (sessions_.empty()) throw std::logic_error("no open session");
    if (size_bytes() + kRecordBytes > capacity_bytes_)
        throw CapacityError("log full");
    auto& cur = sessions_.back();
    if (!cur.samples.empty() && s.t_ms <= cur.samples.back().t_ms)
        throw std::invalid_argument("timestamps must strictly increase within a session");
    if (s.t_ms < cur.power_on_t_ms)
        throw std::invalid_argument("sample precedes session power-on");
    cur.samples.push_back(s);
}

bool RecordLog::try_append(const Sample& s) {
    if (sessions_.empty()) throw std::logic_error("no open session");
    if (size_bytes() + kRecordBytes > capacity_bytes_) return false;
    append(s);
    return true;
}

namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

} // namespace

std::vector<std::uint8_t> encode(const RecordLog& log) {
    std::vector<std::uint8_t> out;
    out.reserve(log.size_bytes());
    for (const auto& sess : log.sessions()) {
        put_le(out, sess.power_on_t_ms, 8);
        for (const auto& s : sess.samples) {
            // offset wraps modulo 2^32 (~49.7 days per session)
            put_le(out, (s.t_ms - sess.power_on_t_ms) & 0xFFFFFFFFULL, 4);
            put_le(out, s.sc1_mv, 2);
            put_le(out, s.sc2_mv, 2);
            put_le(out, s.piezo_mv, 2);
        }
    }
    return out;
}

std::string export_csv(const RecordLog& log) {
    std::ostringstream os;
    os << "session,t_ms,sc1_mv,sc2_mv,piezo_mv\n";
    int idx = 0;
    for (const auto& sess : log.sessions()) {
        os << "# session " << idx << " power_on_t_ms " << sess.power_on_t_ms << "\n";
        for (const auto& s : sess.samples)
            os << idx << ',' << s.t_ms << ',' << s.sc1_mv << ',' << s.sc2_mv << ','
               << s.piezo_mv << "\n";
        ++idx;
    }
    return os.str();
}

RecordLog import_csv(const std::string& text, std::uint64_t capacity_bytes) {
    RecordLog log(capacity_bytes);
    int lineno = 0;
    bool header_seen = false;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? eol : eol - pos);
        pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
        ++lineno;
        line = strip(line);
        if (line.empty()) continue;

        if (line.front() == '#') {
            auto fields = split_ws(line);
            if (fields.size() == 5 && fields[1] == "session" && fields[3] == "power_on_t_ms") {
                int idx;
                std::uint64_t power_on;
                try {
                    idx = std::stoi(fields[2]);
                    power_on = std::stoull(fields[4]);
                } catch (const std::exception&) {
                    throw ParseError("bad session marker", lineno);
                }
                if (idx != static_cast<int>(log.sessions().size()))
                    throw ParseError("session marker out of order", lineno);
                try {
                    log.begin_session(power_on);
                } catch (const std::exception& e) {
                    throw ParseError(e.what(), lineno);
                }
            }
            continue;
        }

        if (!header_seen) {
            if (line != "session,t_ms,sc1_mv,sc2_mv,piezo_mv")
                throw ParseError("bad CSV header", lineno);
            header_seen = true;
            continue;
        }

        auto cols = split_char(line, ',');
        if (cols.size() != 5) throw ParseError("expected 5 columns", lineno);
        unsigned long long vals[5];
        for (int i = 0; i < 5; ++i) {
            size_t used = 0;
            try {
                vals[i] = std::stoull(strip(cols[i]), &used);
            } catch (const std::exception&) {
                throw ParseError("bad integer in column " + std::to_string(i + 1), lineno);
            }
            if (used != strip(cols[i]).size())
                throw ParseError("bad integer in column " + std::to_string(i + 1), lineno);
        }
        if (log.sessions().empty())
            throw ParseError("data row before any session marker", lineno);
        if (vals[0] != log.sessions().size() - 1)
            throw ParseError("session column does not match current session", lineno);
        for (int i = 2; i < 5; ++i)
            if (vals[i] > 0xFFFF)
                throw ParseError("millivolt value exceeds 16 bits", lineno);
        Sample s{vals[1], static_cast<std::uint16_t>(vals[2]),
                 static_cast<std::uint16_t>(vals[3]), static_cast<std::uint16_t>(vals[4])};
        try {
            log.append(s);
        } catch (const std::exception& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (!header_seen) throw ParseError("missing CSV header", lineno);
    return log;
}

} // namespace ehl
