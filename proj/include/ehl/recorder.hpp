#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehl {

/// Raised when an append would exceed the log's capacity.
class CapacityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Sample {
    std::uint64_t t_ms = 0; // RTC milliseconds since epoch
    std::uint16_t sc1_mv = 0;
    std::uint16_t sc2_mv = 0;
    std::uint16_t piezo_mv = 0;

    bool operator==(const Sample&) const = default;
};

struct Session {
    std::uint64_t power_on_t_ms = 0;
    std::vector<Sample> samples;

    bool operator==(const Session&) const = default;
};

/// Non-volatile log emulation with a hard byte capacity. Encoded layout:
/// 8-byte session header (u64 LE power-on time) followed by 10-byte records
/// (u32 LE offset from the session power-on, truncated to 32 bits, then
/// three u16 LE millivolt fields). Overflow policy is stop-and-count: a
/// full log rejects appends and is never overwritten.
class RecordLog {
public:
    static constexpr std::uint64_t kSessionHeaderBytes = 8;
    static constexpr std::uint64_t kRecordBytes = 10;

    explicit RecordLog(std::uint64_t capacity_bytes = 32768)
        : capacity_bytes_(capacity_bytes) {}

    const std::vector<Session>& sessions() const { return sessions_; }
    std::uint64_t capacity_bytes() const { return capacity_bytes_; }
    std::uint64_t size_bytes() const;
    std::uint64_t sample_count() const;
    bool empty() const { return sessions_.empty(); }

    /// Opens a new session; power-on times must be non-decreasing.
    void begin_session(std::uint64_t power_on_t_ms);

    /// Appends to the current session; throws CapacityError when full and
    /// std::logic_error when no session is open. Timestamps must strictly
    /// increase within a session.
    void append(const Sample& s);

    /// Like append but returns false instead of throwing CapacityError.
    bool try_append(const Sample& s);

    bool operator==(const RecordLog&) const = default;

private:
    std::uint64_t capacity_bytes_;
    std::vector<Session> sessions_;
};

/// Byte-exact encoding of the log in the layout documented above.
std::vector<std::uint8_t> encode(const RecordLog& log);

/// CSV with header `session,t_ms,sc1_mv,sc2_mv,piezo_mv`; one comment line
/// per session carries its power-on time. LF endings.
std::string export_csv(const RecordLog& log);
RecordLog import_csv(const std::string& text, std::uint64_t capacity_bytes = 32768);

} // namespace ehl
