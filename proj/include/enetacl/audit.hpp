#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace enetacl {

// One LogFile/decision event. `group`, `resource` are "" and `level` is 0
// for stages the session never reached; `outcome` is the session's terminal
// state at emission time.
struct AuditRecord {
    std::string model;       // "engl" | "enlg"
    std::string ts;          // ISO-8601 UTC with milliseconds
    std::string session;     // opaque session id
    std::string transition;  // firing that emitted the record, e.g. "t10"
    std::string user;
    std::string group;
    int level = 0;
    std::string resource;
    std::string outcome;     // "used" | "denied" | "quit"

    bool operator==(const AuditRecord&) const = default;
};

// Throws ValidationError if the record violates a field invariant.
void validate_record(const AuditRecord& record);

// One record as a single JSON line, keys in the fixed order
// model, ts, session, transition, user, group, level, resource, outcome.
// This ordering is part of the log format contract.
std::string format_record(const AuditRecord& record);

// Parses one log line; `line_number` is used in error messages only.
AuditRecord parse_record(const std::string& line, int line_number = 1);

// Milliseconds since the Unix epoch -> "YYYY-MM-DDThh:mm:ss.mmmZ".
std::string format_timestamp(int64_t unix_ms);

// Injectable time source (Unix milliseconds). Sessions default to the system
// clock; tests pin a fixed value for reproducible logs.
using Clock = std::function<int64_t()>;
Clock system_clock_ms();

// Serialized append point for audit records. Concurrent sessions must funnel
// through a single sink instance.
class AuditSink {
public:
    virtual ~AuditSink() = default;

    // Validates and durably appends; returns the record's sequence number
    // (1-based, strictly increasing, gap-free).
    virtual uint64_t append(const AuditRecord& record) = 0;
};

// In-memory sink for tests and ephemeral runs.
class MemoryAuditLog final : public AuditSink {
public:
    uint64_t append(const AuditRecord& record) override;
    const std::vector<AuditRecord>& records() const { return records_; }

private:
    std::vector<AuditRecord> records_;
};

// File-backed sink, one JSON line per record, LF separated, UTF-8. Appends
// to an existing log continue its sequence numbering.
class FileAuditLog final : public AuditSink {
public:
    explicit FileAuditLog(std::string path);

    uint64_t append(const AuditRecord& record) override;
    const std::string& path() const { return path_; }

private:
    std::string path_;
    uint64_t sequence_ = 0;
};

// Reads a complete log back in stored order. Malformed lines raise ParseError
// carrying the line number.
std::vector<AuditRecord> replay(std::istream& in);
std::vector<AuditRecord> replay_file(const std::string& path);

}  // namespace enetacl
