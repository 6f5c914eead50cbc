#include "enetacl/audit.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "enetacl/errors.hpp"

namespace enetacl {

namespace {

bool known_model(const std::string& model) {
    return model == "engl" || model == "enlg";
}

bool known_outcome(const std::string& outcome) {
    return outcome == "used" || outcome == "denied" || outcome == "quit";
}

// "YYYY-MM-DDThh:mm:ss.mmmZ"
bool timestamp_shape_ok(const std::string& ts) {
    if (ts.size() != 24) return false;
    for (size_t pos : {4u, 7u}) {
        if (ts[pos] != '-') return false;
    }
    if (ts[10] != 'T' || ts[13] != ':' || ts[16] != ':' || ts[19] != '.' ||
        ts[23] != 'Z')
        return false;
    for (size_t pos = 0; pos < 23; ++pos) {
        if (pos == 4 || pos == 7 || pos == 10 || pos == 13 || pos == 16 || pos == 19)
            continue;
        if (ts[pos] < '0' || ts[pos] > '9') return false;
    }
    return true;
}

}  // namespace

void validate_record(const AuditRecord& record) {
    if (!known_model(record.model))
        throw ValidationError("audit record has unknown model \"" + record.model + "\"");
    if (!known_outcome(record.outcome))
        throw ValidationError("audit record has unknown outcome \"" + record.outcome +
                              "\"");
    if (!timestamp_shape_ok(record.ts))
        throw ValidationError("audit record timestamp \"" + record.ts +
                              "\" is not ISO-8601 UTC with milliseconds");
    if (record.session.empty())
        throw ValidationError("audit record has empty session id");
    if (record.transition.empty())
        throw ValidationError("audit record has empty transition name");
    if (record.user.empty())
        throw ValidationError("audit record has empty user name");
    if (record.level < 0)
        throw ValidationError("audit record level must be >= 0");
    if (record.outcome == "used") {
        if (record.resource.empty())
            throw ValidationError("\"used\" audit record must name a resource");
        if (record.level < 1)
            throw ValidationError("\"used\" audit record must carry a level >= 1");
        if (record.model == "engl" && record.group.empty())
            throw ValidationError("\"used\" engl audit record must name a group");
    }
}

std::string format_record(const AuditRecord& record) {
    nlohmann::ordered_json line;
    line["model"] = record.model;
    line["ts"] = record.ts;
    line["session"] = record.session;
    line["transition"] = record.transition;
    line["user"] = record.user;
    line["group"] = record.group;
    line["level"] = record.level;
    line["resource"] = record.resource;
    line["outcome"] = record.outcome;
    return line.dump();
}

AuditRecord parse_record(const std::string& line, int line_number) {
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("audit log line " + std::to_string(line_number) + ": " +
                             e.what(),
                         line_number, 1);
    }
    if (!parsed.is_object())
        throw ParseError("audit log line " + std::to_string(line_number) +
                             ": expected a JSON object",
                         line_number, 1);
    AuditRecord record;
    try {
        record.model = parsed.at("model").get<std::string>();
        record.ts = parsed.at("ts").get<std::string>();
        record.session = parsed.at("session").get<std::string>();
        record.transition = parsed.at("transition").get<std::string>();
        record.user = parsed.at("user").get<std::string>();
        record.group = parsed.at("group").get<std::string>();
        record.level = parsed.at("level").get<int>();
        record.resource = parsed.at("resource").get<std::string>();
        record.outcome = parsed.at("outcome").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("audit log line " + std::to_string(line_number) + ": " +
                             e.what(),
                         line_number, 1);
    }
    return record;
}

std::string format_timestamp(int64_t unix_ms) {
    const std::time_t seconds = static_cast<std::time_t>(unix_ms / 1000);
    const int millis = static_cast<int>(unix_ms % 1000);
    std::tm utc{};
    gmtime_r(&seconds, &utc);
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                  utc.tm_year + 1900, utc.tm_mon + 1, utc.tm_mday, utc.tm_hour,
                  utc.tm_min, utc.tm_sec, millis);
    return buffer;
}

Clock system_clock_ms() {
    return [] {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        return static_cast<int64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(now).count());
    };
}

uint64_t MemoryAuditLog::append(const AuditRecord& record) {
    validate_record(record);
    records_.push_back(record);
    return records_.size();
}

FileAuditLog::FileAuditLog(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (in) {
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) ++sequence_;
        }
    }
}

uint64_t FileAuditLog::append(const AuditRecord& record) {
    validate_record(record);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) throw IoError("cannot open audit log \"" + path_ + "\" for append");
    out << format_record(record) << '\n';
    out.flush();
    if (!out) throw IoError("write to audit log \"" + path_ + "\" failed");
    return ++sequence_;
}

std::vector<AuditRecord> replay(std::istream& in) {
    std::vector<AuditRecord> records;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        records.push_back(parse_record(line, line_number));
    }
    return records;
}

std::vector<AuditRecord> replay_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open audit log \"" + path + "\"");
    return replay(in);
}

}  // namespace enetacl
