#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "enetacl/policy.hpp"

namespace enetacl {

// Parsed-but-unchecked policy file contents. Memberships are sparse: an
// absent matrix entry means 0, a listed (name, level, group) triple means 1.
struct PolicyDocument {
    std::string model;  // "engl" | "enlg"
    int levels = 0;
    std::vector<std::string> users;
    std::vector<std::string> groups;
    std::vector<std::string> resources;
    // engl: entity name -> group name -> level
    std::map<std::string, std::map<std::string, int>> lug;
    std::map<std::string, std::map<std::string, int>> lrg;
    // enlg: entity name -> maximum level
    std::map<std::string, int> lu;
    std::map<std::string, int> lr;
    // enlg: (entity name, level, group name) membership triples
    std::set<std::tuple<std::string, int, std::string>> ulg;
    std::set<std::tuple<std::string, int, std::string>> rlg;

    bool operator==(const PolicyDocument&) const = default;
};

// Text -> document. Raises ParseError (with line/column) on malformed JSON,
// ValidationError on duplicate names, unknown model tags, unknown keys, or
// references to undeclared entities.
PolicyDocument parse_policy(const std::string& text);

// Document -> policy value with every model invariant enforced: level ranges,
// complete lu/lr assignments, and membership triples within each entity's
// maximum level (EntitlementError otherwise). Catalogs are sorted; indices
// are positions in sorted order.
Policy validate_document(const PolicyDocument& doc);

// Policy -> canonical text: sorted catalogs, fixed key order, sparse
// memberships (zero/absent entries omitted). Serializing twice is
// byte-identical; parse(serialize(p)) validates back to p for canonical p.
std::string serialize_policy(const Policy& policy);

Policy load_policy(const std::string& text);
Policy load_policy_file(const std::string& path);

// "engl" or "enlg".
std::string model_tag(const Policy& policy);

}  // namespace enetacl
