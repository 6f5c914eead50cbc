#include "enetacl/policy_io.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "enetacl/errors.hpp"

namespace enetacl {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void throw_parse_error(const std::string& text, size_t byte,
                                    const std::string& what) {
    int line = 1;
    int column = 1;
    for (size_t pos = 0; pos < byte && pos < text.size(); ++pos) {
        if (text[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    throw ParseError("policy syntax error at line " + std::to_string(line) +
                         ", column " + std::to_string(column) + ": " + what,
                     line, column);
}

std::vector<std::string> read_names(const json& doc, const char* key) {
    const auto& node = doc.at(key);
    if (!node.is_array())
        throw ValidationError(std::string("\"") + key + "\" must be an array of names");
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const auto& item : node) {
        if (!item.is_string())
            throw ValidationError(std::string("\"") + key + "\" entries must be strings");
        std::string name = item.get<std::string>();
        if (name.empty())
            throw ValidationError(std::string("\"") + key + "\" contains an empty name");
        if (!seen.insert(name).second)
            throw ValidationError("duplicate name \"" + name + "\" in \"" + key + "\"");
        names.push_back(std::move(name));
    }
    return names;
}

void check_declared(const std::string& name, const std::vector<std::string>& catalog,
                    const char* axis, const char* section) {
    if (std::find(catalog.begin(), catalog.end(), name) == catalog.end())
        throw ValidationError(std::string("\"") + section + "\" references undeclared " +
                              axis + " \"" + name + "\"");
}

std::map<std::string, std::map<std::string, int>> read_level_map(
    const json& doc, const char* key, const std::vector<std::string>& entities,
    const char* entity_axis, const std::vector<std::string>& groups) {
    std::map<std::string, std::map<std::string, int>> result;
    if (!doc.contains(key)) return result;
    const auto& node = doc.at(key);
    if (!node.is_object())
        throw ValidationError(std::string("\"") + key + "\" must be an object");
    for (const auto& [entity, row] : node.items()) {
        check_declared(entity, entities, entity_axis, key);
        if (!row.is_object())
            throw ValidationError(std::string("\"") + key + "\" entry for \"" + entity +
                                  "\" must be an object of group levels");
        for (const auto& [group, level] : row.items()) {
            check_declared(group, groups, "group", key);
            if (!level.is_number_integer())
                throw ValidationError(std::string("\"") + key + "\" level for (\"" +
                                      entity + "\", \"" + group +
                                      "\") must be an integer");
            result[entity][group] = level.get<int>();
        }
    }
    return result;
}

std::map<std::string, int> read_level_vector(const json& doc, const char* key,
                                             const std::vector<std::string>& entities,
                                             const char* entity_axis) {
    std::map<std::string, int> result;
    if (!doc.contains(key)) return result;
    const auto& node = doc.at(key);
    if (!node.is_object())
        throw ValidationError(std::string("\"") + key + "\" must be an object");
    for (const auto& [entity, level] : node.items()) {
        check_declared(entity, entities, entity_axis, key);
        if (!level.is_number_integer())
            throw ValidationError(std::string("\"") + key + "\" level for \"" + entity +
                                  "\" must be an integer");
        result[entity] = level.get<int>();
    }
    return result;
}

std::set<std::tuple<std::string, int, std::string>> read_triples(
    const json& doc, const char* key, const std::vector<std::string>& entities,
    const char* entity_axis, const std::vector<std::string>& groups) {
    std::set<std::tuple<std::string, int, std::string>> result;
    if (!doc.contains(key)) return result;
    const auto& node = doc.at(key);
    if (!node.is_array())
        throw ValidationError(std::string("\"") + key +
                              "\" must be an array of [name, level, group] triples");
    for (const auto& item : node) {
        if (!item.is_array() || item.size() != 3 || !item[0].is_string() ||
            !item[1].is_number_integer() || !item[2].is_string())
            throw ValidationError(std::string("\"") + key +
                                  "\" entries must be [name, level, group] triples");
        std::string entity = item[0].get<std::string>();
        std::string group = item[2].get<std::string>();
        check_declared(entity, entities, entity_axis, key);
        check_declared(group, groups, "group", key);
        result.emplace(std::move(entity), item[1].get<int>(), std::move(group));
    }
    return result;
}

void check_known_keys(const json& doc, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ValidationError("unknown key \"" + key + "\" in policy document");
    }
}

int checked_level(int value, int levels, int lowest, const std::string& where) {
    if (value < lowest || value > levels)
        throw ValidationError("level " + std::to_string(value) + " for " + where +
                              " outside [" + std::to_string(lowest) + ", " +
                              std::to_string(levels) + "]");
    return value;
}

}  // namespace

PolicyDocument parse_policy(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw_parse_error(text, e.byte > 0 ? e.byte - 1 : 0, e.what());
    }
    if (!doc.is_object()) throw ValidationError("policy document must be a JSON object");
    if (!doc.contains("model") || !doc.at("model").is_string())
        throw ValidationError("policy document must carry a string \"model\" tag");

    PolicyDocument result;
    result.model = doc.at("model").get<std::string>();
    if (result.model != "engl" && result.model != "enlg")
        throw ValidationError("unknown model tag \"" + result.model + "\"");

    if (!doc.contains("levels") || !doc.at("levels").is_number_integer())
        throw ValidationError("policy document must carry an integer \"levels\"");
    result.levels = doc.at("levels").get<int>();

    for (const char* key : {"users", "groups", "resources"}) {
        if (!doc.contains(key))
            throw ValidationError(std::string("policy document is missing \"") + key +
                                  "\"");
    }
    result.users = read_names(doc, "users");
    result.groups = read_names(doc, "groups");
    result.resources = read_names(doc, "resources");

    if (result.model == "engl") {
        check_known_keys(doc, {"model", "levels", "users", "groups", "resources",
                               "lug", "lrg"});
        result.lug = read_level_map(doc, "lug", result.users, "user", result.groups);
        result.lrg =
            read_level_map(doc, "lrg", result.resources, "resource", result.groups);
    } else {
        check_known_keys(doc, {"model", "levels", "users", "groups", "resources",
                               "lu", "lr", "ulg", "rlg"});
        result.lu = read_level_vector(doc, "lu", result.users, "user");
        result.lr = read_level_vector(doc, "lr", result.resources, "resource");
        result.ulg = read_triples(doc, "ulg", result.users, "user", result.groups);
        result.rlg =
            read_triples(doc, "rlg", result.resources, "resource", result.groups);
    }
    return result;
}

Policy validate_document(const PolicyDocument& doc) {
    if (doc.levels < 1) throw ValidationError("\"levels\" must be >= 1");

    std::vector<std::string> users = doc.users;
    std::vector<std::string> groups = doc.groups;
    std::vector<std::string> resources = doc.resources;
    std::sort(users.begin(), users.end());
    std::sort(groups.begin(), groups.end());
    std::sort(resources.begin(), resources.end());

    auto user_index = [&](const std::string& name) {
        return static_cast<int>(std::lower_bound(users.begin(), users.end(), name) -
                                users.begin());
    };
    auto group_index = [&](const std::string& name) {
        return static_cast<int>(std::lower_bound(groups.begin(), groups.end(), name) -
                                groups.begin());
    };
    auto resource_index = [&](const std::string& name) {
        return static_cast<int>(
            std::lower_bound(resources.begin(), resources.end(), name) -
            resources.begin());
    };

    if (doc.model == "engl") {
        EnglPolicy policy;
        policy.levels = doc.levels;
        policy.users = users;
        policy.groups = groups;
        policy.resources = resources;
        policy.lug.assign(users.size(), std::vector<int>(groups.size(), 0));
        policy.lrg.assign(resources.size(), std::vector<int>(groups.size(), 0));
        for (const auto& [user, row] : doc.lug)
            for (const auto& [group, level] : row)
                policy.lug[user_index(user)][group_index(group)] = checked_level(
                    level, doc.levels, 0, "lug(\"" + user + "\", \"" + group + "\")");
        for (const auto& [resource, row] : doc.lrg)
            for (const auto& [group, level] : row)
                policy.lrg[resource_index(resource)][group_index(group)] =
                    checked_level(level, doc.levels, 0,
                                  "lrg(\"" + resource + "\", \"" + group + "\")");
        policy.validate();
        return policy;
    }

    EnlgPolicy policy;
    policy.levels = doc.levels;
    policy.users = users;
    policy.groups = groups;
    policy.resources = resources;
    policy.lu.assign(users.size(), 0);
    policy.lr.assign(resources.size(), 0);
    for (const auto& name : doc.users) {
        auto it = doc.lu.find(name);
        if (it == doc.lu.end())
            throw ValidationError("missing \"lu\" entry for user \"" + name + "\"");
        policy.lu[user_index(name)] =
            checked_level(it->second, doc.levels, 1, "lu(\"" + name + "\")");
    }
    for (const auto& name : doc.resources) {
        auto it = doc.lr.find(name);
        if (it == doc.lr.end())
            throw ValidationError("missing \"lr\" entry for resource \"" + name + "\"");
        policy.lr[resource_index(name)] =
            checked_level(it->second, doc.levels, 1, "lr(\"" + name + "\")");
    }
    policy.ulg = LevelCube(static_cast<int>(users.size()), doc.levels,
                           static_cast<int>(groups.size()));
    policy.rlg = LevelCube(static_cast<int>(resources.size()), doc.levels,
                           static_cast<int>(groups.size()));
    for (const auto& [name, level, group] : doc.ulg) {
        checked_level(level, doc.levels, 1,
                      "ulg(\"" + name + "\", \"" + group + "\")");
        const int max = policy.lu[user_index(name)];
        if (level > max)
            throw EntitlementError("ulg membership for user \"" + name +
                                   "\" at level " + std::to_string(level) +
                                   " exceeds its maximum level " + std::to_string(max));
        policy.ulg.set(user_index(name) + 1, level, group_index(group) + 1);
    }
    for (const auto& [name, level, group] : doc.rlg) {
        checked_level(level, doc.levels, 1,
                      "rlg(\"" + name + "\", \"" + group + "\")");
        const int max = policy.lr[resource_index(name)];
        if (level > max)
            throw EntitlementError("rlg membership for resource \"" + name +
                                   "\" at level " + std::to_string(level) +
                                   " exceeds its maximum level " + std::to_string(max));
        policy.rlg.set(resource_index(name) + 1, level, group_index(group) + 1);
    }
    policy.validate();
    return policy;
}

namespace {

// Rebuild a policy with sorted catalogs so serialization is canonical even
// for hand-built values.
std::vector<int> canonical_order(const std::vector<std::string>& names) {
    std::vector<int> order(names.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return names[a] < names[b]; });
    return order;
}

EnglPolicy canonical(const EnglPolicy& p) {
    const auto user_order = canonical_order(p.users);
    const auto group_order = canonical_order(p.groups);
    const auto resource_order = canonical_order(p.resources);
    EnglPolicy out;
    out.levels = p.levels;
    for (int u : user_order) out.users.push_back(p.users[u]);
    for (int g : group_order) out.groups.push_back(p.groups[g]);
    for (int r : resource_order) out.resources.push_back(p.resources[r]);
    out.lug.assign(p.users.size(), std::vector<int>(p.groups.size(), 0));
    out.lrg.assign(p.resources.size(), std::vector<int>(p.groups.size(), 0));
    for (size_t i = 0; i < user_order.size(); ++i)
        for (size_t j = 0; j < group_order.size(); ++j)
            out.lug[i][j] = p.lug[user_order[i]][group_order[j]];
    for (size_t k = 0; k < resource_order.size(); ++k)
        for (size_t j = 0; j < group_order.size(); ++j)
            out.lrg[k][j] = p.lrg[resource_order[k]][group_order[j]];
    return out;
}

EnlgPolicy canonical(const EnlgPolicy& p) {
    const auto user_order = canonical_order(p.users);
    const auto group_order = canonical_order(p.groups);
    const auto resource_order = canonical_order(p.resources);
    EnlgPolicy out;
    out.levels = p.levels;
    for (int u : user_order) out.users.push_back(p.users[u]);
    for (int g : group_order) out.groups.push_back(p.groups[g]);
    for (int r : resource_order) out.resources.push_back(p.resources[r]);
    for (int u : user_order) out.lu.push_back(p.lu[u]);
    for (int r : resource_order) out.lr.push_back(p.lr[r]);
    out.ulg = LevelCube(p.user_count(), p.levels, p.group_count());
    out.rlg = LevelCube(p.resource_count(), p.levels, p.group_count());
    for (size_t i = 0; i < user_order.size(); ++i)
        for (int l = 1; l <= p.levels; ++l)
            for (size_t j = 0; j < group_order.size(); ++j)
                if (p.ulg.at(user_order[i] + 1, l, group_order[j] + 1))
                    out.ulg.set(static_cast<int>(i) + 1, l, static_cast<int>(j) + 1);
    for (size_t k = 0; k < resource_order.size(); ++k)
        for (int l = 1; l <= p.levels; ++l)
            for (size_t j = 0; j < group_order.size(); ++j)
                if (p.rlg.at(resource_order[k] + 1, l, group_order[j] + 1))
                    out.rlg.set(static_cast<int>(k) + 1, l, static_cast<int>(j) + 1);
    return out;
}

ordered_json sparse_level_map(const std::vector<std::string>& entities,
                              const std::vector<std::string>& groups,
                              const std::vector<std::vector<int>>& matrix) {
    ordered_json result = ordered_json::object();
    for (size_t row = 0; row < entities.size(); ++row) {
        ordered_json inner = ordered_json::object();
        for (size_t col = 0; col < groups.size(); ++col)
            if (matrix[row][col] > 0) inner[groups[col]] = matrix[row][col];
        if (!inner.empty()) result[entities[row]] = std::move(inner);
    }
    return result;
}

ordered_json triple_list(const std::vector<std::string>& entities,
                         const std::vector<std::string>& groups, int levels,
                         const LevelCube& cube) {
    ordered_json result = ordered_json::array();
    for (size_t row = 0; row < entities.size(); ++row)
        for (int l = 1; l <= levels; ++l)
            for (size_t col = 0; col < groups.size(); ++col)
                if (cube.at(static_cast<int>(row) + 1, l, static_cast<int>(col) + 1))
                    result.push_back(
                        ordered_json::array({entities[row], l, groups[col]}));
    return result;
}

}  // namespace

std::string serialize_policy(const Policy& policy) {
    ordered_json doc;
    if (const auto* engl = std::get_if<EnglPolicy>(&policy)) {
        const EnglPolicy p = canonical(*engl);
        doc["model"] = "engl";
        doc["levels"] = p.levels;
        doc["users"] = p.users;
        doc["groups"] = p.groups;
        doc["resources"] = p.resources;
        doc["lug"] = sparse_level_map(p.users, p.groups, p.lug);
        doc["lrg"] = sparse_level_map(p.resources, p.groups, p.lrg);
    } else {
        const EnlgPolicy p = canonical(std::get<EnlgPolicy>(policy));
        doc["model"] = "enlg";
        doc["levels"] = p.levels;
        doc["users"] = p.users;
        doc["groups"] = p.groups;
        doc["resources"] = p.resources;
        ordered_json lu = ordered_json::object();
        for (size_t i = 0; i < p.users.size(); ++i) lu[p.users[i]] = p.lu[i];
        ordered_json lr = ordered_json::object();
        for (size_t k = 0; k < p.resources.size(); ++k) lr[p.resources[k]] = p.lr[k];
        doc["lu"] = std::move(lu);
        doc["lr"] = std::move(lr);
        doc["ulg"] = triple_list(p.users, p.groups, p.levels, p.ulg);
        doc["rlg"] = triple_list(p.resources, p.groups, p.levels, p.rlg);
    }
    return doc.dump(2) + "\n";
}

Policy load_policy(const std::string& text) {
    return validate_document(parse_policy(text));
}

Policy load_policy_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open policy file \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_policy(buffer.str());
}

std::string model_tag(const Policy& policy) {
    return std::holds_alternative<EnglPolicy>(policy) ? "engl" : "enlg";
}

}  // namespace enetacl
