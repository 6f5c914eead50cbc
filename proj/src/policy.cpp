#include "enetacl/policy.hpp"

#include <algorithm>
#include <set>

#include "enetacl/errors.hpp"

namespace enetacl {

namespace {

void check_index(int value, int count, const char* axis) {
    if (value < 1 || value > count) {
        throw IndexError(std::string(axis) + " index " + std::to_string(value) +
                         " out of range [1, " + std::to_string(count) + "]");
    }
}

void check_no_duplicates(const std::vector<std::string>& names, const char* axis) {
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (!seen.insert(name).second) {
            throw ValidationError(std::string("duplicate ") + axis + " name \"" +
                                  name + "\"");
        }
    }
}

std::optional<int> find_name(const std::vector<std::string>& names,
                             const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<int>(it - names.begin()) + 1;
}

void check_matrix(const std::vector<std::vector<int>>& matrix, int rows, int cols,
                  int levels, const char* label) {
    if (static_cast<int>(matrix.size()) != rows) {
        throw ValidationError(std::string(label) + " matrix has " +
                              std::to_string(matrix.size()) + " rows, expected " +
                              std::to_string(rows));
    }
    for (const auto& row : matrix) {
        if (static_cast<int>(row.size()) != cols) {
            throw ValidationError(std::string(label) + " matrix row width " +
                                  std::to_string(row.size()) + ", expected " +
                                  std::to_string(cols));
        }
        for (int entry : row) {
            if (entry < 0 || entry > levels) {
                throw ValidationError(std::string(label) + " entry " +
                                      std::to_string(entry) + " outside [0, " +
                                      std::to_string(levels) + "]");
            }
        }
    }
}

}  // namespace

// --- EnglPolicy --------------------------------------------------------------

int EnglPolicy::lug_at(int user, int group) const {
    check_index(user, user_count(), "user");
    check_index(group, group_count(), "group");
    return lug[user - 1][group - 1];
}

int EnglPolicy::lrg_at(int resource, int group) const {
    check_index(resource, resource_count(), "resource");
    check_index(group, group_count(), "group");
    return lrg[resource - 1][group - 1];
}

std::optional<int> EnglPolicy::find_user(const std::string& name) const {
    return find_name(users, name);
}
std::optional<int> EnglPolicy::find_group(const std::string& name) const {
    return find_name(groups, name);
}
std::optional<int> EnglPolicy::find_resource(const std::string& name) const {
    return find_name(resources, name);
}

void EnglPolicy::validate() const {
    if (levels < 1) throw ValidationError("level count must be >= 1");
    if (users.empty()) throw ValidationError("user catalog is empty");
    if (groups.empty()) throw ValidationError("group catalog is empty");
    if (resources.empty()) throw ValidationError("resource catalog is empty");
    check_no_duplicates(users, "user");
    check_no_duplicates(groups, "group");
    check_no_duplicates(resources, "resource");
    check_matrix(lug, user_count(), group_count(), levels, "lug");
    check_matrix(lrg, resource_count(), group_count(), levels, "lrg");
}

// --- EnlgPolicy --------------------------------------------------------------

int EnlgPolicy::lu_at(int user) const {
    check_index(user, user_count(), "user");
    return lu[user - 1];
}

int EnlgPolicy::lr_at(int resource) const {
    check_index(resource, resource_count(), "resource");
    return lr[resource - 1];
}

bool EnlgPolicy::ulg_at(int user, int level, int group) const {
    check_index(user, user_count(), "user");
    check_index(level, levels, "level");
    check_index(group, group_count(), "group");
    return ulg.at(user, level, group);
}

bool EnlgPolicy::rlg_at(int resource, int level, int group) const {
    check_index(resource, resource_count(), "resource");
    check_index(level, levels, "level");
    check_index(group, group_count(), "group");
    return rlg.at(resource, level, group);
}

std::optional<int> EnlgPolicy::find_user(const std::string& name) const {
    return find_name(users, name);
}
std::optional<int> EnlgPolicy::find_group(const std::string& name) const {
    return find_name(groups, name);
}
std::optional<int> EnlgPolicy::find_resource(const std::string& name) const {
    return find_name(resources, name);
}

void EnlgPolicy::validate() const {
    if (levels < 1) throw ValidationError("level count must be >= 1");
    if (users.empty()) throw ValidationError("user catalog is empty");
    if (groups.empty()) throw ValidationError("group catalog is empty");
    if (resources.empty()) throw ValidationError("resource catalog is empty");
    check_no_duplicates(users, "user");
    check_no_duplicates(groups, "group");
    check_no_duplicates(resources, "resource");
    if (static_cast<int>(lu.size()) != user_count())
        throw ValidationError("lu vector length does not match user catalog");
    if (static_cast<int>(lr.size()) != resource_count())
        throw ValidationError("lr vector length does not match resource catalog");
    for (int value : lu) {
        if (value < 1 || value > levels)
            throw ValidationError("lu entry " + std::to_string(value) +
                                  " outside [1, " + std::to_string(levels) + "]");
    }
    for (int value : lr) {
        if (value < 1 || value > levels)
            throw ValidationError("lr entry " + std::to_string(value) +
                                  " outside [1, " + std::to_string(levels) + "]");
    }
    if (ulg.entities() != user_count() || ulg.levels() != levels ||
        ulg.groups() != group_count())
        throw ValidationError("ulg cube dimensions do not match catalogs");
    if (rlg.entities() != resource_count() || rlg.levels() != levels ||
        rlg.groups() != group_count())
        throw ValidationError("rlg cube dimensions do not match catalogs");
    for (int i = 1; i <= user_count(); ++i)
        for (int l = 1; l <= levels; ++l)
            for (int j = 1; j <= group_count(); ++j)
                if (ulg.at(i, l, j) && l > lu[i - 1])
                    throw EntitlementError(
                        "ulg membership for user \"" + users[i - 1] + "\" at level " +
                        std::to_string(l) + " exceeds its maximum level " +
                        std::to_string(lu[i - 1]));
    for (int k = 1; k <= resource_count(); ++k)
        for (int l = 1; l <= levels; ++l)
            for (int j = 1; j <= group_count(); ++j)
                if (rlg.at(k, l, j) && l > lr[k - 1])
                    throw EntitlementError(
                        "rlg membership for resource \"" + resources[k - 1] +
                        "\" at level " + std::to_string(l) +
                        " exceeds its maximum level " + std::to_string(lr[k - 1]));
}

// --- ENGL predicates ---------------------------------------------------------

bool engl_member_user(const EnglPolicy& policy, int user, int group) {
    return policy.lug_at(user, group) > 0;
}

bool engl_can_access(const EnglPolicy& policy, int user, int resource, int group) {
    const int user_level = policy.lug_at(user, group);
    const int resource_level = policy.lrg_at(resource, group);
    return user_level > 0 && resource_level > 0 && user_level >= resource_level;
}

bool engl_can_interact(const EnglPolicy& policy, int user0, int user1,
                       int resource, int group) {
    const int level0 = policy.lug_at(user0, group);
    const int level1 = policy.lug_at(user1, group);
    const int resource_level = policy.lrg_at(resource, group);
    return level0 > 0 && level1 > 0 && resource_level > 0 &&
           std::min(level0, level1) >= resource_level;
}

// --- ENLG predicates ---------------------------------------------------------

namespace {

// Witness scan shared by the ENLG predicates: groups ascending, levels
// ascending within [1, level_limit], requiring every cube in `user_rows` and
// the resource row to hold membership at the candidate point.
std::optional<AccessWitness> scan_witness(const EnlgPolicy& policy,
                                          const std::vector<int>& user_rows,
                                          int resource, int level_limit,
                                          int group_first, int group_last) {
    for (int j = group_first; j <= group_last; ++j) {
        for (int l = 1; l <= level_limit; ++l) {
            bool all_users = true;
            for (int i : user_rows) {
                if (!policy.ulg.at(i, l, j)) {
                    all_users = false;
                    break;
                }
            }
            if (all_users && policy.rlg.at(resource, l, j)) {
                return AccessWitness{l, j};
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<AccessWitness> enlg_can_access(const EnlgPolicy& policy, int user,
                                             int resource) {
    const int user_level = policy.lu_at(user);
    const int resource_level = policy.lr_at(resource);
    if (user_level < resource_level) return std::nullopt;
    return scan_witness(policy, {user}, resource, resource_level, 1,
                        policy.group_count());
}

std::optional<AccessWitness> enlg_can_access_in_group(
    const EnlgPolicy& policy, int user, int resource, int group,
    std::optional<SecurityLevel> level_cap) {
    const int user_level = policy.lu_at(user);
    const int resource_level = policy.lr_at(resource);
    check_index(group, policy.group_count(), "group");
    if (level_cap && (*level_cap < 1 || *level_cap > user_level)) {
        throw EntitlementError("level cap " + std::to_string(*level_cap) +
                               " outside the user's entitlement [1, " +
                               std::to_string(user_level) + "]");
    }
    if (user_level < resource_level) return std::nullopt;
    int limit = resource_level;
    if (level_cap) limit = std::min(limit, *level_cap);
    return scan_witness(policy, {user}, resource, limit, group, group);
}

std::optional<AccessWitness> enlg_can_interact(const EnlgPolicy& policy,
                                               int user0, int user1,
                                               int resource) {
    const int level0 = policy.lu_at(user0);
    const int level1 = policy.lu_at(user1);
    const int resource_level = policy.lr_at(resource);
    if (std::min(level0, level1) < resource_level) return std::nullopt;
    return scan_witness(policy, {user0, user1}, resource, resource_level, 1,
                        policy.group_count());
}

std::optional<AccessWitness> enlg_can_interact_in_group(const EnlgPolicy& policy,
                                                        int user0, int user1,
                                                        int resource, int group) {
    const int level0 = policy.lu_at(user0);
    const int level1 = policy.lu_at(user1);
    const int resource_level = policy.lr_at(resource);
    check_index(group, policy.group_count(), "group");
    if (std::min(level0, level1) < resource_level) return std::nullopt;
    return scan_witness(policy, {user0, user1}, resource, resource_level, group,
                        group);
}

// --- Listings ----------------------------------------------------------------

std::vector<GroupLevel> list_groups(const EnglPolicy& policy, int user) {
    check_index(user, policy.user_count(), "user");
    std::vector<GroupLevel> result;
    for (int j = 1; j <= policy.group_count(); ++j) {
        const int level = policy.lug[user - 1][j - 1];
        if (level > 0) result.push_back({j, level});
    }
    return result;
}

std::vector<GroupLevel> list_groups(const EnlgPolicy& policy, int user) {
    check_index(user, policy.user_count(), "user");
    std::vector<GroupLevel> result;
    for (int j = 1; j <= policy.group_count(); ++j) {
        int best = 0;
        for (int l = 1; l <= policy.levels; ++l) {
            if (policy.ulg.at(user, l, j)) best = l;
        }
        if (best > 0) result.push_back({j, best});
    }
    return result;
}

std::vector<GroupLevel> list_groups(const Policy& policy, int user) {
    return std::visit([&](const auto& p) { return list_groups(p, user); }, policy);
}

std::vector<int> list_resources(const EnglPolicy& policy, int user, int group,
                                std::optional<SecurityLevel> level_cap) {
    const int entitlement = policy.lug_at(user, group);
    if (level_cap && (*level_cap < 1 || *level_cap > entitlement)) {
        throw EntitlementError("level cap " + std::to_string(*level_cap) +
                               " outside the user's entitlement [1, " +
                               std::to_string(entitlement) + "]");
    }
    std::vector<int> result;
    for (int k = 1; k <= policy.resource_count(); ++k) {
        if (!engl_can_access(policy, user, k, group)) continue;
        if (level_cap && policy.lrg[k - 1][group - 1] > *level_cap) continue;
        result.push_back(k);
    }
    return result;
}

std::vector<int> list_resources(const EnlgPolicy& policy, int user, int group,
                                std::optional<SecurityLevel> level_cap) {
    check_index(user, policy.user_count(), "user");
    check_index(group, policy.group_count(), "group");
    std::vector<int> result;
    for (int k = 1; k <= policy.resource_count(); ++k) {
        if (enlg_can_access_in_group(policy, user, k, group, level_cap)) {
            result.push_back(k);
        }
    }
    return result;
}

std::vector<int> list_resources(const Policy& policy, int user, int group,
                                std::optional<SecurityLevel> level_cap) {
    return std::visit(
        [&](const auto& p) { return list_resources(p, user, group, level_cap); },
        policy);
}

// --- Shared helpers ----------------------------------------------------------

const std::vector<std::string>& policy_users(const Policy& policy) {
    return std::visit([](const auto& p) -> const std::vector<std::string>& {
        return p.users;
    }, policy);
}

const std::vector<std::string>& policy_groups(const Policy& policy) {
    return std::visit([](const auto& p) -> const std::vector<std::string>& {
        return p.groups;
    }, policy);
}

const std::vector<std::string>& policy_resources(const Policy& policy) {
    return std::visit([](const auto& p) -> const std::vector<std::string>& {
        return p.resources;
    }, policy);
}

int policy_levels(const Policy& policy) {
    return std::visit([](const auto& p) { return p.levels; }, policy);
}

}  // namespace enetacl
