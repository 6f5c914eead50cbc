#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace enetacl {

// Security levels are integer ranks 1..q. Inside ENGL membership matrices the
// value 0 is a sentinel meaning "not a member"; it is never a valid level of
// an assigned entity or a running session.
using SecurityLevel = int;

// Concrete (level, group) pair demonstrating the ENLG existential condition.
// Both fields are 1-based indices into the owning policy's catalogs.
struct AccessWitness {
    SecurityLevel level = 0;
    int group = 0;

    bool operator==(const AccessWitness&) const = default;
};

// One entry of a group listing: group index plus the user's maximum level
// available there.
struct GroupLevel {
    int group = 0;
    SecurityLevel level = 0;

    bool operator==(const GroupLevel&) const = default;
};

// Boolean membership cube over (entity, level, group), all axes 1-based.
// Entries are stored for the full level axis 1..q; levels above an entity's
// maximum are structurally false.
class LevelCube {
public:
    LevelCube() = default;
    LevelCube(int entities, int levels, int groups)
        : entities_(entities), levels_(levels), groups_(groups),
          bits_(static_cast<size_t>(entities) * levels * groups, 0) {}

    bool at(int entity, int level, int group) const {
        return bits_[index(entity, level, group)] != 0;
    }
    void set(int entity, int level, int group, bool value = true) {
        bits_[index(entity, level, group)] = value ? 1 : 0;
    }

    int entities() const { return entities_; }
    int levels() const { return levels_; }
    int groups() const { return groups_; }

    bool operator==(const LevelCube&) const = default;

private:
    size_t index(int entity, int level, int group) const {
        return (static_cast<size_t>(entity - 1) * levels_ + (level - 1)) * groups_ +
               (group - 1);
    }

    int entities_ = 0;
    int levels_ = 0;
    int groups_ = 0;
    std::vector<uint8_t> bits_;
};

// Groups-then-levels model: each user and resource carries a per-group
// maximum level; 0 marks non-membership.
struct EnglPolicy {
    int levels = 0;  // q
    std::vector<std::string> users;
    std::vector<std::string> groups;
    std::vector<std::string> resources;
    // lug[i-1][j-1]: user i's maximum level in group j, 0 if not a member.
    std::vector<std::vector<int>> lug;
    // lrg[k-1][j-1]: resource k's level in group j, 0 if not a member.
    std::vector<std::vector<int>> lrg;

    int user_count() const { return static_cast<int>(users.size()); }
    int group_count() const { return static_cast<int>(groups.size()); }
    int resource_count() const { return static_cast<int>(resources.size()); }

    int lug_at(int user, int group) const;
    int lrg_at(int resource, int group) const;

    std::optional<int> find_user(const std::string& name) const;
    std::optional<int> find_group(const std::string& name) const;
    std::optional<int> find_resource(const std::string& name) const;

    // Throws ValidationError unless every invariant holds: q >= 1, matrix
    // shapes match the catalogs, entries in [0, q], no duplicate names.
    void validate() const;

    bool operator==(const EnglPolicy&) const = default;
};

// Levels-then-groups model: each user/resource carries one global maximum
// level plus boolean per-(level, group) memberships.
struct EnlgPolicy {
    int levels = 0;  // q
    std::vector<std::string> users;
    std::vector<std::string> groups;
    std::vector<std::string> resources;
    std::vector<int> lu;  // lu[i-1]: user i's maximum level, in [1, q]
    std::vector<int> lr;  // lr[k-1]: resource k's maximum level, in [1, q]
    LevelCube ulg;        // user memberships over (user, level, group)
    LevelCube rlg;        // resource memberships over (resource, level, group)

    int user_count() const { return static_cast<int>(users.size()); }
    int group_count() const { return static_cast<int>(groups.size()); }
    int resource_count() const { return static_cast<int>(resources.size()); }

    int lu_at(int user) const;
    int lr_at(int resource) const;
    bool ulg_at(int user, int level, int group) const;
    bool rlg_at(int resource, int level, int group) const;

    std::optional<int> find_user(const std::string& name) const;
    std::optional<int> find_group(const std::string& name) const;
    std::optional<int> find_resource(const std::string& name) const;

    // Throws ValidationError unless: q >= 1, lu/lr entries in [1, q], cube
    // dimensions match, memberships only at levels within lu/lr, no
    // duplicate names.
    void validate() const;

    bool operator==(const EnlgPolicy&) const = default;
};

using Policy = std::variant<EnglPolicy, EnlgPolicy>;

// --- Membership and access predicates -------------------------------------
//
// All indices are 1-based; out-of-range indices raise IndexError naming the
// offending axis. Policies are immutable after construction and every
// predicate below is a pure function of (policy, arguments).

// True iff user i belongs to group j (positive matrix entry).
bool engl_member_user(const EnglPolicy& policy, int user, int group);

// True iff user and resource are both members of the group and the user's
// level there dominates the resource's level.
bool engl_can_access(const EnglPolicy& policy, int user, int resource, int group);

// True iff both users and the resource are members of the group and the
// lower of the two user levels dominates the resource's level. Symmetric in
// the two users; with user0 == user1 it collapses to engl_can_access.
bool engl_can_interact(const EnglPolicy& policy, int user0, int user1,
                       int resource, int group);

// Searches for a (level, group) witness making the resource reachable by the
// user: the user's maximum level dominates the resource's, and both are
// members of the witness group at the witness level, which lies within
// [1, lr(resource)]. Scans groups ascending, then levels ascending, so the
// returned witness is the smallest (group, level) pair.
std::optional<AccessWitness> enlg_can_access(const EnlgPolicy& policy, int user,
                                             int resource);

// Same witness search constrained to one group; optionally capped at
// level_cap (witness level <= cap). Used by listings and session resolvers.
std::optional<AccessWitness> enlg_can_access_in_group(
    const EnlgPolicy& policy, int user, int resource, int group,
    std::optional<SecurityLevel> level_cap = std::nullopt);

// Two-user interaction: min of the users' maximum levels must dominate the
// resource's level, and some (level <= lr(resource), group) must hold all
// three memberships simultaneously. Witness tie-break as enlg_can_access.
std::optional<AccessWitness> enlg_can_interact(const EnlgPolicy& policy,
                                               int user0, int user1,
                                               int resource);

// Interaction witness restricted to one group.
std::optional<AccessWitness> enlg_can_interact_in_group(const EnlgPolicy& policy,
                                                        int user0, int user1,
                                                        int resource, int group);

// --- Listings ---------------------------------------------------------------

// Groups the user belongs to, each with the user's maximum level there,
// ordered by group index. ENGL: positive lug entries. ENLG: groups with any
// membership level, paired with the largest such level.
std::vector<GroupLevel> list_groups(const EnglPolicy& policy, int user);
std::vector<GroupLevel> list_groups(const EnlgPolicy& policy, int user);
std::vector<GroupLevel> list_groups(const Policy& policy, int user);

// Resources the user can reach inside one group, ordered by resource index.
// With level_cap, only resources whose level (ENGL) or witness level (ENLG)
// does not exceed the cap. A cap above the user's entitlement in that scope
// raises EntitlementError.
std::vector<int> list_resources(const EnglPolicy& policy, int user, int group,
                                std::optional<SecurityLevel> level_cap = std::nullopt);
std::vector<int> list_resources(const EnlgPolicy& policy, int user, int group,
                                std::optional<SecurityLevel> level_cap = std::nullopt);
std::vector<int> list_resources(const Policy& policy, int user, int group,
                                std::optional<SecurityLevel> level_cap = std::nullopt);

// --- Shared helpers ---------------------------------------------------------

const std::vector<std::string>& policy_users(const Policy& policy);
const std::vector<std::string>& policy_groups(const Policy& policy);
const std::vector<std::string>& policy_resources(const Policy& policy);
int policy_levels(const Policy& policy);

}  // namespace enetacl
