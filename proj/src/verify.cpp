#include "enetacl/verify.hpp"

#include <algorithm>
#include <sstream>

#include "enetacl/audit.hpp"
#include "enetacl/enet.hpp"
#include "enetacl/errors.hpp"

namespace enetacl {

namespace {

// Naive re-evaluations of the model definitions, kept deliberately separate
// from the library predicates they are checked against.

bool direct_engl_access(const EnglPolicy& p, int i, int k, int j) {
    const int ul = p.lug[i - 1][j - 1];
    const int rl = p.lrg[k - 1][j - 1];
    return ul >= 1 && rl >= 1 && ul >= rl;
}

bool direct_engl_interact(const EnglPolicy& p, int i0, int i1, int k, int j) {
    const int a = p.lug[i0 - 1][j - 1];
    const int b = p.lug[i1 - 1][j - 1];
    const int rl = p.lrg[k - 1][j - 1];
    return a >= 1 && b >= 1 && rl >= 1 && std::min(a, b) >= rl;
}

bool direct_enlg_access(const EnlgPolicy& p, int i, int k) {
    if (p.lu[i - 1] < p.lr[k - 1]) return false;
    for (int l = 1; l <= p.lr[k - 1]; ++l)
        for (int j = 1; j <= p.group_count(); ++j)
            if (p.ulg.at(i, l, j) && p.rlg.at(k, l, j)) return true;
    return false;
}

bool direct_enlg_access_in_group(const EnlgPolicy& p, int i, int k, int j) {
    if (p.lu[i - 1] < p.lr[k - 1]) return false;
    for (int l = 1; l <= p.lr[k - 1]; ++l)
        if (p.ulg.at(i, l, j) && p.rlg.at(k, l, j)) return true;
    return false;
}

bool direct_enlg_interact(const EnlgPolicy& p, int i0, int i1, int k) {
    if (std::min(p.lu[i0 - 1], p.lu[i1 - 1]) < p.lr[k - 1]) return false;
    for (int l = 1; l <= p.lr[k - 1]; ++l)
        for (int j = 1; j <= p.group_count(); ++j)
            if (p.ulg.at(i0, l, j) && p.ulg.at(i1, l, j) && p.rlg.at(k, l, j))
                return true;
    return false;
}

void note(VerifyReport& report, const std::string& what) {
    ++report.discrepancies;
    if (report.first_discrepancy.empty()) report.first_discrepancy = what;
}

std::string tuple_tag(std::initializer_list<int> values) {
    std::string out = "(";
    bool first = true;
    for (int v : values) {
        if (!first) out += ", ";
        out += std::to_string(v);
        first = false;
    }
    return out + ")";
}

bool trace_used_resource(const Trace& trace) {
    return std::any_of(trace.begin(), trace.end(), [](const Firing& f) {
        return f.label == std::string("UseResource");
    });
}

// One scripted session per (user, group, resource); returns true when the
// session behaved consistently with `granted`.
bool session_agrees(const ENet& net, const Policy& policy, const std::string& user,
                    const std::string& group, const std::string& resource,
                    bool granted, std::string& why) {
    std::vector<std::string> answers;
    if (net.model == "engl")
        answers = {group, "max", resource};
    else
        answers = {"max", "continue", group, resource};
    ScriptedChoices choices(std::move(answers));
    MemoryAuditLog audit;
    SessionOptions options;
    options.session_id = "verify";
    options.clock = [] { return int64_t{0}; };
    options.audit = &audit;
    Session session = inject(net, user, options);
    const Trace& trace = run(session, policy, choices);

    const bool used = trace_used_resource(trace);
    if (used != granted) {
        why = used ? "session used a resource the predicate denies"
                   : "session failed to use a resource the predicate grants";
        return false;
    }
    if (audit.records().size() != 1) {
        why = "session left " + std::to_string(audit.records().size()) +
              " audit records, expected exactly 1";
        return false;
    }
    const std::string& outcome = audit.records().front().outcome;
    if (granted && outcome != "used") {
        why = "granted session logged outcome \"" + outcome + "\"";
        return false;
    }
    if (!granted && outcome != "denied") {
        why = "denied session logged outcome \"" + outcome + "\"";
        return false;
    }
    return true;
}

void verify_sessions(VerifyReport& report, const Policy& policy) {
    const ENet net = std::holds_alternative<EnglPolicy>(policy) ? build_engl_net()
                                                                : build_enlg_net();
    const auto& users = policy_users(policy);
    const auto& groups = policy_groups(policy);
    const auto& resources = policy_resources(policy);
    for (size_t i = 0; i < users.size(); ++i)
        for (size_t j = 0; j < groups.size(); ++j)
            for (size_t k = 0; k < resources.size(); ++k) {
                bool granted = false;
                if (const auto* engl = std::get_if<EnglPolicy>(&policy)) {
                    granted = direct_engl_access(*engl, static_cast<int>(i) + 1,
                                                 static_cast<int>(k) + 1,
                                                 static_cast<int>(j) + 1);
                } else {
                    granted = direct_enlg_access_in_group(
                        std::get<EnlgPolicy>(policy), static_cast<int>(i) + 1,
                        static_cast<int>(k) + 1, static_cast<int>(j) + 1);
                }
                std::string why;
                ++report.session_checks;
                if (!session_agrees(net, policy, users[i], groups[j], resources[k],
                                    granted, why)) {
                    note(report, "session (" + users[i] + ", " + groups[j] + ", " +
                                     resources[k] + "): " + why);
                }
            }
}

void verify_engl_predicates(VerifyReport& report, const EnglPolicy& p,
                            const EnglAccessFn& access,
                            const EnglInteractFn& interact) {
    for (int i = 1; i <= p.user_count(); ++i)
        for (int k = 1; k <= p.resource_count(); ++k)
            for (int j = 1; j <= p.group_count(); ++j) {
                ++report.access_checks;
                if (access(p, i, k, j) != direct_engl_access(p, i, k, j))
                    note(report, "engl access mismatch at " + tuple_tag({i, k, j}));
                for (int i1 = 1; i1 <= p.user_count(); ++i1) {
                    ++report.interact_checks;
                    if (interact(p, i, i1, k, j) !=
                        direct_engl_interact(p, i, i1, k, j))
                        note(report,
                             "engl interact mismatch at " + tuple_tag({i, i1, k, j}));
                }
            }
}

void verify_engl_predicates(VerifyReport& report, const EnglPolicy& p) {
    verify_engl_predicates(report, p, engl_can_access, engl_can_interact);
}

void verify_enlg_predicates(VerifyReport& report, const EnlgPolicy& p) {
    for (int i = 1; i <= p.user_count(); ++i)
        for (int k = 1; k <= p.resource_count(); ++k) {
            ++report.access_checks;
            const auto witness = enlg_can_access(p, i, k);
            if (witness.has_value() != direct_enlg_access(p, i, k)) {
                note(report, "enlg access mismatch at " + tuple_tag({i, k}));
            } else if (witness) {
                if (witness->level > p.lr[k - 1] ||
                    !p.ulg.at(i, witness->level, witness->group) ||
                    !p.rlg.at(k, witness->level, witness->group))
                    note(report, "enlg witness invalid at " + tuple_tag({i, k}));
            }
            for (int i1 = 1; i1 <= p.user_count(); ++i1) {
                ++report.interact_checks;
                const auto w = enlg_can_interact(p, i, i1, k);
                if (w.has_value() != direct_enlg_interact(p, i, i1, k)) {
                    note(report, "enlg interact mismatch at " + tuple_tag({i, i1, k}));
                } else if (w) {
                    if (w->level > p.lr[k - 1] || !p.ulg.at(i, w->level, w->group) ||
                        !p.ulg.at(i1, w->level, w->group) ||
                        !p.rlg.at(k, w->level, w->group))
                        note(report,
                             "enlg interact witness invalid at " + tuple_tag({i, i1, k}));
                }
            }
        }
}

}  // namespace

VerifyReport verify_policy(const Policy& policy) {
    VerifyReport report;
    report.policies = 1;
    if (const auto* engl = std::get_if<EnglPolicy>(&policy))
        verify_engl_predicates(report, *engl);
    else
        verify_enlg_predicates(report, std::get<EnlgPolicy>(policy));
    verify_sessions(report, policy);
    return report;
}

VerifyReport verify_exhaustive_small() {
    VerifyReport report;
    EnglPolicy p;
    p.levels = 2;
    p.users = {"u1", "u2"};
    p.groups = {"g1", "g2"};
    p.resources = {"r1", "r2"};
    p.lug.assign(2, std::vector<int>(2, 0));
    p.lrg.assign(2, std::vector<int>(2, 0));

    for (int index = 0; index < 6561; ++index) {
        int rest = index;
        for (auto* matrix : {&p.lug, &p.lrg})
            for (int row = 0; row < 2; ++row)
                for (int col = 0; col < 2; ++col) {
                    (*matrix)[row][col] = rest % 3;
                    rest /= 3;
                }
        ++report.policies;
        verify_engl_predicates(report, p);

        for (int i = 1; i <= 2; ++i)
            for (int i1 = 1; i1 <= 2; ++i1)
                for (int k = 1; k <= 2; ++k)
                    for (int j = 1; j <= 2; ++j) {
                        if (engl_can_interact(p, i, i1, k, j) !=
                            engl_can_interact(p, i1, i, k, j))
                            note(report, "symmetry violation at " +
                                             tuple_tag({index, i, i1, k, j}));
                        if (engl_can_interact(p, i, i1, k, j) !=
                            (engl_can_access(p, i, k, j) &&
                             engl_can_access(p, i1, k, j)))
                            note(report, "pairwise-access violation at " +
                                             tuple_tag({index, i, i1, k, j}));
                        if (i == i1 && engl_can_interact(p, i, i, k, j) !=
                                           engl_can_access(p, i, k, j))
                            note(report, "self-collapse violation at " +
                                             tuple_tag({index, i, k, j}));
                        if ((p.lug[i - 1][j - 1] == 0 || p.lrg[k - 1][j - 1] == 0) &&
                            engl_can_access(p, i, k, j))
                            note(report, "deny-by-default violation at " +
                                             tuple_tag({index, i, k, j}));
                    }

        // Single-entry monotonicity: raising one membership level never
        // revokes a grant.
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) {
                if (p.lug[i - 1][j - 1] >= p.levels) continue;
                EnglPolicy bumped = p;
                bumped.lug[i - 1][j - 1]++;
                for (int u0 = 1; u0 <= 2; ++u0)
                    for (int u1 = 1; u1 <= 2; ++u1)
                        for (int k = 1; k <= 2; ++k)
                            for (int g = 1; g <= 2; ++g)
                                if (engl_can_interact(p, u0, u1, k, g) &&
                                    !engl_can_interact(bumped, u0, u1, k, g))
                                    note(report, "monotonicity violation at " +
                                                     tuple_tag({index, i, j}));
            }
    }
    return report;
}

VerifyReport verify_engl_against(const EnglPolicy& policy, const EnglAccessFn& access,
                                 const EnglInteractFn& interact) {
    VerifyReport report;
    report.policies = 1;
    verify_engl_predicates(report, policy, access, interact);
    return report;
}

std::string render_report(const VerifyReport& report) {
    std::ostringstream out;
    out << "policies checked: " << report.policies << '\n'
        << "access checks: " << report.access_checks << '\n'
        << "interaction checks: " << report.interact_checks << '\n'
        << "session checks: " << report.session_checks << '\n'
        << "discrepancies: " << report.discrepancies << '\n';
    if (!report.first_discrepancy.empty())
        out << "first discrepancy: " << report.first_discrepancy << '\n';
    return out.str();
}

}  // namespace enetacl
