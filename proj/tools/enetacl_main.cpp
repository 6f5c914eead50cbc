// enetacl - policy checks, listings, session simulation, verification, and
// audit inspection for the two group/level resource-distribution models.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "enetacl/audit.hpp"
#include "enetacl/enet.hpp"
#include "enetacl/errors.hpp"
#include "enetacl/policy.hpp"
#include "enetacl/policy_io.hpp"
#include "enetacl/verify.hpp"

namespace {

using namespace enetacl;

constexpr int kExitAllow = 0;
constexpr int kExitDeny = 1;
constexpr int kExitError = 2;

Policy load_checked(const std::string& path, const std::string& model_override) {
    Policy policy = load_policy_file(path);
    if (!model_override.empty() && model_tag(policy) != model_override)
        throw ValidationError("policy file is \"" + model_tag(policy) +
                              "\" but --model requested \"" + model_override + "\"");
    return policy;
}

int require_user(const Policy& policy, const std::string& name) {
    const auto index =
        std::visit([&](const auto& p) { return p.find_user(name); }, policy);
    if (!index) throw ValidationError("unknown user \"" + name + "\"");
    return *index;
}

int require_group(const Policy& policy, const std::string& name) {
    const auto index =
        std::visit([&](const auto& p) { return p.find_group(name); }, policy);
    if (!index) throw ValidationError("unknown group \"" + name + "\"");
    return *index;
}

int require_resource(const Policy& policy, const std::string& name) {
    const auto index =
        std::visit([&](const auto& p) { return p.find_resource(name); }, policy);
    if (!index) throw ValidationError("unknown resource \"" + name + "\"");
    return *index;
}

struct CheckArgs {
    std::string policy_path;
    std::string model;
    std::string user;
    std::string resource;
    std::string group;
    std::string second_user;
};

int run_check(const CheckArgs& args) {
    const Policy policy = load_checked(args.policy_path, args.model);
    const int user = require_user(policy, args.user);
    const int resource = require_resource(policy, args.resource);

    if (const auto* engl = std::get_if<EnglPolicy>(&policy)) {
        if (args.group.empty())
            throw ValidationError("the engl model requires --group");
        const int group = require_group(policy, args.group);
        bool allowed = false;
        if (args.second_user.empty()) {
            allowed = engl_can_access(*engl, user, resource, group);
        } else {
            const int other = require_user(policy, args.second_user);
            allowed = engl_can_interact(*engl, user, other, resource, group);
        }
        std::cout << (allowed ? "ALLOW" : "DENY") << '\n';
        return allowed ? kExitAllow : kExitDeny;
    }

    const auto& enlg = std::get<EnlgPolicy>(policy);
    std::optional<AccessWitness> witness;
    if (args.second_user.empty()) {
        witness = args.group.empty()
                      ? enlg_can_access(enlg, user, resource)
                      : enlg_can_access_in_group(enlg, user, resource,
                                                 require_group(policy, args.group));
    } else {
        const int other = require_user(policy, args.second_user);
        witness = args.group.empty()
                      ? enlg_can_interact(enlg, user, other, resource)
                      : enlg_can_interact_in_group(enlg, user, other, resource,
                                                   require_group(policy, args.group));
    }
    if (witness) {
        std::cout << "ALLOW witness level=" << witness->level << " group="
                  << enlg.groups[witness->group - 1] << '\n';
        return kExitAllow;
    }
    std::cout << "DENY\n";
    return kExitDeny;
}

struct ListArgs {
    std::string policy_path;
    std::string model;
    std::string user;
    std::string group;
    std::optional<int> cap;
};

int run_list(const ListArgs& args) {
    const Policy policy = load_checked(args.policy_path, args.model);
    const int user = require_user(policy, args.user);
    if (args.group.empty()) {
        for (const auto& entry : list_groups(policy, user))
            std::cout << policy_groups(policy)[entry.group - 1] << '\t' << entry.level
                      << '\n';
        return kExitAllow;
    }
    const int group = require_group(policy, args.group);
    for (int resource : list_resources(policy, user, group, args.cap))
        std::cout << policy_resources(policy)[resource - 1] << '\n';
    return kExitAllow;
}

struct SimulateArgs {
    std::string policy_path;
    std::string model;
    std::string user;
    std::vector<std::string> script;
    bool interactive = false;
    std::string audit_path;
    std::string session_id;
    std::optional<int64_t> clock_ms;
};

int run_simulate(const SimulateArgs& args) {
    const Policy policy = load_checked(args.policy_path, args.model);
    const ENet net = std::holds_alternative<EnglPolicy>(policy) ? build_engl_net()
                                                                : build_enlg_net();

    SessionOptions options;
    if (args.clock_ms)
        options.clock = [ms = *args.clock_ms] { return ms; };
    else
        options.clock = system_clock_ms();
    options.session_id = args.session_id.empty()
                             ? "s" + std::to_string(options.clock())
                             : args.session_id;
    std::optional<FileAuditLog> audit;
    if (!args.audit_path.empty()) {
        audit.emplace(args.audit_path);
        options.audit = &*audit;
    }

    Session session = inject(net, args.user, std::move(options));
    Trace trace;
    if (args.interactive) {
        InteractiveChoices choices(std::cin, std::cerr);
        trace = run(session, policy, choices);
    } else {
        ScriptedChoices choices(args.script);
        trace = run(session, policy, choices);
    }
    std::cout << render_trace(trace);
    return session.outcome() == Outcome::Used ? kExitAllow : kExitDeny;
}

struct VerifyArgs {
    std::string policy_path;
    std::string model;
    bool exhaustive_small = false;
};

int run_verify(const VerifyArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    VerifyReport report;
    if (args.exhaustive_small) {
        report = verify_exhaustive_small();
    } else {
        report = verify_policy(load_checked(args.policy_path, args.model));
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    std::cout << render_report(report);
    std::cout << "elapsed: " << elapsed.count() << " ms\n";
    return report.ok() ? kExitAllow : kExitDeny;
}

struct AuditArgs {
    std::string log_path;
    std::string session;
};

int run_audit(const AuditArgs& args) {
    for (const auto& record : replay_file(args.log_path)) {
        if (!args.session.empty() && record.session != args.session) continue;
        std::cout << format_record(record) << '\n';
    }
    return kExitAllow;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group/level access-control models with session simulation"};
    app.require_subcommand(1);

    CheckArgs check_args;
    auto* check = app.add_subcommand(
        "check", "Evaluate an access or interaction predicate");
    check->add_option("--policy", check_args.policy_path, "Policy file")
        ->required()
        ->check(CLI::ExistingFile);
    check->add_option("--model", check_args.model, "Expected model tag")
        ->check(CLI::IsMember({"engl", "enlg"}));
    check->add_option("user", check_args.user, "Acting user")->required();
    check->add_option("resource", check_args.resource, "Target resource")->required();
    check->add_option("--group", check_args.group,
                      "Group scope (required for engl)");
    check->add_option("--with", check_args.second_user,
                      "Second user: evaluate interaction instead of access");

    ListArgs list_args;
    auto* list = app.add_subcommand(
        "list", "List a user's groups, or the resources reachable in a group");
    list->add_option("--policy", list_args.policy_path, "Policy file")
        ->required()
        ->check(CLI::ExistingFile);
    list->add_option("--model", list_args.model, "Expected model tag")
        ->check(CLI::IsMember({"engl", "enlg"}));
    list->add_option("user", list_args.user, "Acting user")->required();
    list->add_option("--group", list_args.group, "List resources in this group");
    int cap_value = 0;
    auto* cap_opt = list->add_option("--cap", cap_value, "Upper level bound");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand(
        "simulate", "Run one session through the model's evaluation net");
    simulate->add_option("--policy", sim_args.policy_path, "Policy file")
        ->required()
        ->check(CLI::ExistingFile);
    simulate->add_option("--model", sim_args.model, "Expected model tag")
        ->check(CLI::IsMember({"engl", "enlg"}));
    simulate->add_option("user", sim_args.user, "Acting user")->required();
    auto* script_opt =
        simulate
            ->add_option("--script", sim_args.script,
                         "Comma-separated answers for the session's choice points")
            ->delimiter(',');
    auto* interactive_opt = simulate->add_flag("--interactive", sim_args.interactive,
                                               "Prompt on stderr, read stdin");
    interactive_opt->excludes(script_opt);
    simulate
        ->add_option("--audit", sim_args.audit_path,
                     "Audit log path (appended; default $ENETACL_AUDIT)")
        ->envname("ENETACL_AUDIT");
    simulate->add_option("--session", sim_args.session_id, "Session id");
    int64_t clock_value = 0;
    auto* clock_opt = simulate->add_option(
        "--clock-ms", clock_value, "Fix the clock to this Unix-ms value");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand(
        "verify", "Cross-check predicates and sessions against brute force");
    auto* verify_policy_opt =
        verify->add_option("--policy", verify_args.policy_path, "Policy file")
            ->check(CLI::ExistingFile);
    verify->add_option("--model", verify_args.model, "Expected model tag")
        ->check(CLI::IsMember({"engl", "enlg"}));
    auto* exhaustive_opt =
        verify->add_flag("--exhaustive-small", verify_args.exhaustive_small,
                         "Sweep every 2x2x2x2 engl policy");
    exhaustive_opt->excludes(verify_policy_opt);

    AuditArgs audit_args;
    auto* audit = app.add_subcommand("audit", "Replay an audit log");
    audit->add_option("log", audit_args.log_path, "Audit log path")
        ->required()
        ->check(CLI::ExistingFile);
    audit->add_option("--session", audit_args.session, "Only this session id");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }

    try {
        if (*check) return run_check(check_args);
        if (*list) {
            if (*cap_opt) list_args.cap = cap_value;
            return run_list(list_args);
        }
        if (*simulate) {
            if (*clock_opt) sim_args.clock_ms = clock_value;
            return run_simulate(sim_args);
        }
        if (*verify) {
            if (!verify_args.exhaustive_small && verify_args.policy_path.empty())
                throw ValidationError("verify needs --policy or --exhaustive-small");
            return run_verify(verify_args);
        }
        if (*audit) return run_audit(audit_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
