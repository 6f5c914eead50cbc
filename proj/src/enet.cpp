#include "enetacl/enet.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "enetacl/errors.hpp"

namespace enetacl {

const char* kind_label(TransitionKind kind) {
    switch (kind) {
        case TransitionKind::Ident: return "Ident";
        case TransitionKind::CheckAuthorities: return "CheckAuthorities";
        case TransitionKind::ListGroups: return "ListGroups";
        case TransitionKind::SelectGroup: return "SelectGroup";
        case TransitionKind::IdentLevel: return "IdentLevel";
        case TransitionKind::ListResources: return "ListResources";
        case TransitionKind::SelectResource: return "SelectResource";
        case TransitionKind::UseResource: return "UseResource";
        case TransitionKind::LogFile: return "LogFile";
        case TransitionKind::Quit: return "Quit";
    }
    return "?";
}

const char* outcome_name(Outcome outcome) {
    switch (outcome) {
        case Outcome::Pending: return "pending";
        case Outcome::Denied: return "denied";
        case Outcome::Used: return "used";
        case Outcome::Quit: return "quit";
    }
    return "?";
}

std::vector<const Transition*> ENet::transitions_from(const std::string& place) const {
    std::vector<const Transition*> result;
    for (const auto& t : transitions)
        if (t.input == place) result.push_back(&t);
    return result;
}

void ENet::validate_structure() const {
    const std::set<std::string> place_set(places.begin(), places.end());
    auto require_place = [&](const std::string& name, const std::string& where) {
        if (!place_set.count(name))
            throw StructuralError("place \"" + name + "\" referenced by " + where +
                                  " is not in B");
    };
    for (const auto& p : peripheral) require_place(p, "Bp");
    for (const auto& p : permissive) require_place(p, "Br");
    require_place(entry, "the entry");
    if (std::find(peripheral.begin(), peripheral.end(), entry) == peripheral.end())
        throw StructuralError("entry place \"" + entry + "\" is not peripheral");

    std::set<std::string> names;
    std::map<std::string, int> permissive_refs;
    for (const auto& t : transitions) {
        if (!names.insert(t.name).second)
            throw StructuralError("duplicate transition name \"" + t.name + "\"");
        require_place(t.input, "transition " + t.name);
        for (const auto& out : t.outputs) require_place(out, "transition " + t.name);
        if (!t.permissive.empty()) {
            if (std::find(permissive.begin(), permissive.end(), t.permissive) ==
                permissive.end())
                throw StructuralError("transition " + t.name +
                                      " names non-permissive place \"" + t.permissive +
                                      "\"");
            permissive_refs[t.permissive]++;
        }
    }
    for (const auto& p : permissive) {
        if (permissive_refs[p] != 1)
            throw StructuralError("permissive place \"" + p + "\" must be bound to " +
                                  "exactly one transition, found " +
                                  std::to_string(permissive_refs[p]));
    }
}

namespace {

ENet build_net(const std::string& model, TransitionKind t3, TransitionKind t5,
               TransitionKind t6) {
    ENet net;
    net.model = model;
    net.places = {"bp1", "br1", "br2", "b1", "b2", "b3", "b4", "b5",
                  "b6",  "b7",  "b8",  "b9"};
    net.peripheral = {"bp1"};
    net.permissive = {"br1", "br2"};
    net.entry = "bp1";
    net.transitions = {
        {"t1", TransitionKind::Ident, "bp1", {"b1"}, ""},
        {"t2", TransitionKind::CheckAuthorities, "b1", {"b2", "b9"}, "br1"},
        {"t3", t3, "b2", {"b3"}, ""},
        {"t4", TransitionKind::Quit, "b3", {}, ""},
        {"t5", t5, "b3", {"b4"}, ""},
        {"t6", t6, "b4", {"b5"}, ""},
        {"t7", TransitionKind::ListResources, "b5", {"b6"}, ""},
        {"t8", TransitionKind::SelectResource, "b6", {"b7", "b9"}, "br2"},
        {"t9", TransitionKind::UseResource, "b7", {"b8"}, ""},
        {"t10", TransitionKind::LogFile, "b8", {"b9"}, ""},
        {"t11", TransitionKind::Quit, "b9", {}, ""},
    };
    net.validate_structure();
    return net;
}

}  // namespace

ENet build_engl_net() {
    return build_net("engl", TransitionKind::ListGroups, TransitionKind::SelectGroup,
                     TransitionKind::IdentLevel);
}

ENet build_enlg_net() {
    return build_net("enlg", TransitionKind::IdentLevel, TransitionKind::ListGroups,
                     TransitionKind::SelectGroup);
}

std::vector<std::string> granted_path(const ENet& net) {
    std::vector<std::string> result;
    std::string place = net.entry;
    while (true) {
        const auto candidates = net.transitions_from(place);
        if (candidates.empty()) break;
        const Transition* chosen = candidates[0];
        for (const auto* candidate : candidates)
            if (candidate->kind != TransitionKind::Quit) chosen = candidate;
        result.push_back(chosen->name + ":" + kind_label(chosen->kind));
        if (chosen->outputs.empty()) break;
        place = chosen->outputs[0];
    }
    return result;
}

std::string render_trace(const Trace& trace) {
    std::ostringstream out;
    for (size_t i = 0; i < trace.size(); ++i) {
        const Firing& firing = trace[i];
        out << (i + 1) << '\t' << firing.transition << ':' << firing.label << '\t'
            << firing.from << '\t' << firing.to << '\t'
            << outcome_name(firing.kernel.outcome) << '\n';
    }
    return out.str();
}

// --- Choice providers ----------------------------------------------------------

std::string ScriptedChoices::next(const Prompt& prompt) {
    if (cursor_ >= answers_.size())
        throw ScriptUnderrunError("script exhausted after " +
                                  std::to_string(answers_.size()) +
                                  " answers; next prompt was: " + prompt.question);
    return answers_[cursor_++];
}

std::string InteractiveChoices::next(const Prompt& prompt) {
    out_ << prompt.question;
    if (!prompt.options.empty()) {
        out_ << " [";
        for (size_t i = 0; i < prompt.options.size(); ++i) {
            if (i) out_ << ", ";
            out_ << prompt.options[i];
        }
        out_ << "]";
    }
    out_ << ": ";
    out_.flush();
    std::string line;
    if (!std::getline(in_, line))
        throw ScriptUnderrunError("interactive input exhausted at prompt: " +
                                  prompt.question);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = line.find_last_not_of(" \t\r");
    return line.substr(first, last - first + 1);
}

// --- Session -----------------------------------------------------------------

Session::Session(const ENet& net, const std::string& user, SessionOptions options)
    : net_(&net) {
    if (net.session_active)
        throw BusyNetError("entry place " + net.entry +
                           " is already occupied by an active session");
    net.session_active = true;
    kernel_.session = options.session_id.empty() ? "s1" : options.session_id;
    kernel_.user = user;
    clock_ = options.clock ? std::move(options.clock) : system_clock_ms();
    audit_ = options.audit;
    kernel_place_ = net.entry;
    marking_[net.entry] = 1;
}

Session::Session(Session&& other) noexcept
    : net_(other.net_),
      kernel_(std::move(other.kernel_)),
      marking_(std::move(other.marking_)),
      kernel_place_(std::move(other.kernel_place_)),
      trace_(std::move(other.trace_)),
      complete_(other.complete_),
      clock_(std::move(other.clock_)),
      audit_(other.audit_),
      group_listing_(std::move(other.group_listing_)),
      resource_listing_(std::move(other.resource_listing_)),
      pending_answer_(std::move(other.pending_answer_)) {
    other.net_ = nullptr;
}

Session::~Session() { release(); }

void Session::release() {
    if (net_) {
        net_->session_active = false;
        net_ = nullptr;
    }
}

Session inject(const ENet& net, const std::string& user, SessionOptions options) {
    return Session(net, user, std::move(options));
}

namespace {

int resolved_user(const Policy& policy, const std::string& name) {
    const auto index = std::visit(
        [&](const auto& p) { return p.find_user(name); }, policy);
    if (!index)
        throw StructuralError("user \"" + name +
                              "\" vanished from the catalog mid-session");
    return *index;
}

std::optional<int> lookup_group(const Policy& policy, const std::string& name) {
    return std::visit([&](const auto& p) { return p.find_group(name); }, policy);
}

std::optional<int> lookup_resource(const Policy& policy, const std::string& name) {
    return std::visit([&](const auto& p) { return p.find_resource(name); }, policy);
}

std::vector<std::string> level_options(int entitlement) {
    std::vector<std::string> options;
    for (int l = 1; l <= entitlement; ++l) options.push_back(std::to_string(l));
    options.push_back("max");
    return options;
}

int parse_level_answer(const std::string& answer, int entitlement) {
    if (answer == "max") return entitlement;
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(answer.data(), answer.data() + answer.size(), value);
    if (ec != std::errc() || ptr != answer.data() + answer.size())
        throw ChoiceError("level \"" + answer + "\" is not an integer or 'max'");
    if (value < 1 || value > entitlement)
        throw ChoiceError("level " + std::to_string(value) +
                          " outside the entitlement [1, " +
                          std::to_string(entitlement) + "]");
    return value;
}

}  // namespace

Firing step(Session& session, const Policy& policy, ChoiceProvider& choices) {
    if (session.complete_)
        throw Error("session " + session.id() + " is complete; nothing to fire");
    const ENet& net = *session.net_;
    const bool engl = std::holds_alternative<EnglPolicy>(policy);
    if ((net.model == "engl") != engl)
        throw ValidationError("policy model does not match the " + net.model + " net");

    Kernel& kernel = session.kernel_;
    const std::string from = session.kernel_place_;
    const auto candidates = net.transitions_from(from);
    if (candidates.empty())
        throw StructuralError("kernel stranded at place " + from +
                              " with no outgoing transition");

    // Resolve the quit-or-proceed conflict: the only place with two outgoing
    // transitions is the one guarded by the early Quit.
    const Transition* chosen = nullptr;
    if (candidates.size() == 1) {
        chosen = candidates[0];
    } else if (candidates.size() == 2) {
        const Transition* quit = nullptr;
        const Transition* proceed = nullptr;
        for (const auto* candidate : candidates) {
            if (candidate->kind == TransitionKind::Quit)
                quit = candidate;
            else
                proceed = candidate;
        }
        if (!quit || !proceed)
            throw StructuralError("unresolvable conflict at place " + from);
        if (proceed->kind == TransitionKind::SelectGroup) {
            // The group answer doubles as the exit signal.
            std::vector<std::string> options;
            for (const auto& entry : session.group_listing_)
                options.push_back(policy_groups(policy)[entry.group - 1]);
            options.push_back("quit");
            const std::string answer = choices.next(
                {PromptKind::Group, "group to enter (or 'quit')", std::move(options)});
            if (answer == "quit") {
                chosen = quit;
            } else {
                session.pending_answer_ = answer;
                chosen = proceed;
            }
        } else {
            const std::string answer = choices.next(
                {PromptKind::Continue, "continue to the group listing?",
                 {"continue", "quit"}});
            if (answer == "quit")
                chosen = quit;
            else if (answer == "continue")
                chosen = proceed;
            else
                throw ChoiceError("answer \"" + answer +
                                  "\" is neither 'continue' nor 'quit'");
        }
    } else {
        throw StructuralError(std::to_string(candidates.size()) +
                              " transitions enabled at place " + from);
    }

    const Transition& transition = *chosen;
    size_t out_index = 0;
    std::optional<int> attempted_resource;
    bool emit = false;

    switch (transition.kind) {
        case TransitionKind::Ident:
            break;

        case TransitionKind::CheckAuthorities: {
            const auto index = std::visit(
                [&](const auto& p) { return p.find_user(kernel.user); }, policy);
            const bool granted = index && !list_groups(policy, *index).empty();
            if (granted) {
                kernel.authorized = true;
            } else {
                kernel.outcome = Outcome::Denied;
                emit = true;
                out_index = 1;
            }
            break;
        }

        case TransitionKind::ListGroups:
            session.group_listing_ =
                list_groups(policy, resolved_user(policy, kernel.user));
            break;

        case TransitionKind::SelectGroup: {
            std::string answer;
            if (session.pending_answer_) {
                answer = *session.pending_answer_;
                session.pending_answer_.reset();
            } else {
                std::vector<std::string> options;
                for (const auto& entry : session.group_listing_)
                    options.push_back(policy_groups(policy)[entry.group - 1]);
                answer = choices.next(
                    {PromptKind::Group, "group to enter", std::move(options)});
            }
            const auto group = lookup_group(policy, answer);
            if (!group) throw ChoiceError("unknown group \"" + answer + "\"");
            kernel.group = *group;
            break;
        }

        case TransitionKind::IdentLevel: {
            const int user = resolved_user(policy, kernel.user);
            int entitlement = 0;
            if (engl) {
                entitlement = std::get<EnglPolicy>(policy).lug_at(user, *kernel.group);
            } else {
                entitlement = std::get<EnlgPolicy>(policy).lu_at(user);
            }
            const std::string answer = choices.next(
                {PromptKind::Level, "level to operate at (or 'max')",
                 level_options(entitlement)});
            if (answer == "max") {
                if (entitlement > 0) kernel.level = entitlement;
            } else {
                kernel.level = parse_level_answer(answer, entitlement);
            }
            break;
        }

        case TransitionKind::ListResources: {
            const int user = resolved_user(policy, kernel.user);
            if (engl && !kernel.level) {
                session.resource_listing_.clear();
            } else {
                session.resource_listing_ =
                    list_resources(policy, user, *kernel.group, kernel.level);
            }
            break;
        }

        case TransitionKind::SelectResource: {
            std::vector<std::string> options;
            for (int k : session.resource_listing_)
                options.push_back(policy_resources(policy)[k - 1]);
            options.push_back("quit");
            const std::string answer = choices.next(
                {PromptKind::Resource, "resource to use (or 'quit')",
                 std::move(options)});
            if (answer == "quit") {
                out_index = 1;  // leave toward the final Quit, outcome pending
                break;
            }
            const auto resource = lookup_resource(policy, answer);
            if (!resource) throw ChoiceError("unknown resource \"" + answer + "\"");
            const int user = resolved_user(policy, kernel.user);
            bool granted = false;
            if (engl) {
                const auto& p = std::get<EnglPolicy>(policy);
                granted = kernel.level &&
                          engl_can_access(p, user, *resource, *kernel.group) &&
                          p.lrg_at(*resource, *kernel.group) <= *kernel.level;
            } else {
                const auto& p = std::get<EnlgPolicy>(policy);
                granted = enlg_can_access_in_group(p, user, *resource, *kernel.group,
                                                   kernel.level)
                              .has_value();
            }
            if (granted) {
                kernel.resource = *resource;
            } else {
                kernel.outcome = Outcome::Denied;
                attempted_resource = *resource;
                emit = true;
                out_index = 1;
            }
            break;
        }

        case TransitionKind::UseResource:
            kernel.outcome = Outcome::Used;
            break;

        case TransitionKind::LogFile:
            emit = true;
            break;

        case TransitionKind::Quit:
            if (kernel.outcome == Outcome::Pending) {
                kernel.outcome = Outcome::Quit;
                emit = true;
            }
            break;
    }

    if (emit && session.audit_) {
        AuditRecord record;
        record.model = net.model;
        record.ts = format_timestamp(session.clock_());
        record.session = kernel.session;
        record.transition = transition.name;
        record.user = kernel.user;
        record.group =
            kernel.group ? policy_groups(policy)[*kernel.group - 1] : std::string();
        record.level = kernel.level.value_or(0);
        const int resource = attempted_resource.value_or(kernel.resource.value_or(0));
        record.resource =
            resource ? policy_resources(policy)[resource - 1] : std::string();
        record.outcome = outcome_name(kernel.outcome);
        session.audit_->append(record);
    }

    // Move the kernel and check net safety.
    std::string to = "-";
    if (--session.marking_[from] == 0) session.marking_.erase(from);
    if (transition.outputs.empty()) {
        session.kernel_place_.clear();
        session.complete_ = true;
        session.release();
    } else {
        to = transition.outputs[out_index];
        session.kernel_place_ = to;
        session.marking_[to]++;
    }
    int total = 0;
    for (const auto& [place, count] : session.marking_) {
        if (count > 1)
            throw StructuralError("unsafe marking: place " + place + " holds " +
                                  std::to_string(count) + " kernels");
        total += count;
    }
    if (total > 1) throw StructuralError("unsafe marking: multiple kernels in flight");

    Firing firing{transition.name, kind_label(transition.kind), from, to, kernel};
    session.trace_.push_back(firing);
    return firing;
}

const Trace& run(Session& session, const Policy& policy, ChoiceProvider& choices) {
    while (!session.complete()) step(session, policy, choices);
    return session.trace();
}

}  // namespace enetacl
