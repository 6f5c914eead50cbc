#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enetacl/audit.hpp"
#include "enetacl/policy.hpp"

namespace enetacl {

// What a transition simulates. The two nets share one topology and differ
// only in which kind sits at which transition.
enum class TransitionKind {
    Ident,
    CheckAuthorities,
    ListGroups,
    SelectGroup,
    IdentLevel,
    ListResources,
    SelectResource,
    UseResource,
    LogFile,
    Quit,
};

const char* kind_label(TransitionKind kind);

struct Transition {
    std::string name;  // "t1".."t11"
    TransitionKind kind;
    std::string input;                 // consuming place
    std::vector<std::string> outputs;  // empty = the kernel retires;
                                       // two = routing via the permissive place
    std::string permissive;            // "" when the transition has none
};

// Evaluation net: places (ordinary + peripheral entry + permissive control),
// transitions with their input/output wiring, and the model tag selecting
// the transition semantics. Immutable once built; holds a busy flag so only
// one session at a time occupies the entry place.
struct ENet {
    std::string model;  // "engl" | "enlg"
    std::vector<std::string> places;       // B
    std::vector<std::string> peripheral;   // Bp
    std::vector<std::string> permissive;   // Br
    std::vector<Transition> transitions;   // T with F/H encoded per transition
    std::string entry;                     // the bp1 place

    mutable bool session_active = false;

    std::vector<const Transition*> transitions_from(const std::string& place) const;

    // Structural invariants: every referenced place exists, each permissive
    // place is bound to exactly one transition, the entry place is
    // peripheral. Throws StructuralError.
    void validate_structure() const;
};

// Groups-then-levels session net: authorization, group listing/selection,
// level identification, then resource listing/selection/use.
ENet build_engl_net();

// Levels-then-groups session net: the level is fixed right after
// authorization, before any group is listed or selected.
ENet build_enlg_net();

// Transition sequence ("tN:Label") along the all-grants path from the entry
// place to the final Quit.
std::vector<std::string> granted_path(const ENet& net);

// --- Session state -----------------------------------------------------------

enum class Outcome { Pending, Denied, Used, Quit };

const char* outcome_name(Outcome outcome);

// The token flowing through a session. Indices are 1-based into the policy
// catalogs; unset optionals mean the stage was not reached.
struct Kernel {
    std::string session;
    std::string user;
    bool authorized = false;
    std::optional<int> group;
    std::optional<SecurityLevel> level;
    std::optional<int> resource;
    Outcome outcome = Outcome::Pending;
};

struct Firing {
    std::string transition;  // "t5"
    std::string label;       // "SelectGroup"
    std::string from;
    std::string to;          // "-" when the kernel retired
    Kernel kernel;           // snapshot after the firing
};

using Trace = std::vector<Firing>;

// One line per firing: "<seq>\t<tN:Label>\t<from>\t<to>\t<outcome>\n".
std::string render_trace(const Trace& trace);

// --- Choice providers ----------------------------------------------------------

enum class PromptKind { Group, Level, Resource, Continue };

struct Prompt {
    PromptKind kind;
    std::string question;
    std::vector<std::string> options;  // legal answers, informative
};

// Source of session decisions: which group, which level, which resource or
// exit, continue or quit.
class ChoiceProvider {
public:
    virtual ~ChoiceProvider() = default;
    virtual std::string next(const Prompt& prompt) = 0;
};

// Deterministic provider answering from a fixed list; running past the end
// raises ScriptUnderrunError.
class ScriptedChoices final : public ChoiceProvider {
public:
    explicit ScriptedChoices(std::vector<std::string> answers)
        : answers_(std::move(answers)) {}

    std::string next(const Prompt& prompt) override;
    size_t consumed() const { return cursor_; }

private:
    std::vector<std::string> answers_;
    size_t cursor_ = 0;
};

// Prompts a human: writes the question and options to `out`, reads one
// answer per prompt from `in`. With piped answers this behaves exactly like
// the equivalent script.
class InteractiveChoices final : public ChoiceProvider {
public:
    InteractiveChoices(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

    std::string next(const Prompt& prompt) override;

private:
    std::istream& in_;
    std::ostream& out_;
};

// --- Session execution ----------------------------------------------------------

struct SessionOptions {
    std::string session_id = "s1";
    Clock clock;             // defaults to the system clock
    AuditSink* audit = nullptr;  // optional; no records are kept when null
};

// A single kernel walking one net instance. Moveable, not copyable; frees
// the net's entry place when the kernel retires or the session is destroyed.
class Session {
public:
    Session(Session&& other) noexcept;
    Session& operator=(Session&&) = delete;
    Session(const Session&) = delete;
    ~Session();

    const std::string& id() const { return kernel_.session; }
    const Kernel& kernel() const { return kernel_; }
    const Trace& trace() const { return trace_; }
    bool complete() const { return complete_; }
    Outcome outcome() const { return kernel_.outcome; }

    // Current marking: kernels per place. Never exceeds one anywhere.
    const std::map<std::string, int>& marking() const { return marking_; }

private:
    friend Session inject(const ENet& net, const std::string& user,
                          SessionOptions options);
    friend Firing step(Session& session, const Policy& policy,
                       ChoiceProvider& choices);

    Session(const ENet& net, const std::string& user, SessionOptions options);

    void release();

    const ENet* net_;
    Kernel kernel_;
    std::map<std::string, int> marking_;
    std::string kernel_place_;
    Trace trace_;
    bool complete_ = false;
    Clock clock_;
    AuditSink* audit_;

    // Listings stashed by ListGroups/ListResources for prompts and
    // validation at the following selection.
    std::vector<GroupLevel> group_listing_;
    std::vector<int> resource_listing_;
    // Answer consumed while resolving the quit-or-proceed conflict, handed
    // to the transition that fires next.
    std::optional<std::string> pending_answer_;
};

// Starts a session: puts a kernel carrying the user's identity on the entry
// place. Raises BusyNetError while another session occupies this net
// instance.
Session inject(const ENet& net, const std::string& user,
               SessionOptions options = {});

// Fires the unique enabled transition and returns its record. The provider
// is consulted at selection points and at the quit-or-proceed conflict.
Firing step(Session& session, const Policy& policy, ChoiceProvider& choices);

// Steps until a Quit transition retires the kernel; returns the full trace.
const Trace& run(Session& session, const Policy& policy, ChoiceProvider& choices);

}  // namespace enetacl
