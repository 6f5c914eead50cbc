#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "enetacl/audit.hpp"
#include "enetacl/enet.hpp"
#include "enetacl/errors.hpp"
#include "enetacl/policy.hpp"
#include "enetacl/policy_io.hpp"
#include "enetacl/verify.hpp"

namespace py = pybind11;

namespace {

using namespace enetacl;

int user_index(const Policy& policy, const std::string& name) {
    const auto index =
        std::visit([&](const auto& p) { return p.find_user(name); }, policy);
    if (!index) throw ValidationError("unknown user \"" + name + "\"");
    return *index;
}

int group_index(const Policy& policy, const std::string& name) {
    const auto index =
        std::visit([&](const auto& p) { return p.find_group(name); }, policy);
    if (!index) throw ValidationError("unknown group \"" + name + "\"");
    return *index;
}

int resource_index(const Policy& policy, const std::string& name) {
    const auto index =
        std::visit([&](const auto& p) { return p.find_resource(name); }, policy);
    if (!index) throw ValidationError("unknown resource \"" + name + "\"");
    return *index;
}

py::object witness_or_none(const Policy& policy,
                           const std::optional<AccessWitness>& witness) {
    if (!witness) return py::none();
    return py::make_tuple(witness->level, policy_groups(policy)[witness->group - 1]);
}

py::dict report_dict(const VerifyReport& report) {
    py::dict out;
    out["policies"] = report.policies;
    out["access_checks"] = report.access_checks;
    out["interact_checks"] = report.interact_checks;
    out["session_checks"] = report.session_checks;
    out["discrepancies"] = report.discrepancies;
    out["first_discrepancy"] = report.first_discrepancy;
    out["ok"] = report.ok();
    return out;
}

py::dict record_dict(const AuditRecord& record) {
    py::dict out;
    out["model"] = record.model;
    out["ts"] = record.ts;
    out["session"] = record.session;
    out["transition"] = record.transition;
    out["user"] = record.user;
    out["group"] = record.group;
    out["level"] = record.level;
    out["resource"] = record.resource;
    out["outcome"] = record.outcome;
    return out;
}

py::dict simulate(const Policy& policy, const std::string& user,
                  const std::vector<std::string>& script,
                  const std::string& session_id, std::optional<int64_t> clock_ms) {
    const ENet net = std::holds_alternative<EnglPolicy>(policy) ? build_engl_net()
                                                                : build_enlg_net();
    SessionOptions options;
    options.session_id = session_id;
    if (clock_ms) options.clock = [ms = *clock_ms] { return ms; };
    MemoryAuditLog audit;
    options.audit = &audit;

    Session session = inject(net, user, std::move(options));
    ScriptedChoices choices(script);
    const Trace& trace = run(session, policy, choices);

    py::list firings;
    for (const auto& firing : trace)
        firings.append(py::make_tuple(firing.transition, firing.label, firing.from,
                                      firing.to,
                                      std::string(outcome_name(firing.kernel.outcome))));
    py::list records;
    for (const auto& record : audit.records()) records.append(record_dict(record));

    py::dict out;
    out["outcome"] = std::string(outcome_name(session.outcome()));
    out["trace"] = render_trace(trace);
    out["firings"] = firings;
    out["records"] = records;
    return out;
}

}  // namespace

PYBIND11_MODULE(_enetacl, m) {
    m.doc() = "Group/level access-control models with E-net session simulation";

    py::register_exception<Error>(m, "Error");

    py::class_<EnglPolicy>(m, "EnglPolicy")
        .def_readonly("levels", &EnglPolicy::levels)
        .def_readonly("users", &EnglPolicy::users)
        .def_readonly("groups", &EnglPolicy::groups)
        .def_readonly("resources", &EnglPolicy::resources)
        .def("member_user",
             [](const EnglPolicy& p, const std::string& user, const std::string& group) {
                 return engl_member_user(p, user_index(p, user), group_index(p, group));
             },
             py::arg("user"), py::arg("group"))
        .def("can_access",
             [](const EnglPolicy& p, const std::string& user,
                const std::string& resource, const std::string& group) {
                 return engl_can_access(p, user_index(p, user),
                                        resource_index(p, resource),
                                        group_index(p, group));
             },
             py::arg("user"), py::arg("resource"), py::arg("group"))
        .def("can_interact",
             [](const EnglPolicy& p, const std::string& user0, const std::string& user1,
                const std::string& resource, const std::string& group) {
                 return engl_can_interact(p, user_index(p, user0),
                                          user_index(p, user1),
                                          resource_index(p, resource),
                                          group_index(p, group));
             },
             py::arg("user0"), py::arg("user1"), py::arg("resource"), py::arg("group"))
        .def("list_groups",
             [](const EnglPolicy& p, const std::string& user) {
                 py::list out;
                 for (const auto& entry : list_groups(p, user_index(p, user)))
                     out.append(py::make_tuple(p.groups[entry.group - 1], entry.level));
                 return out;
             },
             py::arg("user"))
        .def("list_resources",
             [](const EnglPolicy& p, const std::string& user, const std::string& group,
                std::optional<int> cap) {
                 py::list out;
                 for (int k : list_resources(p, user_index(p, user),
                                             group_index(p, group), cap))
                     out.append(p.resources[k - 1]);
                 return out;
             },
             py::arg("user"), py::arg("group"), py::arg("cap") = py::none());

    py::class_<EnlgPolicy>(m, "EnlgPolicy")
        .def_readonly("levels", &EnlgPolicy::levels)
        .def_readonly("users", &EnlgPolicy::users)
        .def_readonly("groups", &EnlgPolicy::groups)
        .def_readonly("resources", &EnlgPolicy::resources)
        .def("max_level",
             [](const EnlgPolicy& p, const std::string& user) {
                 return p.lu_at(user_index(p, user));
             },
             py::arg("user"))
        .def("can_access",
             [](const EnlgPolicy& p, const std::string& user,
                const std::string& resource) {
                 return witness_or_none(
                     p, enlg_can_access(p, user_index(p, user),
                                        resource_index(p, resource)));
             },
             py::arg("user"), py::arg("resource"))
        .def("can_access_in_group",
             [](const EnlgPolicy& p, const std::string& user,
                const std::string& resource, const std::string& group,
                std::optional<int> cap) {
                 return witness_or_none(
                     p, enlg_can_access_in_group(p, user_index(p, user),
                                                 resource_index(p, resource),
                                                 group_index(p, group), cap));
             },
             py::arg("user"), py::arg("resource"), py::arg("group"),
             py::arg("cap") = py::none())
        .def("can_interact",
             [](const EnlgPolicy& p, const std::string& user0, const std::string& user1,
                const std::string& resource) {
                 return witness_or_none(
                     p, enlg_can_interact(p, user_index(p, user0),
                                          user_index(p, user1),
                                          resource_index(p, resource)));
             },
             py::arg("user0"), py::arg("user1"), py::arg("resource"))
        .def("list_groups",
             [](const EnlgPolicy& p, const std::string& user) {
                 py::list out;
                 for (const auto& entry : list_groups(p, user_index(p, user)))
                     out.append(py::make_tuple(p.groups[entry.group - 1], entry.level));
                 return out;
             },
             py::arg("user"))
        .def("list_resources",
             [](const EnlgPolicy& p, const std::string& user, const std::string& group,
                std::optional<int> cap) {
                 py::list out;
                 for (int k : list_resources(p, user_index(p, user),
                                             group_index(p, group), cap))
                     out.append(p.resources[k - 1]);
                 return out;
             },
             py::arg("user"), py::arg("group"), py::arg("cap") = py::none());

    m.def("load_policy", &load_policy, py::arg("text"),
          "Parse and validate a policy document");
    m.def("load_policy_file", &load_policy_file, py::arg("path"));
    m.def("serialize_policy",
          [](const Policy& policy) { return serialize_policy(policy); },
          py::arg("policy"), "Canonical text form of a policy");
    m.def("model_tag", [](const Policy& policy) { return model_tag(policy); },
          py::arg("policy"));

    m.def("granted_path",
          [](const std::string& model) {
              if (model == "engl") return granted_path(build_engl_net());
              if (model == "enlg") return granted_path(build_enlg_net());
              throw ValidationError("unknown model tag \"" + model + "\"");
          },
          py::arg("model"), "Transition sequence along the all-grants path");

    m.def("simulate", &simulate, py::arg("policy"), py::arg("user"),
          py::arg("script"), py::arg("session_id") = "s1",
          py::arg("clock_ms") = py::none(),
          "Run one scripted session; returns outcome, trace, and audit records");

    m.def("verify_policy",
          [](const Policy& policy) { return report_dict(verify_policy(policy)); },
          py::arg("policy"));
    m.def("verify_exhaustive_small",
          [] { return report_dict(verify_exhaustive_small()); });

    m.def("replay_audit_file",
          [](const std::string& path) {
              py::list out;
              for (const auto& record : replay_file(path))
                  out.append(record_dict(record));
              return out;
          },
          py::arg("path"));

    m.attr("__version__") = "0.1.0";
}
