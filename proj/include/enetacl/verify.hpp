#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "enetacl/policy.hpp"

namespace enetacl {

// Result of cross-checking the optimized predicates (and the session nets)
// against direct quantifier enumeration.
struct VerifyReport {
    uint64_t policies = 0;
    uint64_t access_checks = 0;
    uint64_t interact_checks = 0;
    uint64_t session_checks = 0;
    uint64_t discrepancies = 0;
    std::string first_discrepancy;  // "" when clean

    bool ok() const { return discrepancies == 0; }
};

// For one policy: every access/interaction tuple against a naive re-evaluation
// of the model definition, plus one scripted session per
// (user, group, resource) confirming the net uses the resource exactly when
// the predicate grants it and that each session leaves one terminal audit
// record.
VerifyReport verify_policy(const Policy& policy);

// Sweeps every 2-user/2-group/2-resource/2-level ENGL policy (all 3^4 x 3^4
// membership matrices), checking oracle equivalence, interaction symmetry,
// self-collapse, pairwise-access equivalence, deny-by-default, and
// single-entry monotonicity.
VerifyReport verify_exhaustive_small();

// Counts plus verdict, one figure per line.
std::string render_report(const VerifyReport& report);

using EnglAccessFn = std::function<bool(const EnglPolicy&, int, int, int)>;
using EnglInteractFn = std::function<bool(const EnglPolicy&, int, int, int, int)>;

// Cross-checks substitute predicate implementations against the direct
// enumeration. Confirms the comparison itself catches a wrong predicate.
VerifyReport verify_engl_against(const EnglPolicy& policy, const EnglAccessFn& access,
                                 const EnglInteractFn& interact);

}  // namespace enetacl
