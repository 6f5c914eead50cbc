#pragma once

#include <stdexcept>
#include <string>

namespace enetacl {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An entity index (user/group/resource/level) outside its catalog range.
// The message names the offending axis.
struct IndexError : Error {
    using Error::Error;
};

// A requested level cap or level assignment exceeds the caller's entitlement.
struct EntitlementError : Error {
    using Error::Error;
};

// A document, policy, or audit record violates a structural invariant.
struct ValidationError : Error {
    using Error::Error;
};

// Malformed input text. Carries 1-based line/column of the failure.
struct ParseError : Error {
    ParseError(std::string msg, int line_, int column_)
        : Error(std::move(msg)), line(line_), column(column_) {}
    int line;
    int column;
};

// A session choice that is not among the legal answers at that point.
struct ChoiceError : Error {
    using Error::Error;
};

// A scripted choice provider ran out of answers mid-session.
struct ScriptUnderrunError : Error {
    using Error::Error;
};

// Injecting into a net whose entry place is already occupied.
struct BusyNetError : Error {
    using Error::Error;
};

// Net structure violation: dangling place refs, unsafe marking, or an
// unresolvable transition conflict. Unreachable when nets are well-formed.
struct StructuralError : Error {
    using Error::Error;
};

// Storage-level failure while appending or reading audit records.
struct IoError : Error {
    using Error::Error;
};

}  // namespace enetacl
