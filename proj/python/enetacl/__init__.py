"""Group/level access-control models with E-net session simulation."""

from ._enetacl import (
    EnglPolicy,
    EnlgPolicy,
    Error,
    granted_path,
    load_policy,
    load_policy_file,
    model_tag,
    replay_audit_file,
    serialize_policy,
    simulate,
    verify_exhaustive_small,
    verify_policy,
    __version__,
)

__all__ = [
    "EnglPolicy",
    "EnlgPolicy",
    "Error",
    "granted_path",
    "load_policy",
    "load_policy_file",
    "model_tag",
    "replay_audit_file",
    "serialize_policy",
    "simulate",
    "verify_exhaustive_small",
    "verify_policy",
    "__version__",
]
