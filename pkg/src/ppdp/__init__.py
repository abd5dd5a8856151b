"""Privacy-preserving data publishing toolkit for process-mining event logs."""

from .connector import (
    ConnectorKeyset,
    connectorize,
    derive_keys,
    dfg_without_key,
    pseudonym_dictionary,
    pseudonymize,
    reconstruct_with_key,
)
from .dfg import DFG, DiffReport, dfg_diff, dfg_from_json_dict, dfg_to_json_dict, discover_dfg
from .ela import ConnectorPayload, ConnectorRecord, CryptoHeader, ELADocument, parse_ela, write_ela
from .metadata import AnonymizationOp, PrivacyMetadata, append_op, derive_output_name
from .model import Event, EventLog, StatisticsReport, Trace, log_statistics
from .roles import (
    ResourceActivityMatrix,
    RoleAnonConfig,
    RoleAnonReport,
    RoleGroup,
    anonymize_roles,
    build_matrix,
    discover_role_groups,
    verify_group_preservation,
)
from .tlkc import (
    Candidate,
    SuppressionReport,
    TLKCConfig,
    ViolationReport,
    apply_tlkc,
    find_minimal_violations,
    generalize_timestamps,
    match,
    verify_tlkc,
)
from .xes import parse_xes, write_xes

__version__ = "0.1.0"

__all__ = [
    "AnonymizationOp",
    "Candidate",
    "ConnectorKeyset",
    "ConnectorPayload",
    "ConnectorRecord",
    "CryptoHeader",
    "DFG",
    "DiffReport",
    "ELADocument",
    "Event",
    "EventLog",
    "PrivacyMetadata",
    "ResourceActivityMatrix",
    "RoleAnonConfig",
    "RoleAnonReport",
    "RoleGroup",
    "StatisticsReport",
    "SuppressionReport",
    "TLKCConfig",
    "Trace",
    "ViolationReport",
    "anonymize_roles",
    "append_op",
    "apply_tlkc",
    "build_matrix",
    "connectorize",
    "derive_keys",
    "derive_output_name",
    "dfg_diff",
    "dfg_from_json_dict",
    "dfg_to_json_dict",
    "dfg_without_key",
    "discover_dfg",
    "discover_role_groups",
    "find_minimal_violations",
    "generalize_timestamps",
    "log_statistics",
    "match",
    "parse_ela",
    "parse_xes",
    "pseudonym_dictionary",
    "pseudonymize",
    "reconstruct_with_key",
    "verify_group_preservation",
    "verify_tlkc",
    "write_ela",
    "write_xes",
]
