"""Knowledge management service for CACAO 2.0 security playbooks.

Covers the full playbook lifecycle: parsing/validation/signing, versioned
storage with current+history collections, search, simulated or remote
execution with pull-based monitoring, KPI reporting, and STIX 2.1 /
TAXII 2.1 based sharing.
"""

from cacao_kms.core.model import Playbook, parse_playbook
from cacao_kms.core.validate import validate_playbook
from cacao_kms.core.canonical import canonical_bytes, canonicalize
from cacao_kms.core.classify import classify_metadata
from cacao_kms.core.signing import sign_playbook, verify_signature

__version__ = "0.1.0"

__all__ = [
    "Playbook",
    "parse_playbook",
    "validate_playbook",
    "canonical_bytes",
    "canonicalize",
    "classify_metadata",
    "sign_playbook",
    "verify_signature",
    "__version__",
]
