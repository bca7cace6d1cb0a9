"""Standards-based playbook exchange: STIX 2.1 envelopes, a TAXII 2.1
collection repository and client, and the sharing ledger."""

from cacao_kms.sharing.stix import (
    EXTENSION_DEFINITION_ID,
    from_stix_coa,
    to_stix_coa,
)
from cacao_kms.sharing.taxii import TAXII_MEDIA_TYPE, TaxiiRepository
from cacao_kms.sharing.client import TaxiiClient
from cacao_kms.sharing.service import SharingService

__all__ = [
    "EXTENSION_DEFINITION_ID",
    "SharingService",
    "TAXII_MEDIA_TYPE",
    "TaxiiClient",
    "TaxiiRepository",
    "from_stix_coa",
    "to_stix_coa",
]
