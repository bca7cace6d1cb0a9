"""HTTP facade: management API under /api/v1 plus the TAXII 2.1 endpoints."""

from cacao_kms.api.app import create_app
from cacao_kms.api.config import ServiceConfig

__all__ = ["ServiceConfig", "create_app"]
