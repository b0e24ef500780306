"""Model-backed judgment adapters: mocks and the remote HTTP contract."""

from .base import (
    MultiObjectFlags,
    OracleError,
    OracleKind,
    OracleLogger,
    OracleRequest,
    OracleResponse,
    OracleSet,
    render_ref,
)
from .mock import mock_oracles
from .remote import RemoteOracleConfig, remote_oracles

__all__ = [
    "MultiObjectFlags",
    "OracleError",
    "OracleKind",
    "OracleLogger",
    "OracleRequest",
    "OracleResponse",
    "OracleSet",
    "RemoteOracleConfig",
    "mock_oracles",
    "remote_oracles",
    "render_ref",
]
