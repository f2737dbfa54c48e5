"""HTTP service shell."""

from .app import ServiceState, SystemEntry, bootstrap_state, create_app
from .jobs import BuildJob, JobRegistry

__all__ = ["BuildJob", "JobRegistry", "ServiceState", "SystemEntry",
           "bootstrap_state", "create_app"]
