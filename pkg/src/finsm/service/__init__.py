"""HTTP service exposing machines, validation, simulation and export."""

from finsm.service.app import ApiException, create_app

__all__ = ["ApiException", "create_app"]
