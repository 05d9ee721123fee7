"""Screening two-level supersaturated designs with GDS and GDS-ARM."""

import json

from ._core import (
    NumericalError,
    ValidationError,
    dantzig_select,
    default_config,
    load_design_csv,
    load_response_csv,
    lp_solve,
    make_pb12,
    simulate,
    split_two_means,
)
from ._core import analyze as _analyze


def analyze(design, y, method="gds-arm", **kwargs):
    """Run a screening method and return the report as a dict."""
    return json.loads(_analyze(design, y, method, **kwargs))


__all__ = [
    "NumericalError",
    "ValidationError",
    "analyze",
    "dantzig_select",
    "default_config",
    "load_design_csv",
    "load_response_csv",
    "lp_solve",
    "make_pb12",
    "simulate",
    "split_two_means",
]
