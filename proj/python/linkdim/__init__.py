"""Self-similarity analysis, traffic model fitting and link dimensioning."""

import json as _json

from ._linkdim import *  # noqa: F401,F403
from ._linkdim import __version__, analyze as _analyze


def analyze(trace, timescales=(0.01, 0.05, 0.1, 0.5, 1.0), epsilon=0.01):
    """Full pipeline on a PacketTrace; returns the report as a dict."""
    return _json.loads(_analyze(trace, list(timescales), epsilon))
