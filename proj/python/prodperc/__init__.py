"""Bond percolation on Cartesian product graphs.

Thin wrapper over the C++ core. Vertices are integer codes in mixed radix,
factor 0 least significant.
"""

import json as _json

from ._prodperc import (
    BaseGraph,
    EdgeSampler,
    InvalidArgument,
    IoError,
    ProductGraph,
    SizeLimitError,
    UnsupportedOperation,
    census,
    complete,
    component_size,
    cycle,
    gw_survival,
    iso_sandwich,
    isoperimetric,
    layer_sizes,
    path,
    solve_y,
    star,
    star_clique,
)
from ._prodperc import run_config_text as _run_config_text

__all__ = [
    "BaseGraph",
    "EdgeSampler",
    "InvalidArgument",
    "IoError",
    "ProductGraph",
    "SizeLimitError",
    "UnsupportedOperation",
    "census",
    "complete",
    "component_size",
    "cycle",
    "graph",
    "gw_survival",
    "iso_sandwich",
    "isoperimetric",
    "layer_sizes",
    "path",
    "run_config",
    "solve_y",
    "star",
    "star_clique",
]


def graph(spec):
    """Build a product graph from a spec string such as "K2^12" or "star(8)^5"."""
    return ProductGraph.parse(spec)


def run_config(text):
    """Run every [experiment.NAME] section of a config and return report dicts."""
    return [_json.loads(doc) for doc in _run_config_text(text)]
