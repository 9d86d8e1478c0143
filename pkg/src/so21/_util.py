"""Small shared helpers."""

import os

NODES_ENV_VAR = "LH_DEFAULT_NODES"


def resolve_nodes(nodes, fallback):
    """Pick a quadrature node count: explicit value, else env override, else fallback."""
    if nodes is not None:
        return int(nodes)
    env = os.environ.get(NODES_ENV_VAR)
    if env:
        return int(env)
    return int(fallback)
