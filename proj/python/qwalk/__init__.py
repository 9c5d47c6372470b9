"""Random walks on quasirandom graphs.

Thin Python layer over the C++ core: graph generators, discrepancy and
spectral certificates, list-model walks, tree embeddings and the seeded
experiment harness.
"""

import json

from ._qwalk import *  # noqa: F401,F403
from ._qwalk import __version__, _run_experiment, certify as _certify


def certify(g, eps=0.1, trials=1000, seed=0, exhaustive=False):
    """Quasirandomness report for ``g`` as a dict."""
    return json.loads(_certify(g, eps, trials, seed, exhaustive))


def run_experiment(name, **config):
    """Runs a named experiment; keyword arguments override its defaults.

    Returns the JSON report as a dict.
    """
    config["experiment"] = name
    return json.loads(_run_experiment(json.dumps(config)))
