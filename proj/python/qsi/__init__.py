"""Exact quantum difference-differential Galois computations.

Every command of the ``qsi`` tool is available through :func:`run`, which
returns the JSON report as a dict. Options use the tool's names with dashes
replaced by underscores; ``lambda_`` stands for ``--lambda``.
"""

import json

from ._qsi import INPUT_ERROR, PASS, PROPERTY_FAIL, REFUSAL, render_text, run_json

__all__ = ["run", "render_text", "PASS", "INPUT_ERROR", "PROPERTY_FAIL", "REFUSAL"]


def run(command, **options):
    """Runs ``command`` and returns the report dict (keys: status, exit_code, config, result, report)."""
    _, text = run_json(command, **options)
    return json.loads(text)
