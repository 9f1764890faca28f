"""Kernel backend selection.

Imports the compiled kernels when the extension was built, otherwise the
pure-Python fallback.  ``CITENET_PURE=1`` forces the fallback (used by the
benchmark and the parity tests).  Both backends are bit-identical.
"""

import os

if os.environ.get("CITENET_PURE") == "1":
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

brandes_betweenness = _impl.brandes_betweenness
brandes_edge_betweenness = _impl.brandes_edge_betweenness
closeness_sums = _impl.closeness_sums
pagerank_power = _impl.pagerank_power
eigenvector_power = _impl.eigenvector_power
louvain_pass = _impl.louvain_pass
