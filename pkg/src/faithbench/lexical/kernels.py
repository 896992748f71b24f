"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ``FAITHBENCH_PURE_PYTHON=1`` to force the fallback (used by the
benchmark and by the backend-equivalence tests).
"""

import os

if os.environ.get("FAITHBENCH_PURE_PYTHON"):
    from . import _seq_py as _impl
else:
    try:
        from . import _seqext as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _seq_py as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND
unigram_overlap = _impl.unigram_overlap
bigram_overlap = _impl.bigram_overlap
lcs_length = _impl.lcs_length
greedy_fragments = _impl.greedy_fragments
