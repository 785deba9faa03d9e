"""Kernel selection: the compiled extension when built, pure Python otherwise.

Set ``SCHEMALAT_BACKEND=pure`` to force the fallback (useful for comparing
the two) or ``SCHEMALAT_BACKEND=compiled`` to fail loudly when the extension
is missing.  The compiled kernels cover binary schemata up to 64 cells;
longer words silently take the pure path, which uses unbounded ints.
"""

import os

from . import _pykernels

MAX_COMPILED_LENGTH = 64

_choice = os.environ.get("SCHEMALAT_BACKEND", "auto").lower()
if _choice not in ("auto", "compiled", "pure"):
    raise ImportError(f"unknown SCHEMALAT_BACKEND value: {_choice!r}")

_compiled = None
if _choice != "pure":
    try:
        from . import _ckernels as _compiled
    except ImportError:
        _compiled = None
    if _choice == "compiled" and _compiled is None:
        raise ImportError(
            "SCHEMALAT_BACKEND=compiled but the extension is not built"
        )


def backend_name():
    """'compiled' when the extension handles the hot kernels, else 'pure'."""
    return "pure" if _compiled is None else "compiled"


def complete_masks(atom_fs, atom_vs, length, max_elements=None):
    if _compiled is not None and length <= MAX_COMPILED_LENGTH:
        return _compiled.complete_masks(atom_fs, atom_vs, max_elements)
    return _pykernels.complete_masks(atom_fs, atom_vs, max_elements)


def schema_stats(elem_fs, elem_vs, word_vs, weights, length):
    if _compiled is not None and length <= MAX_COMPILED_LENGTH:
        return _compiled.schema_stats(elem_fs, elem_vs, word_vs, weights)
    return _pykernels.schema_stats(elem_fs, elem_vs, word_vs, weights)
