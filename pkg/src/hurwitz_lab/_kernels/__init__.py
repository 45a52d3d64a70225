"""Hot enumeration/sampling kernels with two interchangeable backends.

The numba backend jit-compiles the inner loops; the numpy backend is a pure
vectorized fallback.  Select with HURWITZ_LAB_BACKEND=numba|numpy (default:
numba when importable).  Both backends are exact integer computations and
must produce identical outputs; tests assert this.
"""

from __future__ import annotations

import os
import warnings

_ENV_VAR = "HURWITZ_LAB_BACKEND"
_backend = None


def resolve_backend(name: str | None = None) -> str:
    """Return 'numba' or 'numpy' after validating availability."""
    global _backend
    if name is None:
        name = os.environ.get(_ENV_VAR, "").strip().lower() or None
    if name is None:
        if _backend is not None:
            return _backend
        try:
            import numba  # noqa: F401

            _backend = "numba"
        except ImportError:  # pragma: no cover
            warnings.warn("numba unavailable, falling back to numpy backend")
            _backend = "numpy"
        return _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}, expected 'numba' or 'numpy'")
    return name


def _impl(backend: str | None):
    if resolve_backend(backend) == "numba":
        from . import numba_impl as mod
    else:
        from . import numpy_impl as mod
    return mod


def count_tuples_class(d, r, target_type, transitive=True, backend=None) -> int:
    """Number of r-tuples of transpositions in S_d whose ordered product has
    cycle type `target_type`, optionally restricted to transitive tuples."""
    return _impl(backend).count_tuples_class(d, r, tuple(target_type), transitive)


def count_tuples_fixed(d, r, target_perm, transitive=False, backend=None) -> int:
    """Number of r-tuples of transpositions whose ordered product equals the
    fixed permutation `target_perm` (0-indexed image tuple)."""
    return _impl(backend).count_tuples_fixed(d, r, tuple(target_perm), transitive)


def tree_stats_batch(codes, roots, tops, labels, backend=None):
    """Per-sample edge-tree statistics from Prufer codes.

    codes: (B, n-2) int64 in [0, n); roots/tops: (B,) int64 distinct;
    labels: (B, n-1) int64, each row a permutation of 1..n-1 assigning edge
    labels in construction order.  Returns int64 arrays
    (trunk, rootcomp, pr_num, pt_num, psi_vt); semiperimeters are
    pr_num/(n-1) and pt_num/(n-1).
    """
    return _impl(backend).tree_stats_batch(codes, roots, tops, labels)


def decode_pruefer_batch(codes, backend=None):
    """Decode a batch of Prufer codes to edge arrays (B, n-1, 2)."""
    return _impl(backend).decode_pruefer_batch(codes)


def trivalent_matchings(n_vertices, want_faces, want_genus, backend=None):
    """All fixed-point-free involutions alpha on 3V darts (sigma fixed as
    consecutive 3-cycles) whose map is connected with the requested face
    count and genus.  Returns an (M, 3V) int64 array of involutions."""
    return _impl(backend).trivalent_matchings(n_vertices, want_faces, want_genus)
