"""Hot per-trajectory loops, JIT-compiled when numba is available.

Each kernel consumes a pre-drawn uniform buffer with a fixed positional
layout (slot i of row r reads buf[offsets[r] + 2i] and the following entry),
so results are byte-identical between the compiled and pure-Python paths
and depend only on the trajectory's own stream, never on scheduling.
"""

from __future__ import annotations

import math

import numpy as np

try:  # pragma: no cover - exercised implicitly by the dispatch tests
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


_FAR = 2**62


def _six_vertex_sweep_py(bits, offsets, buf, pos, scratch, delta1, delta2, x):
    """Run one trajectory for len(bits) rows; return the final height at x.

    pos/scratch are int64 work arrays of length len(bits)+1.  offsets[r] is
    the buffer start of row r (two uniforms per slot, slot count = particles
    entering the row + 1).  The carry walks left to right; its free run over
    an empty stretch is the inverse-CDF geometric floor(log u / log delta2).
    """
    n_rows = bits.size
    log_d2 = math.log(delta2)
    n = 0
    for r in range(n_rows):
        off = offsets[r]
        carry = bits[r] == 1
        ccol = 1
        m_out = 0
        for i in range(n + 1):
            pcol = pos[i] if i < n else _FAR
            if carry:
                u = buf[off + 2 * i]
                if u < 1e-300:
                    u = 1e-300
                land = ccol + int(math.log(u) / log_d2)
                if land < pcol:
                    scratch[m_out] = land
                    m_out += 1
                    carry = False
            if pcol < _FAR:
                if carry:
                    scratch[m_out] = pcol  # (1,1): particle stays, carry passes
                    m_out += 1
                    ccol = pcol + 1
                else:
                    if buf[off + 2 * i + 1] < delta1:
                        scratch[m_out] = pcol
                        m_out += 1
                    else:
                        carry = True  # particle turns right
                        ccol = pcol + 1
        for i in range(m_out):
            pos[i] = scratch[i]
        n = m_out
    h = 0
    for i in range(n):
        if pos[i] >= x:
            h += 1
    return h


def _asep_events_py(pos, n_events, buf, p_right):
    """Apply n_events rejection events in place; buf holds one uniform each.

    The particle index is floor(u n); the leftover fraction u n - k is again
    uniform and independent, and decides the jump direction.
    """
    n = pos.size
    if n == 0:
        return
    for e in range(n_events):
        un = buf[e] * n
        k = int(un)
        if k >= n:
            k = n - 1
        if un - k < p_right:
            if k == n - 1 or pos[k + 1] > pos[k] + 1:
                pos[k] += 1
        else:
            if k == 0 or pos[k - 1] < pos[k] - 1:
                pos[k] -= 1


six_vertex_sweep = njit(cache=True)(_six_vertex_sweep_py) if HAVE_NUMBA else _six_vertex_sweep_py
asep_events = njit(cache=True)(_asep_events_py) if HAVE_NUMBA else _asep_events_py


def warmup() -> None:
    """Trigger JIT compilation so timing-sensitive callers pay it up front."""
    bits = np.ones(2, dtype=np.uint8)
    offsets = np.array([0, 4], dtype=np.int64)
    buf = np.full(8, 0.5)
    pos = np.zeros(3, dtype=np.int64)
    scratch = np.zeros(3, dtype=np.int64)
    six_vertex_sweep(bits, offsets, buf, pos, scratch, 0.25, 0.5, 1)
    p = np.array([0, 1], dtype=np.int64)
    asep_events(p, 2, buf, 0.75)
