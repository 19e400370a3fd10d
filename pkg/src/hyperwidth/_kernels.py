"""Bitmask inner loops: the treewidth subset DP and the marshals fixpoint.

Both kernels are written in the numba subset of Python.  They are compiled
with ``@njit`` unless ``HYPERWIDTH_PURE=1`` is set (or numba is missing), in
which case the very same functions run as ordinary Python over numpy
arrays.  ``*_py`` names always refer to the uncompiled functions.
"""
import os
import types

import numpy as np

try:
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("HYPERWIDTH_PURE", "").lower() not in ("1", "true", "yes")


def _jit(fn):
    if USE_NUMBA:
        return njit(cache=True)(fn)
    return fn


def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def _elim_neighbors(adj, n, s, v):
    # vertices outside s+v reachable from v by paths with inner vertices in s
    vb = np.int64(1) << np.int64(v)
    inner = vb
    frontier = vb
    q = np.int64(0)
    while frontier:
        nb = np.int64(0)
        for u in range(n):
            if (frontier >> np.int64(u)) & 1:
                nb |= adj[u]
        q |= nb & ~s & ~vb
        fresh = nb & s & ~inner
        inner |= fresh
        frontier = fresh
    return q


def _treewidth_dp(adj, n):
    full = np.int64(1) << np.int64(n)
    best = np.full(full, 127, np.int8)
    choice = np.zeros(full, np.int8)
    best[0] = 0
    for s in range(1, full):
        s64 = np.int64(s)
        for v in range(n):
            vb = np.int64(1) << np.int64(v)
            if s64 & vb:
                rest = s64 ^ vb
                w = best[rest]
                if w >= best[s]:
                    continue
                q = _popcount(_elim_neighbors(adj, n, rest, v))
                if q > w:
                    w = q
                if w < best[s]:
                    best[s] = w
                    choice[s] = v
    order = np.empty(n, np.int64)
    s = full - 1
    for pos in range(n - 1, -1, -1):
        v = choice[s]
        order[pos] = v
        s = s ^ (np.int64(1) << np.int64(v))
    return best[full - 1], order


def _reach(adj, n, start, avoid):
    seen = start
    frontier = start
    while frontier:
        nb = np.int64(0)
        for u in range(n):
            if (frontier >> np.int64(u)) & 1:
                nb |= adj[u]
        nb &= ~avoid & ~seen
        seen |= nb
        frontier = nb
    return seen


def _marshal_fixpoint(adj, n, blocked, state_move, state_comp, comp_ptr, comp_mask, comp_state, monotone):
    n_states = state_move.shape[0]
    n_moves = blocked.shape[0]
    rank = np.full(n_states, -1, np.int32)
    choice = np.full(n_states, -1, np.int32)
    pending = np.full(n_states, -1, np.int32)
    rnd = 0
    changed = True
    while changed:
        changed = False
        for st in range(n_states):
            if rank[st] >= 0:
                continue
            here = blocked[state_move[st]]
            c = state_comp[st]
            for j in range(n_moves):
                region = _reach(adj, n, c, here & blocked[j])
                ok = True
                for p in range(comp_ptr[j], comp_ptr[j + 1]):
                    cm = comp_mask[p]
                    if cm & region:
                        if monotone and (cm & ~c):
                            ok = False
                            break
                        if rank[comp_state[p]] < 0:
                            ok = False
                            break
                if ok:
                    pending[st] = j
                    break
        for st in range(n_states):
            if pending[st] >= 0:
                rank[st] = rnd
                choice[st] = pending[st]
                pending[st] = -1
                changed = True
        rnd += 1
    return rank, choice


_NAMES = ("_popcount", "_elim_neighbors", "_treewidth_dp", "_reach", "_marshal_fixpoint")
_pure_ns = dict(globals())
for _name in _NAMES:
    _fn = _pure_ns[_name]
    _pure_ns[_name] = types.FunctionType(_fn.__code__, _pure_ns, _fn.__name__, _fn.__defaults__)

treewidth_dp_py = _pure_ns["_treewidth_dp"]
marshal_fixpoint_py = _pure_ns["_marshal_fixpoint"]
reach_py = _pure_ns["_reach"]

for _name in _NAMES:
    globals()[_name] = _jit(globals()[_name])

treewidth_dp = _treewidth_dp
marshal_fixpoint = _marshal_fixpoint
reach = _reach
