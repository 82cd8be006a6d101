"""JIT-compiled batch kernels over selection-map bitmasks.

Every function takes a batch ``phis`` of shape [n, n_uncertainties]
(int64 masks over the control list) plus the precomputed instance
tables, and is compiled with numba.  The pure-numpy twin of this module
is ``_kernels_numpy``; both expose identical signatures and the backend
module picks one.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _trace_mask(phi_mask, a, trace_class, n_controls):
    # set of trace classes met by the controls in phi_mask, on window a
    m = 0
    for c in range(n_controls):
        if phi_mask >> c & 1:
            m |= 1 << trace_class[a, c]
    return m


@njit(cache=True)
def _allowed_controls(hat, a, class_members, n_classes):
    # controls whose trace class on window a lies in hat
    allowed = 0
    for t in range(n_classes):
        if hat >> t & 1:
            allowed |= class_members[a, t]
    return allowed


@njit(cache=True)
def _refine_row(row, out, agree_mask, trace_class, class_members, class_count):
    n_a, n_w = agree_mask.shape
    n_c = trace_class.shape[1]
    for w in range(n_w):
        g = row[w]
        for a in range(n_a):
            hat = (1 << class_count[a]) - 1
            for v in range(n_w):
                if agree_mask[a, w] >> v & 1:
                    hat &= _trace_mask(row[v], a, trace_class, n_c)
            g &= _allowed_controls(hat, a, class_members, class_count[a])
        out[w] = g


@njit(cache=True)
def refine_traces(phis, agree_mask, trace_class, class_members, class_count):
    n = phis.shape[0]
    n_w = phis.shape[1]
    out = np.empty_like(phis)
    for i in range(n):
        _refine_row(phis[i], out[i], agree_mask, trace_class, class_members, class_count)
    return out


@njit(cache=True)
def refine_traces_excl(phis, agree_mask, trace_class, class_members, class_count):
    # variant intersecting over the agreement set without the anchor;
    # an empty set contributes the full trace universe
    n, n_w = phis.shape
    n_a = agree_mask.shape[0]
    n_c = trace_class.shape[1]
    out = np.empty_like(phis)
    for i in range(n):
        for w in range(n_w):
            g = phis[i, w]
            for a in range(n_a):
                hat = (1 << class_count[a]) - 1
                for v in range(n_w):
                    if v != w and agree_mask[a, w] >> v & 1:
                        hat &= _trace_mask(phis[i, v], a, trace_class, n_c)
                g &= _allowed_controls(hat, a, class_members, class_count[a])
            out[i, w] = g
    return out


@njit(cache=True)
def refine_elements(phis, omega_agree, control_agree):
    # keep f in phi(w) iff every agreeing uncertainty offers a control
    # tracing like f on every window
    n, n_w = phis.shape
    n_a, n_c, _ = control_agree.shape
    out = np.zeros_like(phis)
    for i in range(n):
        for w in range(n_w):
            phi_w = phis[i, w]
            res = 0
            for f in range(n_c):
                if not (phi_w >> f & 1):
                    continue
                keep = True
                for a in range(n_a):
                    for v in range(n_w):
                        if not omega_agree[a, w, v]:
                            continue
                        found = False
                        pv = phis[i, v]
                        for f2 in range(n_c):
                            if pv >> f2 & 1 and control_agree[a, f, f2]:
                                found = True
                                break
                        if not found:
                            keep = False
                            break
                    if not keep:
                        break
                if keep:
                    res |= 1 << f
            out[i, w] = res
    return out


@njit(cache=True)
def _na_impl_one(row, w, omega_agree, control_agree):
    n_a, n_w, _ = omega_agree.shape
    n_c = control_agree.shape[1]
    phi_w = row[w]
    for a in range(n_a):
        for v in range(n_w):
            if not omega_agree[a, w, v]:
                continue
            pv = row[v]
            for f in range(n_c):
                if not (phi_w >> f & 1):
                    continue
                found = False
                for f2 in range(n_c):
                    if pv >> f2 & 1 and control_agree[a, f, f2]:
                        found = True
                        break
                if not found:
                    return False
    return True


@njit(cache=True)
def na_implication(phis, omega_agree, control_agree):
    n, n_w = phis.shape
    out = np.ones(n, dtype=np.bool_)
    for i in range(n):
        for w in range(n_w):
            if not _na_impl_one(phis[i], w, omega_agree, control_agree):
                out[i] = False
                break
    return out


@njit(cache=True)
def na_implication_at(phis, w, omega_agree, control_agree):
    n = phis.shape[0]
    out = np.empty(n, dtype=np.bool_)
    for i in range(n):
        out[i] = _na_impl_one(phis[i], w, omega_agree, control_agree)
    return out


@njit(cache=True)
def _na_trace_eq_one(row, w, agree_mask, trace_class, class_count):
    n_a, n_w = agree_mask.shape
    n_c = trace_class.shape[1]
    for a in range(n_a):
        own = _trace_mask(row[w], a, trace_class, n_c)
        hat = (1 << class_count[a]) - 1
        for v in range(n_w):
            if agree_mask[a, w] >> v & 1:
                hat &= _trace_mask(row[v], a, trace_class, n_c)
        if hat != own:
            return False
    return True


@njit(cache=True)
def na_trace_eq(phis, agree_mask, trace_class, class_count):
    n, n_w = phis.shape
    out = np.ones(n, dtype=np.bool_)
    for i in range(n):
        for w in range(n_w):
            if not _na_trace_eq_one(phis[i], w, agree_mask, trace_class, class_count):
                out[i] = False
                break
    return out


@njit(cache=True)
def na_trace_eq_at(phis, w, agree_mask, trace_class, class_count):
    n = phis.shape[0]
    out = np.empty(n, dtype=np.bool_)
    for i in range(n):
        out[i] = _na_trace_eq_one(phis[i], w, agree_mask, trace_class, class_count)
    return out


@njit(cache=True)
def na_symmetric(phis, omega_agree, trace_class):
    # indistinguishable uncertainties must carry equal trace sets
    n, n_w = phis.shape
    n_a = omega_agree.shape[0]
    n_c = trace_class.shape[1]
    out = np.ones(n, dtype=np.bool_)
    for i in range(n):
        ok = True
        for a in range(n_a):
            for w in range(n_w):
                for v in range(n_w):
                    if omega_agree[a, w, v]:
                        tw = _trace_mask(phis[i, w], a, trace_class, n_c)
                        tv = _trace_mask(phis[i, v], a, trace_class, n_c)
                        if tw != tv:
                            ok = False
                            break
                if not ok:
                    break
            if not ok:
                break
        out[i] = ok
    return out


@njit(cache=True)
def feasible_masks(
    phis, agree_mask, trace_class, class_members, class_count, full_control_mask
):
    # controls whose trace on every window lies in the common trace set
    # of the other agreeing uncertainties (full universe when there are none)
    n, n_w = phis.shape
    n_a = agree_mask.shape[0]
    n_c = trace_class.shape[1]
    out = np.empty_like(phis)
    for i in range(n):
        for w in range(n_w):
            d = full_control_mask
            for a in range(n_a):
                hat = (1 << class_count[a]) - 1
                for v in range(n_w):
                    if v != w and agree_mask[a, w] >> v & 1:
                        hat &= _trace_mask(phis[i, v], a, trace_class, n_c)
                d &= _allowed_controls(hat, a, class_members, class_count[a])
            out[i, w] = d
    return out


@njit(cache=True)
def stabilize(phis, agree_mask, trace_class, class_members, class_count, max_steps):
    # iterate the trace-form refinement until it confirms a fixed point;
    # steps counts applications including the confirming one, -1 = bound hit
    n, n_w = phis.shape
    finals = np.empty_like(phis)
    steps = np.empty(n, dtype=np.int64)
    cur = np.empty(n_w, dtype=np.int64)
    nxt = np.empty(n_w, dtype=np.int64)
    for i in range(n):
        for w in range(n_w):
            cur[w] = phis[i, w]
        count = 0
        settled = False
        while count < max_steps:
            count += 1
            _refine_row(cur, nxt, agree_mask, trace_class, class_members, class_count)
            same = True
            for w in range(n_w):
                if nxt[w] != cur[w]:
                    same = False
                cur[w] = nxt[w]
            if same:
                settled = True
                break
        steps[i] = count if settled else -1
        for w in range(n_w):
            finals[i, w] = cur[w]
    return finals, steps
