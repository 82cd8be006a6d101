"""Pure-numpy batch kernels, signature-identical to ``_kernels_numba``.

Loops run over the (small) window/uncertainty axes in Python; the batch
axis is fully vectorized, which keeps exhaustive sweeps tractable when
the JIT backend is disabled or unavailable.
"""

from __future__ import annotations

import numpy as np


def _bit_range(k: int) -> np.ndarray:
    return np.arange(k, dtype=np.int64)


def _value_bits(phis: np.ndarray, n_c: int) -> np.ndarray:
    # [n, nW, nC] 0/1 expansion of every value mask; computed once per
    # kernel call and reused across windows
    return (phis[:, :, None] >> _bit_range(n_c)) & 1


def _trace_masks_from_bits(bits: np.ndarray, a: int, trace_class: np.ndarray) -> np.ndarray:
    # [n, nW] trace-class masks of every value set on window a
    return np.bitwise_or.reduce(bits << trace_class[a], axis=2)


def _trace_masks(phis: np.ndarray, a: int, trace_class: np.ndarray) -> np.ndarray:
    return _trace_masks_from_bits(_value_bits(phis, trace_class.shape[1]), a, trace_class)


def _expand_classes(hat: np.ndarray, a: int, class_members: np.ndarray, n_t: int) -> np.ndarray:
    # [n] trace-class masks -> [n] control masks
    hbits = (hat[:, None] >> _bit_range(n_t)) & 1
    return np.bitwise_or.reduce(hbits * class_members[a, :n_t][None, :], axis=1)


def _agree_members(agree_mask: np.ndarray, a: int, w: int, skip: int = -1) -> list[int]:
    m = int(agree_mask[a, w])
    return [v for v in range(64) if m >> v & 1 and v != skip]


def refine_traces(phis, agree_mask, trace_class, class_members, class_count):
    n_a, n_w = agree_mask.shape
    out = phis.copy()
    bits = _value_bits(phis, trace_class.shape[1])
    for a in range(n_a):
        tm = _trace_masks_from_bits(bits, a, trace_class)
        n_t = int(class_count[a])
        for w in range(n_w):
            members = _agree_members(agree_mask, a, w)
            hat = tm[:, members[0]].copy()
            for v in members[1:]:
                hat &= tm[:, v]
            out[:, w] &= _expand_classes(hat, a, class_members, n_t)
    return out


def refine_traces_excl(phis, agree_mask, trace_class, class_members, class_count):
    n_a, n_w = agree_mask.shape
    n = phis.shape[0]
    out = phis.copy()
    bits = _value_bits(phis, trace_class.shape[1])
    for a in range(n_a):
        tm = _trace_masks_from_bits(bits, a, trace_class)
        n_t = int(class_count[a])
        full = (1 << n_t) - 1
        for w in range(n_w):
            members = _agree_members(agree_mask, a, w, skip=w)
            hat = np.full(n, full, dtype=np.int64)
            for v in members:
                hat &= tm[:, v]
            out[:, w] &= _expand_classes(hat, a, class_members, n_t)
    return out


def _match_masks(control_agree: np.ndarray) -> np.ndarray:
    # [nA, nC] mask of controls agreeing with each control per window
    n_c = control_agree.shape[1]
    pow2 = np.int64(1) << _bit_range(n_c)
    return np.bitwise_or.reduce(control_agree * pow2[None, None, :], axis=2)


def refine_elements(phis, omega_agree, control_agree):
    n, n_w = phis.shape
    n_a, n_c, _ = control_agree.shape
    cmatch = _match_masks(control_agree)
    pow2 = np.int64(1) << _bit_range(n_c)
    out = np.zeros_like(phis)
    for w in range(n_w):
        keep = np.ones((n, n_c), dtype=bool)
        for a in range(n_a):
            for v in range(n_w):
                if not omega_agree[a, w, v]:
                    continue
                keep &= (phis[:, v, None] & cmatch[a][None, :]) != 0
        inphi = ((phis[:, w, None] >> _bit_range(n_c)) & 1).astype(bool)
        out[:, w] = np.bitwise_or.reduce((inphi & keep) * pow2[None, :], axis=1)
    return out


def na_implication(phis, omega_agree, control_agree):
    n, n_w = phis.shape
    n_a, n_c, _ = control_agree.shape
    cmatch = _match_masks(control_agree)
    ok = np.ones(n, dtype=bool)
    for w in range(n_w):
        inphi = ((phis[:, w, None] >> _bit_range(n_c)) & 1).astype(bool)
        for a in range(n_a):
            for v in range(n_w):
                if not omega_agree[a, w, v]:
                    continue
                matched = (phis[:, v, None] & cmatch[a][None, :]) != 0
                ok &= ~np.any(inphi & ~matched, axis=1)
    return ok


def na_implication_at(phis, w, omega_agree, control_agree):
    n, n_w = phis.shape
    n_a, n_c, _ = control_agree.shape
    cmatch = _match_masks(control_agree)
    ok = np.ones(n, dtype=bool)
    inphi = ((phis[:, w, None] >> _bit_range(n_c)) & 1).astype(bool)
    for a in range(n_a):
        for v in range(n_w):
            if not omega_agree[a, w, v]:
                continue
            matched = (phis[:, v, None] & cmatch[a][None, :]) != 0
            ok &= ~np.any(inphi & ~matched, axis=1)
    return ok


def na_trace_eq(phis, agree_mask, trace_class, class_count):
    n_a, n_w = agree_mask.shape
    ok = np.ones(phis.shape[0], dtype=bool)
    bits = _value_bits(phis, trace_class.shape[1])
    for a in range(n_a):
        tm = _trace_masks_from_bits(bits, a, trace_class)
        for w in range(n_w):
            hat = tm[:, w].copy()
            for v in _agree_members(agree_mask, a, w, skip=w):
                hat &= tm[:, v]
            ok &= hat == tm[:, w]
    return ok


def na_trace_eq_at(phis, w, agree_mask, trace_class, class_count):
    n_a = agree_mask.shape[0]
    ok = np.ones(phis.shape[0], dtype=bool)
    bits = _value_bits(phis, trace_class.shape[1])
    for a in range(n_a):
        tm = _trace_masks_from_bits(bits, a, trace_class)
        hat = tm[:, w].copy()
        for v in _agree_members(agree_mask, a, w, skip=w):
            hat &= tm[:, v]
        ok &= hat == tm[:, w]
    return ok


def na_symmetric(phis, omega_agree, trace_class):
    n_a, n_w, _ = omega_agree.shape
    ok = np.ones(phis.shape[0], dtype=bool)
    bits = _value_bits(phis, trace_class.shape[1])
    for a in range(n_a):
        tm = _trace_masks_from_bits(bits, a, trace_class)
        for w in range(n_w):
            for v in range(n_w):
                if omega_agree[a, w, v]:
                    ok &= tm[:, w] == tm[:, v]
    return ok


def feasible_masks(
    phis, agree_mask, trace_class, class_members, class_count, full_control_mask
):
    n_a, n_w = agree_mask.shape
    n = phis.shape[0]
    out = np.full((n, n_w), full_control_mask, dtype=np.int64)
    bits = _value_bits(phis, trace_class.shape[1])
    for a in range(n_a):
        tm = _trace_masks_from_bits(bits, a, trace_class)
        n_t = int(class_count[a])
        full = (1 << n_t) - 1
        for w in range(n_w):
            hat = np.full(n, full, dtype=np.int64)
            for v in _agree_members(agree_mask, a, w, skip=w):
                hat &= tm[:, v]
            out[:, w] &= _expand_classes(hat, a, class_members, n_t)
    return out


def stabilize(phis, agree_mask, trace_class, class_members, class_count, max_steps):
    n = phis.shape[0]
    cur = phis.copy()
    steps = np.zeros(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    for _ in range(int(max_steps)):
        idx = np.flatnonzero(active)
        sub = cur[idx]
        nxt = refine_traces(sub, agree_mask, trace_class, class_members, class_count)
        steps[idx] += 1
        settled = np.all(nxt == sub, axis=1)
        cur[idx] = nxt
        active[idx[settled]] = False
        if not active.any():
            return cur, steps
    steps[active] = -1
    return cur, steps
