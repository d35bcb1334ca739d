"""Independent reference implementations used by the tests.

None of these import the code under test beyond plain data types.
"""

from __future__ import annotations

import itertools

import numpy as np

CATS = ("P", "SP", "N", "SN")
CANONICAL = ("P_OR_SP", "N_OR_SN", "SP_AND_N", "SN_AND_P", "SP_AND_SN", "P_AND_N", "NULL")


def bin_of_signature(sig: set[str]) -> str:
    """Bin of a raw coverage signature, written out case by case."""
    sig = set(sig)
    if "SP" in sig:
        sig.discard("P")
    if "SN" in sig:
        sig.discard("N")
    pos = sig & {"P", "SP"}
    neg = sig & {"N", "SN"}
    if not sig:
        return "NULL"
    if pos and not neg:
        return "P_OR_SP"
    if neg and not pos:
        return "N_OR_SN"
    (p,), (n,) = pos, neg
    return {("SP", "N"): "SP_AND_N", ("P", "SN"): "SN_AND_P", ("SP", "SN"): "SP_AND_SN", ("P", "N"): "P_AND_N"}[(p, n)]


def all_signatures():
    for r in range(5):
        for combo in itertools.combinations(CATS, r):
            yield set(combo)


def round_robin_allocation(sizes, budget):
    """Hand out the budget one sentence at a time, cycling through bins in canonical order."""
    alloc = [0] * len(sizes)
    left = budget
    while left > 0:
        progressed = False
        for b in range(len(sizes)):
            if left == 0:
                break
            if alloc[b] < sizes[b]:
                alloc[b] += 1
                left -= 1
                progressed = True
        if not progressed:
            break
    return alloc


def numeric_grad(f, x: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    """Central differences of scalar ``f`` w.r.t. every entry of ``x`` (modified in place, restored)."""
    g = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        i = it.multi_index
        old = x[i]
        x[i] = old + eps
        up = f()
        x[i] = old - eps
        down = f()
        x[i] = old
        g[i] = (up - down) / (2 * eps)
    return g


def brute_loss(E, w, b, idx, y) -> float:
    h = E[idx].mean(axis=0) if len(idx) else np.zeros_like(w)
    z = float(h @ w + b)
    p = 1.0 / (1.0 + np.exp(-z))
    return float(-(y * np.log(p) + (1 - y) * np.log(1 - p)))


def f1_from_lists(pred, gold) -> float:
    tp = sum(1 for p, g in zip(pred, gold) if p and g)
    fp = sum(1 for p, g in zip(pred, gold) if p and not g)
    fn = sum(1 for p, g in zip(pred, gold) if g and not p)
    return 2 * tp / (2 * tp + fp + fn) if tp else 0.0
