"""NumPy implementations of the hot loops, used when the extension is unavailable.

Every function performs the same floating-point operations in the same order
as its compiled twin, so both backends select identical items.
"""
import numpy as np


def greedy_vertex(dist, w, lam, p, init):
    n = dist.shape[0]
    gain = np.zeros(n)
    taken = np.zeros(n, dtype=bool)
    order = []
    for u in init:
        order.append(int(u))
        taken[u] = True
        gain += dist[u]
    while len(order) < p:
        score = 0.5 * w + lam * gain
        score[taken] = -np.inf
        best = int(np.argmax(score))
        order.append(best)
        taken[best] = True
        gain += dist[best]
    return np.array(order, dtype=np.int64), gain


def best_pair(dist, w, lam):
    n = dist.shape[0]
    scores = (w[:, None] + w[None, :]) + lam * dist
    scores[np.tril_indices(n)] = -np.inf
    flat = int(np.argmax(scores))
    return divmod(flat, n)


def greedy_edge(dist, w, lam, p):
    n = dist.shape[0]
    rounds = p // 2
    weight = lam * dist + (w[:, None] + w[None, :]) / (p - 1)
    weight[np.tril_indices(n)] = -np.inf
    picked = []
    for _ in range(rounds):
        i, j = divmod(int(np.argmax(weight)), n)
        picked += [i, j]
        weight[[i, j], :] = -np.inf
        weight[:, [i, j]] = -np.inf
    return np.array(picked, dtype=np.int64)


def best_swap(dist, w, lam, selected, gain):
    """Best ``(delta, out, into)`` over single swaps; scan order is (into, out) ascending."""
    n = dist.shape[0]
    srt = np.sort(np.asarray(selected, dtype=np.int64))
    mask = np.ones(n, dtype=bool)
    mask[srt] = False
    outside = np.nonzero(mask)[0]
    if len(outside) == 0 or len(srt) == 0:
        return -np.inf, -1, -1
    delta = (w[outside][:, None] - w[srt][None, :]) + lam * (
        (gain[outside][:, None] - dist[np.ix_(outside, srt)]) - gain[srt][None, :]
    )
    a, b = divmod(int(np.argmax(delta)), len(srt))
    return float(delta[a, b]), int(srt[b]), int(outside[a])


def brute_force(dist, w, lam, p):
    """Exact maximizer over all p-subsets; ties resolved to the lexicographically first set."""
    n = dist.shape[0]
    if p == 0:
        return 0.0, np.empty(0, dtype=np.int64)
    best = [-np.inf, None]
    cur = [0] * p

    def rec(k, start, val, gain):
        if k == p - 1:
            cand = val + w[start:] + lam * gain[start:]
            i = int(np.argmax(cand))
            if cand[i] > best[0]:
                best[0] = float(cand[i])
                cur[k] = start + i
                best[1] = list(cur)
            return
        for u in range(start, n - (p - k) + 1):
            cur[k] = u
            nxt = gain.copy()
            nxt[u + 1:] = gain[u + 1:] + dist[u, u + 1:]
            rec(k + 1, u + 1, val + w[u] + lam * gain[u], nxt)

    rec(0, 0, 0.0, np.zeros(n))
    return best[0], np.array(best[1], dtype=np.int64)
