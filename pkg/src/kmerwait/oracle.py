"""Brute-force references for small instances.

Everything here is deliberately naive: full enumeration over texts, a
plain dynamic program over pattern-matching states, and straight Monte
Carlo.  These are the independent answers that the generating-function
and automaton routes are tested against, so this module must not import
from those.
"""

import math
from collections import namedtuple
from itertools import product

import numpy as np

from .gfcore import QONE, QZERO, as_q
from .words import putative_hit_count, putative_hit_positions

# Refuse enumerations beyond this many texts.
MAX_ENUM = 1 << 26


EnumerationReport = namedtuple(
    "EnumerationReport",
    ["b", "n", "avoid_count", "avoid_prob", "census", "hit_sum",
     "typed_hit_sums"],
)


def _text_prob(letters, nuq):
    pr = QONE
    for c in letters:
        pr = pr * nuq[c]
    return pr


def _check_size(sigma, n):
    if sigma ** n > MAX_ENUM:
        raise ValueError(
            "refusing to enumerate %d^%d texts; use the analytic routes" % (sigma, n)
        )


def enumerate_census(b, n, alphabet, nu, mark=None):
    """Putative-hit census over all length-n texts avoiding b, exactly.

    Returns an EnumerationReport where census maps a hit count m to the
    total probability of avoiding texts with exactly m putative hits
    (typed hits when mark=(source, target) is given).  avoid_prob is the
    total probability of avoiding texts, hit_sum the unconditioned
    expectation of the untyped count, and typed_hit_sums the same split
    by substitution type.
    """
    alphabet.check_word(b)
    if mark is not None:
        alphabet.check_word(mark[0] + mark[1])
        if mark[0] == mark[1]:
            raise ValueError("a substitution type needs two distinct letters")
    sigma = len(alphabet)
    _check_size(sigma, n)
    nuq = {c: as_q(nu[c]) for c in alphabet.symbols}
    types = [(a, c) for a in alphabet.symbols for c in alphabet.symbols
             if a != c]
    census = {}
    avoid_count = 0
    avoid_prob = QZERO
    hit_sum = QZERO
    typed = {ty: QZERO for ty in types}
    for letters in product(alphabet.symbols, repeat=n):
        w = "".join(letters)
        if b in w:
            continue
        pr = _text_prob(letters, nuq)
        found = putative_hit_positions(w, b, alphabet)
        avoid_count += 1
        avoid_prob = avoid_prob + pr
        hit_sum = hit_sum + len(found.positions) * pr
        for pos, target in found.pairs:
            typed[(w[pos - 1], target)] += pr
        if mark is None:
            h = len(found.positions)
        else:
            h = sum(1 for pos, target in found.pairs
                    if (w[pos - 1], target) == mark)
        census[h] = census.get(h, QZERO) + pr
    return EnumerationReport(b, n, avoid_count, avoid_prob, census, hit_sum,
                             typed)


def avoid_weight(words, n, alphabet, nu):
    """Total probability of length-n texts containing none of `words`."""
    sigma = len(alphabet)
    _check_size(sigma, n)
    nuq = {c: as_q(nu[c]) for c in alphabet.symbols}
    total = QZERO
    for letters in product(alphabet.symbols, repeat=n):
        w = "".join(letters)
        if any(v in w for v in words):
            continue
        total = total + _text_prob(letters, nuq)
    return total


def _kmp_table(b, alphabet):
    """next_state[q][letter_index] for the pattern automaton of b.

    States 0..k track the longest prefix of b matched so far; state k means
    an occurrence was seen and absorbs.  Built by brute force, which is all
    an oracle needs.
    """
    k = len(b)
    syms = alphabet.symbols
    table = []
    for q in range(k + 1):
        row = []
        for a in syms:
            if q == k:
                row.append(k)
                continue
            if a == b[q]:
                row.append(q + 1)
                continue
            s = b[:q] + a
            best = 0
            for length in range(min(len(s), k - 1), 0, -1):
                if s[-length:] == b[:length]:
                    best = length
                    break
            row.append(best)
        table.append(row)
    return table


def exact_pn_tiny(b, n, params):
    """Exact probability that b first appears after one substitution round.

    Enumerates every initial text of length n avoiding b and, for each,
    runs an exact DP over pattern states of the mutated text, where each
    letter a mutates independently per params.p1[a].  Exponential in n;
    guarded accordingly.
    """
    alphabet = params.alphabet
    alphabet.check_word(b)
    k = len(b)
    sigma = len(alphabet)
    _check_size(sigma, n)
    nuq = {c: as_q(params.nu[c]) for c in alphabet.symbols}
    pq = {
        a: [(a2, as_q(params.p1[a][a2])) for a2 in alphabet.symbols
            if as_q(params.p1[a][a2]) != 0]
        for a in alphabet.symbols
    }
    idx = {a: i for i, a in enumerate(alphabet.symbols)}
    nxt = _kmp_table(b, alphabet)
    fbar = QZERO
    appear = QZERO
    for letters in product(alphabet.symbols, repeat=n):
        w = "".join(letters)
        if b in w:
            continue
        pr0 = _text_prob(letters, nuq)
        fbar = fbar + pr0
        # survival DP: mass over pattern states 0..k-1 of the mutated text
        states = {0: QONE}
        for c in letters:
            new = {}
            for q, mass in states.items():
                for a2, pa in pq[c]:
                    q2 = nxt[q][idx[a2]]
                    if q2 == k:
                        continue
                    new[q2] = new.get(q2, QZERO) + mass * pa
            states = new
        avoid1 = QZERO
        for v in states.values():
            avoid1 = avoid1 + v
        appear = appear + pr0 * (QONE - avoid1)
    if fbar == 0:
        raise ValueError("every length-%d text contains the pattern" % n)
    return appear / fbar


def monte_carlo_pn(b, n, params, trials=200000, seed=20260815, chunk=8192):
    """Monte Carlo estimate of the same probability, with standard error.

    Rejection-samples initial texts avoiding b, applies one round of
    independent per-letter substitution, and counts how often b shows up.
    Useful only with inflated mutation rates: nothing resolves p_n at the
    default ~1e-9 rates in any feasible trial count.  Deterministic for a
    fixed seed.  Returns (estimate, stderr).
    """
    if trials < 10 ** 4:
        raise ValueError("need at least 10^4 trials for a meaningful estimate")
    alphabet = params.alphabet
    alphabet.check_word(b)
    rng = np.random.default_rng(seed)
    sigma = len(alphabet)
    k = len(b)
    nu_vec = np.array([float(as_q(params.nu[c])) for c in alphabet.symbols])
    pm = np.array(
        [[float(as_q(params.p1[a][c])) for c in alphabet.symbols]
         for a in alphabet.symbols]
    )
    cum = pm.cumsum(axis=1)
    bcode = np.array([alphabet.index(c) for c in b])
    accepted = 0
    hits = 0
    dry_rounds = 0
    while accepted < trials:
        s0 = rng.choice(sigma, size=(chunk, n), p=nu_vec)
        occ = np.zeros(chunk, dtype=bool)
        for j in range(n - k + 1):
            occ |= (s0[:, j:j + k] == bcode).all(axis=1)
        s0 = s0[~occ]
        if s0.shape[0] == 0:
            dry_rounds += 1
            if dry_rounds > 1000:
                raise ValueError("rejection sampling found no avoiding texts")
            continue
        take = min(trials - accepted, s0.shape[0])
        s0 = s0[:take]
        u = rng.random(s0.shape)
        s1 = (u[..., None] >= cum[s0]).sum(axis=2)
        np.minimum(s1, sigma - 1, out=s1)
        got = np.zeros(take, dtype=bool)
        for j in range(n - k + 1):
            got |= (s1[:, j:j + k] == bcode).all(axis=1)
        hits += int(got.sum())
        accepted += take
    phat = hits / trials
    se = math.sqrt(max(phat * (1.0 - phat), 1e-300) / trials)
    return phat, se
