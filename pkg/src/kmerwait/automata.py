"""Finite automata for avoidance, products, and clump counting.

Three constructions live here.  The classical pattern automaton for a
single word and generic products (synchronous or over paired symbols)
drive the matrix route to the first-appearance probability.  The clump
automaton walks the overlap structure of the mutation neighborhood d(b)
and carries a t mark on transitions that reveal a fresh putative-hit
position; its transfer matrix yields the same generating function as the
word-language route, which is the point of building both.
"""

from collections import deque

import numpy as np

from .gfcore import (
    POLY_ONE,
    POLY_T,
    POLY_Z,
    POLY_ZERO,
    Poly,
    Q,
    QONE,
    QZERO,
    RatFun,
    as_q,
)
from .words import correlation_set, neighbors


class Dfa:
    """Deterministic automaton with integer states 0..n-1.

    Transitions live in a dict keyed by (state, symbol); a missing key is
    a deliberately pruned transition and kills the run.  Symbols may be
    letters or letter pairs (for channel products).
    """

    def __init__(self, n_states, symbols, delta, initial, finals):
        self.n_states = n_states
        self.alphabet = tuple(symbols)
        self.delta = dict(delta)
        self.initial = initial
        self.finals = frozenset(finals)

    def step(self, state, symbol):
        return self.delta.get((state, symbol))

    def run(self, word, start=None):
        state = self.initial if start is None else start
        for symbol in word:
            state = self.delta.get((state, symbol))
            if state is None:
                return None
        return state

    def accepts(self, word):
        state = self.run(word)
        return state is not None and state in self.finals

    def is_total(self):
        return all(
            (q, a) in self.delta
            for q in range(self.n_states)
            for a in self.alphabet
        )


def complement(dfa):
    """Swap finals and non-finals.  Only sound for a total automaton."""
    if not dfa.is_total():
        raise ValueError("complement needs a total transition table")
    finals = frozenset(range(dfa.n_states)) - dfa.finals
    return Dfa(dfa.n_states, dfa.alphabet, dfa.delta, dfa.initial, finals)


def universal_dfa(alphabet):
    """One accepting state looping on every symbol."""
    delta = {(0, a): 0 for a in alphabet.symbols}
    return Dfa(1, alphabet.symbols, delta, 0, {0})


def _longest_border_state(s, b):
    # length of the longest suffix of s that is a prefix of b
    top = min(len(s), len(b))
    for m in range(top, -1, -1):
        if s[len(s) - m:] == b[:m]:
            return m
    return 0


def kmp_automaton(b, alphabet):
    """Automaton recognizing the texts that contain b.

    State q is the length of the longest prefix of b matching a suffix of
    the text read so far; state k is absorbing and final, so acceptance
    means b occurred somewhere.
    """
    alphabet.check_word(b)
    k = len(b)
    delta = {}
    for q in range(k):
        for a in alphabet.symbols:
            delta[(q, a)] = _longest_border_state(b[:q] + a, b)
    for a in alphabet.symbols:
        delta[(k, a)] = k
    return Dfa(k + 1, alphabet.symbols, delta, 0, {k})


def ends_with_dfa(v, alphabet):
    """Automaton for the texts whose last |v| letters spell v."""
    alphabet.check_word(v)
    k = len(v)
    delta = {}
    for q in range(k + 1):
        for a in alphabet.symbols:
            delta[(q, a)] = _longest_border_state(v[:q] + a if q < k else v + a, v)
    return Dfa(k + 1, alphabet.symbols, delta, 0, {k})


def occurs_before_end_dfa(v, alphabet):
    """Automaton for the texts with an occurrence of v ending before the
    last position.  Complementing it forbids every occurrence except one
    flush with the right end, which is the building block for the
    right-extension languages."""
    alphabet.check_word(v)
    k = len(v)
    delta = {}
    for q in range(k):
        for a in alphabet.symbols:
            delta[(q, a)] = _longest_border_state(v[:q] + a, v)
    for a in alphabet.symbols:
        delta[(k, a)] = k + 1
        delta[(k + 1, a)] = k + 1
    return Dfa(k + 2, alphabet.symbols, delta, 0, {k + 1})


def product(a1, a2, final_rule, paired=False):
    """Reachable product of two automata.

    With paired=False both machines read the same symbol and must share an
    alphabet.  With paired=True the product reads symbol pairs (x, y) fed
    componentwise, which is how a sequence and its one-step mutant are
    tracked together.  final_rule maps the two component finality flags to
    the product's finality.  States are numbered in discovery order and the
    component pairs are kept on the result as pair_labels.
    """
    if paired:
        symbols = tuple((x, y) for x in a1.alphabet for y in a2.alphabet)
    else:
        if a1.alphabet != a2.alphabet:
            raise ValueError("synchronous product needs a shared alphabet")
        symbols = a1.alphabet
    start = (a1.initial, a2.initial)
    order = {start: 0}
    pairs = [start]
    delta = {}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        src = order[(p, q)]
        for s in symbols:
            if paired:
                t1 = a1.delta.get((p, s[0]))
                t2 = a2.delta.get((q, s[1]))
            else:
                t1 = a1.delta.get((p, s))
                t2 = a2.delta.get((q, s))
            if t1 is None or t2 is None:
                continue
            tgt = (t1, t2)
            if tgt not in order:
                order[tgt] = len(pairs)
                pairs.append(tgt)
                queue.append(tgt)
            delta[(src, s)] = order[tgt]
    finals = {
        i
        for i, (p, q) in enumerate(pairs)
        if final_rule(p in a1.finals, q in a2.finals)
    }
    out = Dfa(len(pairs), symbols, delta, 0, finals)
    out.pair_labels = tuple(pairs)
    return out


def dfa_series(dfa, weights, n_max):
    """Exact accepted mass after 0..n_max letters.

    weights maps each symbol of the automaton's alphabet to a rational
    weight; the result is the weighted count of accepted length-n inputs.
    """
    wq = {s: as_q(w) for s, w in weights.items()}
    u = [QZERO] * dfa.n_states
    u[dfa.initial] = QONE
    out = []
    for _ in range(n_max + 1):
        out.append(sum((u[q] for q in dfa.finals), QZERO))
        v = [QZERO] * dfa.n_states
        for (q, s), t in dfa.delta.items():
            if u[q]:
                v[t] += u[q] * wq[s]
        u = v
    return out


def _label_windows(label, b, dset):
    # every neighbor occurrence inside the label, as
    # (window start, hit position, target letter, text letter)
    k = len(b)
    out = []
    for start in range(len(label) - k + 1):
        w = label[start:start + k]
        if w in dset:
            m = next(i for i in range(k) if w[i] != b[i])
            out.append((start, start + m, b[m], w[m]))
    return out


def _state_hit_mark(label, b, dset, mark):
    """Mark exponent of an occurrence state, from its label alone.

    The label always covers the whole overlap chain that can share hit
    positions with the occurrence just completed, so scanning it decides
    freshness exactly: an untyped hit is fresh when its position was not
    hit before, a typed hit when the (position, target) pair is new and
    the (text letter, target) pair matches the requested type.
    """
    windows = _label_windows(label, b, dset)
    if not windows or windows[-1][0] != len(label) - len(b):
        return 0
    _, pos, target, source = windows[-1]
    earlier = windows[:-1]
    if mark is None:
        return 0 if pos in {p for (_, p, _, _) in earlier} else 1
    if (source, target) != mark:
        return 0
    return 0 if (pos, target) in {(p, t) for (_, p, t, _) in earlier} else 1


def _theta_word(o, rev, crossing, k):
    # backward breadth-first search, at most k layers deep; paths may not
    # cross a marked state except at their endpoints
    letters = []
    layer = {o}
    for _ in range(k):
        step = [(q, a) for t in layer for (q, a) in rev.get(t, ())]
        if not step:
            break
        symbols = {a for (_, a) in step}
        if len(symbols) != 1:
            raise AssertionError("ambiguous incoming letters, Markov property lost")
        letters.append(symbols.pop())
        layer = {q for (q, _) in step} - crossing
        if not layer:
            break
    return "".join(reversed(letters))


class ClumpAutomaton:
    """Pruned automaton over the prefixes of the neighbor overlap words.

    Built by clump_automaton.  Carries the occurrence states O, the
    non-extension states Ebar (clump core E is everything else), the
    maximal unique incoming word theta per occurrence state, and per
    transition the mark exponent for the selected mutation type.  theta is
    always derived from the untyped marks, so it describes the structure
    and not the type filter.
    """

    def __init__(self, b, alphabet, dfa, labels, occ, ebar, theta, marks,
                 state_mark, mark, pruned):
        self.b = b
        self.alphabet = alphabet
        self.dfa = dfa
        self.labels = tuple(labels)
        self.O = frozenset(occ)
        self.Ebar = frozenset(ebar)
        self.E = frozenset(range(dfa.n_states)) - self.Ebar
        self.theta = dict(theta)
        self.marks = dict(marks)
        self.state_mark = tuple(state_mark)
        self.mark = mark
        self.pruned = tuple(pruned)


def state_marks(ca, mark):
    """Per-state mark exponents of a clump automaton for one mutation type
    (or for every type at once with mark=None).  The automaton structure
    does not depend on the type, so one build serves all types."""
    if mark is not None:
        src, tgt = mark
        ca.alphabet.check_word(src + tgt)
        if src == tgt:
            raise ValueError("a substitution type needs two distinct letters")
    dset = set(neighbors(ca.b, ca.alphabet))
    return tuple(
        _state_hit_mark(ca.labels[i], ca.b, dset, mark) if i in ca.O else 0
        for i in range(ca.dfa.n_states)
    )


def clump_automaton(b, alphabet, mark=None):
    """Build the clump automaton of the mutation neighborhood of b.

    States are the b-avoiding prefixes of X, the set of neighbor words
    extended by their correlation words; reading a letter moves to the
    longest suffix that is again such a prefix, and transitions that would
    complete b itself are pruned.  Every state is terminal.  mark selects
    the mutation type whose fresh putative hits carry the t exponent.
    """
    alphabet.check_word(b)
    d = neighbors(b, alphabet)
    dset = set(d)
    k = len(b)
    xwords = set(d)
    for vi in d:
        for vj in d:
            for e in correlation_set(vi, vj):
                if e:
                    xwords.add(vi + e)
    prefixes = {w[:i] for w in xwords for i in range(len(w) + 1)}

    labels = [""]
    index = {"": 0}
    delta = {}
    pruned = []
    queue = deque([""])
    head = b[:-1]
    while queue:
        lab = queue.popleft()
        src = index[lab]
        for a in alphabet.symbols:
            if a == b[-1] and len(lab) >= k - 1 and lab.endswith(head):
                pruned.append((src, a))
                continue
            grown = lab + a
            for cut in range(len(grown) + 1):
                tgt = grown[cut:]
                if tgt in prefixes:
                    break
            if tgt not in index:
                index[tgt] = len(labels)
                labels.append(tgt)
                queue.append(tgt)
            delta[(src, a)] = index[tgt]
    assert all(b not in lab for lab in labels)

    n_states = len(labels)
    dfa = Dfa(n_states, alphabet.symbols, delta, 0, frozenset(range(n_states)))

    occ = frozenset(
        i for i, lab in enumerate(labels) if len(lab) >= k and lab[-k:] in dset
    )
    ebar = set()
    for v in d:
        for j in range(k):
            ebar.add(dfa.run(v[:j]))
    assert ebar == {i for i, lab in enumerate(labels) if len(lab) < k}

    untyped = tuple(
        _state_hit_mark(labels[i], b, dset, None) if i in occ else 0
        for i in range(n_states)
    )
    if mark is None:
        smark = untyped
    else:
        src_t = mark
        if src_t[0] == src_t[1]:
            raise ValueError("a substitution type needs two distinct letters")
        alphabet.check_word(src_t[0] + src_t[1])
        smark = tuple(
            _state_hit_mark(labels[i], b, dset, mark) if i in occ else 0
            for i in range(n_states)
        )
    marks = {key: smark[t] for key, t in delta.items()}

    rev = {}
    for (q, a), t in delta.items():
        rev.setdefault(t, []).append((q, a))
    crossing = {i for i in range(n_states) if untyped[i]}
    theta = {o: _theta_word(o, rev, crossing, k) for o in sorted(occ)}

    return ClumpAutomaton(b, alphabet, dfa, labels, occ, ebar, theta, marks,
                          smark, mark, pruned)


def markov_property_check(ca, b=None):
    """Verify that each clump-core state pins down its recent history.

    Collects, for every length up to |b|, the set of words that can lead
    into each state of E from anywhere; the property holds when no such
    set has two members.  Returns False as soon as a collision shows up.
    """
    k = len(b if b is not None else ca.b)
    dfa = ca.dfa
    current = {q: {""} for q in range(dfa.n_states)}
    for _ in range(k):
        nxt = {}
        for q, ws in current.items():
            for a in dfa.alphabet:
                t = dfa.delta.get((q, a))
                if t is None:
                    continue
                nxt.setdefault(t, set()).update(w + a for w in ws)
        for e in ca.E:
            if len(nxt.get(e, ())) > 1:
                return False
        current = nxt
    return True


class TransferMatrix:
    """Substochastic transfer matrix with a t mark on some entries.

    rows[i] maps a target state j to (rational weight, t exponent); the
    exponent is 0 or 1 and is a property of the target state.  Row sums at
    t=1 equal 1 except on rows that lost a pruned transition.
    """

    def __init__(self, size, rows):
        self.size = size
        self.rows = rows


def transfer_matrix(ca, nu):
    """Weighted adjacency matrix H(t) of a clump automaton."""
    nuq = {a: as_q(x) for a, x in nu.items()}
    total_nu = sum(nuq.values(), QZERO)
    if total_nu != QONE or any(x <= 0 for x in nuq.values()):
        raise ValueError("letter distribution must be positive and sum to 1")
    rows = []
    for q in range(ca.dfa.n_states):
        row = {}
        for a in ca.dfa.alphabet:
            t = ca.dfa.delta.get((q, a))
            if t is None:
                continue
            coef, texp = row.get(t, (QZERO, ca.state_mark[t]))
            row[t] = (coef + nuq[a], texp)
        rows.append(row)
    for q, row in enumerate(rows):
        total = sum((c for c, _ in row.values()), QZERO)
        if any((q, a) not in ca.dfa.delta for a in ca.dfa.alphabet):
            assert total < QONE
        else:
            assert total == QONE
    return TransferMatrix(ca.dfa.n_states, rows)


def clump_series(ca, nu, n_max):
    """Distribution of the accumulated mark count over avoiding texts.

    Returns one dict per length n <= n_max, mapping a mark count m to the
    probability that a random text of length n avoids b and its run
    collects exactly m marks.  Everything is exact.
    """
    tm = transfer_matrix(ca, nu)
    u = [dict() for _ in range(tm.size)]
    u[ca.dfa.initial][0] = QONE
    out = []
    for _ in range(n_max + 1):
        census = {}
        for col in u:
            for m, w in col.items():
                census[m] = census.get(m, QZERO) + w
        out.append({m: w for m, w in sorted(census.items()) if w})
        nxt = [dict() for _ in range(tm.size)]
        for i, row in enumerate(tm.rows):
            if not u[i]:
                continue
            for j, (coef, texp) in row.items():
                dst = nxt[j]
                for m, w in u[i].items():
                    key = m + texp
                    dst[key] = dst.get(key, QZERO) + w * coef
        u = nxt
    return out


def clump_moment_series(ca, nu, n_max, mark_vectors=None, exact=True):
    """Avoiding mass and expected accumulated marks per text length.

    mark_vectors is a list of 0/1 state vectors, one per mutation type of
    interest (defaults to the automaton's own marks).  Returns (fbar, hits)
    where fbar[n] is the avoiding probability at length n and hits[v][n]
    the unconditioned expectation of the marks collected for vector v.
    Exact mode runs in rationals; the float mode uses numpy and is meant
    for chromosome-scale lengths.
    """
    tm = transfer_matrix(ca, nu)
    size = tm.size
    if mark_vectors is None:
        mark_vectors = [ca.state_mark]
    if exact:
        u = [QZERO] * size
        u[ca.dfa.initial] = QONE
        svecs = [[QZERO] * size for _ in mark_vectors]
        fbar = []
        hits = [[] for _ in mark_vectors]
        for _ in range(n_max + 1):
            fbar.append(sum(u, QZERO))
            for v, svec in enumerate(svecs):
                hits[v].append(sum(svec, QZERO))
            w = [QZERO] * size
            for i, row in enumerate(tm.rows):
                if u[i]:
                    for j, (coef, _) in row.items():
                        w[j] += u[i] * coef
            nsvecs = []
            for v, svec in enumerate(svecs):
                ns = [QZERO] * size
                for i, row in enumerate(tm.rows):
                    if svec[i]:
                        for j, (coef, _) in row.items():
                            ns[j] += svec[i] * coef
                mv = mark_vectors[v]
                for j in range(size):
                    if mv[j]:
                        ns[j] += w[j]
                nsvecs.append(ns)
            u = w
            svecs = nsvecs
        return fbar, hits
    h1 = np.zeros((size, size))
    for i, row in enumerate(tm.rows):
        for j, (coef, _) in row.items():
            h1[i, j] = float(coef)
    markmat = np.array([[float(x) for x in mv] for mv in mark_vectors])
    u = np.zeros(size)
    u[ca.dfa.initial] = 1.0
    smat = np.zeros((len(mark_vectors), size))
    fbar = []
    hits = [[] for _ in mark_vectors]
    for _ in range(n_max + 1):
        fbar.append(float(u.sum()))
        for v in range(len(mark_vectors)):
            hits[v].append(float(smat[v].sum()))
        w = u @ h1
        smat = smat @ h1 + w[None, :] * markmat
        u = w
    return fbar, hits


def _det_q(mat):
    # exact determinant by Gaussian elimination over the rationals
    size = len(mat)
    m = [list(r) for r in mat]
    det = QONE
    for col in range(size):
        piv = next((r for r in range(col, size) if m[r][col]), None)
        if piv is None:
            return QZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = QONE / m[col][col]
        for r in range(col + 1, size):
            if m[r][col]:
                f = m[r][col] * inv
                for c in range(col + 1, size):
                    if m[col][c]:
                        m[r][c] -= f * m[col][c]
                m[r][col] = QZERO
    return det


def _lagrange_z(points, values):
    total = POLY_ZERO
    for m, val in enumerate(values):
        if not val:
            continue
        basis = POLY_ONE
        scale = val
        for j, pj in enumerate(points):
            if j == m:
                continue
            basis = basis * (POLY_Z - Poly.const(Q(pj)))
            scale = scale / Q(points[m] - pj)
        total = total + basis.scale(scale)
    return total


def _lagrange_t(points, values):
    total = POLY_ZERO
    for m, val in enumerate(values):
        if val.is_zero():
            continue
        basis = POLY_ONE
        scale = QONE
        for j, pj in enumerate(points):
            if j == m:
                continue
            basis = basis * (POLY_T - Poly.const(Q(pj)))
            scale = scale / Q(points[m] - pj)
        total = total + (basis * val).scale(scale)
    return total


MAX_EXACT_STATES = 48


def gf_from_clump_automaton(ca, nu, n_terms=None):
    """Generating function of avoiding texts with marks counted by t.

    With n_terms set, returns the coefficient stream (one dict per length,
    as in clump_series) from iterated vector products.  Otherwise solves
    (I - z H(t)) y = 1 exactly by Cramer's rule and returns the component
    of y at the initial state as a RatFun.  The t dependence is recovered
    by interpolation on integer points so that every determinant is a
    plain rational computation, sampled in z the same way.
    """
    if n_terms is not None:
        return clump_series(ca, nu, n_terms)
    tm = transfer_matrix(ca, nu)
    size = tm.size
    if size > MAX_EXACT_STATES:
        raise ValueError(
            "exact clump generating function capped at %d states" % MAX_EXACT_STATES
        )
    init = ca.dfa.initial
    marked = sum(1 for m in ca.state_mark if m)
    tpoints = list(range(marked + 1))
    zpoints = list(range(size + 1))
    num_slices = []
    den_slices = []
    for t0 in tpoints:
        den_vals = []
        num_vals = []
        tq = Q(t0)
        for z0 in zpoints:
            zq = Q(z0)
            a = [[QZERO] * size for _ in range(size)]
            for i in range(size):
                for j, (coef, texp) in tm.rows[i].items():
                    a[i][j] -= coef * zq * tq ** texp
                a[i][i] += QONE
            den_vals.append(_det_q(a))
            for i in range(size):
                a[i][init] = QONE
            num_vals.append(_det_q(a))
        den_slices.append(_lagrange_z(zpoints, den_vals))
        num_slices.append(_lagrange_z(zpoints, num_vals))
    num = _lagrange_t(tpoints, num_slices)
    den = _lagrange_t(tpoints, den_slices)
    return RatFun(num, den)


def _pair_weights(pair, nu, pmat, cast):
    w = {}
    for (x, y) in pair.alphabet:
        w[(x, y)] = cast(nu[x]) * cast(pmat[x][y])
    return w


def bnn_probability(b, n, params, dps=None):
    """First-appearance probability p_n through the paired product route.

    The numerator runs the product of the avoidance automaton (on the
    original sequence) with the pattern automaton (on the mutant), each
    pair symbol weighted by nu(a) p(a, a'); the denominator runs the
    avoidance automaton alone.  Both are iterated vector by matrix, n
    steps, in float64, or through mpmath when dps is given.
    """
    alphabet = params.alphabet
    k = len(b)
    if n < k:
        raise ValueError("text length must be at least the pattern length")
    aut = kmp_automaton(b, alphabet)
    avoid = complement(aut)
    pair = product(avoid, aut, lambda f, g: f and g, paired=True)
    if dps is not None:
        import mpmath

        with mpmath.workdps(dps):
            def cast(x):
                return mpmath.mpf(int(x.numerator)) / mpmath.mpf(int(x.denominator))

            weights = _pair_weights(pair, params.nu, params.p1, cast)
            num = _iterate_mass_mp(pair, weights, n, pair.finals, mpmath)
            den_w = {a: cast(params.nu[a]) for a in alphabet.symbols}
            den = _iterate_mass_mp(avoid, den_w, n, avoid.finals, mpmath)
            return num / den
    mat = np.zeros((pair.n_states, pair.n_states))
    for (q, s), t in pair.delta.items():
        mat[q, t] += float(params.nu[s[0]]) * float(params.p1[s[0]][s[1]])
    u = np.zeros(pair.n_states)
    u[pair.initial] = 1.0
    for _ in range(n):
        u = u @ mat
    num = u[sorted(pair.finals)].sum()
    dmat = np.zeros((avoid.n_states, avoid.n_states))
    for (q, a), t in avoid.delta.items():
        dmat[q, t] += float(params.nu[a])
    v = np.zeros(avoid.n_states)
    v[avoid.initial] = 1.0
    for _ in range(n):
        v = v @ dmat
    den = v[sorted(avoid.finals)].sum()
    if den <= 0.0:
        raise ArithmeticError("avoiding mass vanished, which cannot happen")
    return float(num / den)


def _iterate_mass_mp(dfa, weights, n, finals, mpmath):
    size = dfa.n_states
    mat = [[mpmath.mpf(0) for _ in range(size)] for _ in range(size)]
    for (q, s), t in dfa.delta.items():
        mat[q][t] += weights[s]
    u = [mpmath.mpf(0)] * size
    u[dfa.initial] = mpmath.mpf(1)
    for _ in range(n):
        nxt = [mpmath.mpf(0)] * size
        for i in range(size):
            ui = u[i]
            if ui:
                row = mat[i]
                for j in range(size):
                    if row[j]:
                        nxt[j] += ui * row[j]
        u = nxt
    return sum(u[q] for q in finals)


def bnn_scan(words, n, params):
    """Vectorized p_n over many equal-length words, float64 throughout.

    Builds every pattern automaton's transition table, assembles the
    weighted product matrices as one stacked tensor, and iterates the
    start vectors against them in parallel.  Returns a numpy array
    aligned with words.
    """
    alphabet = params.alphabet
    k = len(words[0])
    if any(len(w) != k for w in words):
        raise ValueError("scan words must share one length")
    if n < k:
        raise ValueError("text length must be at least the pattern length")
    sig = alphabet.size
    count = len(words)
    tables = np.zeros((count, k + 1, sig), dtype=np.int64)
    for wi, b in enumerate(words):
        aut = kmp_automaton(b, alphabet)
        for q in range(k + 1):
            for ai, a in enumerate(alphabet.symbols):
                tables[wi, q, ai] = aut.delta[(q, a)]
    onehot = np.zeros((count, sig, k + 1, k + 1))
    wI = np.arange(count)[:, None, None]
    aI = np.arange(sig)[None, :, None]
    pI = np.arange(k + 1)[None, None, :]
    onehot[wI, aI, pI, tables.transpose(0, 2, 1)] = 1.0
    nu_vec = np.array([float(params.nu[a]) for a in alphabet.symbols])
    wgt = np.array(
        [[float(params.nu[x]) * float(params.p1[x][y]) for y in alphabet.symbols]
         for x in alphabet.symbols]
    )
    dim = (k + 1) ** 2
    num_mat = np.einsum("ab,wapi,wbqj->wpqij", wgt, onehot, onehot).reshape(
        count, dim, dim
    )
    den_mat = np.einsum("a,wapi->wpi", nu_vec, onehot)
    u = np.zeros((count, 1, dim))
    u[:, 0, 0] = 1.0
    v = np.zeros((count, 1, k + 1))
    v[:, 0, 0] = 1.0
    for _ in range(n):
        u = u @ num_mat
        v = v @ den_mat
    fin = [p * (k + 1) + k for p in range(k)]
    num = u[:, 0, fin].sum(axis=1)
    den = v[:, 0, :k].sum(axis=1)
    return num / den


def to_dot(obj):
    """Graphviz source for an automaton.

    Clump automata get their prefix-string state names, a tilde after the
    letter on transitions into marked states, and a comment per pruned
    transition; plain automata get numbered states with finals doubled.
    """
    lines = ["digraph automaton {", "  rankdir=LR;"]
    if isinstance(obj, ClumpAutomaton):
        for i, lab in enumerate(obj.labels):
            shape = "doublecircle" if i in obj.O else "circle"
            lines.append('  n%d [label="%s" shape=%s];' % (i, lab or "eps", shape))
        for (q, a), t in sorted(obj.dfa.delta.items()):
            tilde = "~" if obj.marks[(q, a)] else ""
            lines.append('  n%d -> n%d [label="%s%s"];' % (q, t, a, tilde))
        for (q, a) in obj.pruned:
            lines.append(
                "  // pruned: state %d reading %s would complete the pattern"
                % (q, a)
            )
    else:
        for i in range(obj.n_states):
            shape = "doublecircle" if i in obj.finals else "circle"
            lines.append('  n%d [label="%d" shape=%s];' % (i, i, shape))
        for (q, a), t in sorted(obj.delta.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
            lines.append('  n%d -> n%d [label="%s"];' % (q, t, a))
    lines.append("}")
    return "\n".join(lines)
