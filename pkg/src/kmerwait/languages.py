"""Language decompositions for word avoidance and clump statistics.

For a reduced set of words (no word a factor of another) and a memoryless
letter distribution, the texts avoiding the set, the texts ending with a
first occurrence, the minimal continuations between consecutive
occurrences, and the occurrence-free tails satisfy a linear system whose
generating-function translation is solved here exactly.  On top of that
sit the code matrices describing how occurrences chain into overlapping
clumps, and the assembly of the bivariate function F(z, t) counting
putative-hit positions (marked by t) in texts that avoid a given k-mer.
"""

from .gfcore import (
    POLY_ONE,
    POLY_Z,
    POLY_ZERO,
    Poly,
    QONE,
    QZERO,
    RatFun,
    adjugate_poly,
    as_q,
    bareiss_det,
    mat_mul_poly,
    rfm_inverse,
)
from .words import (
    correlation_set,
    is_reduced,
    neighbors,
    occurrence_starts,
    putative_hit_count,
    word_prob,
)


def _dist(alphabet, nu):
    """Validate a letter distribution and convert it to exact rationals."""
    vals = {}
    for c in alphabet.symbols:
        if c not in nu:
            raise ValueError("distribution missing letter %r" % c)
        q = as_q(nu[c])
        if q <= 0:
            raise ValueError("letter probabilities must be positive")
        vals[c] = q
    total = QZERO
    for q in vals.values():
        total = total + q
    if total != 1:
        raise ValueError("letter probabilities must sum to 1 exactly")
    return vals


def _set_gf(ws, nuq):
    p = POLY_ZERO
    for w in ws:
        p = p + Poly.monomial(word_prob(w, nuq), len(w), 0)
    return p


def _row_sum(mat, i, ncols=None):
    ncols = len(mat[i]) if ncols is None else ncols
    acc = POLY_ZERO
    for j in range(ncols):
        acc = acc + mat[i][j]
    return acc


class _System:
    """Raw polynomial data of a solved system, kept for reuse."""

    __slots__ = ("words", "vpolys", "C", "B", "delta", "adjB", "nuq")

    def __init__(self, words, vpolys, C, B, delta, adjB, nuq):
        self.words = words
        self.vpolys = vpolys
        self.C = C
        self.B = B
        self.delta = delta
        self.adjB = adjB
        self.nuq = nuq


class LanguageGFs:
    """Solved language system for a reduced word set.

    N is the generating function of texts avoiding every word of the set;
    R[j] of texts ending with a first occurrence, which is of word j;
    M[i][j] of minimal continuations from an occurrence of word i to the
    next occurrence, of word j; U[i] of tails after an occurrence of word
    i seeing no further occurrence.  All entries are exact RatFuns.
    """

    def __init__(self, words, N, R, M, U, system):
        self.words = tuple(words)
        self.N = N
        self.R = list(R)
        self.M = [list(row) for row in M]
        self.U = list(U)
        self.system = system
        self.extended = None


def _adjugate_via_inverse(B, delta):
    """Adjugate of a larger t-free matrix through its fraction-field inverse."""
    inv = rfm_inverse([[RatFun(e) for e in row] for row in B])
    drf = RatFun(delta)
    out = []
    for row in inv:
        orow = []
        for e in row:
            adj = e * drf
            if adj.den != POLY_ONE:
                raise ArithmeticError("adjugate reconstruction failed")
            orow.append(adj.num)
        out.append(orow)
    return out


def rs_solve(words, alphabet, nu):
    """Solve the avoidance/first-occurrence language system exactly.

    The unknowns N, R_j, M_ij, U_i are determined by the overlap structure
    of the word set: with C_ij the generating function of the correlation
    set of (v_i, v_j) and v_j(z) the word weight, the matrix
    B_ij = (1-z) C_ij + v_j(z) encodes the whole system.  Its determinant
    and adjugate give all four families in closed form; the avoiding
    function is recovered once per column and cross-checked.
    """
    words = tuple(words)
    if not words:
        raise ValueError("need at least one word")
    for w in words:
        alphabet.check_word(w)
    if not is_reduced(words):
        raise ValueError("word set is not reduced (some word is a factor of another)")
    nuq = _dist(alphabet, nu)
    r = len(words)
    vpolys = [Poly.monomial(word_prob(w, nuq), len(w), 0) for w in words]
    C = [[_set_gf(correlation_set(vi, vj), nuq) for vj in words] for vi in words]
    one_minus_z = POLY_ONE - POLY_Z
    B = [[one_minus_z * C[i][j] + vpolys[j] for j in range(r)] for i in range(r)]
    delta = bareiss_det(B)
    if delta.is_zero():
        raise ArithmeticError("degenerate language system")
    adjB = adjugate_poly(B) if r <= 6 else _adjugate_via_inverse(B, delta)

    U = [RatFun(_row_sum(adjB, i), delta) for i in range(r)]
    Rnum = []
    R = []
    for j in range(r):
        num = POLY_ZERO
        for i in range(r):
            num = num + vpolys[i] * adjB[i][j]
        Rnum.append(num)
        R.append(RatFun(num, delta))
    M = [
        [
            RatFun((delta if i == j else POLY_ZERO) - one_minus_z * adjB[i][j], delta)
            for j in range(r)
        ]
        for i in range(r)
    ]
    N = None
    for j in range(r):
        numj = POLY_ZERO
        for i in range(r):
            numj = numj + Rnum[i] * C[i][j]
        Nj = RatFun(numj, delta * vpolys[j])
        if N is None:
            N = Nj
        elif not (N == Nj):
            raise ArithmeticError("avoiding function differs across columns")

    system = _System(words, vpolys, C, B, delta, adjB, nuq)
    return LanguageGFs(words, N, R, M, U, system)


def parse_identity_residual(lang):
    """N + R (I-M)^{-1} U - 1/(1-z); exactly zero for a correct solve."""
    r = len(lang.words)
    one = RatFun.const(1)
    zero = RatFun.const(0)
    imm = [
        [(one if i == j else zero) - lang.M[i][j] for j in range(r)]
        for i in range(r)
    ]
    inv = rfm_inverse(imm)
    total = lang.N
    for i in range(r):
        for j in range(r):
            total = total + lang.R[i] * inv[i][j] * lang.U[j]
    return total - RatFun(POLY_ONE, POLY_ONE - POLY_Z)


def structure_identity_residuals(lang):
    """Residuals of the defining right-extension identities, all exactly zero.

    For each word index i, extending the tail by one letter decomposes as
    U_i * z = sum_j M_ij + U_i - 1.  For each column j, avoiding texts
    followed by word j decompose through first occurrences and overlaps:
    N * v_j = sum_i R_i * C_ij.
    """
    sys = lang.system
    if sys.words != lang.words:
        raise ValueError("identities apply to fully solved systems only")
    r = len(lang.words)
    z = RatFun(POLY_Z)
    out = []
    for i in range(r):
        rhs = lang.U[i] - RatFun.const(1)
        for j in range(r):
            rhs = rhs + lang.M[i][j]
        out.append(lang.U[i] * z - rhs)
    for j in range(r):
        lhs = lang.N * RatFun(sys.vpolys[j])
        rhs = RatFun.const(0)
        for i in range(r):
            rhs = rhs + lang.R[i] * RatFun(sys.C[i][j])
        out.append(lhs - rhs)
    return out


def constrained_languages(b, alphabet, nu):
    """Language system of the substitution neighbors of b within b-avoiding texts.

    Solves the extended set (neighbors of b, then b itself) and keeps the
    neighbor rows and columns; the avoiding function N of the extended
    solve is the generating function of texts avoiding b and all its
    neighbors.  The full extended solve stays available as .extended.
    """
    d = neighbors(b, alphabet)
    ext_words = d + (b,)
    full = rs_solve(ext_words, alphabet, nu)
    r = len(d)
    lang = LanguageGFs(
        d,
        full.N,
        full.R[:r],
        [row[:r] for row in full.M[:r]],
        full.U[:r],
        full.system,
    )
    lang.extended = full
    return lang


# ---------------------------------------------------------------------------
# code matrices: how occurrences chain into clumps

def _no_internal_occurrence(w, words):
    """True when every occurrence of a set word in w touches an end of w:
    it starts at position 1 or finishes at the last position."""
    n = len(w)
    for v in words:
        for s in occurrence_starts(w, v):
            if s != 1 and s + len(v) - 1 != n:
                return False
    return True


class CodeMatrix:
    """Finite codeword sets for clump chaining over a reduced word set.

    B[i][j] holds the correlation words e of (v_i, v_j) such that v_i.e
    has no internal occurrence of any set word; K[i][j] additionally drops
    words with a proper prefix already in B[i][j] (a no-op for reduced
    sets, kept as a distinct filtering stage).  Kbar[i][j], present for
    constrained matrices only, further drops extensions that create an
    occurrence of the avoided word.
    """

    def __init__(self, words, B, K, Kbar=None, base=None):
        self.words = tuple(words)
        self.B = B
        self.K = K
        self.Kbar = Kbar
        self.base = base


def code_matrix(words, alphabet):
    """Codeword sets B_ij and K_ij for a reduced word set."""
    words = tuple(words)
    for w in words:
        alphabet.check_word(w)
    if not is_reduced(words):
        raise ValueError("word set is not reduced (some word is a factor of another)")
    r = len(words)
    Bm = []
    Km = []
    for i in range(r):
        brow = []
        krow = []
        for j in range(r):
            cands = [e for e in correlation_set(words[i], words[j]) if e]
            bset = tuple(
                e for e in cands if _no_internal_occurrence(words[i] + e, words)
            )
            kset = tuple(
                e
                for e in bset
                if not any(e[:m] in bset for m in range(1, len(e)))
            )
            brow.append(bset)
            krow.append(kset)
        Bm.append(tuple(brow))
        Km.append(tuple(krow))
    return CodeMatrix(words, tuple(Bm), tuple(Km))


def constrained_code_matrix(b, alphabet):
    """Codeword sets of the neighbor set of b, dropping extensions that
    would create an occurrence of b itself."""
    d = neighbors(b, alphabet)
    cm = code_matrix(d, alphabet)
    r = len(d)
    kbar = tuple(
        tuple(
            tuple(h for h in cm.K[i][j] if b not in d[i] + h)
            for j in range(r)
        )
        for i in range(r)
    )
    return CodeMatrix(d, cm.B, cm.K, Kbar=kbar, base=b)


class MarkedCodes:
    """Generating-function translation of constrained codes.

    v[i] is the weight of neighbor i carrying t to the power of its own
    putative-hit count; K[i][j] translates each codeword extension with t
    to the power of newly created putative hits.  Entries are bivariate
    polynomials.
    """

    def __init__(self, words, v, K, mark):
        self.words = words
        self.v = v
        self.K = K
        self.mark = mark


def marked_code_gf(b, alphabet, nu, mark=None, codes=None):
    """Translate constrained codes to marked generating functions.

    mark=None marks every putative-hit position; mark=(source, target)
    marks only hits where the text letter `source` would need to mutate to
    `target`.  Exponents count hits of v_i . w beyond those of v_i alone
    and are checked to be nonnegative.
    """
    if codes is None:
        codes = constrained_code_matrix(b, alphabet)
    if codes.Kbar is None or codes.base != b:
        raise ValueError("need a constrained code matrix for this word")
    nuq = _dist(alphabet, nu)
    d = codes.words
    r = len(d)
    k = len(b)
    h0 = [putative_hit_count(v, b, alphabet, mark) for v in d]
    vmark = [
        Poly.monomial(word_prob(v, nuq), k, h0[i]) for i, v in enumerate(d)
    ]
    kmat = []
    for i in range(r):
        row = []
        for j in range(r):
            p = POLY_ZERO
            for wext in codes.Kbar[i][j]:
                h = putative_hit_count(d[i] + wext, b, alphabet, mark)
                dm = h - h0[i]
                if dm < 0:
                    raise ArithmeticError("hit count decreased while extending a clump")
                p = p + Poly.monomial(word_prob(wext, nuq), len(wext), dm)
            row.append(p)
        kmat.append(row)
    return MarkedCodes(d, vmark, kmat, mark)


def _mismatch_data(b, words):
    """(index, target letter, text letter) of each neighbor's single mismatch."""
    out = []
    for v in words:
        m = next(i for i in range(len(b)) if v[i] != b[i])
        out.append((m, b[m], v[m]))
    return out


def _enriched_chain(b, codes, nuq, mark):
    """Within-clump chain transfer matrix with positional hit memory.

    A codeword extension creates one new occurrence whose hit position can
    coincide with the hit of an occurrence two or more links back (the
    windows still overlap even though the links are not consecutive).
    Marking each step by hits of v_i.w beyond v_i alone would count such a
    position twice, so the chain state is enriched to (word, memory),
    where memory holds the offsets from the clump end, at most k-2, of
    positions whose hit is already counted.  New hits are marked only when
    their position misses the memory; the memory is shifted and pruned on
    every extension.  Returns (entry state per word, state word indices,
    transfer matrix of bivariate polynomials).
    """
    d = codes.words
    k = len(b)
    r = len(d)
    mis = _mismatch_data(b, d)

    def type_matches(widx):
        m, target, source = mis[widx]
        return mark is None or (source == mark[0] and target == mark[1])

    def remember(widx):
        # untyped: every hit position is dedup-relevant; typed: only
        # counted pairs can be counted again
        return mark is None or type_matches(widx)

    def entry_state(i):
        off = k - 1 - mis[i][0]
        memory = frozenset({off} if off <= k - 2 and remember(i) else ())
        return (i, memory)

    entries = [entry_state(i) for i in range(r)]
    states = []
    index = {}
    queue = sorted(set(entries))
    for st in queue:
        index[st] = len(states)
        states.append(st)
    edges = []
    pos = 0
    while pos < len(queue):
        j, memory = queue[pos]
        pos += 1
        for l in range(r):
            off_new = k - 1 - mis[l][0]
            for w in codes.Kbar[j][l]:
                dlen = len(w)
                shifted = frozenset(o + dlen for o in memory)
                collide = off_new in shifted
                inc = 0
                if type_matches(l) and not collide:
                    inc = 1
                keep = set(o for o in shifted if o <= k - 2)
                if off_new <= k - 2 and remember(l):
                    keep.add(off_new)
                nxt = (l, frozenset(keep))
                if nxt not in index:
                    index[nxt] = len(states)
                    states.append(nxt)
                    queue.append(nxt)
                edges.append(
                    (
                        index[(j, memory)],
                        index[nxt],
                        Poly.monomial(word_prob(w, nuq), dlen, inc),
                    )
                )
    nstates = len(states)
    kmat = [[POLY_ZERO] * nstates for _ in range(nstates)]
    for a, bidx, w in edges:
        kmat[a][bidx] = kmat[a][bidx] + w
    entry_idx = [index[e] for e in entries]
    state_words = [st[0] for st in states]
    return entry_idx, state_words, kmat


def _cofactor(mat, row_del, col_del):
    minor = [
        [mat[rr][cc] for cc in range(len(mat)) if cc != col_del]
        for rr in range(len(mat))
        if rr != row_del
    ]
    if not minor:
        return POLY_ONE
    det = bareiss_det(minor)
    return det if (row_del + col_del) % 2 == 0 else -det


def clump_gf_language(b, alphabet, nu, mark=None):
    """Bivariate generating function F(z, t) over texts avoiding b.

    z tracks text length, t the number of putative-hit positions (of the
    selected mutation type when mark is given).  Texts with no neighbor
    occurrence contribute the extended avoiding function; the rest split
    into a prefix ending just before the first neighbor occurrence, a
    clump, and alternating inter-clump gaps and further clumps, then an
    occurrence-free tail.  Each factor is kept as an exact polynomial over
    a scalar denominator, so the result is a single exact RatFun.
    """
    cons = constrained_languages(b, alphabet, nu)
    full = cons.extended
    sysx = full.system
    nuq = sysx.nuq
    d = cons.words
    r = len(d)
    k = len(b)
    codes = constrained_code_matrix(b, alphabet)
    mk = marked_code_gf(b, alphabet, nu, mark, codes=codes)

    # chains of overlapping extensions within one clump, with enough state
    # to count each hit position once
    entry_idx, state_words, kmat = _enriched_chain(b, codes, nuq, mark)
    nstates = len(state_words)
    imk = [
        [(POLY_ONE if i == j else POLY_ZERO) - kmat[i][j] for j in range(nstates)]
        for i in range(nstates)
    ]
    delta_k = bareiss_det(imk)
    if delta_k.is_zero():
        raise ArithmeticError("degenerate clump chain system")
    # row entry_idx[i] of the adjugate, summed per exit word: the chain may
    # stop at any state, and only the word of the last link matters outside
    gnum = []
    for i in range(r):
        sums = [POLY_ZERO] * r
        for q in range(nstates):
            cof = _cofactor(imk, q, entry_idx[i])
            sums[state_words[q]] = sums[state_words[q]] + cof
        gnum.append([mk.v[i] * sums[j] for j in range(r)])

    delta = sysx.delta
    adjb = sysx.adjB
    vplain = sysx.vpolys
    rp1 = r + 1

    # prefix ending just before the first neighbor occurrence: the
    # first-occurrence texts with the trailing occurrence letters removed
    rrownum = []
    for i in range(r):
        num = POLY_ZERO
        for s in range(rp1):
            num = num + vplain[s] * adjb[s][i]
        rrownum.append(num.shift_div_z(k).scale(QONE / word_prob(d[i], nuq)))

    # occurrence-free tails (over the full extended set)
    unum = [_row_sum(adjb, i, rp1) for i in range(r)]

    # inter-clump gaps: minimal continuations that leave the clump, with
    # the trailing neighbor occurrence removed (the next clump re-adds it)
    one_minus_z = POLY_ONE - POLY_Z
    wnum = []
    for i in range(r):
        row = []
        for j in range(r):
            mn = (delta if i == j else POLY_ZERO) - one_minus_z * adjb[i][j]
            gap = mn - mk.K[i][j].eval_t1() * delta
            row.append(gap.shift_div_z(k).scale(QONE / word_prob(d[j], nuq)))
        wnum.append(row)

    pwg = mat_mul_poly(wnum, gnum)
    d2 = delta * delta_k
    m2 = [
        [(d2 if i == j else POLY_ZERO) - pwg[i][j] for j in range(r)]
        for i in range(r)
    ]
    det_m2 = bareiss_det(m2)
    if det_m2.is_zero():
        raise ArithmeticError("degenerate gap-and-clump system")
    adj_m2 = adjugate_poly(m2)

    row_a = []
    for j in range(r):
        acc = POLY_ZERO
        for i in range(r):
            acc = acc + rrownum[i] * gnum[i][j]
        row_a.append(acc)
    core = POLY_ZERO
    for j in range(r):
        acc = POLY_ZERO
        for s in range(r):
            acc = acc + row_a[s] * adj_m2[s][j]
        core = core + acc * unum[j]

    return full.N + RatFun(core, delta * det_m2)
