"""Waiting times for a k-mer to appear after one round of point mutations.

The model draws an ancestral sequence of n i.i.d. letters and substitutes
every position independently for one generation.  Conditioned on the k-mer
being absent from the ancestor, the number of generations until it first
appears is geometric with success probability p_n, so the expected waiting
time is 1/p_n.  Three estimates of p_n are provided: a truncated
inclusion-exclusion sum (bv), the paired automaton quotient (bnn), and the
clump census of putative-hit positions weighted by the mutation rates
(clump).  The asymptotics routine extracts the quasi-linear growth
constants of the conditioned hit expectations from their generating
functions.
"""

import math
import warnings
from collections import namedtuple
from fractions import Fraction
from importlib import resources
from itertools import product as iproduct

import mpmath

from .automata import bnn_probability, bnn_scan, clump_automaton, \
    clump_moment_series, state_marks
from .gfcore import Q, QONE, QZERO, as_q
from .languages import clump_gf_language
from .words import Alphabet, minimal_period

ROW_SUM_TOL = 1e-7
NU_SUM_TOL = 1e-12
REGIME_LIMIT = 1e-2


class ModelParams:
    """Letter distribution and single-generation substitution matrix.

    nu maps each letter to an exact rational probability; p1[a][b] is the
    probability that letter a is substituted by b in one generation.  The
    distribution must sum to 1 (a drift below 1e-12, as produced by rounded
    decimal files, is renormalized away).  Substitution rows must sum to 1
    within ROW_SUM_TOL and off-diagonal entries must be nonnegative; rows
    are kept verbatim, without renormalization.
    """

    def __init__(self, alphabet, nu, p1, name="custom"):
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(alphabet)
        self.alphabet = alphabet
        self.name = name
        nuq = {}
        for a in alphabet:
            if a not in nu:
                raise ValueError("distribution misses letter %r" % a)
            v = as_q(nu[a])
            if v <= 0:
                raise ValueError("letter probability for %r must be positive" % a)
            nuq[a] = v
        if len(nu) != len(alphabet):
            raise ValueError("distribution mentions letters outside the alphabet")
        total = sum(nuq.values(), QZERO)
        if total != QONE:
            if abs(float(total - QONE)) > NU_SUM_TOL:
                raise ValueError("letter distribution sums to %s, not 1" % float(total))
            nuq = {a: v / total for a, v in nuq.items()}
        self.nu = nuq
        rows = {}
        for a in alphabet:
            if a not in p1:
                raise ValueError("substitution matrix misses row %r" % a)
            row = {}
            for c in alphabet:
                if c not in p1[a]:
                    raise ValueError("substitution matrix misses entry (%r, %r)" % (a, c))
                v = as_q(p1[a][c])
                if a != c and v < 0:
                    raise ValueError("negative substitution probability (%r, %r)" % (a, c))
                row[c] = v
            s = sum(row.values(), QZERO)
            if abs(float(s - QONE)) > ROW_SUM_TOL:
                raise ValueError("substitution row %r sums to %.12g" % (a, float(s)))
            rows[a] = row
        if len(p1) != len(alphabet):
            raise ValueError("substitution matrix mentions letters outside the alphabet")
        self.p1 = rows

    def mutation_types(self):
        """Ordered letter pairs (a, c) with a != c, in alphabet order."""
        return [(a, c) for a in self.alphabet for c in self.alphabet if a != c]

    def max_mutation(self):
        """Largest off-diagonal substitution probability, as a float."""
        return max(float(self.p1[a][c]) for a, c in self.mutation_types())

    def __repr__(self):
        return "ModelParams(%r, %d letters)" % (self.name, len(self.alphabet))


_BUILTIN = {
    "table1": "table1.params",
    "binary-uniform": "binary_uniform.params",
    "binary_uniform": "binary_uniform.params",
}


def _decimal(tok):
    try:
        f = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ValueError("bad number %r" % tok)
    return Q(f.numerator, f.denominator)


def load_params(source="table1"):
    """Read model parameters from a bundled name or a parameter file.

    Files hold `nu <letter> <value>` and `p <from> <to> <value>` lines with
    `#` comments; the alphabet is the order of the nu lines.  Values are
    parsed as exact decimals.  Bundled sources: "table1" (the default DNA
    model) and "binary-uniform" (uniform letters, certain swap mutations).
    """
    name = str(source)
    if name in _BUILTIN:
        text = resources.files(__package__).joinpath(
            "data/" + _BUILTIN[name]).read_text()
    else:
        with open(name) as handle:
            text = handle.read()
    order = []
    nu = {}
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "nu" and len(toks) == 3:
                sym = toks[1]
                if len(sym) != 1:
                    raise ValueError("letter %r must be a single symbol" % sym)
                if sym in nu:
                    raise ValueError("duplicate letter %r" % sym)
                order.append(sym)
                nu[sym] = _decimal(toks[2])
            elif toks[0] == "p" and len(toks) == 4:
                key = (toks[1], toks[2])
                if key in entries:
                    raise ValueError("duplicate substitution entry %r" % (key,))
                entries[key] = _decimal(toks[3])
            else:
                raise ValueError("malformed line %r" % line)
        except ValueError as exc:
            raise ValueError("%s, line %d: %s" % (name, lineno, exc)) from None
    if len(order) < 2:
        raise ValueError("%s: need at least two nu lines" % name)
    known = set(order)
    for a, c in entries:
        if a not in known or c not in known:
            raise ValueError("%s: substitution entry (%r, %r) uses an "
                             "undeclared letter" % (name, a, c))
    p1 = {a: {c: entries[(a, c)] for c in order if (a, c) in entries}
          for a in order}
    try:
        return ModelParams(Alphabet("".join(order)), nu, p1, name=name)
    except ValueError as exc:
        raise ValueError("%s: %s" % (name, exc)) from None


WaitingTimeResult = namedtuple("WaitingTimeResult",
                               "word n p_n expected_T method")

ExpectedHits = namedtuple("ExpectedHits", "raw conditioned fbar")

ScanRow = namedtuple("ScanRow",
                     "word method p_n expected_T rank minimal_period")

AsymptoticConstants = namedtuple(
    "AsymptoticConstants", "tau psi phi1 phi2 c1 c2 C1 C2 B")


def bv_probability(b, n, params, full_sum=False):
    """Inclusion-exclusion estimate of the appearance probability.

    The chance that b shows up at one fixed position after the mutation
    round, without having been there before, is
    p = prod_i m(b_i) - prod_i nu(b_i) p1(b_i, b_i) with m the mutated
    letter distribution.  Occurrences at positions at least k apart are
    treated as independent, giving the alternating sum over the number of
    disjoint occurrences.  Terms below 1e-30 of the partial sum are
    dropped unless full_sum is set.  Overlapping occurrences are double
    counted by design; the method is kept verbatim as a cross-check.
    """
    params.alphabet.check_word(b)
    k = len(b)
    if k < 1:
        raise ValueError("need a nonempty word")
    mutated = {}
    for beta in params.alphabet:
        mutated[beta] = sum((params.nu[a] * params.p1[a][beta]
                             for a in params.alphabet), QZERO)
    appear = QONE
    stay = QONE
    for c in b:
        appear *= mutated[c]
        stay *= params.nu[c] * params.p1[c][c]
    p_one = appear - stay
    if p_one <= 0:
        raise ArithmeticError("one-position appearance probability is not positive")
    total = QZERO
    power = QONE
    cutoff = Q(1, 10 ** 30)
    for ell in range(1, n // k + 1):
        power *= p_one
        term = math.comb(n - (k - 1) * ell, ell) * power
        if ell % 2 == 0:
            term = -term
        total += term
        if not full_sum and abs(term) < cutoff * abs(total):
            break
    return float(total)


def expected_hits(b, n, params, mark=None):
    """Expected number of putative-hit positions in a length-n text.

    Returns the expectation over all texts (raw), the expectation
    conditioned on the text avoiding b, and the avoiding probability
    itself.  mark selects one substitution type (source, target); None
    counts every type at once.  Binary alphabets are handled in exact
    rationals, larger ones in floats.
    """
    params.alphabet.check_word(b)
    ca = clump_automaton(b, params.alphabet)
    vec = state_marks(ca, mark)
    exact = len(params.alphabet) == 2
    fbar, hits = clump_moment_series(ca, params.nu, n, [vec], exact=exact)
    raw = hits[0][n]
    avoid = fbar[n]
    if not avoid > 0:
        raise ArithmeticError("avoiding probability vanished at length %d" % n)
    return ExpectedHits(raw, raw / avoid, avoid)


def clump_probability(b, n, params):
    """Appearance probability from the clump census of putative hits.

    Sums the conditioned expected counts of typed putative-hit positions,
    each weighted by its substitution probability.  This is the leading
    term of p_n when n times the mutation rate is small, since distinct
    putative hits then materialize essentially independently and at most
    one does per generation.
    """
    params.alphabet.check_word(b)
    ca = clump_automaton(b, params.alphabet)
    types = params.mutation_types()
    vecs = [state_marks(ca, ty) for ty in types]
    exact = len(params.alphabet) == 2
    fbar, hits = clump_moment_series(ca, params.nu, n, vecs, exact=exact)
    avoid = fbar[n]
    if not avoid > 0:
        raise ArithmeticError("avoiding probability vanished at length %d" % n)
    if exact:
        total = sum((hits[i][n] * params.p1[a][c]
                     for i, (a, c) in enumerate(types)), QZERO)
        return float(total / avoid)
    total = sum(hits[i][n] * float(params.p1[a][c])
                for i, (a, c) in enumerate(types))
    return total / avoid


def waiting_time(b, n, params, method="BNN"):
    """Appearance probability and expected waiting time by one method."""
    name = str(method).upper()
    if name == "BV":
        p = bv_probability(b, n, params)
    elif name == "BNN":
        p = bnn_probability(b, n, params)
    elif name == "CLUMP":
        p = clump_probability(b, n, params)
    else:
        raise ValueError("unknown method %r (expected BV, BNN or CLUMP)"
                         % (method,))
    if not 0.0 < p < 1.0:
        raise ArithmeticError("appearance probability %g is out of range" % p)
    return WaitingTimeResult(b, n, p, 1.0 / p, name)


def scan_kmers(k, n, params, method="BNN"):
    """Waiting times of every k-mer, ranked by expected appearance time.

    Returns one row per word, in alphabet order; rank 1 is the word that
    appears soonest, ties broken alphabetically.  Emits a warning when n
    times the largest mutation rate exceeds 1e-2, the regime where the
    single-mutation picture starts to degrade.  The clump method is exact
    but slow here; prefer bnn or bv for full scans.
    """
    if k < 2:
        raise ValueError("scan needs k >= 2")
    exposure = n * params.max_mutation()
    if exposure > REGIME_LIMIT:
        warnings.warn("n times the mutation rate is %.3g; the "
                      "single-mutation regime ends around 1e-2" % exposure,
                      stacklevel=2)
    words = ["".join(t) for t in iproduct(params.alphabet.symbols, repeat=k)]
    name = str(method).upper()
    if name == "BNN":
        probs = [float(p) for p in bnn_scan(words, n, params)]
    elif name == "BV":
        probs = [bv_probability(w, n, params) for w in words]
    elif name == "CLUMP":
        probs = [clump_probability(w, n, params) for w in words]
    else:
        raise ValueError("unknown method %r (expected BV, BNN or CLUMP)"
                         % (method,))
    order = sorted(range(len(words)), key=lambda i: (-probs[i], i))
    rank = [0] * len(words)
    for pos, i in enumerate(order, start=1):
        rank[i] = pos
    return [ScanRow(w, name, probs[i], 1.0 / probs[i], rank[i],
                    minimal_period(w))
            for i, w in enumerate(words)]


def _mp_coeffs(poly):
    return [mpmath.mpf(int(c.numerator)) / mpmath.mpf(int(c.denominator))
            for c in poly.zcoeffs()]


def _mp_eval(coeffs, x):
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _mp_ratio(q):
    return mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator))


def _deriv_coeffs(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _smallest_pole(den_coeffs, z_max):
    """Smallest root of the reduced avoiding-GF denominator beyond 1."""
    val_one = _mp_eval(den_coeffs, mpmath.mpf(1))
    if val_one == 0:
        raise ArithmeticError("avoiding series already singular at z=1")
    lo = mpmath.mpf(1)
    flo = val_one
    step = mpmath.mpf(1) / 128
    hi = None
    z = lo
    while z < z_max:
        z = z + step
        fz = _mp_eval(den_coeffs, z)
        if fz == 0:
            lo, hi = z - step, z + step
            flo = _mp_eval(den_coeffs, lo)
            break
        if (fz > 0) != (flo > 0):
            lo, hi = z - step, z
            flo = _mp_eval(den_coeffs, lo)
            break
    if hi is None:
        raise ArithmeticError("no dominant pole found in (1, %s)" % z_max)
    for _ in range(mpmath.mp.prec + 10):
        mid = (lo + hi) / 2
        fm = _mp_eval(den_coeffs, mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def _synth_div(rev_coeffs, tau):
    """One synthetic division step on reversed coefficients.

    Returns the reversed quotient and the remainder; the remainder equals
    the polynomial's value at tau."""
    out = [rev_coeffs[0]]
    for c in rev_coeffs[1:]:
        out.append(c + out[-1] * tau)
    return out[:-1], out[-1]


def _pole_constants(num_cs, den_cs, tau):
    """Pole order of N/D at tau together with its Laurent data.

    Returns (order, lead, sub).  Order 2 means
    N/D = lead/(z-tau)^2 + sub/(z-tau) + analytic; order 1 means a plain
    residue lead/(z-tau); order 0 means the quotient is analytic at tau.
    Deeper poles are rejected: they would contradict the quasi-linear
    growth the caller is extracting.
    """
    tiny = mpmath.mpf(10) ** (-mpmath.mp.dps // 2)
    scale = max(abs(c) for c in den_cs)
    rev = list(reversed(den_cs))
    q1, r0 = _synth_div(rev, tau)
    if abs(r0) > tiny * scale:
        return 0, mpmath.mpf(0), mpmath.mpf(0)
    ntau = _mp_eval(num_cs, tau)
    q2, d1tau = _synth_div(q1, tau)
    if abs(d1tau) > tiny * scale:
        return 1, ntau / d1tau, mpmath.mpf(0)
    d2 = list(reversed(q2))
    d2tau = _mp_eval(d2, tau)
    if abs(d2tau) < tiny * scale:
        raise ArithmeticError("the pole at the radius has order above two")
    nder = _mp_eval(_deriv_coeffs(num_cs), tau)
    d2der = _mp_eval(_deriv_coeffs(d2), tau)
    lead = ntau / d2tau
    sub = (nder * d2tau - ntau * d2der) / (d2tau * d2tau)
    return 2, lead, sub


def _fit_decay(points):
    count = len(points)
    if count < 2:
        return mpmath.mpf(0)
    sx = sum(x for x, _ in points)
    sy = sum(y for _, y in points)
    sxx = sum(x * x for x, _ in points)
    sxy = sum(x * y for x, y in points)
    slope = (count * sxy - sx * sy) / (count * sxx - sx * sx)
    return mpmath.exp(slope)


def asymptotics(b, params, n_fit=200):
    """Quasi-linear growth constants of the conditioned hit expectations.

    The avoiding probability decays like psi * tau^(-(n-1)) where tau is
    the dominant pole of its generating function, and the raw typed hit
    expectation grows like tau^(-n) (phi1 n + phi2), so the conditioned
    expectation is asymptotically c1 n + c2 with c = phi/(psi tau).
    Aggregating over types with the substitution weights gives the
    appearance probability slope C1 and intercept C2; B bounds the
    relative decay of the neglected terms.

    phi1 and phi2 are extracted numerically from the analytic part of
    (1 - z/tau)^2 E(z) at tau (Richardson-extrapolated central
    differences), verified against an exact-coefficient residue
    computation at 1e-12 and against a linear fit of the conditioned
    series at n_fit at 1e-8.  A type whose hit function only has a simple
    pole at tau (hits confined to a bounded prefix of the text) gets a
    zero slope and the flat limit as its intercept.  Only binary
    alphabets are supported; the exact generating function assembly is
    too heavy beyond that.
    """
    alphabet = params.alphabet
    if len(alphabet) != 2:
        raise ValueError("growth constants are computed exactly for binary "
                         "alphabets only")
    alphabet.check_word(b)
    if n_fit < 60:
        raise ValueError("need n_fit >= 60 to fit the decay bound")
    types = params.mutation_types()
    ca = clump_automaton(b, alphabet)
    vecs = [state_marks(ca, ty) for ty in types]
    fbar, hits = clump_moment_series(ca, params.nu, n_fit, vecs, exact=True)
    with mpmath.workdps(240):
        z_max = 1 / min(_mp_ratio(v) for v in params.nu.values()) + 1
        gf = clump_gf_language(b, alphabet, params.nu)
        avoid = gf.subs_t1()
        den_cs = _mp_coeffs(avoid.den)
        num_cs = _mp_coeffs(avoid.num)
        tau = _smallest_pole(den_cs, z_max)
        tiny = mpmath.mpf(10) ** (-mpmath.mp.dps // 2)
        dden = _mp_eval(_deriv_coeffs(den_cs), tau)
        ptau = _mp_eval(num_cs, tau)
        if abs(dden) < tiny or abs(ptau) < tiny:
            raise ArithmeticError("the avoiding pole is not simple")
        psi = -ptau / (tau * tau * dden)
        if not psi > 0:
            raise ArithmeticError("avoiding amplitude came out nonpositive")
        phi1 = {}
        phi2 = {}
        c1 = {}
        c2 = {}
        sharp = {}
        decay = {}
        for ty in types:
            typed = clump_gf_language(b, alphabet, params.nu, mark=ty)
            hit_gf = typed.dt_at_one()
            zero = mpmath.mpf(0)
            if hit_gf.is_zero():
                phi1[ty] = phi2[ty] = c1[ty] = c2[ty] = zero
                sharp[ty] = (zero, zero)
                continue
            ncs = _mp_coeffs(hit_gf.num)
            dcs = _mp_coeffs(hit_gf.den)
            order, lead, sub = _pole_constants(ncs, dcs, tau)
            if order == 0:
                # analytic at the radius: this type's expectation decays
                # against the avoiding mass and leaves no growth constants
                phi1[ty] = phi2[ty] = c1[ty] = c2[ty] = zero
                sharp[ty] = (zero, zero)
                continue

            def part(z, m=order):
                return ((1 - z / tau) ** m * _mp_eval(ncs, z)
                        / _mp_eval(dcs, z))

            h = tau * mpmath.mpf(10) ** -6
            wide = (part(tau + h) + part(tau - h)) / 2
            near = (part(tau + h / 2) + part(tau - h / 2)) / 2
            lim = (4 * near - wide) / 3
            if order == 1:
                # a simple pole happens when hits of this type can only
                # live in a bounded prefix of the text, so the conditioned
                # expectation flattens out: the slope is exactly zero
                p1v = zero
                p2v = lim
                check1 = zero
                check2 = -lead / tau
            else:
                p1v = lim
                dwide = (part(tau + h) - part(tau - h)) / (2 * h)
                dnear = (part(tau + h / 2) - part(tau - h / 2)) / h
                p2v = p1v - tau * (4 * dnear - dwide) / 3
                check1 = lead / (tau * tau)
                check2 = check1 - sub / tau
            ref = max(mpmath.mpf(1), abs(p1v), abs(p2v))
            if abs(check1 - p1v) > ref * mpmath.mpf(1e-12) or \
                    abs(check2 - p2v) > ref * mpmath.mpf(1e-12):
                raise ArithmeticError("residue and derivative extractions "
                                      "of the growth constants disagree")
            phi1[ty], phi2[ty] = p1v, p2v
            c1[ty], c2[ty] = p1v / (psi * tau), p2v / (psi * tau)
            # the residue values carry the full working precision, so the
            # residual fit below sees the true decay, not a rounding floor
            sharp[ty] = (check1 / (psi * tau), check2 / (psi * tau))
        for i, ty in enumerate(types):
            series = [_mp_ratio(hits[i][n]) / _mp_ratio(fbar[n])
                      for n in range(n_fit + 1)]
            slope = series[n_fit] - series[n_fit - 1]
            icept = series[n_fit] - n_fit * slope
            ref = max(mpmath.mpf(1), abs(c1[ty]))
            if abs(slope - c1[ty]) > ref * mpmath.mpf(1e-8) or \
                    abs(icept - c2[ty]) > ref * mpmath.mpf(1e-8):
                raise ArithmeticError("growth constants disagree with the "
                                      "linear fit of the exact series")
            s1, s2 = sharp[ty]
            floor = mpmath.mpf(10) ** (20 - mpmath.mp.dps)
            pts = []
            for n in range(50, n_fit + 1):
                res = abs(series[n] - (s1 * n + s2))
                if res > floor * (1 + abs(series[n])):
                    pts.append((n, mpmath.log(res)))
            decay[ty] = _fit_decay(pts)
            if not decay[ty] < 1:
                raise ArithmeticError("residuals of type %r do not decay"
                                      % (ty,))
        weights = {ty: _mp_ratio(params.p1[ty[0]][ty[1]]) for ty in types}
        big1 = sum(c1[ty] * weights[ty] for ty in types)
        big2 = sum(c2[ty] * weights[ty] for ty in types)
        return AsymptoticConstants(
            float(tau), float(psi),
            {ty: float(v) for ty, v in phi1.items()},
            {ty: float(v) for ty, v in phi2.items()},
            {ty: float(v) for ty, v in c1.items()},
            {ty: float(v) for ty, v in c2.items()},
            float(big1), float(big2),
            float(max(decay.values())) if decay else 0.0)
