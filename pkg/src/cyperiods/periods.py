"""Holomorphic period series as a torus constant term of 1/P.

P is a Laurent polynomial in y1..y4 whose coefficients are polynomials in
the modulus a.  Writing P = c0 (1 - V) with every monomial of V of modulus
< 1 on the chosen torus, the constant term of 1/P in the y's is
(1/c0) * sum_n CT[V^n], organized as a power series in a.

Three evaluation routes compute that sum:

* ``envelope`` (default): solves S = 1 + V S slice-by-slice in the a-grading,
  resumming the modulus-free monomial as a geometric ray and keeping only
  exponent states that can still return to the balanced state within the
  remaining a-budget.  This is the only route that reaches a-order ~90.
* ``fixpoint``: literal iteration S <- 1 + V S truncated to an exponent box,
  with an iteration-count bound asserted.
* ``bruteforce``: raw expansion of V^n with a-truncation only; exact for any
  box because it never clips, usable for small orders.

All three agree on the built-in family; the tests pin that down.
"""

import heapq
import itertools
from fractions import Fraction

from .errors import (DecompositionInfeasibleError, InputError,
                     OddCoefficientError, PointedConeError)
from .laurent import LaurentPolynomial
from .series import TruncatedSeries, rat, rat_str

__all__ = ["TorusSpec", "CTProblem", "affine_equation", "decompose",
           "constant_term_series", "even_reduction", "preset_problem",
           "PRESET_NAMES"]

_ZERO4 = (0, 0, 0, 0)

# ---------------------------------------------------------------------------
# built-in family: quartic-in-Plucker data for the (31,1) determinantal
# family, specialized to b = c = 1.  Term format: (integer coefficient,
# a-power, exponents of y0..y5).  The y4*y5^2 entry carries the y0 factor
# restored by the cross-check against the defining determinant.
# ---------------------------------------------------------------------------
_QUARTIC_TERMS = (
    (+1, 3, (2, 1, 1, 0, 0, 0)), (-1, 3, (1, 1, 2, 0, 0, 0)),
    (+2, 2, (2, 1, 0, 0, 1, 0)), (+1, 3, (1, 2, 0, 0, 1, 0)),
    (+2, 2, (0, 3, 0, 0, 1, 0)), (-2, 2, (1, 1, 1, 0, 1, 0)),
    (+4, 1, (0, 2, 1, 0, 1, 0)), (+2, 2, (0, 1, 2, 0, 1, 0)),
    (+1, 3, (2, 0, 0, 1, 1, 0)), (+2, 2, (1, 1, 0, 1, 1, 0)),
    (+4, 1, (0, 2, 0, 1, 1, 0)), (+1, 3, (1, 0, 0, 2, 1, 0)),
    (+2, 2, (0, 1, 0, 2, 1, 0)), (-1, 3, (1, 1, 0, 0, 2, 0)),
    (+8, 0, (0, 2, 0, 0, 2, 0)), (+4, 1, (0, 1, 1, 0, 2, 0)),
    (+4, 1, (0, 1, 0, 1, 2, 0)), (+2, 2, (0, 1, 0, 0, 3, 0)),
    (+4, 1, (2, 1, 0, 0, 0, 1)), (-1, 3, (2, 1, 0, 0, 0, 1)),
    (-4, 1, (1, 1, 1, 0, 0, 1)), (+1, 3, (1, 1, 1, 0, 0, 1)),
    (-4, 1, (1, 1, 0, 1, 0, 1)), (+1, 3, (1, 1, 0, 1, 0, 1)),
    (+1, 3, (0, 1, 0, 2, 0, 1)), (-4, 1, (2, 0, 0, 0, 1, 1)),
    (+1, 3, (2, 0, 0, 0, 1, 1)), (-16, 0, (1, 1, 0, 0, 1, 1)),
    (-1, 3, (0, 2, 0, 0, 1, 1)), (-4, 1, (1, 0, 1, 0, 1, 1)),
    (+1, 3, (1, 0, 1, 0, 1, 1)), (-2, 2, (0, 1, 1, 0, 1, 1)),
    (-1, 3, (0, 0, 2, 0, 1, 1)), (-4, 1, (1, 0, 0, 1, 1, 1)),
    (+1, 3, (1, 0, 0, 1, 1, 1)), (+2, 2, (0, 1, 0, 1, 1, 1)),
    (+1, 3, (0, 1, 0, 0, 2, 1)), (-4, 1, (1, 1, 0, 0, 0, 2)),
    (+1, 3, (1, 1, 0, 0, 0, 2)), (+1, 3, (0, 1, 0, 1, 0, 2)),
    (+4, 1, (1, 0, 0, 0, 1, 2)), (-1, 3, (1, 0, 0, 0, 1, 2)),
    (+2, 2, (0, 1, 0, 0, 1, 2)), (+1, 3, (0, 0, 1, 0, 1, 2)),
)

PRESET_NAMES = ("dn-31-1",)


class TorusSpec:
    """Torus radii for y1..y4 plus a bound on |a|. All positive rationals."""

    __slots__ = ("radii", "a_bound")

    def __init__(self, radii, a_bound):
        radii = tuple(Fraction(r) for r in radii)
        if len(radii) != 4 or any(r <= 0 for r in radii):
            raise InputError("torus needs four positive radii")
        a_bound = Fraction(a_bound)
        if a_bound <= 0:
            raise InputError("modulus bound must be positive")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "a_bound", a_bound)

    def __setattr__(self, *a):
        raise AttributeError("TorusSpec is immutable")

    def monomial_modulus(self, yexps, apow, coef):
        m = abs(Fraction(coef)) * self.a_bound ** apow
        for r, e in zip(self.radii, yexps):
            m *= r ** e
        return m

    def to_json(self):
        return {"radii": [rat_str(r) for r in self.radii],
                "a_bound": rat_str(self.a_bound)}

    @classmethod
    def from_json(cls, obj):
        return cls([rat(r) for r in obj["radii"]], rat(obj["a_bound"]))


class CTProblem:
    """A constant-term computation: P (arity-5 Laurent polynomial in
    y1..y4, a), the torus on which 1/P expands, and the a-order wanted."""

    __slots__ = ("P", "torus", "order")

    def __init__(self, P, torus, order):
        if P.arity != 5:
            raise InputError("constant-term polynomial must have arity 5 (y1..y4, a)")
        if order < 1:
            raise InputError("target order must be >= 1")
        if P.coefficient((0, 0, 0, 0, 0)) == 0:
            raise InputError("P needs a nonzero constant monomial at a^0")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "torus", torus)
        object.__setattr__(self, "order", order)

    def __setattr__(self, *a):
        raise AttributeError("CTProblem is immutable")

    def to_json(self):
        return {"polynomial": self.P.to_json(), "torus": self.torus.to_json(),
                "order": self.order}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(LaurentPolynomial.from_json(obj["polynomial"]),
                       TorusSpec.from_json(obj["torus"]), int(obj["order"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed constant-term problem JSON: {exc}") from exc


def affine_equation():
    """The built-in family's affine hypersurface equation divided by y1..y4.

    Substitutes y0 = 1 and y5 = y1 y4 - y2 y3 into the stored quartic and
    shifts all exponents down by one, giving an arity-5 Laurent polynomial
    whose a^0 part is the Laurent form of 8 y1 y4 (2 y2 y3 - y1 y4)/(y1..y4).
    """
    acc = {}
    for coef, apow, (e0, e1, e2, e3, e4, e5) in _QUARTIC_TERMS:
        for t in range(e5 + 1):
            c = coef * _binom(e5, t) * (-1) ** (e5 - t)
            key = (e1 + t - 1, e2 + e5 - t - 1, e3 + e5 - t - 1, e4 + t - 1, apow)
            acc[key] = acc.get(key, 0) + c
    return LaurentPolynomial(5, {k: Fraction(v) for k, v in acc.items() if v})


def _binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def preset_problem(name="dn-31-1", order=40):
    if name != "dn-31-1":
        raise InputError(f"unknown constant-term preset {name!r}")
    torus = TorusSpec((Fraction(1, 20), Fraction(1, 2), Fraction(1, 20), Fraction(1, 2)),
                      Fraction(1, 40))
    return CTProblem(affine_equation(), torus, order)


# ---------------------------------------------------------------------------
# decomposition P = c0 (1 - V)
# ---------------------------------------------------------------------------

def decompose(problem):
    """Split P = c0 (1 - V) and certify every monomial of V has torus
    modulus < 1.  Returns (c0, V)."""
    P = problem.P
    c0 = P.coefficient((0, 0, 0, 0, 0))
    vterms = {}
    for exps, coef in P.terms.items():
        if exps == (0, 0, 0, 0, 0):
            continue
        vterms[exps] = -coef / c0
    V = LaurentPolynomial(5, vterms)
    for exps, coef in V.terms.items():
        mod = problem.torus.monomial_modulus(exps[:4], exps[4], coef)
        if mod >= 1:
            raise DecompositionInfeasibleError(
                f"monomial y^{exps[:4]} a^{exps[4]} has torus modulus {mod} >= 1")
    return c0, V


def _check_pointed(balanced_exps, nmax=None):
    """Reject any nonzero nonnegative integer combination of the a^0
    exponent vectors summing to zero (bounded enumeration)."""
    vecs = [v for v in balanced_exps]
    if not vecs:
        return
    if any(v == _ZERO4 for v in vecs):
        raise PointedConeError("an a^0 monomial is already balanced")
    m = len(vecs)
    if m > 6:
        raise PointedConeError(
            f"pointedness enumeration not attempted for {m} balanced monomials")
    bound = nmax if nmax is not None else 4 * m
    for combo in itertools.product(range(bound + 1), repeat=m):
        if not any(combo):
            continue
        s = [0, 0, 0, 0]
        for lam, v in zip(combo, vecs):
            if lam:
                for i in range(4):
                    s[i] += lam * v[i]
        if s == [0, 0, 0, 0]:
            raise PointedConeError(
                f"combination {combo} of a^0 exponents is balanced")


def _split_grading(V):
    """Group V's monomials by a-degree: (list of (yexp, coef) at a^0,
    dict a-degree -> list of (yexp, coef))."""
    w0, vk = [], {}
    for exps, coef in V.terms.items():
        ye, ad = exps[:4], exps[4]
        if ad < 0:
            raise InputError("V must be polynomial in the modulus a")
        if ad == 0:
            w0.append((ye, coef))
        else:
            vk.setdefault(ad, []).append((ye, coef))
    return w0, vk


# ---------------------------------------------------------------------------
# production route: a-graded slices with geometric ray resummation
# ---------------------------------------------------------------------------
#
# States are packed into a single int (four 11-bit fields around _OFF), and
# coefficients are scaled integers: slice j holds S_j * DV^j * q^M where DV
# is the common denominator of the a-positive coefficients and q the
# denominator of the ray coefficient.  Every state provably carries enough
# q-adic headroom for its ray chain, so the halvings stay exact in integers.

_BITS = 11
_OFF = 1 << (_BITS - 1)
_MASK = (1 << _BITS) - 1
_SHIFTS = (3 * _BITS, 2 * _BITS, _BITS, 0)


def _pack(e):
    return (((e[0] + _OFF) << _SHIFTS[0]) | ((e[1] + _OFF) << _SHIFTS[1])
            | ((e[2] + _OFF) << _SHIFTS[2]) | (e[3] + _OFF))


def _pack_delta(e):
    # signed components: plain sum so borrows propagate per 11-bit field
    return ((e[0] << _SHIFTS[0]) + (e[1] << _SHIFTS[1])
            + (e[2] << _SHIFTS[2]) + e[3])


def _unpack(key):
    return ((key >> _SHIFTS[0]) - _OFF, ((key >> _SHIFTS[1]) & _MASK) - _OFF,
            ((key >> _SHIFTS[2]) & _MASK) - _OFF, (key & _MASK) - _OFF)


def _ray_orthogonal_functionals(wvec):
    """Integer functionals vanishing on the ray direction; pure interval
    tests that need no quantifier over the ray multiplicity."""
    cands = [(1, 1, 1, 1), (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1),
             (0, 1, 1, 0), (0, 1, 0, 1), (0, 0, 1, 1),
             (1, -1, 0, 0), (1, 0, -1, 0), (1, 0, 0, -1),
             (0, 1, -1, 0), (0, 1, 0, -1), (0, 0, 1, -1)]
    out = []
    for phi in cands:
        if sum(p * w for p, w in zip(phi, wvec)) == 0:
            out.append(phi)
        if len(out) == 6:
            break
    return out


class _SliceBounds:
    """Per-slice integer bounds for the return-feasibility prune."""

    def __init__(self, apos, wvec):
        self.wvec = wvec
        self.up = [Fraction(0)] * 4
        self.dn = [Fraction(0)] * 4
        for ye, _c, ad in apos:
            for i in range(4):
                rate = Fraction(ye[i], ad)
                if rate > self.up[i]:
                    self.up[i] = rate
                if rate < self.dn[i]:
                    self.dn[i] = rate
        self.phis = _ray_orthogonal_functionals(wvec) if wvec else []
        self.phi_up, self.phi_dn = [], []
        for phi in self.phis:
            u, d = Fraction(0), Fraction(0)
            for ye, _c, ad in apos:
                rate = Fraction(sum(p * y for p, y in zip(phi, ye)), ad)
                u = max(u, rate)
                d = min(d, rate)
            self.phi_up.append(u)
            self.phi_dn.append(d)

    def tester(self, r):
        """Return feasible(key) for remaining a-budget r, on packed keys."""
        P = [int(r * u) for u in self.up]
        Q = [int(-r * d) for d in self.dn]
        w = self.wvec
        # phi(e) must lie in [-floor(r*up_phi), floor(-r*dn_phi)]
        phidata = [(phi, int(r * u), int(-r * d))
                   for phi, u, d in zip(self.phis, self.phi_up, self.phi_dn)]

        def ok(key):
            e = _unpack(key)
            if w is None:
                for i in range(4):
                    if not -P[i] <= e[i] <= Q[i]:
                        return False
                return True
            for phi, lo, hi in phidata:
                v = phi[0] * e[0] + phi[1] * e[1] + phi[2] * e[2] + phi[3] * e[3]
                if not -lo <= v <= hi:
                    return False
            mlo, mhi = 0, None
            for i in range(4):
                wi = w[i]
                ei = e[i]
                if wi == 0:
                    if not -P[i] <= ei <= Q[i]:
                        return False
                elif wi > 0:
                    lo = -(P[i] + ei)
                    lo = -((-lo) // wi)
                    hi = (Q[i] - ei) // wi
                    if lo > mlo:
                        mlo = lo
                    if mhi is None or hi < mhi:
                        mhi = hi
                        if mhi < mlo:
                            return False
                else:
                    lo = ei - Q[i]
                    hi = P[i] + ei
                    wij = -wi
                    lo = -((-lo) // wij)
                    hi = hi // wij
                    if lo > mlo:
                        mlo = lo
                    if mhi is None or hi < mhi:
                        mhi = hi
                        if mhi < mlo:
                            return False
            return mhi is None or mlo <= mhi

        return ok


def _ct_envelope(c0, V, N):
    w0, vk = _split_grading(V)
    _check_pointed([ye for ye, _ in w0])
    if len(w0) > 1:
        # several modulus-free monomials: no single ray to resum; fall back
        return _ct_fixpoint(c0, V, N)
    apos = [(ye, coef, ad) for ad, lst in vk.items() for ye, coef in lst]
    if w0:
        (wvec, wcoef), = w0
    else:
        wvec, wcoef = None, None
    bounds = _SliceBounds(apos, wvec)

    # integer scaling: DV^j for the a-positive denominators, q^M headroom
    # for the ray chains (M bounds the ray count of any surviving state)
    DV = 1
    for _ye, coef, _ad in apos:
        DV = DV * coef.denominator // _gcd(DV, coef.denominator)
    if wvec is not None:
        wp, wq = wcoef.numerator, wcoef.denominator
        m_cap = None
        for k in range(4):
            if wvec[k] > 0:
                cap = (-(N - 1) * bounds.dn[k]) / wvec[k]
            elif wvec[k] < 0:
                cap = ((N - 1) * bounds.up[k]) / (-wvec[k])
            else:
                continue
            if m_cap is None or cap < m_cap:
                m_cap = cap
        M = int(m_cap) + 2 if m_cap is not None else 0
    else:
        wp, wq, M = 0, 1, 0
    headroom = wq ** M

    # monomial table: (a-degree, packed delta, integer coefficient * DV)
    table = []
    for ad, lst in sorted(vk.items()):
        for ye, coef in lst:
            num = coef * DV
            table.append((ad, _pack_delta(ye), int(num)))

    zero_key = _pack(_ZERO4)
    if wvec is not None:
        ray_delta = _pack_delta(wvec)
        kray = next(i for i in range(4) if wvec[i] != 0)
        ray_level_shift = _SHIFTS[kray]
        ray_sgn = 1 if wvec[kray] > 0 else -1

    slices = [None] * N
    out_num = [0] * N
    start = {zero_key: headroom}          # scale DV^0 * q^M
    if wvec is not None:
        start = _ray_pass(start, ray_delta, wp, wq, bounds.tester(N - 1),
                          ray_level_shift, ray_sgn)
    slices[0] = start
    out_num[0] = start.get(zero_key, 0)
    for j in range(1, N):
        ok = bounds.tester(N - 1 - j)
        acc = {}
        for ad, dv, num in table:
            if ad > j:
                continue
            fac = num * DV ** (ad - 1)
            src = slices[j - ad]
            for key, cval in src.items():
                nk = key + dv
                v = cval * fac
                if nk in acc:
                    acc[nk] += v
                else:
                    acc[nk] = v
        for key in [k for k in acc if not ok(k)]:
            del acc[key]
        if wvec is not None:
            acc = _ray_pass(acc, ray_delta, wp, wq, ok, ray_level_shift, ray_sgn)
        slices[j] = acc
        out_num[j] = acc.get(zero_key, 0)

    coeffs = [Fraction(out_num[j], DV ** j * headroom) / c0 for j in range(N)]
    return TruncatedSeries("a", N, coeffs)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _ray_pass(states, ray_delta, wp, wq, ok, level_shift, sgn):
    """Geometric resummation along the ray on packed-int states.

    Each step multiplies by wp/wq; the q-adic headroom baked into the slice
    scale keeps every division exact.  Levels in the ray coordinate only
    increase, so a heap of levels feeds each chained contribution once.
    """
    if not states:
        return states
    levels = {}
    for key in states:
        levels.setdefault(sgn * ((key >> level_shift) & _MASK), []).append(key)
    heap = sorted(levels)
    heapq.heapify(heap)
    while heap:
        lev = heapq.heappop(heap)
        for key in levels.pop(lev):
            c = states[key]
            if c == 0:
                continue
            nk = key + ray_delta
            if ok(nk):
                add = (c * wp) // wq
                if nk in states:
                    states[nk] += add
                else:
                    states[nk] = add
                    nlev = sgn * ((nk >> level_shift) & _MASK)
                    if nlev not in levels:
                        levels[nlev] = [nk]
                        heapq.heappush(heap, nlev)
                    else:
                        levels[nlev].append(nk)
    return states


# ---------------------------------------------------------------------------
# literal fixpoint on a box (slow; keeps the iteration-count invariant)
# ---------------------------------------------------------------------------

def _ct_fixpoint(c0, V, N, boxscale=2):
    w0, vk = _split_grading(V)
    _check_pointed([ye for ye, _ in w0])
    B = 0
    for exps, _ in V.terms.items():
        if exps[4] >= 1:
            B = max(B, max(abs(x) for x in exps[:4]))
    box = boxscale * N * max(B, 1)
    vlist = [(exps[:4], exps[4], coef) for exps, coef in V.terms.items()]
    S = {(_ZERO4, 0): Fraction(1)}
    max_iter = max(1, N * (2 * B + 1) * 4 * boxscale)
    for it in range(max_iter + 1):
        nxt = {(_ZERO4, 0): Fraction(1)}
        for (ye, ad), c in S.items():
            for ve, vad, vc in vlist:
                nad = ad + vad
                if nad >= N:
                    continue
                ne = (ye[0] + ve[0], ye[1] + ve[1], ye[2] + ve[2], ye[3] + ve[3])
                if any(abs(x) > box for x in ne):
                    continue
                key = (ne, nad)
                add = c * vc
                if key in nxt:
                    nxt[key] += add
                else:
                    nxt[key] = add
        nxt = {k: v for k, v in nxt.items() if v != 0}
        if nxt == S:
            break
        S = nxt
    else:
        raise AssertionError("constant-term fixpoint exceeded its iteration bound")
    out = [Fraction(0)] * N
    for (ye, ad), c in S.items():
        if ye == _ZERO4:
            out[ad] = c / c0
    return TruncatedSeries("a", N, out)


# ---------------------------------------------------------------------------
# raw-power oracle: no exponent clipping at all
# ---------------------------------------------------------------------------

def _ct_bruteforce(c0, V, N, nmax=None):
    w0, vk = _split_grading(V)
    _check_pointed([ye for ye, _ in w0])
    B = 1
    for exps, _ in V.terms.items():
        B = max(B, max(abs(x) for x in exps[:4]))
    if nmax is None:
        nmax = (N - 1) * (B + 1) + 2
    vlist = [(exps[:4], exps[4], coef) for exps, coef in V.terms.items()]
    out = [Fraction(0)] * N
    out[0] = Fraction(1)
    power = {(_ZERO4, 0): Fraction(1)}     # V^n, truncated in a only
    for _n in range(1, nmax + 1):
        nxt = {}
        for (ye, ad), c in power.items():
            for ve, vad, vc in vlist:
                nad = ad + vad
                if nad >= N:
                    continue
                ne = (ye[0] + ve[0], ye[1] + ve[1], ye[2] + ve[2], ye[3] + ve[3])
                key = (ne, nad)
                add = c * vc
                if key in nxt:
                    nxt[key] += add
                else:
                    nxt[key] = add
        power = {k: v for k, v in nxt.items() if v != 0}
        if not power:
            break
        for (ye, ad), c in power.items():
            if ye == _ZERO4:
                out[ad] += c
    return TruncatedSeries("a", N, [c / c0 for c in out])


_METHODS = {"envelope": _ct_envelope, "fixpoint": _ct_fixpoint,
            "bruteforce": _ct_bruteforce}


def constant_term_series(problem, method="envelope"):
    """CT_y[1/P] as a truncated power series in a.

    The result is the raw torus constant term; reports that need the
    orientation-free object should normalize the leading coefficient to 1.
    """
    if method not in _METHODS:
        raise InputError(f"unknown constant-term method {method!r}")
    c0, V = decompose(problem)
    return _METHODS[method](c0, V, problem.order)


def even_reduction(series):
    """Substitute z = a^2 into an even series in a.

    Raises if any odd coefficient is nonzero.
    """
    for i in range(1, series.order, 2):
        if series.coeffs[i] != 0:
            raise OddCoefficientError(f"odd coefficient at a^{i} is {series.coeffs[i]}")
    n = (series.order + 1) // 2
    return TruncatedSeries("z", n, [series.coeffs[2 * i] for i in range(n)],
                           numeric=series.numeric)
