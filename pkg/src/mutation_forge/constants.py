"""Genericity, length, delta, and the c-constant machinery.

For a linear map tau : E (x) H -> F and a multiplicity space M of
dimension m, set tau_m = tau (x) I_M.  A subspace K of H (x) M is
generic when it is proper and not contained in any H (x) M' with M'
proper; for generic K,

    delta(K) = codim(tau_m(E (x) K)) / codim(K)

and c_tau(m) is the supremum of delta over generic subspaces.  The true
supremum over all subspaces in characteristic zero is not computable;
searches report a certified witness lower bound plus a scan maximum and
never conflate the two.
"""

import json
import random
from fractions import Fraction

from .exactfield import (ExactMatrix, Subspace, enumerate_subspaces,
                         gaussian_binomial, image_subspace)
from .homdata import _monomials


class TauMap:
    """A linear map tau : E (x) H -> F, stored as a dim_f-by-
    (dim_e * dim_h) matrix in the lexicographic basis of E (x) H."""

    def __init__(self, field, dim_e, dim_h, dim_f, tau):
        if tau.rows != dim_f or tau.cols != dim_e * dim_h:
            raise ValueError("tau has shape %dx%d, expected %dx%d"
                             % (tau.rows, tau.cols, dim_f, dim_e * dim_h))
        self.field = field
        self.dim_e = dim_e
        self.dim_h = dim_h
        self.dim_f = dim_f
        self.tau = tau

    def __repr__(self):
        return "TauMap(E=%d, H=%d, F=%d)" % (self.dim_e, self.dim_h, self.dim_f)


def length(u, dim_h, m):
    """Length of a vector of H (x) M: the rank of u as a map H* -> M,
    the minimal number of split terms in any expansion. The zero vector
    has length 0 by convention."""
    if u.rows != dim_h * m or u.cols != 1:
        raise ValueError("expected a column vector of H (x) M")
    U = ExactMatrix(u.field, [[u.data[h * m + t][0] for t in range(m)]
                              for h in range(dim_h)])
    return U.rank()


def _m_components(K, dim_h, m):
    """The stacked M-components of a basis of K: the subspace of M
    spanned by the images of all basis vectors as maps H* -> M."""
    f = K.field
    rows = []
    for j in range(K.basis.cols):
        for h in range(dim_h):
            rows.append([K.basis.data[h * m + t][j] for t in range(m)])
    if not rows:
        return ExactMatrix.zeros(f, m, 0)
    return ExactMatrix(f, rows).transpose()


def is_generic(K, dim_h, m):
    """Whether a proper subspace K of H (x) M is generic: not contained
    in H (x) M' for any proper M'."""
    if K.ambient_dim != dim_h * m:
        raise ValueError("subspace does not live in H (x) M")
    if K.dim >= dim_h * m:
        raise ValueError("genericity is defined for proper subspaces only")
    return image_subspace(_m_components(K, dim_h, m)).dim == m


def _image_of_tensor(t, K, m):
    """Basis matrix of tau_m(E (x) K) inside F (x) M."""
    f = t.field
    cols = []
    for e in range(t.dim_e):
        for j in range(K.basis.cols):
            vec = [f.zero()] * (t.dim_f * m)
            for h in range(t.dim_h):
                c_row = e * t.dim_h + h
                for tt in range(m):
                    kv = K.basis.data[h * m + tt][j]
                    if kv == 0:
                        continue
                    for y in range(t.dim_f):
                        tv = t.tau.data[y][c_row]
                        if tv == 0:
                            continue
                        vec[y * m + tt] = f.add(vec[y * m + tt],
                                                f.mul(tv, kv))
            cols.append(vec)
    if not cols:
        return ExactMatrix.zeros(f, t.dim_f * m, 0)
    return ExactMatrix(f, cols).transpose()


def delta(t, K, m):
    """delta(K) = codim(tau_m(E (x) K)) / codim(K), exact."""
    if not is_generic(K, t.dim_h, m):
        raise ValueError("delta is defined for generic subspaces only")
    img_rank = _image_of_tensor(t, K, m).rank()
    codim_img = t.dim_f * m - img_rank
    codim_k = t.dim_h * m - K.dim
    return Fraction(codim_img, codim_k)


# -- the maps sigma_0 and sigma_1 -------------------------------------

def sigma0(field, n):
    """sigma_0 : S^2 V (x) V* -> V for dim V = n+1, in the coefficient-
    one monomial-division convention (conjugate to the derivative
    convention by a diagonal change of basis, which leaves every rank
    and codimension unchanged)."""
    deg2 = _monomials(n + 1, 2)
    deg1 = _monomials(n + 1, 1)
    f = field
    tau = ExactMatrix.zeros(f, n + 1, len(deg2) * (n + 1))
    one = f.one()
    for q, mono in enumerate(deg2):
        for a in range(n + 1):
            if mono[a] == 0:
                continue
            rem = list(mono)
            rem[a] -= 1
            y = deg1.index(tuple(rem))
            tau.data[y][q * (n + 1) + a] = one
    return TauMap(f, len(deg2), n + 1, n + 1, tau)


def sigma1(field, n):
    """sigma_1 : V (x) V -> S^2 V for dim V = n+1 (monomial
    multiplication)."""
    deg2 = _monomials(n + 1, 2)
    f = field
    tau = ExactMatrix.zeros(f, len(deg2), (n + 1) * (n + 1))
    one = f.one()
    for a in range(n + 1):
        for b in range(n + 1):
            mono = [0] * (n + 1)
            mono[a] += 1
            mono[b] += 1
            q = deg2.index(tuple(mono))
            tau.data[q][a * (n + 1) + b] = one
    return TauMap(f, n + 1, n + 1, len(deg2), tau)


def c_formula(which, n, m):
    """Closed forms of the constants attached to sigma_0 and sigma_1:

        c_0(m) = m(m-1) / (2(m(n+1)-1))        for m <= n+1,
                 (n+1) / (2(n+2))              for m >= n+1,
        c_1(m) = (n+1)(m(n+2)-2) / (2(m(n+1)-1))  for m <= n+1,
                 (n+1)(n+3) / (2(n+2))            for m >= n+1.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    if which == 0:
        if m <= n + 1:
            return Fraction(m * (m - 1), 2 * (m * (n + 1) - 1))
        return Fraction(n + 1, 2 * (n + 2))
    if which == 1:
        if m <= n + 1:
            return Fraction((n + 1) * (m * (n + 2) - 2), 2 * (m * (n + 1) - 1))
        return Fraction((n + 1) * (n + 3), 2 * (n + 2))
    raise ValueError("which must be 0 or 1")


def witness_subspace(t, m):
    """The length-min(m, dim H) rank-one-sum witness: the span of
    h_1 (x) x_1 + ... + h_d (x) x_d.  Generic exactly when d = m,
    i.e. m <= dim H; returns None otherwise."""
    if m > t.dim_h:
        return None
    f = t.field
    vec = ExactMatrix.zeros(f, t.dim_h * m, 1)
    one = f.one()
    for i in range(m):
        vec.data[i * m + i][0] = one
    return Subspace(t.dim_h * m, vec)


class SearchReport:
    """Outcome of a c_tau search: the certified witness lower bound,
    the scan maximum (exhaustive over a finite field when within
    budget, else a seeded random scan), and bookkeeping."""

    def __init__(self, witness_value, max_found, mode, samples, seed,
                 empty_sup=False, reference=None):
        self.witness_value = witness_value
        self.max_found = max_found
        self.mode = mode
        self.samples = samples
        self.seed = seed
        self.empty_sup = empty_sup
        self.reference = reference

    @property
    def exceeds_reference(self):
        if self.reference is None or self.max_found is None:
            return False
        return self.max_found > self.reference

    def to_json(self):
        def frac(x):
            return None if x is None else "%d/%d" % (x.numerator, x.denominator)
        return {
            "witness_value": frac(self.witness_value),
            "max_found": frac(self.max_found),
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
            "empty_sup": self.empty_sup,
            "reference": frac(self.reference),
            "exceeds_reference": self.exceeds_reference,
        }

    def __repr__(self):
        return "SearchReport(%s)" % json.dumps(self.to_json(), sort_keys=True)


def _random_generic_subspaces(t, m, samples, seed):
    """Seeded random proper subspaces of H (x) M with entries drawn
    from {-1, 0, 1}; non-generic draws are skipped (and counted)."""
    f = t.field
    rng = random.Random(seed)
    ambient = t.dim_h * m
    produced = 0
    attempts = 0
    while produced < samples and attempts < 50 * samples:
        attempts += 1
        k = rng.randint(1, ambient - 1)
        cols = [[f.of(rng.choice((-1, 0, 1))) for _ in range(k)]
                for _ in range(ambient)]
        B = ExactMatrix(f, cols)
        S = image_subspace(B)
        if S.dim == 0 or S.dim >= ambient:
            continue
        if not is_generic(S, t.dim_h, m):
            continue
        produced += 1
        yield S


def c_tau_search(t, m, budget=10 ** 5, seed=0, samples=1000, reference=None):
    """Search for c_tau(m): certified witness lower bound plus either an
    exhaustive finite-field subspace scan (when the subspace count fits
    the budget) or a seeded random scan over the rationals."""
    wit = witness_subspace(t, m)
    witness_value = delta(t, wit, m) if wit is not None else None
    ambient = t.dim_h * m
    max_found = None
    count = 0
    if t.field.p is not None:
        total = sum(gaussian_binomial(t.field.p, ambient, d)
                    for d in range(1, ambient))
        if total > budget:
            raise ValueError("exhaustive scan budget exceeded: %d > %d"
                             % (total, budget))
        mode = "exhaustive-gf%d" % t.field.p
        for d in range(1, ambient):
            for S in enumerate_subspaces(t.field.p, ambient, d, budget=budget):
                if not is_generic(S, t.dim_h, m):
                    continue
                v = delta(t, S, m)
                count += 1
                if max_found is None or v > max_found:
                    max_found = v
    else:
        mode = "random-rational"
        for S in _random_generic_subspaces(t, m, samples, seed):
            v = delta(t, S, m)
            count += 1
            if max_found is None or v > max_found:
                max_found = v
    empty = max_found is None and witness_value is None
    if empty:
        max_found = Fraction(0)
    return SearchReport(witness_value, max_found, mode, count, seed,
                        empty_sup=empty, reference=reference)


def tau_rs(h):
    """The map tau : H_11* (x) A_21 -> H_12* of a type-(2,1) Hom
    system, deduced from the composition tau* : H_12 (x) A_21 -> H_11
    by dualizing the outer factors."""
    if (h.r, h.s) != (2, 1):
        raise ValueError("tau is defined for type-(2,1) Hom systems")
    f = h.field
    d11, d12, da = h.dimH[(1, 1)], h.dimH[(1, 2)], h.dimA[(2, 1)]
    comp = h.comp_HA[(1, 2, 1)]
    tau = ExactMatrix.zeros(f, d12, d11 * da)
    for y in range(d12):
        for x in range(d11):
            for a in range(da):
                tau.data[y][x * da + a] = comp.data[x][y * da + a]
    return TauMap(f, d11, da, d12, tau)


def c_tau_rs(h, m2, budget=10 ** 5, seed=0, samples=1000, reference=None):
    """c_tau_search applied to the tau of a type-(2,1) Hom system;
    genericity lives in the A_21 (x) C^m2 factor. A zero A_21 gives the
    empty-sup convention c = 0, flagged."""
    t = tau_rs(h)
    if t.dim_h == 0:
        return SearchReport(None, Fraction(0), "empty", 0, seed,
                            empty_sup=True, reference=reference)
    return c_tau_search(t, m2, budget=budget, seed=seed,
                        samples=samples, reference=reference)
