"""Semistability oracles by exhaustive finite-field search.

Kronecker modules f : L (x) M -> N carry the classical slope criterion
for the GL(M) x GL(N) action; two-tier instances carry the weighted
criterion attached to a polarization, for the reductive group (product
of the multiplicity GL's) or for the full automorphism group (reductive
part extended by the unipotent off-diagonal Hom blocks).  Everything is
decided by exhaustive enumeration over a prime field, exactly.
"""

from fractions import Fraction
from itertools import product

from .exactfield import (ExactMatrix, Subspace, enumerate_subspaces,
                         image_subspace, kernel_basis)
from .theta import MorphismPoint, in_W0
from .homdata import (map_polarization, mutated_instance,
                      dual_point_to_mutated)
from .mutation import build_dual, default_choice, mutate


DEFAULT_BUDGET = 10 ** 6


def _require_finite(field):
    if field.p is None:
        raise ValueError("semistability is decided over a prime field only; "
                         "reduce rational data modulo a prime first")
    return field.p


class KroneckerModule:
    """A linear map f : L (x) M -> N with dim L = q, dim M = m,
    dim N = n, stored as an n-by-(q*m) matrix in the lexicographic
    basis of L (x) M."""

    def __init__(self, field, q, m, n, f):
        if f.rows != n or f.cols != q * m:
            raise ValueError("Kronecker map has shape %dx%d, expected %dx%d"
                             % (f.rows, f.cols, n, q * m))
        self.field = field
        self.q = q
        self.m = m
        self.n = n
        self.f = f

    def __repr__(self):
        return "KroneckerModule(q=%d, m=%d, n=%d)" % (self.q, self.m, self.n)

    def restrict_source(self, basis):
        """The map L (x) M' -> N for a subspace basis M' (m-by-d)."""
        return self.f @ ExactMatrix.identity(self.field, self.q).kron(basis)


class StabilityVerdict:
    """Verdict of an exhaustive semistability check; when a query fails
    the first (lexicographically least) violating family is recorded."""

    def __init__(self, semistable, stable, witness=None):
        self.semistable = semistable
        self.stable = stable
        self.witness = witness

    def __repr__(self):
        return ("StabilityVerdict(semistable=%s, stable=%s%s)"
                % (self.semistable, self.stable,
                   ", witness" if self.witness is not None else ""))


def kronecker_semistable(k, strict=False, budget=DEFAULT_BUDGET):
    """Exhaustive slope test: for every nonzero subspace M' of M, the
    minimal admissible N' is f(L (x) M'), and semistability demands
    m * dim N' >= n * dim M' (strictly, for proper M', when stable)."""
    p = _require_finite(k.field)
    semistable, stable = True, True
    witness = None
    for d in range(1, k.m + 1):
        for sub in enumerate_subspaces(p, k.m, d, budget=budget):
            img = image_subspace(k.restrict_source(sub.basis))
            dn = img.dim
            if k.m * dn < k.n * d:
                stable = False
                if semistable:
                    semistable = False
                    witness = (sub, img)
            elif k.m * dn == k.n * d and (d, dn) != (k.m, k.n):
                if stable:
                    stable = False
                    if witness is None and strict:
                        witness = (sub, img)
    return StabilityVerdict(semistable, stable, witness)


def kronecker_mutate(k):
    """The mutated module A(f) : L* (x) M* -> ker(f)*, the restriction
    to ker(f) of the tautological pairing of L (x) M with its dual; in
    the coordinate bases its matrix is the transpose of an echelon
    kernel basis of f."""
    if k.f.rank() != k.n:
        raise ValueError("f must be surjective")
    m_prime = k.q * k.m - k.n
    if m_prime <= 0:
        raise ValueError("mutated multiplicity q*m - n must be positive")
    K = kernel_basis(k.f)
    assert K.cols == m_prime
    return KroneckerModule(k.field, k.q, k.m, m_prime, K.transpose())


def _all_invertible(field, n, budget=DEFAULT_BUDGET):
    p = _require_finite(field)
    if p ** (n * n) > budget:
        raise ValueError("GL enumeration budget exceeded")
    out = []
    for flat in product(range(p), repeat=n * n):
        g = ExactMatrix.from_flat(field, n, n, [field.of(v) for v in flat])
        if g.rank() == n:
            out.append(g)
    return out


def kronecker_orbit_equivalent(k1, k2, budget=DEFAULT_BUDGET):
    """Whether k2 = g_N . k1 . (I_L (x) g_M) for some pair in
    GL(M) x GL(N), by enumerating both groups over the prime field."""
    if (k1.q, k1.m, k1.n) != (k2.q, k2.m, k2.n):
        return False
    f = k1.field
    iq = ExactMatrix.identity(f, k1.q)
    for gm in _all_invertible(f, k1.m, budget=budget):
        middle = k1.f @ iq.kron(gm)
        for gn in _all_invertible(f, k1.n, budget=budget):
            if gn @ middle == k2.f:
                return True
    return False


# -- two-tier instances -----------------------------------------------

def _family_images(inst, fam, bases):
    """For source subspace bases (one per first-tier index), the minimal
    admissible second-tier subspaces: N'_l spanned by all blocks
    x_(l,i)(H_li (x) M'_i)."""
    f = inst.h.field
    out = {}
    for l in range(1, inst.h.s + 1):
        span = Subspace.zero(f, inst.n_mult[l - 1])
        for i in range(1, inst.h.r + 1):
            basis = bases[i - 1]
            if basis.cols == 0:
                continue
            dh = inst.h.dimH[(l, i)]
            if dh == 0:
                continue
            blk = fam[(l, i)] @ ExactMatrix.identity(f, dh).kron(basis)
            span = span.sum(image_subspace(blk))
        out[l] = span
    return out


def _as_family(inst, w):
    if isinstance(w, MorphismPoint):
        return inst.family_from_point(w)
    return w


def gred_semistable(inst, w, pol, budget=DEFAULT_BUDGET):
    """Exhaustive reductive-group test: over all families of subspaces
    M'_i with minimal N'_l, families with some N'_l proper must satisfy
    sum(lam_i dim M'_i) <= sum(mu_l dim N'_l); strictly, excluding the
    all-zero family, for stability."""
    p = _require_finite(inst.h.field)
    if list(pol.m_mult) != list(inst.m_mult) or list(pol.n_mult) != list(inst.n_mult):
        raise ValueError("polarization multiplicities do not match the instance")
    fam = _as_family(inst, w)
    r = inst.h.r
    per_index = []
    total = 1
    for i in range(r):
        subs = []
        for d in range(0, inst.m_mult[i] + 1):
            subs.extend(enumerate_subspaces(p, inst.m_mult[i], d, budget=budget))
        per_index.append(subs)
        total *= len(subs)
        if total > budget:
            raise ValueError("subspace family enumeration budget exceeded")
    semistable, stable = True, True
    witness = None
    for combo in product(*per_index):
        dims_m = [sub.dim for sub in combo]
        bases = [sub.basis for sub in combo]
        images = _family_images(inst, fam, bases)
        if all(images[l].dim == inst.n_mult[l - 1]
               for l in range(1, inst.h.s + 1)):
            continue
        lhs = sum(lam * d for lam, d in zip(pol.lam, dims_m))
        rhs = sum(mu * images[l + 1].dim for l, mu in enumerate(pol.mu))
        if lhs > rhs:
            stable = False
            if semistable:
                semistable = False
                witness = (combo, images)
        elif lhs == rhs and any(d > 0 for d in dims_m):
            if stable:
                stable = False
                if witness is None:
                    witness = (combo, images)
    return StabilityVerdict(semistable, stable, witness)


def _unipotent_parameters(inst, budget=DEFAULT_BUDGET):
    """Shapes of the off-diagonal unipotent blocks: (True, j, i, rows,
    cols) for a block of A_ji (x) Hom(M_i, M_j) with i < j, and
    (False, m, l, rows, cols) for B_ml (x) Hom(N_l, N_m) with l < m."""
    h = inst.h
    shapes = []
    dim_total = 0
    for i in range(1, h.r + 1):
        for j in range(i + 1, h.r + 1):
            rows = h.dimA[(j, i)] * inst.m_mult[j - 1]
            cols = inst.m_mult[i - 1]
            shapes.append((True, j, i, rows, cols))
            dim_total += rows * cols
    for l in range(1, h.s + 1):
        for m in range(l + 1, h.s + 1):
            rows = h.dimB[(m, l)] * inst.n_mult[m - 1]
            cols = inst.n_mult[l - 1]
            shapes.append((False, m, l, rows, cols))
            dim_total += rows * cols
    p = inst.h.field.p
    if p ** dim_total > budget:
        raise ValueError("unipotent orbit enumeration budget exceeded: "
                         "p^%d > %d" % (dim_total, budget))
    return shapes, dim_total


def apply_unipotent(inst, fam, params):
    """Act on a family by the unipotent element with the given
    off-diagonal blocks; params maps (True, j, i) to an element of
    A_ji (x) Hom(M_i, M_j) (matrix (dimA*m_j)-by-m_i) and (False, m, l)
    to an element of B_ml (x) Hom(N_l, N_m) (matrix (dimB*n_m)-by-n_l)."""
    h = inst.h
    f = h.field
    m = lambda i: inst.m_mult[i - 1]
    n = lambda l: inst.n_mult[l - 1]
    out = {}
    for k, v in fam.items():
        out[k] = ExactMatrix(f, v.copy_data())
    # source side: x'_(l,i) += x_(l,j) . u_(j,i) through comp_HA
    for key, U in params.items():
        source, a, b = key
        if not source:
            continue
        j, i = a, b
        da = h.dimA[(j, i)]
        for l in range(1, h.s + 1):
            comp = h.comp_HA[(l, j, i)]
            dli, dlj = h.dimH[(l, i)], h.dimH[(l, j)]
            x_lj = fam[(l, j)]
            tgt = out[(l, i)]
            for hp in range(dlj):
                for alpha in range(da):
                    for hh in range(dli):
                        c = comp.data[hh][hp * da + alpha]
                        if c == 0:
                            continue
                        for tj in range(m(j)):
                            for ti in range(m(i)):
                                u = U.data[alpha * m(j) + tj][ti]
                                if u == 0:
                                    continue
                                cu = f.mul(c, u)
                                for v in range(n(l)):
                                    xv = x_lj.data[v][hp * m(j) + tj]
                                    if xv == 0:
                                        continue
                                    tgt.data[v][hh * m(i) + ti] = f.add(
                                        tgt.data[v][hh * m(i) + ti],
                                        f.mul(cu, xv))
    # target side: x'_(m,i) += v_(m,l) . x'_(l,i) through comp_BH,
    # applied to the source-updated family (covers the cross term)
    mid = {}
    for k, v in out.items():
        mid[k] = ExactMatrix(f, v.copy_data())
    for key, V in params.items():
        source, a, b = key
        if source:
            continue
        mm, l = a, b
        db = h.dimB[(mm, l)]
        for i in range(1, h.r + 1):
            comp = h.comp_BH[(mm, l, i)]
            dli, dmi = h.dimH[(l, i)], h.dimH[(mm, i)]
            x_li = mid[(l, i)]
            tgt = out[(mm, i)]
            for beta in range(db):
                for hh in range(dli):
                    for hpp in range(dmi):
                        c = comp.data[hpp][beta * dli + hh]
                        if c == 0:
                            continue
                        for vm in range(n(mm)):
                            vv = V.data[beta * n(mm) + vm]
                            for vl in range(n(l)):
                                u = vv[vl]
                                if u == 0:
                                    continue
                                cu = f.mul(c, u)
                                for t in range(m(i)):
                                    xv = x_li.data[vl][hh * m(i) + t]
                                    if xv == 0:
                                        continue
                                    tgt.data[vm][hpp * m(i) + t] = f.add(
                                        tgt.data[vm][hpp * m(i) + t],
                                        f.mul(cu, xv))
    return out


def enumerate_unipotent_orbit(inst, fam, budget=DEFAULT_BUDGET):
    """All images of the family under the unipotent group, enumerated
    as parameter tuples over the prime field."""
    p = _require_finite(inst.h.field)
    f = inst.h.field
    shapes, _ = _unipotent_parameters(inst, budget=budget)
    ranges = []
    for (src, a, b, rows, cols) in shapes:
        ranges.append(list(product(range(p), repeat=rows * cols)))
    for combo in product(*ranges):
        params = {}
        for (src, a, b, rows, cols), flat in zip(shapes, combo):
            params[(src, a, b)] = ExactMatrix.from_flat(
                f, rows, cols, [f.of(v) for v in flat])
        yield apply_unipotent(inst, fam, params)


def is_semistable_rs(inst, w, pol, group="Gred", budget=DEFAULT_BUDGET):
    """Semistability of a point of a two-tier instance.

    group="Gred": the reductive verdict by subspace enumeration.
    group="G": the reductive verdict must hold at every point of the
    finite unipotent orbit of w."""
    fam = _as_family(inst, w)
    if group == "Gred":
        return gred_semistable(inst, fam, pol, budget=budget)
    if group != "G":
        raise ValueError("group must be 'Gred' or 'G'")
    semistable, stable = True, True
    witness = None
    for moved in enumerate_unipotent_orbit(inst, fam, budget=budget):
        v = gred_semistable(inst, moved, pol, budget=budget)
        if not v.semistable and semistable:
            semistable = False
            witness = (moved, v.witness)
        if not v.stable:
            stable = False
            if witness is None:
                witness = (moved, v.witness)
        if not semistable and not stable:
            break
    return StabilityVerdict(semistable, stable, witness)


class ComparisonReport:
    """Verdicts of a point and of its mutation under the transported
    polarization, together with which implications the standing
    hypotheses assert and whether they hold."""

    def __init__(self, in_w0, hyp_forward, hyp_backward,
                 verdict_w, verdict_z, pol_hat):
        self.in_w0 = in_w0
        self.hyp_forward = hyp_forward
        self.hyp_backward = hyp_backward
        self.verdict_w = verdict_w
        self.verdict_z = verdict_z
        self.pol_hat = pol_hat

    @property
    def forward_asserted(self):
        return self.hyp_forward

    @property
    def backward_asserted(self):
        return self.hyp_backward

    @property
    def forward_ok(self):
        if self.verdict_z is None:
            return True
        return (not self.verdict_w.semistable) or self.verdict_z.semistable

    @property
    def backward_ok(self):
        if self.verdict_z is None:
            return True
        return (not self.verdict_z.semistable) or self.verdict_w.semistable

    @property
    def ok(self):
        good = True
        if self.forward_asserted:
            good = good and self.forward_ok
        if self.backward_asserted:
            good = good and self.backward_ok
        return good

    def __repr__(self):
        return ("ComparisonReport(in_w0=%s, forward=%s/%s, backward=%s/%s, "
                "w=%r, z=%r)" % (self.in_w0,
                                 self.hyp_forward, self.forward_ok,
                                 self.hyp_backward, self.backward_ok,
                                 self.verdict_w, self.verdict_z))


def compare_hypotheses(pol, p):
    """The two standing hypotheses: sum_{i<=p} lam_i m_i <= mu_1, and
    mu_1 >= 1/(n_1+1)."""
    head = sum(Fraction(pol.lam[i]) * pol.m_mult[i] for i in range(p))
    hyp_forward = head <= Fraction(pol.mu[0])
    hyp_backward = Fraction(pol.mu[0]) >= Fraction(1, pol.n_mult[0] + 1)
    return hyp_forward, hyp_backward


def unstable_outside_w0_bound(pol, p):
    """The slope bound under which points outside the open locus cannot
    be semistable: mu_1 < (sum_{j>p} lam_j m_j) / (n_1 - 1); for
    n_1 = 1 the bound is vacuous (treated as +infinity, always true)."""
    tail = sum(Fraction(pol.lam[j]) * pol.m_mult[j]
               for j in range(p, len(pol.lam)))
    n1 = pol.n_mult[0]
    if n1 <= 1:
        return True
    return Fraction(pol.mu[0]) < tail / (n1 - 1)


def compare_stability(inst, w, pol, group="G", budget=DEFAULT_BUDGET):
    """Verdict of w under pol versus verdict of its mutation under the
    transported polarization (Kronecker-type regime p = 0, s = 1)."""
    fam = _as_family(inst, w)
    point = w if isinstance(w, MorphismPoint) else inst.point_from_family(w)
    hyp_f, hyp_b = compare_hypotheses(pol, inst.p)
    verdict_w = is_semistable_rs(inst, point, pol, group=group, budget=budget)
    if not in_W0(point):
        return ComparisonReport(False, hyp_f, hyp_b, verdict_w, None, None)
    dual = build_dual(inst.theta)
    z = mutate(dual, point, default_choice(point))
    inst_hat = mutated_instance(inst.h, inst.m_mult, inst.n_mult, inst.p)
    z_hat = dual_point_to_mutated(inst, inst_hat, z)
    rep = map_polarization(pol, inst.h, inst.p)
    pol_hat = rep.polarization().transpose()
    verdict_z = is_semistable_rs(inst_hat, z_hat, pol_hat,
                                 group=group, budget=budget)
    return ComparisonReport(True, hyp_f, hyp_b, verdict_w, verdict_z, pol_hat)
