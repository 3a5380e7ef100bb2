"""Hom-composition systems of type (r, s) and the Theta instances they
induce.

A HomData records two ordered families of objects E_1..E_r and F_1..F_s
through the dimensions of their morphism spaces

    A[(j, i)] = Hom(E_i, E_j)   (i <= j, A[(i, i)] one-dimensional),
    H[(l, i)] = Hom(E_i, F_l),
    B[(m, l)] = Hom(F_l, F_m)   (l <= m, B[(l, l)] one-dimensional),

together with explicit composition tensors (left-major bases):

    comp_AA[(k, j, i)] : A_kj (x) A_ji -> A_ki
    comp_HA[(l, j, i)] : H_lj (x) A_ji -> H_li
    comp_BH[(m, l, i)] : B_ml (x) H_li -> H_mi
    comp_BB[(n, m, l)] : B_nm (x) B_ml -> B_nl

All indices are 1-based. The identity axioms pin down distinguished
basis vectors of A[(i, i)] and B[(l, l)] (index 0).

From such a system, a splitting parameter p and multiplicities m_i, n_l
one obtains a ThetaSpace whose points are the families of maps
x_{l i} : H_li (x) M_i -> N_l; this module holds the builders and the
converters in both directions, the mutated system of a splitting, and
the polarization bookkeeping.
"""

from fractions import Fraction

from .exactfield import (ExactMatrix, Subspace, kernel_basis, quotient_data,
                         solve_linear)
from .theta import (MorphismPoint, ThetaSpace, ValidationReport, in_W0,
                    matrix_from_json, matrix_to_json)
from .mutation import swap_matrix


class HomData:
    """See the module docstring. dims are dicts keyed by index pairs,
    comps by index triples; every admissible key must be present."""

    def __init__(self, field, r, s, dimH, dimA, dimB,
                 comp_HA, comp_BH, comp_AA, comp_BB):
        self.field = field
        self.r = r
        self.s = s
        self.dimH = dict(dimH)
        self.dimA = dict(dimA)
        self.dimB = dict(dimB)
        self.comp_HA = dict(comp_HA)
        self.comp_BH = dict(comp_BH)
        self.comp_AA = dict(comp_AA)
        self.comp_BB = dict(comp_BB)

    def pairs_A(self):
        return [(j, i) for i in range(1, self.r + 1) for j in range(i, self.r + 1)]

    def pairs_B(self):
        return [(m, l) for l in range(1, self.s + 1) for m in range(l, self.s + 1)]

    def pairs_H(self):
        return [(l, i) for i in range(1, self.r + 1) for l in range(1, self.s + 1)]


def validate_hom_data(h):
    """Shape, identity and associativity checks; failures are report
    entries."""
    f = h.field
    rep = ValidationReport()
    shapes_ok = True
    for (j, i) in h.pairs_A():
        if i == j and h.dimA[(j, i)] != 1:
            shapes_ok = False
    for (m, l) in h.pairs_B():
        if m == l and h.dimB[(m, l)] != 1:
            shapes_ok = False
    for key, mat, rows, cols in _comp_shapes(h):
        if (mat.rows, mat.cols) != (rows, cols):
            shapes_ok = False
    rep.add("shapes", shapes_ok)

    ident_ok = True
    for (l, i) in h.pairs_H():
        c = h.comp_HA[(l, i, i)]
        if c != _identity_on_left(f, h.dimH[(l, i)]):
            ident_ok = False
        c = h.comp_BH[(l, l, i)]
        if c != ExactMatrix.identity(f, h.dimH[(l, i)]):
            ident_ok = False
    for (j, i) in h.pairs_A():
        if h.comp_AA[(j, i, i)] != _identity_on_left(f, h.dimA[(j, i)]):
            ident_ok = False
        if h.comp_AA[(j, j, i)] != ExactMatrix.identity(f, h.dimA[(j, i)]):
            ident_ok = False
    for (m, l) in h.pairs_B():
        if h.comp_BB[(m, l, l)] != _identity_on_left(f, h.dimB[(m, l)]):
            ident_ok = False
        if h.comp_BB[(m, m, l)] != ExactMatrix.identity(f, h.dimB[(m, l)]):
            ident_ok = False
    rep.add("identities", ident_ok)

    assoc_ok = True
    r, s = h.r, h.s
    for i in range(1, r + 1):
        for j in range(i, r + 1):
            for k in range(j, r + 1):
                for q in range(k, r + 1):
                    lhs = h.comp_AA[(q, j, i)] @ h.comp_AA[(q, k, j)].kron(
                        ExactMatrix.identity(f, h.dimA[(j, i)]))
                    rhs = h.comp_AA[(q, k, i)] @ ExactMatrix.identity(
                        f, h.dimA[(q, k)]).kron(h.comp_AA[(k, j, i)])
                    if lhs != rhs:
                        assoc_ok = False
                for l in range(1, s + 1):
                    lhs = h.comp_HA[(l, j, i)] @ h.comp_HA[(l, k, j)].kron(
                        ExactMatrix.identity(f, h.dimA[(j, i)]))
                    rhs = h.comp_HA[(l, k, i)] @ ExactMatrix.identity(
                        f, h.dimH[(l, k)]).kron(h.comp_AA[(k, j, i)])
                    if lhs != rhs:
                        assoc_ok = False
            for l in range(1, s + 1):
                for m in range(l, s + 1):
                    lhs = h.comp_HA[(m, j, i)] @ h.comp_BH[(m, l, j)].kron(
                        ExactMatrix.identity(f, h.dimA[(j, i)]))
                    rhs = h.comp_BH[(m, l, i)] @ ExactMatrix.identity(
                        f, h.dimB[(m, l)]).kron(h.comp_HA[(l, j, i)])
                    if lhs != rhs:
                        assoc_ok = False
        for l in range(1, s + 1):
            for m in range(l, s + 1):
                for q in range(m, s + 1):
                    lhs = h.comp_BH[(q, l, i)] @ h.comp_BB[(q, m, l)].kron(
                        ExactMatrix.identity(f, h.dimH[(l, i)]))
                    rhs = h.comp_BH[(q, m, i)] @ ExactMatrix.identity(
                        f, h.dimB[(q, m)]).kron(h.comp_BH[(m, l, i)])
                    if lhs != rhs:
                        assoc_ok = False
    for l in range(1, s + 1):
        for m in range(l, s + 1):
            for q in range(m, s + 1):
                for w in range(q, s + 1):
                    lhs = h.comp_BB[(w, m, l)] @ h.comp_BB[(w, q, m)].kron(
                        ExactMatrix.identity(f, h.dimB[(m, l)]))
                    rhs = h.comp_BB[(w, q, l)] @ ExactMatrix.identity(
                        f, h.dimB[(w, q)]).kron(h.comp_BB[(q, m, l)])
                    if lhs != rhs:
                        assoc_ok = False
    rep.add("associativity", assoc_ok)
    return rep


def _identity_on_left(f, d):
    """The tensor X (x) <scalar identity> -> X in left-major bases (the
    identity element sits at basis index 0 of a one-dimensional space)."""
    return ExactMatrix.identity(f, d)


def _comp_shapes(h):
    out = []
    for (l, j, i), mat in h.comp_HA.items():
        out.append((("HA", l, j, i), mat, h.dimH[(l, i)],
                    h.dimH[(l, j)] * h.dimA[(j, i)]))
    for (m, l, i), mat in h.comp_BH.items():
        out.append((("BH", m, l, i), mat, h.dimH[(m, i)],
                    h.dimB[(m, l)] * h.dimH[(l, i)]))
    for (k, j, i), mat in h.comp_AA.items():
        out.append((("AA", k, j, i), mat, h.dimA[(k, i)],
                    h.dimA[(k, j)] * h.dimA[(j, i)]))
    for (n, m, l), mat in h.comp_BB.items():
        out.append((("BB", n, m, l), mat, h.dimB[(n, l)],
                    h.dimB[(n, m)] * h.dimB[(m, l)]))
    return out


# -- projective-space instances ---------------------------------------

def _monomials(n_vars, d):
    """Exponent tuples of total degree d in n_vars variables, ordered
    lexicographically (this fixes the bases of all Sym powers)."""
    if n_vars == 1:
        return [(d,)]
    out = []
    for e0 in range(d, -1, -1):
        for rest in _monomials(n_vars - 1, d - e0):
            out.append((e0,) + rest)
    return out


def _sym_mult(field, n_vars, d1, d2):
    """Multiplication tensor Sym^d1 (x) Sym^d2 -> Sym^(d1+d2) on the
    monomial bases."""
    m1 = _monomials(n_vars, d1)
    m2 = _monomials(n_vars, d2)
    m3 = _monomials(n_vars, d1 + d2)
    index = {mon: k for k, mon in enumerate(m3)}
    out = ExactMatrix.zeros(field, len(m3), len(m1) * len(m2))
    one = field.one()
    for a, ma in enumerate(m1):
        for b, mb in enumerate(m2):
            mc = tuple(x + y for x, y in zip(ma, mb))
            out.data[index[mc]][a * len(m2) + b] = one
    return out


def projective_space_hom_data(field, n, e, f_list):
    """The HomData of the line bundles O(e_1)..O(e_r), O(f_1)..O(f_s) on
    an n-dimensional projective space, with Hom spaces realized as
    symmetric powers on monomial bases.

    Requires e and f_list strictly increasing and f_1 >= e_r so every
    H[(l, i)] is nonzero.
    """
    r, s = len(e), len(f_list)
    if sorted(set(e)) != list(e) or sorted(set(f_list)) != list(f_list):
        raise ValueError("twists must be strictly increasing")
    if f_list[0] < e[-1]:
        raise ValueError("need f_1 >= e_r so all H spaces are nonzero")
    nv = n + 1

    def dim_sym(d):
        return len(_monomials(nv, d))

    dimH = {(l, i): dim_sym(f_list[l - 1] - e[i - 1])
            for i in range(1, r + 1) for l in range(1, s + 1)}
    dimA = {(j, i): dim_sym(e[j - 1] - e[i - 1])
            for i in range(1, r + 1) for j in range(i, r + 1)}
    dimB = {(m, l): dim_sym(f_list[m - 1] - f_list[l - 1])
            for l in range(1, s + 1) for m in range(l, s + 1)}
    comp_HA = {(l, j, i): _sym_mult(field, nv, f_list[l - 1] - e[j - 1],
                                    e[j - 1] - e[i - 1])
               for i in range(1, r + 1) for j in range(i, r + 1)
               for l in range(1, s + 1)}
    comp_BH = {(m, l, i): _sym_mult(field, nv, f_list[m - 1] - f_list[l - 1],
                                    f_list[l - 1] - e[i - 1])
               for i in range(1, r + 1) for l in range(1, s + 1)
               for m in range(l, s + 1)}
    comp_AA = {(k, j, i): _sym_mult(field, nv, e[k - 1] - e[j - 1],
                                    e[j - 1] - e[i - 1])
               for i in range(1, r + 1) for j in range(i, r + 1)
               for k in range(j, r + 1)}
    comp_BB = {(q, m, l): _sym_mult(field, nv, f_list[q - 1] - f_list[m - 1],
                                    f_list[m - 1] - f_list[l - 1])
               for l in range(1, s + 1) for m in range(l, s + 1)
               for q in range(m, s + 1)}
    return HomData(field, r, s, dimH, dimA, dimB,
                   comp_HA, comp_BH, comp_AA, comp_BB)


# -- Theta instances of a splitting -----------------------------------

class BlockLayout:
    """Offsets of an ordered direct sum of labelled blocks."""

    def __init__(self, blocks):
        self.keys = [k for k, _ in blocks]
        self.dims = {k: d for k, d in blocks}
        self.offsets = {}
        off = 0
        for k, d in blocks:
            self.offsets[k] = off
            off += d
        self.total = off

    def at(self, key, inner):
        return self.offsets[key] + inner


class ThetaInstance:
    """The ThetaSpace attached to a HomData, a splitting index p
    (0 <= p < r) and multiplicities m_1..m_r, n_1..n_s:

        N1 = sum_{i <= p} H_1i (x) M_i*,   N2 = sum_{j > p} H_1j (x) M_j*,
        M1 = sum_{i <= p, l >= 2} H_li (x) M_i* (x) N_l,
        M2 = sum_{j > p, l >= 2} H_lj (x) M_j* (x) N_l,
        A0 = sum_{i <= p < j} A_ji (x) M_i* (x) M_j,
        B0 = sum_{l >= 2} B_l1 (x) N_l,

    with the multiplicity space M = N_1 of dimension n_1. Inside each
    block the index order is Hom-major, then M*, then N (left-major
    lexicographic throughout)."""

    def __init__(self, h, m_mult, n_mult, p):
        if len(m_mult) != h.r or len(n_mult) != h.s:
            raise ValueError("multiplicity lists must have lengths r and s")
        if not (0 <= p < h.r):
            raise ValueError("p must satisfy 0 <= p < r")
        self.h = h
        self.m_mult = list(m_mult)
        self.n_mult = list(n_mult)
        self.p = p
        f = h.field
        r, s = h.r, h.s
        m = lambda i: m_mult[i - 1]
        n = lambda l: n_mult[l - 1]
        self.lay_n1 = BlockLayout([(i, h.dimH[(1, i)] * m(i))
                                   for i in range(1, p + 1)])
        self.lay_n2 = BlockLayout([(j, h.dimH[(1, j)] * m(j))
                                   for j in range(p + 1, r + 1)])
        self.lay_m1 = BlockLayout([((i, l), h.dimH[(l, i)] * m(i) * n(l))
                                   for i in range(1, p + 1)
                                   for l in range(2, s + 1)])
        self.lay_m2 = BlockLayout([((j, l), h.dimH[(l, j)] * m(j) * n(l))
                                   for j in range(p + 1, r + 1)
                                   for l in range(2, s + 1)])
        self.lay_a0 = BlockLayout([((i, j), h.dimA[(j, i)] * m(i) * m(j))
                                   for i in range(1, p + 1)
                                   for j in range(p + 1, r + 1)])
        self.lay_b0 = BlockLayout([(l, h.dimB[(l, 1)] * n(l))
                                   for l in range(2, s + 1)])
        if not 1 <= n(1) < self.lay_n2.total:
            raise ValueError("need 1 <= n_1 < dim N2")
        rho1 = self._build_rho(self.lay_m1, range(1, p + 1), self.lay_n1)
        rho2 = self._build_rho(self.lay_m2, range(p + 1, r + 1), self.lay_n2)
        nu = self._build_nu()
        mu = self._build_mu()
        self.theta = ThetaSpace(f, self.lay_n1.total, self.lay_n2.total,
                                self.lay_m1.total, self.lay_m2.total,
                                self.lay_a0.total, self.lay_b0.total,
                                n(1), rho1, rho2, mu, nu)

    def _build_rho(self, lay_m, i_range, lay_n):
        h, f = self.h, self.h.field
        m = lambda i: self.m_mult[i - 1]
        n = lambda l: self.n_mult[l - 1]
        out = ExactMatrix.zeros(f, lay_m.total, self.lay_b0.total * lay_n.total)
        for i in i_range:
            dh1 = h.dimH[(1, i)]
            for l in range(2, h.s + 1):
                comp = h.comp_BH[(l, 1, i)]
                db = h.dimB[(l, 1)]
                dhl = h.dimH[(l, i)]
                for hl in range(dhl):
                    for b in range(db):
                        for h1 in range(dh1):
                            c = comp.data[hl][b * dh1 + h1]
                            if c == 0:
                                continue
                            for t in range(m(i)):
                                for u in range(n(l)):
                                    row = lay_m.at((i, l), (hl * m(i) + t) * n(l) + u)
                                    col = (self.lay_b0.at(l, b * n(l) + u) * lay_n.total
                                           + lay_n.at(i, h1 * m(i) + t))
                                    out.data[row][col] = f.add(out.data[row][col], c)
        return out

    def _build_nu(self):
        h, f = self.h, self.h.field
        m = lambda i: self.m_mult[i - 1]
        out = ExactMatrix.zeros(f, self.lay_n1.total,
                                self.lay_n2.total * self.lay_a0.total)
        for i in range(1, self.p + 1):
            for j in range(self.p + 1, h.r + 1):
                comp = h.comp_HA[(1, j, i)]
                da = h.dimA[(j, i)]
                dh1j = h.dimH[(1, j)]
                for h1i in range(h.dimH[(1, i)]):
                    for h1j in range(dh1j):
                        for a in range(da):
                            c = comp.data[h1i][h1j * da + a]
                            if c == 0:
                                continue
                            for t in range(m(i)):
                                for tj in range(m(j)):
                                    row = self.lay_n1.at(i, h1i * m(i) + t)
                                    col = (self.lay_n2.at(j, h1j * m(j) + tj)
                                           * self.lay_a0.total
                                           + self.lay_a0.at((i, j), (a * m(i) + t) * m(j) + tj))
                                    out.data[row][col] = f.add(out.data[row][col], c)
        return out

    def _build_mu(self):
        h, f = self.h, self.h.field
        m = lambda i: self.m_mult[i - 1]
        n = lambda l: self.n_mult[l - 1]
        out = ExactMatrix.zeros(f, self.lay_m1.total,
                                self.lay_m2.total * self.lay_a0.total)
        for i in range(1, self.p + 1):
            for j in range(self.p + 1, h.r + 1):
                da = h.dimA[(j, i)]
                for l in range(2, h.s + 1):
                    comp = h.comp_HA[(l, j, i)]
                    dhlj = h.dimH[(l, j)]
                    for hli in range(h.dimH[(l, i)]):
                        for hlj in range(dhlj):
                            for a in range(da):
                                c = comp.data[hli][hlj * da + a]
                                if c == 0:
                                    continue
                                for t in range(m(i)):
                                    for tj in range(m(j)):
                                        for u in range(n(l)):
                                            row = self.lay_m1.at(
                                                (i, l), (hli * m(i) + t) * n(l) + u)
                                            col = (self.lay_m2.at(
                                                (j, l), (hlj * m(j) + tj) * n(l) + u)
                                                * self.lay_a0.total
                                                + self.lay_a0.at(
                                                    (i, j), (a * m(i) + t) * m(j) + tj))
                                            out.data[row][col] = f.add(out.data[row][col], c)
        return out

    # -- converters ---------------------------------------------------

    def family_from_point(self, w):
        """The family x[(l, i)] : n_l x (dimH_li * m_i) encoded by a
        point of the total space."""
        h, f = self.h, self.h.field
        m = lambda i: self.m_mult[i - 1]
        n = lambda l: self.n_mult[l - 1]
        x = {}
        for i in range(1, h.r + 1):
            on_left = i <= self.p
            for l in range(1, h.s + 1):
                mat = ExactMatrix.zeros(f, n(l), h.dimH[(l, i)] * m(i))
                for hh in range(h.dimH[(l, i)]):
                    for t in range(m(i)):
                        for u in range(n(l)):
                            if l == 1:
                                src = w.psi1 if on_left else w.psi2
                                lay = self.lay_n1 if on_left else self.lay_n2
                                val = src.data[lay.at(i, hh * m(i) + t)][u]
                            else:
                                src = w.phi1 if on_left else w.phi2
                                lay = self.lay_m1 if on_left else self.lay_m2
                                val = src.data[lay.at((i, l), (hh * m(i) + t) * n(l) + u)][0]
                            mat.data[u][hh * m(i) + t] = val
                x[(l, i)] = mat
        return x

    def point_from_family(self, x):
        h, f = self.h, self.h.field
        m = lambda i: self.m_mult[i - 1]
        n = lambda l: self.n_mult[l - 1]
        t0 = self.theta
        psi1 = ExactMatrix.zeros(f, t0.dim_n1, t0.dim_mult)
        psi2 = ExactMatrix.zeros(f, t0.dim_n2, t0.dim_mult)
        phi1 = ExactMatrix.zeros(f, t0.dim_m1, 1)
        phi2 = ExactMatrix.zeros(f, t0.dim_m2, 1)
        for (l, i), mat in x.items():
            on_left = i <= self.p
            for hh in range(h.dimH[(l, i)]):
                for t in range(m(i)):
                    for u in range(n(l)):
                        val = mat.data[u][hh * m(i) + t]
                        if l == 1:
                            dst = psi1 if on_left else psi2
                            lay = self.lay_n1 if on_left else self.lay_n2
                            dst.data[lay.at(i, hh * m(i) + t)][u] = val
                        else:
                            dst = phi1 if on_left else phi2
                            lay = self.lay_m1 if on_left else self.lay_m2
                            dst.data[lay.at((i, l), (hh * m(i) + t) * n(l) + u)][0] = val
        return MorphismPoint(self.theta, psi1, psi2, phi1, phi2)


def build_theta_p(h, m_mult, n_mult, p):
    return ThetaInstance(h, m_mult, n_mult, p)


def _block_diag(field, layout, per_key):
    """Block-diagonal matrix on a BlockLayout from a dict key -> block."""
    out = ExactMatrix.zeros(field, layout.total, layout.total)
    for k in layout.keys:
        blk = per_key(k)
        off = layout.offsets[k]
        for a in range(blk.rows):
            for b in range(blk.cols):
                out.data[off + a][off + b] = blk.data[a][b]
    return out


def instance_right_element(inst, c_by_i=None, alpha0=None):
    """The right-side symmetry of a ThetaInstance determined by one
    invertible c_i on each M_i* (i <= p goes into the r-part, i > p into
    the b-part; the M_i leg of A0 carries the contragredient) and a free
    translation alpha0 in A0."""
    from .theta import GroupElement
    h, f = inst.h, inst.h.field
    c_by_i = dict(c_by_i or {})
    for i in range(1, h.r + 1):
        c_by_i.setdefault(i, ExactMatrix.identity(f, inst.m_mult[i - 1]))
    def r_n1_block(i):
        return ExactMatrix.identity(f, h.dimH[(1, i)]).kron(c_by_i[i])

    def r_m1_block(key):
        i, l = key
        return ExactMatrix.identity(f, h.dimH[(l, i)]).kron(c_by_i[i]).kron(
            ExactMatrix.identity(f, inst.n_mult[l - 1]))

    def r_a0_block(key):
        # the i-leg of A0 is the same M_i* as in N1 and M1
        i, j = key
        return ExactMatrix.identity(f, h.dimA[(j, i)]).kron(c_by_i[i]).kron(
            ExactMatrix.identity(f, inst.m_mult[j - 1]))

    def b_a0_block(key):
        # the contraction <M_j*, M_j> turns c_j on M_j* into its
        # transpose on the M_j leg
        i, j = key
        return ExactMatrix.identity(f, h.dimA[(j, i)] * inst.m_mult[i - 1]).kron(
            c_by_i[j].transpose())

    return GroupElement(
        inst.theta, "right",
        r_n1=_block_diag(f, inst.lay_n1, r_n1_block),
        r_m1=_block_diag(f, inst.lay_m1, r_m1_block),
        r_a0=_block_diag(f, inst.lay_a0, r_a0_block),
        b_n2=_block_diag(f, inst.lay_n2, r_n1_block),
        b_m2=_block_diag(f, inst.lay_m2, r_m1_block),
        b_a0=_block_diag(f, inst.lay_a0, b_a0_block),
        alpha0=alpha0)


def instance_left_element(inst, g_m=None, d_by_l=None, beta=None):
    """The left-side symmetry determined by g_m in GL(N_1) and one
    invertible d_l on each N_l (l >= 2), plus a free beta."""
    from .theta import GroupElement
    h, f = inst.h, inst.h.field
    d_by_l = dict(d_by_l or {})
    for l in range(2, h.s + 1):
        d_by_l.setdefault(l, ExactMatrix.identity(f, inst.n_mult[l - 1]))

    def m_block(key):
        i, l = key
        return ExactMatrix.identity(
            f, h.dimH[(l, i)] * inst.m_mult[i - 1]).kron(d_by_l[l])

    def b0_block(l):
        return ExactMatrix.identity(f, h.dimB[(l, 1)]).kron(d_by_l[l])

    return GroupElement(
        inst.theta, "left", g_m=g_m,
        l_m1=_block_diag(f, inst.lay_m1, m_block),
        l_m2=_block_diag(f, inst.lay_m2, m_block),
        l_b0=_block_diag(f, inst.lay_b0, b0_block),
        beta=beta)


# -- the mutated Hom system -------------------------------------------

class MutatedHomData(HomData):
    """A HomData of type (p+1, r+s-p-1) together with the presentation
    data of its kernel and quotient spaces:

    quot[(l, i)] = (emb, proj, section) presenting
        H'[(l, i)] = (H_1i (x) H*_{1,l+p}) / emb(A_{l+p,i}),
    ker[(m, l)]  = basis matrix of
        B'[(m, l)] = ker(B_{sigma(m),1} (x) H_{1,l+p} -> H_{sigma(m),l+p})

    for the regimes where those descriptions apply (i <= p, l <= r-p for
    the quotients; l <= r-p < m for the kernels)."""

    def __init__(self, field, r, s, dimH, dimA, dimB,
                 comp_HA, comp_BH, comp_AA, comp_BB, quot, ker, source, p):
        HomData.__init__(self, field, r, s, dimH, dimA, dimB,
                         comp_HA, comp_BH, comp_AA, comp_BB)
        self.quot = quot
        self.ker = ker
        self.source = source
        self.source_p = p


def _emb_A(h, k, i):
    """The embedding A_ki -> H_1i (x) H*_1k adjoint to composition."""
    f = h.field
    d1i, dk, da = h.dimH[(1, i)], h.dimH[(1, k)], h.dimA[(k, i)]
    comp = h.comp_HA[(1, k, i)]
    out = ExactMatrix.zeros(f, d1i * dk, da)
    for x in range(d1i):
        for z in range(dk):
            for a in range(da):
                out.data[x * dk + z][a] = comp.data[x][z * da + a]
    return out


def _dual_precomp(comp, xdim, adim, ydim):
    """From comp : X (x) A -> Y, the map A (x) Y* -> X* of
    precomposition on functionals."""
    f = comp.field
    out = ExactMatrix.zeros(f, xdim, adim * ydim)
    for x in range(xdim):
        for a in range(adim):
            for y in range(ydim):
                out.data[x][a * ydim + y] = comp.data[y][x * adim + a]
    return out


def mutated_hom_data(h, p):
    """The Hom system of the p-th mutation, of type (p+1, r+s-p-1); all
    induced compositions are computed through the recorded kernel and
    quotient presentations, asserting well-definedness."""
    f = h.field
    r, s = h.r, h.s
    if not 0 <= p < r:
        raise ValueError("p must satisfy 0 <= p < r")
    q = r - p
    rp, sp = p + 1, r + s - p - 1

    def sig(l):
        return l - q + 1

    def KK(l):
        return l + p

    dimA = {}
    for i in range(1, p + 1):
        for j in range(i, p + 1):
            dimA[(j, i)] = h.dimA[(j, i)]
        dimA[(rp, i)] = h.dimH[(1, i)]
    dimA[(rp, rp)] = 1

    quot = {}
    dimH = {}
    for l in range(1, sp + 1):
        for i in range(1, rp + 1):
            if l <= q:
                if i <= p:
                    emb = _emb_A(h, KK(l), i)
                    sub = Subspace(emb.rows, emb)
                    if sub.dim != emb.cols:
                        raise ValueError("canonical map of A into H (x) H* "
                                         "is not injective")
                    proj, section = quotient_data(emb.rows, sub)
                    quot[(l, i)] = (emb, proj, section)
                    dimH[(l, i)] = proj.rows
                else:
                    dimH[(l, i)] = h.dimH[(1, KK(l))]
            else:
                dimH[(l, i)] = (h.dimH[(sig(l), i)] if i <= p
                                else h.dimB[(sig(l), 1)])

    ker = {}
    dimB = {}
    for l in range(1, sp + 1):
        for m in range(l, sp + 1):
            if m <= q:
                dimB[(m, l)] = h.dimA[(KK(m), KK(l))]
            elif l > q:
                dimB[(m, l)] = h.dimB[(sig(m), sig(l))]
            else:
                kb = kernel_basis(h.comp_BH[(sig(m), 1, KK(l))])
                ker[(m, l)] = kb
                dimB[(m, l)] = kb.cols

    def ident(d):
        return ExactMatrix.identity(f, d)

    comp_AA = {}
    for i in range(1, rp + 1):
        for j in range(i, rp + 1):
            for k in range(j, rp + 1):
                if k <= p:
                    comp_AA[(k, j, i)] = h.comp_AA[(k, j, i)]
                elif j <= p:
                    comp_AA[(k, j, i)] = h.comp_HA[(1, j, i)]
                else:
                    comp_AA[(k, j, i)] = ident(dimA[(rp, i)])

    comp_HA = {}
    for l in range(1, sp + 1):
        for i in range(1, rp + 1):
            for j in range(i, rp + 1):
                if l > q:
                    L = sig(l)
                    if j <= p:
                        c = h.comp_HA[(L, j, i)]
                    elif i <= p:
                        c = h.comp_BH[(L, 1, i)]
                    else:
                        c = ident(dimH[(l, rp)])
                else:
                    ds = h.dimH[(1, KK(l))]
                    if j <= p:
                        da = h.dimA[(j, i)]
                        _, proj_i, _ = quot[(l, i)]
                        emb_j, _, sec_j = quot[(l, j)]
                        amb = (h.comp_HA[(1, j, i)].kron(ident(ds))
                               @ ident(h.dimH[(1, j)]).kron(swap_matrix(f, ds, da)))
                        if not (proj_i @ amb @ emb_j.kron(ident(da))).is_zero():
                            raise ValueError("induced H'A' composition ill-defined")
                        c = proj_i @ amb @ sec_j.kron(ident(da))
                    elif i <= p:
                        _, proj_i, _ = quot[(l, i)]
                        c = proj_i @ swap_matrix(f, ds, h.dimH[(1, i)])
                    else:
                        c = ident(ds)
                comp_HA[(l, j, i)] = c

    comp_BH = {}
    for l in range(1, sp + 1):
        for m in range(l, sp + 1):
            for i in range(1, rp + 1):
                if l > q:
                    M, L = sig(m), sig(l)
                    c = (h.comp_BH[(M, L, i)] if i <= p
                         else h.comp_BB[(M, L, 1)])
                elif m <= q:
                    Km, Kl = KK(m), KK(l)
                    da = h.dimA[(Km, Kl)]
                    D = _dual_precomp(h.comp_HA[(1, Km, Kl)],
                                      h.dimH[(1, Km)], da, h.dimH[(1, Kl)])
                    if i == rp:
                        c = D
                    else:
                        d1i = h.dimH[(1, i)]
                        _, proj_m, _ = quot[(m, i)]
                        emb_l, _, sec_l = quot[(l, i)]
                        amb = (ident(d1i).kron(D)
                               @ swap_matrix(f, da, d1i).kron(ident(h.dimH[(1, Kl)])))
                        if not (proj_m @ amb @ ident(da).kron(emb_l)).is_zero():
                            raise ValueError("induced B'H' composition ill-defined")
                        c = proj_m @ amb @ ident(da).kron(sec_l)
                else:
                    M, Kl = sig(m), KK(l)
                    kb = ker[(m, l)]
                    dB = h.dimB[(M, 1)]
                    dH = h.dimH[(1, Kl)]
                    if i == rp:
                        ctr = ExactMatrix.zeros(f, dB, dB * dH * dH)
                        one = f.one()
                        for b in range(dB):
                            for x in range(dH):
                                ctr.data[b][(b * dH + x) * dH + x] = one
                        c = ctr @ kb.kron(ident(dH))
                    else:
                        d1i = h.dimH[(1, i)]
                        bh = h.comp_BH[(M, 1, i)]
                        e2 = ExactMatrix.zeros(f, h.dimH[(M, i)],
                                               dB * dH * d1i * dH)
                        for row in range(h.dimH[(M, i)]):
                            for b in range(dB):
                                for x in range(d1i):
                                    cc = bh.data[row][b * d1i + x]
                                    if cc == 0:
                                        continue
                                    for z in range(dH):
                                        col = (b * dH + z) * (d1i * dH) + x * dH + z
                                        e2.data[row][col] = f.add(e2.data[row][col], cc)
                        emb_l, _, sec_l = quot[(l, i)]
                        if not (e2 @ kb.kron(emb_l)).is_zero():
                            raise ValueError("induced mixed B'H' composition ill-defined")
                        c = e2 @ kb.kron(sec_l)
                comp_BH[(m, l, i)] = c

    comp_BB = {}
    for l in range(1, sp + 1):
        for m in range(l, sp + 1):
            for n_ in range(m, sp + 1):
                if l > q:
                    c = h.comp_BB[(sig(n_), sig(m), sig(l))]
                elif n_ <= q:
                    c = h.comp_AA[(KK(n_), KK(m), KK(l))]
                elif m > q:
                    amb = h.comp_BB[(sig(n_), sig(m), 1)].kron(
                        ident(h.dimH[(1, KK(l))]))
                    x = amb @ ident(dimB[(n_, m)]).kron(ker[(m, l)])
                    c = solve_linear(ker[(n_, l)], x)
                    if c is None:
                        raise ValueError("induced B'B' composition leaves the kernel")
                else:
                    amb = ident(h.dimB[(sig(n_), 1)]).kron(
                        h.comp_HA[(1, KK(m), KK(l))])
                    x = amb @ ker[(n_, m)].kron(ident(h.dimA[(KK(m), KK(l))]))
                    c = solve_linear(ker[(n_, l)], x)
                    if c is None:
                        raise ValueError("induced B'B' composition leaves the kernel")
                comp_BB[(n_, m, l)] = c

    return MutatedHomData(f, rp, sp, dimH, dimA, dimB,
                          comp_HA, comp_BH, comp_AA, comp_BB, quot, ker, h, p)


def transpose_hom_data(h):
    """The opposite Hom system, of type (s, r): exchange the two tiers,
    reverse the orderings, and read every composition backwards."""
    f = h.field
    r, s = h.r, h.s
    dimH = {}
    for b in range(1, r + 1):
        for a in range(1, s + 1):
            dimH[(b, a)] = h.dimH[(s + 1 - a, r + 1 - b)]
    dimA = {}
    for a1 in range(1, s + 1):
        for a2 in range(a1, s + 1):
            dimA[(a2, a1)] = h.dimB[(s + 1 - a1, s + 1 - a2)]
    dimB = {}
    for b1 in range(1, r + 1):
        for b2 in range(b1, r + 1):
            dimB[(b2, b1)] = h.dimA[(r + 1 - b1, r + 1 - b2)]

    comp_AA = {}
    for a1 in range(1, s + 1):
        for a2 in range(a1, s + 1):
            for a3 in range(a2, s + 1):
                comp_AA[(a3, a2, a1)] = (
                    h.comp_BB[(s + 1 - a1, s + 1 - a2, s + 1 - a3)]
                    @ swap_matrix(f, dimA[(a3, a2)], dimA[(a2, a1)]))
    comp_BB = {}
    for b1 in range(1, r + 1):
        for b2 in range(b1, r + 1):
            for b3 in range(b2, r + 1):
                comp_BB[(b3, b2, b1)] = (
                    h.comp_AA[(r + 1 - b1, r + 1 - b2, r + 1 - b3)]
                    @ swap_matrix(f, dimB[(b3, b2)], dimB[(b2, b1)]))
    comp_HA = {}
    for b in range(1, r + 1):
        for a1 in range(1, s + 1):
            for a2 in range(a1, s + 1):
                comp_HA[(b, a2, a1)] = (
                    h.comp_BH[(s + 1 - a1, s + 1 - a2, r + 1 - b)]
                    @ swap_matrix(f, dimH[(b, a2)], dimA[(a2, a1)]))
    comp_BH = {}
    for b1 in range(1, r + 1):
        for b2 in range(b1, r + 1):
            for a in range(1, s + 1):
                comp_BH[(b2, b1, a)] = (
                    h.comp_HA[(s + 1 - a, r + 1 - b1, r + 1 - b2)]
                    @ swap_matrix(f, dimB[(b2, b1)], dimH[(b1, a)]))
    return HomData(f, s, r, dimH, dimA, dimB,
                   comp_HA, comp_BH, comp_AA, comp_BB)


def mutated_multiplicities(h, m_mult, n_mult, p):
    """Multiplicities of the mutated instance in the layout of
    mutated_hom_data(h, p): returns (m', n') of lengths (p+1, r+s-p-1)."""
    r, s = h.r, h.s
    q = r - p
    m_prime = list(m_mult[:p])
    n1p = sum(m_mult[j - 1] * h.dimH[(1, j)] for j in range(p + 1, r + 1))
    m_prime.append(n1p - n_mult[0])
    n_prime = [m_mult[KK - 1] for KK in range(p + 1, r + 1)]
    n_prime += list(n_mult[1:])
    assert len(n_prime) == r + s - p - 1 and q == r - p
    return m_prime, n_prime


def mutated_instance(h, m_mult, n_mult, p):
    """The instance presenting the mutated space: the transposed mutated
    Hom system with reversed multiplicities and cut s-1.

    The mutated Hom system has type (p+1, r+s-p-1) but places the new
    distinguished object last; transposing puts the family in the
    standard increasing layout, with the cut after position s-1."""
    hm = mutated_hom_data(h, p)
    m_prime, n_prime = mutated_multiplicities(h, m_mult, n_mult, p)
    ht = transpose_hom_data(hm)
    m_hat = list(reversed(n_prime))
    n_hat = list(reversed(m_prime))
    return build_theta_p(ht, m_hat, n_hat, h.s - 1)


def in_W0_p(inst, w):
    """Whether the total sum of the second-tier components of the point
    is surjective; for an instance this is exactly membership in the
    open locus preserved by mutation."""
    return in_W0(w)


# -- polarizations ----------------------------------------------------

class Polarization(object):
    """A normalized polarization: positive rational weights lam (first
    tier) and mu (second tier) with sum(lam_i m_i) = sum(mu_l n_l) = 1
    for the recorded multiplicities."""

    def __init__(self, lam, mu, m_mult, n_mult, check=True):
        self.lam = list(lam)
        self.mu = list(mu)
        self.m_mult = list(m_mult)
        self.n_mult = list(n_mult)
        if check:
            if len(lam) != len(m_mult) or len(mu) != len(n_mult):
                raise ValueError("weight/multiplicity length mismatch")
            for x in list(lam) + list(mu):
                if x <= 0:
                    raise ValueError("polarization weights must be positive")
            if sum(l * m for l, m in zip(lam, m_mult)) != 1:
                raise ValueError("first-tier weights are not normalized")
            if sum(u * n for u, n in zip(mu, n_mult)) != 1:
                raise ValueError("second-tier weights are not normalized")

    def __eq__(self, other):
        return (isinstance(other, Polarization)
                and self.lam == other.lam and self.mu == other.mu
                and self.m_mult == other.m_mult
                and self.n_mult == other.n_mult)

    def __repr__(self):
        return "Polarization(lam=%r, mu=%r)" % (self.lam, self.mu)

    def transpose(self):
        """The same polarization read on the transposed instance, where
        the two tiers swap roles and each tier is reversed."""
        return Polarization(list(reversed(self.mu)), list(reversed(self.lam)),
                            list(reversed(self.n_mult)),
                            list(reversed(self.m_mult)))


class PolarizationReport(object):
    """Result of transporting a polarization: the candidate weights, the
    normalizing constant, and any positivity violations."""

    def __init__(self, lam, mu, m_mult, n_mult, constant, violations):
        self.lam = lam
        self.mu = mu
        self.m_mult = m_mult
        self.n_mult = n_mult
        self.constant = constant
        self.violations = violations

    @property
    def ok(self):
        return not self.violations

    def polarization(self):
        if self.violations:
            raise ValueError("transported weights are not positive: %s"
                             % "; ".join(self.violations))
        return Polarization(self.lam, self.mu, self.m_mult, self.n_mult)

    def __repr__(self):
        tag = "ok" if self.ok else "violations=%r" % self.violations
        return ("PolarizationReport(lam=%r, mu=%r, constant=%r, %s)"
                % (self.lam, self.mu, self.constant, tag))


def map_polarization(pol, h, p):
    """Transport a polarization through the p-th mutation.

    The result is expressed in the layout of mutated_hom_data(h, p):
    first tier of length p+1 (the retained objects then the new one),
    second tier of length r+s-p-1 (the reflected objects then the
    retained tail).  Weights that come out non-positive are reported,
    not silently accepted."""
    from fractions import Fraction
    r, s = h.r, h.s
    q = r - p
    lam, mu = pol.lam, pol.mu
    m_mult, n_mult = pol.m_mult, pol.n_mult
    m_prime, n_prime = mutated_multiplicities(h, m_mult, n_mult, p)

    alpha = [Fraction(x) for x in lam[:p]] + [Fraction(mu[0])]
    beta = []
    for l in range(1, q + 1):
        beta.append(Fraction(mu[0]) * h.dimH[(1, l + p)] - Fraction(lam[l + p - 1]))
    for l in range(q + 1, r + s - p):
        beta.append(Fraction(mu[l - q]))
    c = sum(a * m for a, m in zip(alpha, m_prime))
    violations = []
    if c <= 0:
        violations.append("normalizing constant %s is not positive" % c)
        return PolarizationReport(alpha, beta, m_prime, n_prime, c, violations)
    alpha = [a / c for a in alpha]
    beta = [b / c for b in beta]
    for i, a in enumerate(alpha):
        if a <= 0:
            violations.append("first-tier weight %d is %s" % (i + 1, a))
    for l, b in enumerate(beta):
        if b <= 0:
            violations.append("second-tier weight %d is %s" % (l + 1, b))
    return PolarizationReport(alpha, beta, m_prime, n_prime, c, violations)


# -- serialization ----------------------------------------------------

def _tensor_dict_to_json(d):
    return [{"key": list(k), "matrix": matrix_to_json(v)}
            for k, v in sorted(d.items())]


def _tensor_dict_from_json(obj, field):
    return {tuple(entry["key"]): matrix_from_json(field, entry["matrix"])
            for entry in obj}


def _dim_dict_to_json(d):
    return [{"key": list(k), "dim": v} for k, v in sorted(d.items())]


def _dim_dict_from_json(obj):
    return {tuple(entry["key"]): entry["dim"] for entry in obj}


def hom_data_to_json(h):
    return {
        "field": "rationals" if h.field.p is None else "gf:%d" % h.field.p,
        "r": h.r,
        "s": h.s,
        "dimH": _dim_dict_to_json(h.dimH),
        "dimA": _dim_dict_to_json(h.dimA),
        "dimB": _dim_dict_to_json(h.dimB),
        "comp_HA": _tensor_dict_to_json(h.comp_HA),
        "comp_BH": _tensor_dict_to_json(h.comp_BH),
        "comp_AA": _tensor_dict_to_json(h.comp_AA),
        "comp_BB": _tensor_dict_to_json(h.comp_BB),
    }


def hom_data_from_json(obj):
    from .exactfield import Field
    tag = obj["field"]
    f = Field() if tag == "rationals" else Field(int(tag.split(":")[1]))
    return HomData(f, obj["r"], obj["s"],
                   _dim_dict_from_json(obj["dimH"]),
                   _dim_dict_from_json(obj["dimA"]),
                   _dim_dict_from_json(obj["dimB"]),
                   _tensor_dict_from_json(obj["comp_HA"], f),
                   _tensor_dict_from_json(obj["comp_BH"], f),
                   _tensor_dict_from_json(obj["comp_AA"], f),
                   _tensor_dict_from_json(obj["comp_BB"], f))


def dual_point_to_mutated(inst, inst_hat, z):
    """Express a point of the dual of inst.theta as a point of the
    mutated instance inst_hat.

    Implemented for the Kronecker-type regime p = 0, s = 1 (everything
    except psi2 is zero), where the identification is a reversal of the
    second-tier blocks with identical internal layout."""
    if inst.p != 0 or inst.h.s != 1:
        raise ValueError("point-level identification is implemented "
                         "only for p = 0, s = 1")
    f = inst.h.field
    th = inst_hat.theta
    if (th.dim_n1, th.dim_m1, th.dim_m2) != (0, 0, 0):
        raise ValueError("mutated instance is not of Kronecker type")
    if z.psi2.rows != th.dim_n2 or z.psi2.cols != th.dim_mult:
        raise ValueError("point does not match the mutated instance")
    r = inst.h.r
    psi2_hat = ExactMatrix.zeros(f, th.dim_n2, th.dim_mult)
    for j in inst.lay_n2.keys:
        a_hat = r + 1 - j
        d = inst.lay_n2.dims[j]
        if inst_hat.lay_n2.dims[a_hat] != d:
            raise ValueError("block dimensions of the two instances disagree")
        src = inst.lay_n2.offsets[j]
        dst = inst_hat.lay_n2.offsets[a_hat]
        for k in range(d):
            for c in range(th.dim_mult):
                psi2_hat.data[dst + k][c] = z.psi2.data[src + k][c]
    zero_n1 = ExactMatrix.zeros(f, 0, th.dim_mult)
    zero_m1 = ExactMatrix.zeros(f, 0, 1)
    zero_m2 = ExactMatrix.zeros(f, 0, 1)
    return MorphismPoint(th, zero_n1, psi2_hat, zero_m1, zero_m2)
