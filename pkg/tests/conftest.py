"""Shared fixtures: seeded random abstract morphism spaces, points, and
the projective-space instance grid used across the suite."""

import random
from functools import lru_cache

from mutation_forge.exactfield import ExactMatrix, Field
from mutation_forge.theta import MorphismPoint, ThetaSpace, in_W0
from mutation_forge.mutation import build_dual
from mutation_forge.homdata import (build_theta_p, mutated_instance,
                                    projective_space_hom_data)

QQ = Field()


def rnd_matrix(field, rng, rows, cols, lo=-2, hi=2):
    if rows == 0 or cols == 0:
        return ExactMatrix.zeros(field, rows, cols)
    return ExactMatrix(field, [[field.of(rng.randint(lo, hi))
                                for _ in range(cols)] for _ in range(rows)])


def rnd_invertible(field, rng, n, lo=-2, hi=2, tries=200):
    if n == 0:
        return ExactMatrix.identity(field, 0)
    for _ in range(tries):
        m = rnd_matrix(field, rng, n, n, lo, hi)
        if m.rank() == n:
            return m
    raise RuntimeError("no invertible matrix found")


def random_point(theta, rng, lo=-2, hi=2):
    f = theta.field
    return MorphismPoint(theta,
                         rnd_matrix(f, rng, theta.dim_n1, theta.dim_mult, lo, hi),
                         rnd_matrix(f, rng, theta.dim_n2, theta.dim_mult, lo, hi),
                         rnd_matrix(f, rng, theta.dim_m1, 1, lo, hi),
                         rnd_matrix(f, rng, theta.dim_m2, 1, lo, hi))


def random_w0_point(theta, rng, tries=200, lo=-2, hi=2):
    for _ in range(tries):
        w = random_point(theta, rng, lo, hi)
        if in_W0(w):
            return w
    raise RuntimeError("no point of W0 found")


# -- the seeded pool of small rational instances ----------------------

def _kronecker_degenerate(rng, n2, mult):
    f = QQ
    z = ExactMatrix.zeros(f, 0, 0)
    return ThetaSpace(f, 0, n2, 0, 0, 0, 0, mult, z, z, z, z)


def _a0_zero(rng, mult):
    f = QQ
    n1, n2, m1, m2, b0 = 2, 3, 2, 2, 1
    rho1 = rnd_matrix(f, rng, m1, b0 * n1)
    while True:
        rho2 = rnd_matrix(f, rng, m2, b0 * n2)
        if rho2.rank() == m2:
            break
    mu = ExactMatrix.zeros(f, m1, 0)
    nu = ExactMatrix.zeros(f, n1, 0)
    return ThetaSpace(f, n1, n2, m1, m2, 0, b0, mult, rho1, rho2, mu, nu)


def _b0_zero(rng, mult):
    f = QQ
    n1, n2, a0 = 3, 3, 2
    rho1 = ExactMatrix.zeros(f, 0, 0)
    rho2 = ExactMatrix.zeros(f, 0, 0)
    mu = ExactMatrix.zeros(f, 0, 0)
    while True:
        nu = rnd_matrix(f, rng, n1, n2 * a0)
        t = ThetaSpace(f, n1, n2, 0, 0, a0, 0, mult, rho1, rho2, mu, nu)
        if t.nu_bar().rank() == a0:
            return t


@lru_cache(maxsize=None)
def full_p1_instance():
    """A projective-line type-(2,2) instance with every space nonzero
    and all dimensions at most 4."""
    h = projective_space_hom_data(QQ, 1, [-2, -1], [0, 1])
    return build_theta_p(h, [1, 1], [1, 1], 1)


def theta_pool(seed, count):
    """A deterministic mixed pool of small rational instances."""
    rng = random.Random(seed)
    full = full_p1_instance().theta
    out = []
    builders = [
        lambda: _kronecker_degenerate(rng, rng.choice((3, 4)),
                                      rng.choice((1, 2))),
        lambda: _a0_zero(rng, rng.choice((1, 2))),
        lambda: _b0_zero(rng, rng.choice((1, 2))),
        lambda: full,
    ]
    for k in range(count):
        out.append(builders[k % 4]())
    return out


# -- the projective-space instance grid -------------------------------

PN_PATTERNS = [
    ((-2, -1), (0,)),
    ((-2,), (0, 1)),
    ((-3, -2, -1), (0,)),
    ((-2, -1), (0, 1)),
    ((-2,), (0, 1, 2)),
    ((-1,), (0, 1, 2)),
    ((-3,), (0,)),
    ((-1,), (0,)),
]


def pn_grid():
    """(n, e, f, p) for every pattern, 1 <= n <= 3, 0 <= p < r."""
    out = []
    for n in (1, 2, 3):
        for e, fl in PN_PATTERNS:
            for p in range(len(e)):
                out.append((n, e, fl, p))
    return out


@lru_cache(maxsize=None)
def pn_hom(n, e, fl):
    return projective_space_hom_data(QQ, n, list(e), list(fl))


@lru_cache(maxsize=None)
def pn_instance(n, e, fl, p):
    h = pn_hom(n, e, fl)
    return build_theta_p(h, [1] * h.r, [1] * h.s, p)


@lru_cache(maxsize=None)
def pn_mutated(n, e, fl, p):
    h = pn_hom(n, e, fl)
    return mutated_instance(h, [1] * h.r, [1] * h.s, p)


_DUALS = {}


def dual_of(theta):
    key = id(theta)
    if key not in _DUALS:
        _DUALS[key] = build_dual(theta)
    return _DUALS[key]
