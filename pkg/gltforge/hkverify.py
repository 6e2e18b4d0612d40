'''
Created on 18 Oct 2026

@author: gltforge developers

Numerical hyperkahler checks on a Kahler potential produced by the GLT:
second derivatives by finite differences of K(u, z), the conformal
symplectic condition on the matrix of mixed derivatives, the second complex
structure J and the metric g(X, Y) = omega_I(X, I Y).
'''
from concurrent.futures import ThreadPoolExecutor
import itertools
import logging
from typing import NamedTuple

import numpy as np

from gltforge import configuration, glt
from gltforge.configuration import positive
from gltforge.errors import GltForgeError


_cfg = configuration.getConfig(
    __name__,
    hessian_step=dict(value=1e-2, validate=positive),
)


class StencilSolveError(GltForgeError):

    def __init__(self, point, error):
        super().__init__('constraint solve failed inside the stencil at %r: '
                         '%s' % (point, error))
        self.point = point
        self.error = error


class SingularBlock(GltForgeError):

    def __init__(self, msg):
        super().__init__('Singular block: %s' % (msg,))


class SecondDerivs(NamedTuple):
    '''
    Blocks of the Hermitian matrix M = [[K_uubar, K_uzbar], [K_zubar,
    K_zzbar]] at the base point.
    '''
    K_uu: np.ndarray
    K_uz: np.ndarray
    K_zu: np.ndarray
    K_zz: np.ndarray
    u: np.ndarray
    z: np.ndarray
    K: float

    @property
    def matrix(self):
        return np.block([[self.K_uu, self.K_uz], [self.K_zu, self.K_zz]])

    @property
    def n(self):
        return self.K_uu.shape[0]


class _Potential(object):
    '''
    K as a function of the real coordinates (Re u, Re z, Im u, Im z) of the
    free multiplets; solves are warm-started from the base solution.
    '''

    def __init__(self, spec, u, z, guess=None, slice=None):
        self.spec = spec
        self.slice = slice
        count = len(spec.rs.r_list)
        self.u = np.broadcast_to(np.asarray(u, complex), (count,)).copy()
        self.z = np.broadcast_to(np.asarray(z, complex), (count,)).copy()
        try:
            self.base = glt.solve_constraints(spec, self.z, self.u, guess,
                                              slice)
        except GltForgeError as e:
            raise StencilSolveError((self.u, self.z), e)
        self.free = list(self.base.free)

    def coordinates(self):
        xi = np.concatenate([self.u[self.free], self.z[self.free]])
        return np.concatenate([xi.real, xi.imag])

    def __call__(self, v):
        n = len(self.free)
        xi = v[:2 * n] + 1j * v[2 * n:]
        u, z = self.u.copy(), self.z.copy()
        u[self.free], z[self.free] = xi[:n], xi[n:]
        try:
            solved = glt.solve_constraints(self.spec, z, u, self.base,
                                           self.slice)
        except GltForgeError as e:
            raise StencilSolveError((u, z), e)
        return glt.kahler_potential(self.spec, solved)


def _real_hessian(func, x0, h, reverse=False, extrapolate=True):
    '''
    Central second differences, Richardson extrapolated from h and h/2
    unless extrapolate is false (exact for quadratic potentials).
    '''
    def hess(step):
        dim = len(x0)
        H = np.zeros((dim, dim))
        f0 = func(x0)
        for i in range(dim):
            ei = np.zeros(dim)
            ei[i] = step
            H[i, i] = (func(x0 + ei) - 2 * f0 + func(x0 - ei)) / step ** 2
            for j in range(i + 1, dim):
                ej = np.zeros(dim)
                ej[j] = step
                a, b = (ej, ei) if reverse else (ei, ej)
                H[i, j] = H[j, i] = (func(x0 + a + b) - func(x0 + a - b)
                                     - func(x0 - a + b)
                                     + func(x0 - a - b)) / (4 * step ** 2)
        return H
    if not extrapolate:
        return hess(h)
    coarse, fine = hess(h), hess(0.5 * h)
    return (4.0 * fine - coarse) / 3.0


def wirtinger(H):
    '''
    d^2/dxi_j dconj(xi_k) from the real Hessian in coordinates
    (Re xi, Im xi): T H T^H with T = [I, -iI] / 2.
    '''
    n = H.shape[0] // 2
    T = 0.5 * np.hstack([np.eye(n), -1j * np.eye(n)])
    return T @ H @ T.conj().T


def second_derivs(spec, u, z, h=None, guess=None, slice=None, reverse=False,
                  extrapolate=True):
    '''
    Mixed second derivatives of K at (u, z) by nested central differences
    of the solved potential.
    '''
    log = logging.getLogger(__name__)
    h = _cfg.hessian_step.value if h is None else h
    potential = _Potential(spec, u, z, guess, slice)
    x0 = potential.coordinates()
    M = wirtinger(_real_hessian(potential, x0, h, reverse,
                                   extrapolate))
    n = len(potential.free)
    log.debug("second_derivs(%s) at u=%r z=%r", spec.name, u, z)
    return SecondDerivs(M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:],
                        potential.u[potential.free],
                        potential.z[potential.free], potential(x0))


def symplectic_unit(n):
    return np.block([[np.zeros((n, n)), np.eye(n)],
                     [-np.eye(n), np.zeros((n, n))]])


class SpCheck(NamedTuple):
    factor: complex
    residual: float


def sp_check(sd):
    '''
    Least squares factor with M^T J M ~ factor * J, and the residual norm.
    '''
    M = sd.matrix
    J = symplectic_unit(sd.n)
    lhs = M.T @ J @ M
    factor = np.trace(J.conj().T @ lhs) / np.trace(J.conj().T @ J)
    return SpCheck(complex(factor), float(np.linalg.norm(lhs - factor * J)))


class JStructure(NamedTuple):
    operator: np.ndarray
    residual: float


def j_structure(sd, factor):
    '''
    J on (d/du, d/dz, d/dubar, d/dzbar) from the mixed derivatives divided
    by sqrt(factor), and the norm of J^2 + 1.
    '''
    if factor == 0:
        raise SingularBlock('zero conformal factor')
    scale = 1.0 / np.sqrt(complex(factor))
    A, B = scale * sd.K_uu, scale * sd.K_uz
    C, D = scale * sd.K_zu, scale * sd.K_zz
    # images of d/du_i and d/dz_i in the antiholomorphic directions
    image = np.block([[C.T, -A.T], [D.T, -B.T]])
    n2 = image.shape[0]
    J = np.block([[np.zeros((n2, n2)), image.conj()],
                  [image, np.zeros((n2, n2))]])
    return JStructure(J, float(np.linalg.norm(J @ J + np.eye(2 * n2))))


class Metric(NamedTuple):
    hermitian: np.ndarray
    real: np.ndarray
    signature: tuple


def metric_from_second_derivs(sd):
    '''
    g(X, Y) = omega_I(X, I Y): the Hermitian form is M itself and the real
    metric in coordinates (Re xi, Im xi) is [[Re M, Im M], [-Im M, Re M]].
    '''
    M = sd.matrix
    G = np.block([[M.real, M.imag], [-M.imag, M.real]])
    G = 0.5 * (G + G.T)
    eig = np.linalg.eigvalsh(G)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(eig))))
    return Metric(M, G, (int(np.sum(eig > tol)), int(np.sum(eig < -tol))))


def cubic_reference(u, z, variant='consistent'):
    '''
    (1/x) [[1, 3z], [3 conj(z), c x^2 + 9 |z|^2]] with x^2 = (u + ubar +
    3|z|^2)/6 and c = 36, or c = 6 for the printed variant.
    '''
    x = np.sqrt((2 * complex(u).real + 3 * abs(z) ** 2) / 6.0)
    c = 36.0 if variant == 'consistent' else 6.0
    return np.array([[1.0, 3 * z],
                     [3 * np.conj(z), c * x ** 2 + 9 * abs(z) ** 2]]) / x


class CubicComparison(NamedTuple):
    mu: float
    deviation: float


def metric_compare_cubic(records, variant='consistent'):
    '''
    Fit one real constant mu with M ~ mu * reference over all points and
    return it with the worst relative deviation.  records are
    (u, z, SecondDerivs) triples.
    '''
    refs = [cubic_reference(u, z, variant) for u, z, _ in records]
    Ms = [sd.matrix for _, _, sd in records]
    mu = sum(np.vdot(R, M).real for R, M in zip(refs, Ms)) \
        / sum(np.vdot(R, R).real for R in refs)
    deviation = max(np.linalg.norm(M - mu * R) / np.linalg.norm(mu * R)
                    for R, M in zip(refs, Ms))
    return CubicComparison(float(mu), float(deviation))


def cubic_restriction_z0(records):
    '''
    Relative spread of K_uubar * sqrt(u + ubar) over points with z = 0.
    '''
    ratios = np.array([sd.K_uu[0, 0].real * np.sqrt(2 * complex(u).real)
                       for u, _, sd in records])
    return float(np.max(np.abs(ratios / np.mean(ratios) - 1.0)))


def verify_point(spec, u, z, guess=None, h=None, extrapolate=True):
    '''
    One JSON-ready record: K, conformal factor, residuals, metric and its
    signature.
    '''
    log = logging.getLogger(__name__)
    sd = second_derivs(spec, u, z, h, guess, extrapolate=extrapolate)
    sp_res = sp_check(sd)
    j_res = j_structure(sd, sp_res.factor)
    metric = metric_from_second_derivs(sd)
    if sd.K > 0:
        log.warning("verify_point(%s): positive Kahler potential %r at u=%r",
                    spec.name, sd.K, u)
    return dict(u=np.atleast_1d(u), z=np.atleast_1d(z), K=sd.K,
                factor=sp_res.factor, sp_residual=sp_res.residual,
                J2_residual=j_res.residual, metric=metric.hermitian,
                signature=metric.signature, positive_K=bool(sd.K > 0))


def grid(ranges, shape):
    '''
    Points of a regular grid over ranges [(lo, hi), ...] in the real
    coordinates (Re u, Im u, Re z, Im z) per multiplet, in C order.
    '''
    if np.ndim(shape) == 0:
        shape = (int(shape),) * len(ranges)
    axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(ranges, shape)]
    points = []
    for values in itertools.product(*axes):
        v = np.asarray(values).reshape(-1, 4)
        points.append((v[:, 0] + 1j * v[:, 1], v[:, 2] + 1j * v[:, 3]))
    return points


def sweep(func, points, threads=1):
    '''
    Map func over points with a thread pool; results keep the point order.
    '''
    if threads <= 1:
        return [func(p) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, points))


def verify_grid(spec, points, threads=1, h=None, extrapolate=True):
    return sweep(lambda p: verify_point(spec, p[0], p[1], h=h,
                                        extrapolate=extrapolate),
                 points, threads)


class FlatnessReport(NamedTuple):
    spread: float
    factor_spread: float
    sp_residual: float


def flatness(records):
    '''
    Spread of the metric components and of the conformal factor over
    verify_point records.
    '''
    metrics = np.array([r['metric'] for r in records])
    factors = np.array([r['factor'] for r in records])
    spread = float(np.max(np.abs(metrics - metrics[0])))
    return FlatnessReport(spread, float(np.max(np.abs(factors - factors[0]))),
                          float(max(r['sp_residual'] for r in records)))


def describe(record):
    '''
    Flat row for CSV output: complex entries split into re/im columns.
    '''
    row = {}
    for key in ('u', 'z'):
        for k, v in enumerate(np.atleast_1d(record[key])):
            row['%s%d_re' % (key, k)] = float(v.real)
            row['%s%d_im' % (key, k)] = float(v.imag)
    row['K'] = float(record['K'])
    row['factor_re'] = float(complex(record['factor']).real)
    row['factor_im'] = float(complex(record['factor']).imag)
    row['sp_residual'] = record['sp_residual']
    row['J2_residual'] = record['J2_residual']
    M = np.asarray(record['metric'])
    for (i, j), v in np.ndenumerate(M):
        row['g%d%d_re' % (i, j)] = float(v.real)
        row['g%d%d_im' % (i, j)] = float(v.imag)
    row['signature'] = '%d,%d' % tuple(record['signature'])
    return row
