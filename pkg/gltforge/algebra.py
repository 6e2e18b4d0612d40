'''
Created on 18 Oct 2026

@author: gltforge developers

Polynomials in the twistor coordinate zeta, matrix valued polynomials and
spectral curve equations P(zeta, eta) = eta^m + sum_i alpha_i(zeta) eta^(m-i).

Everything here is a value type or a pure function: safe to share between
threads.
'''
from dataclasses import dataclass
import logging
from typing import NamedTuple, Optional

import numpy as np
from numpy.polynomial import polynomial as npp

from gltforge import configuration
from gltforge.configuration import positive
from gltforge.errors import GltForgeError


_cfg = configuration.getConfig(
    __name__,
    rank_rtol=dict(value=1e-10, validate=positive),
    resultant_zero_atol=dict(value=1e-12, validate=positive),
)


class ShapeMismatch(GltForgeError):
    '''
    Raised when matrices or coefficient arrays have incompatible shapes.
    '''

    def __init__(self, msg):
        super().__init__('Shape mismatch: %s' % (msg,))


@dataclass(frozen=True, eq=False)
class PolyZ(object):
    '''
    Polynomial in zeta with complex coefficients, coeffs[a] multiplying
    zeta^a.  The degree bound is part of the value: the real structure pairs
    coefficient a with deg_bound - a.
    '''
    coeffs: np.ndarray
    deg_bound: int

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if coeffs.ndim != 1:
            raise ShapeMismatch('PolyZ coefficients must be a vector')
        deg_bound = int(self.deg_bound)
        if deg_bound < 0:
            raise ShapeMismatch('negative degree bound %r' % (deg_bound,))
        if len(coeffs) > deg_bound + 1:
            if np.any(coeffs[deg_bound + 1:] != 0):
                raise ShapeMismatch('%d coefficients exceed degree bound %d'
                                    % (len(coeffs), deg_bound))
            coeffs = coeffs[:deg_bound + 1]
        elif len(coeffs) < deg_bound + 1:
            coeffs = np.concatenate(
                [coeffs, np.zeros(deg_bound + 1 - len(coeffs), complex)])
        coeffs.flags.writeable = False
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 'deg_bound', deg_bound)

    @classmethod
    def zero(cls, deg_bound):
        return cls(np.zeros(deg_bound + 1, complex), deg_bound)

    @classmethod
    def monomial(cls, power, coeff=1.0, deg_bound=None):
        deg_bound = power if deg_bound is None else deg_bound
        c = np.zeros(deg_bound + 1, complex)
        c[power] = coeff
        return cls(c, deg_bound)

    def __repr__(self):
        return 'PolyZ(%r, deg_bound=%d)' % (list(self.coeffs), self.deg_bound)

    def __call__(self, zeta):
        return npp.polyval(zeta, self.coeffs)

    def __neg__(self):
        return PolyZ(-self.coeffs, self.deg_bound)

    def __add__(self, other):
        if not isinstance(other, PolyZ):
            other = PolyZ([other], 0)
        bound = max(self.deg_bound, other.deg_bound)
        return PolyZ(npp.polyadd(self.padded(bound), other.padded(bound)),
                     bound)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, PolyZ):
            other = PolyZ([other], 0)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PolyZ):
            return PolyZ(npp.polymul(self.coeffs, other.coeffs),
                         self.deg_bound + other.deg_bound)
        return PolyZ(self.coeffs * other, self.deg_bound)

    __rmul__ = __mul__

    def padded(self, bound):
        '''
        Coefficients padded with zeros to length bound + 1.
        '''
        out = np.zeros(bound + 1, complex)
        out[:len(self.coeffs)] = self.coeffs
        return out

    def coefficient(self, power):
        if 0 <= power <= self.deg_bound:
            return complex(self.coeffs[power])
        return 0j

    def derivative(self):
        if self.deg_bound == 0:
            return PolyZ.zero(0)
        return PolyZ(npp.polyder(self.coeffs), self.deg_bound - 1)

    def degree(self, atol=0.0):
        '''
        Actual degree (largest a with |coeffs[a]| > atol), -1 for zero.
        '''
        nz = np.nonzero(np.abs(self.coeffs) > atol)[0]
        return int(nz[-1]) if len(nz) else -1

    def is_zero(self, atol=0.0):
        return self.degree(atol) < 0

    def roots(self, atol=0.0):
        deg = self.degree(atol)
        if deg <= 0:
            return np.zeros(0, complex)
        return npp.polyroots(self.coeffs[:deg + 1])

    def scale(self):
        return float(np.max(np.abs(self.coeffs)))


@dataclass(frozen=True, eq=False)
class MatPoly(object):
    '''
    A(zeta) = sum_i A_i zeta^i with square complex n x n matrices A_i,
    stored as an array of shape (d + 1, n, n).
    '''
    mats: np.ndarray

    def __post_init__(self):
        mats = np.asarray(self.mats, dtype=complex)
        if mats.ndim == 2:
            mats = mats[np.newaxis]
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2] \
                or mats.shape[0] == 0:
            raise ShapeMismatch('MatPoly needs (d+1, n, n) matrices, got %r'
                                % (mats.shape,))
        mats.flags.writeable = False
        object.__setattr__(self, 'mats', mats)

    @property
    def n(self):
        return self.mats.shape[1]

    @property
    def d(self):
        return self.mats.shape[0] - 1

    def __call__(self, zeta):
        out = np.array(self.mats[-1])
        for coeff in self.mats[-2::-1]:
            out = out * zeta + coeff
        return out

    def evaluate_many(self, zetas):
        '''
        Values at many zeta at once, shape (len(zetas), n, n).
        '''
        zetas = np.asarray(zetas, dtype=complex)
        powers = zetas[:, np.newaxis] ** np.arange(self.d + 1)
        return np.einsum('ki,ijl->kjl', powers, self.mats)

    def minor(self, m):
        '''
        Upper-left m x m principal minor A_(m).
        '''
        if not 1 <= m <= self.n:
            raise ShapeMismatch('minor %d of a %d x %d MatPoly'
                                % (m, self.n, self.n))
        return MatPoly(self.mats[:, :m, :m])

    def transpose(self):
        return MatPoly(np.transpose(self.mats, (0, 2, 1)))

    def diagonal_part(self):
        idx = np.arange(self.n)
        mats = np.zeros_like(self.mats)
        mats[:, idx, idx] = self.mats[:, idx, idx]
        return MatPoly(mats)

    def commutator(self, other):
        '''
        [A, B] as a MatPoly of degree d_A + d_B.
        '''
        if other.n != self.n:
            raise ShapeMismatch('commutator of sizes %d and %d'
                                % (self.n, other.n))
        out = np.zeros((self.d + other.d + 1, self.n, self.n), complex)
        for i, a in enumerate(self.mats):
            for j, b in enumerate(other.mats):
                out[i + j] += a @ b - b @ a
        return MatPoly(out)


@dataclass(frozen=True, eq=False)
class CurveEq(object):
    '''
    Spectral curve component P(zeta, eta) = eta^m + sum alpha_i eta^(m-i)
    in the total space of O(d), with deg_bound(alpha_i) = d * i.
    '''
    alphas: tuple
    d: int = 2

    def __post_init__(self):
        alphas = tuple(a if isinstance(a, PolyZ) else PolyZ(a, self.d * i)
                       for i, a in enumerate(self.alphas, start=1))
        for i, a in enumerate(alphas, start=1):
            if a.deg_bound != self.d * i:
                raise ShapeMismatch('alpha_%d has degree bound %d, need %d'
                                    % (i, a.deg_bound, self.d * i))
        object.__setattr__(self, 'alphas', alphas)

    @property
    def m(self):
        return len(self.alphas)

    @property
    def genus(self):
        return (self.m - 1) * (self.d * self.m - 2) // 2

    @property
    def vector_length(self):
        return sum(a.deg_bound + 1 for a in self.alphas)

    def coefficient_vector(self):
        '''
        Concatenated coefficients of alpha_1, ..., alpha_m (the w_a^i).
        '''
        if not self.alphas:
            return np.zeros(0, complex)
        return np.concatenate([a.coeffs for a in self.alphas])

    @classmethod
    def from_vector(cls, vector, m, d=2):
        vector = np.asarray(vector, dtype=complex)
        alphas, pos = [], 0
        for i in range(1, m + 1):
            alphas.append(PolyZ(vector[pos:pos + d * i + 1], d * i))
            pos += d * i + 1
        if pos != len(vector):
            raise ShapeMismatch('%d coefficients for a degree %d curve'
                                % (len(vector), m))
        return cls(tuple(alphas), d)

    def eta_coeffs(self, zeta):
        '''
        Coefficients of P(zeta, .) in eta, highest power first, shape
        zeta.shape + (m + 1,).
        '''
        zeta = np.asarray(zeta, dtype=complex)
        cols = [np.ones_like(zeta)] + [a(zeta) for a in self.alphas]
        return np.stack(cols, axis=-1)

    def __call__(self, zeta, eta):
        out = np.asarray(eta, dtype=complex) ** self.m
        for i, a in enumerate(self.alphas, start=1):
            out = out + a(zeta) * eta ** (self.m - i)
        return out

    def eta_derivative(self, zeta, eta):
        '''
        dP/d eta at (zeta, eta).
        '''
        out = self.m * np.asarray(eta, dtype=complex) ** (self.m - 1)
        for i, a in enumerate(self.alphas[:-1], start=1):
            out = out + (self.m - i) * a(zeta) * eta ** (self.m - i - 1)
        return out

    def discriminant(self):
        '''
        Resultant of P and dP/d eta in eta; its roots are the branch points.
        '''
        def coeffs(zeta):
            c = self.eta_coeffs(zeta)
            return c, c[:-1] * np.arange(self.m, 0, -1)
        bound = self.d * self.m * (self.m - 1)
        return _interpolate(lambda z: _sylvester_det(*coeffs(z)), bound)

    def scale(self):
        return max([1.0] + [a.scale() for a in self.alphas])


def _interpolate(func, bound, rho=1.0):
    '''
    Coefficients of a polynomial of degree <= bound from its values at
    rho times the (bound+1)-th roots of unity.
    '''
    nodes = bound + 1
    zetas = rho * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    values = np.array([func(z) for z in zetas], dtype=complex)
    coeffs = np.fft.fft(values) / nodes
    # fft index a picks the zeta^a coefficient (times rho^a)
    coeffs = coeffs / rho ** np.arange(nodes)
    return PolyZ(coeffs, bound)


def _sylvester_det(p, q):
    '''
    Resultant of two univariate polynomials given highest power first.
    '''
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    if size == 0:
        return 1.0 + 0j
    syl = np.zeros((size, size), complex)
    for row in range(n):
        syl[row, row:row + m + 1] = p
    for row in range(m):
        syl[n + row, row:row + n + 1] = q
    return np.linalg.det(syl)


def mat_poly_eval(A, zeta):
    '''
    Returns sum_i A_i zeta^i.
    '''
    return A(zeta)


def random_matpoly(rng, n, d):
    '''
    Ginibre coefficients: independent standard complex Gaussians.
    '''
    shape = (d + 1, n, n)
    return MatPoly((rng.standard_normal(shape)
                    + 1j * rng.standard_normal(shape)) / np.sqrt(2.0))


def companion_matpoly(alphas, d=2):
    '''
    Companion matrix polynomial whose characteristic curve is
    eta^m + sum alpha_i(zeta) eta^(m-i).
    '''
    curve = CurveEq(tuple(alphas), d)
    m = curve.m
    deg = d * m
    mats = np.zeros((deg + 1, m, m), complex)
    for k in range(m - 1):
        mats[0, k, k + 1] = 1.0
    for i, a in enumerate(curve.alphas, start=1):
        mats[:a.deg_bound + 1, m - 1, m - i] = -a.coeffs
    return MatPoly(mats)


def char_curve(A, d=None):
    '''
    det(eta - A(zeta)) as a CurveEq, by two dimensional interpolation: the
    determinant is sampled on a grid of scaled roots of unity in zeta
    (A.d*n + 1 nodes) and in eta (n + 1 nodes) and the coefficients are read
    off a 2-D FFT.

    d is the twist of the curve, by default the degree of A.  A smaller d
    (a companion matrix polynomial has degree d*m but twist d) truncates
    alpha_i to degree d*i; a non-zero tail raises ShapeMismatch.
    '''
    log = logging.getLogger(__name__)
    n, deg = A.n, A.d
    d = deg if d is None else int(d)
    if d > deg:
        raise ShapeMismatch('twist %d exceeds the degree %d of A' % (d, deg))
    nz, ne = deg * n + 1, n + 1
    norms = np.array([np.linalg.norm(m) for m in A.mats])
    rho = 1.0
    if deg > 0 and norms[0] > 0 and norms[-1] > 0:
        rho = float(np.clip((norms[0] / norms[-1]) ** (1.0 / deg), 1e-3,
                            1e3))
    zetas = rho * np.exp(2j * np.pi * np.arange(nz) / nz)
    vals = A.evaluate_many(zetas)
    sigma = max(float(np.max(np.linalg.norm(vals, ord=2, axis=(1, 2)))),
                1e-300)
    etas = sigma * np.exp(2j * np.pi * np.arange(ne) / ne)
    eye = np.eye(n)
    grid = etas[np.newaxis, :, np.newaxis, np.newaxis] * eye \
        - vals[:, np.newaxis, :, :]
    dets = np.linalg.det(grid)
    coeffs = np.fft.fft2(dets) / (nz * ne)
    coeffs = coeffs / np.outer(rho ** np.arange(nz), sigma ** np.arange(ne))
    if d < deg:
        tol = _cfg.rank_rtol.value * max(1.0, float(np.abs(coeffs).max()))
        for i in range(1, n + 1):
            tail = np.abs(coeffs[d * i + 1:deg * i + 1, n - i])
            if tail.size and tail.max() > tol:
                raise ShapeMismatch(
                    'alpha_%d has degree above %d' % (i, d * i))
    alphas = tuple(PolyZ(coeffs[:d * i + 1, n - i], d * i)
                   for i in range(1, n + 1))
    log.debug("char_curve(n=%r, d=%r, deg=%r): rho=%r sigma=%r", n, d, deg,
              rho, sigma)
    return CurveEq(alphas, d)


def adjugate(M):
    '''
    Classical adjoint: adjugate(M) @ M = M @ adjugate(M) = det(M) * 1,
    built from cofactors so it is exact for singular M too.
    '''
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeMismatch('adjugate of non-square %r' % (M.shape,))
    n = M.shape[0]
    if n == 1:
        return np.ones((1, 1), complex)
    adj = np.empty_like(M)
    for i in range(n):
        rows = np.delete(M, i, axis=0)
        for j in range(n):
            adj[j, i] = (-1) ** (i + j) * np.linalg.det(
                np.delete(rows, j, axis=1))
    return adj


def _blocks(M):
    '''
    A = [[B, y], [x, c]] with B of size n-1.
    '''
    if M.shape[0] < 2:
        raise ShapeMismatch('block decomposition needs n >= 2')
    return M[:-1, :-1], M[:-1, -1], M[-1, :-1], M[-1, -1]


def wa_residual(A, zeta, eta):
    '''
    det(eta - A) - [(eta - c) det(eta - B) - x (eta - B)_adj y]; zero up to
    roundoff (Weinstein-Aronszajn).
    '''
    M = A(zeta)
    B, y, x, c = _blocks(M)
    shifted_B = eta * np.eye(B.shape[0]) - B
    lhs = np.linalg.det(eta * np.eye(M.shape[0]) - M)
    rhs = (eta - c) * np.linalg.det(shifted_B) \
        - x @ adjugate(shifted_B) @ y
    return complex(lhs - rhs)


class ColumnResiduals(NamedTuple):
    s: float
    s_prime: float
    scale: float


def adjugate_column_check(A, zeta, eta):
    '''
    Norms of (eta - A)_adj e_n - ((eta - B)_adj y ; det(eta - B)) and of the
    transposed identity with x^T, plus a scale for relative comparisons.
    '''
    M = A(zeta)
    n = M.shape[0]
    B, y, x, c = _blocks(M)
    shifted = eta * np.eye(n) - M
    shifted_B = eta * np.eye(n - 1) - B
    det_B = np.linalg.det(shifted_B)
    col = adjugate(shifted)[:, -1]
    col_t = adjugate(shifted.T)[:, -1]
    expected = np.concatenate([adjugate(shifted_B) @ y, [det_B]])
    expected_t = np.concatenate([adjugate(shifted_B.T) @ x, [det_B]])
    scale = max(1.0, float(np.max(np.abs(col))), float(np.max(np.abs(col_t))))
    return ColumnResiduals(float(np.linalg.norm(col - expected)),
                           float(np.linalg.norm(col_t - expected_t)), scale)


def gz_curves(A):
    '''
    Gelfand-Zeitlin tower: characteristic curves of the principal minors
    A_(1), ..., A_(k).
    '''
    return [char_curve(A.minor(m)) for m in range(1, A.n + 1)]


def resultant_eta(P, Q):
    '''
    Sylvester resultant of P and Q in eta, a PolyZ of degree bound
    d * m_P * m_Q.  A shared component gives the zero polynomial, which is
    returned as such.
    '''
    if P.d != Q.d:
        raise ShapeMismatch('resultant of curves with d=%d and d=%d'
                            % (P.d, Q.d))
    bound = P.d * P.m * Q.m
    return _interpolate(
        lambda z: _sylvester_det(P.eta_coeffs(z), Q.eta_coeffs(z)), bound)


class Intersection(NamedTuple):
    m: int
    resultant: PolyZ
    zetas: np.ndarray
    degree: int
    bound: int
    shared_component: bool


def gz_intersections(A):
    '''
    Intersections S_m . S_(m+1) of consecutive Gelfand-Zeitlin curves:
    resultant, its roots and the degree count against d m (m + 1).
    '''
    log = logging.getLogger(__name__)
    curves = gz_curves(A)
    out = []
    for m in range(1, len(curves)):
        res = resultant_eta(curves[m - 1], curves[m])
        atol = _cfg.resultant_zero_atol.value * max(
            curves[m - 1].scale(), curves[m].scale()) ** (2 * m + 1)
        shared = res.is_zero(atol)
        degree = -1 if shared else res.degree(atol)
        zetas = np.zeros(0, complex) if shared else res.roots(atol)
        bound = A.d * m * (m + 1)
        log.debug("gz_intersections m=%r degree=%r bound=%r shared=%r",
                  m, degree, bound, shared)
        out.append(Intersection(m, res, zetas, degree, bound, shared))
    return out


class RegularityReport(NamedTuple):
    regular: Optional[bool]
    verdict: str
    witness: Optional[complex]
    points_checked: int
    minor: Optional[int] = None


def _is_regular_at(M):
    '''
    Every eigenvalue of M geometrically simple: exactly one singular value
    of M - lambda below rank_rtol * sigma_max.
    '''
    n = M.shape[0]
    if n == 1:
        return True
    rtol = _cfg.rank_rtol.value
    sigma_max = float(np.linalg.svd(M, compute_uv=False)[0])
    for lam in np.linalg.eigvals(M):
        scale = max(sigma_max, abs(lam))
        svs = np.linalg.svd(M - lam * np.eye(n), compute_uv=False)
        if np.count_nonzero(svs <= rtol * scale) != 1:
            return False
    return True


def _scan_one(A, samples, rng):
    log = logging.getLogger(__name__)
    points = []
    inconclusive = False
    try:
        disc = char_curve(A).discriminant()
        points.extend(disc.roots(1e-12 * max(1.0, disc.scale())))
    except np.linalg.LinAlgError as e:
        log.warning("regularity_scan: discriminant roots failed: %r", e)
        inconclusive = True
    radius = 1.0 + rng.random(samples)
    angle = 2 * np.pi * rng.random(samples)
    points.extend(radius * np.exp(1j * angle))
    for zeta in points:
        if not _is_regular_at(A(zeta)):
            return RegularityReport(False, 'irregular', complex(zeta),
                                    len(points))
    if inconclusive:
        return RegularityReport(None, 'inconclusive', None, len(points))
    return RegularityReport(True, 'sampled-regular', None, len(points))


def regularity_scan(A, samples, seed=0, ms0=False):
    '''
    Sampled regularity test of A(zeta) at the discriminant roots and at
    `samples` random points.  With ms0 the test runs on every principal
    minor and the first failing minor is reported.
    '''
    if samples < 1:
        raise ValueError('samples must be >= 1')
    rng = np.random.default_rng(seed)
    if not ms0:
        return _scan_one(A, samples, rng)
    total = 0
    verdict = RegularityReport(True, 'sampled-regular', None, 0, None)
    for m in range(1, A.n + 1):
        report = _scan_one(A.minor(m), samples, rng)
        total += report.points_checked
        if report.regular is False:
            return report._replace(minor=m, points_checked=total)
        if report.regular is None:
            verdict = report._replace(minor=m)
    return verdict._replace(points_checked=total)


def ms0_scan(A, samples, seed=0):
    '''
    Regularity report of each principal minor A_(1), ..., A_(k).
    '''
    rng = np.random.default_rng(seed)
    return [_scan_one(A.minor(m), samples, rng)._replace(minor=m)
            for m in range(1, A.n + 1)]
