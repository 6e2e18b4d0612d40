'''
Created on 18 Oct 2026

@author: gltforge developers

Geometry of (possibly reducible) spectral curves in the total space of O(2):
the real structure on curve coefficients, fibers and sheet tracking,
cycles made of arcs and line segments, and contour integrals of
meromorphic differentials along them.
'''
from dataclasses import dataclass, field
import functools
import logging
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import roots_legendre

from gltforge import configuration
from gltforge.algebra import CurveEq, PolyZ, resultant_eta
from gltforge.configuration import positive, positive_int
from gltforge.errors import GltForgeError


_cfg = configuration.getConfig(
    __name__,
    tau_atol=dict(value=1e-12, validate=positive),
    quad_rtol=dict(value=1e-9, validate=positive),
    quad_nodes=dict(value=16, validate=positive_int),
    quad_max_panels=dict(value=2 ** 14, validate=positive_int),
    step_floor=dict(value=1e-8, validate=positive),
    initial_steps=dict(value=64, validate=positive_int),
    transfer_atol=dict(value=1e-8, validate=positive),
    residue_rtol=dict(value=1e-9, validate=positive),
)


class RealStructureMismatch(GltForgeError):

    def __init__(self, length, expected):
        super().__init__('Coefficient vector of length %d, real structure '
                         'needs %d' % (length, expected))


class PathThroughBranchPoint(GltForgeError):
    '''
    Raised when sheet tracking cannot separate the roots: the path runs
    through (or too close to) a branch point.
    '''

    def __init__(self, zeta):
        super().__init__('path through branch point near zeta=%r' % (zeta,))
        self.zeta = zeta


class CycleError(GltForgeError):

    def __init__(self, msg):
        super().__init__('Invalid cycle: %s' % (msg,))


class QuadratureNotConverged(GltForgeError):

    def __init__(self, panels, change):
        super().__init__('quadrature not converged with %d panels '
                         '(last change %.3e)' % (panels, change))


class DifferentialIndexError(GltForgeError):

    def __init__(self, r, s, m):
        super().__init__('omega_(%d,%d) is not a holomorphic differential on '
                         'a degree %d curve' % (r, s, m))


@dataclass(frozen=True)
class RealStructure(object):
    '''
    Multiplet structure {r_i}: coefficient vectors are the concatenation of
    (w_0^i, ..., w_(2 r_i)^i).  tau acts by
        tau(w)_a^i = (-1)^(r_i + a) conj(w_(2 r_i - a)^i).
    '''
    r_list: tuple

    def __post_init__(self):
        object.__setattr__(self, 'r_list', tuple(int(r) for r in self.r_list))

    @classmethod
    def for_degrees(cls, degrees):
        '''
        Multiplets of the coefficients alpha_1..alpha_m of each component.
        '''
        return cls(tuple(r for m in degrees for r in range(1, m + 1)))

    @property
    def offsets(self):
        out, pos = [], 0
        for r in self.r_list:
            out.append(pos)
            pos += 2 * r + 1
        return tuple(out)

    @property
    def length(self):
        return sum(2 * r + 1 for r in self.r_list)

    def multiplet(self, i):
        start = self.offsets[i]
        return slice(start, start + 2 * self.r_list[i] + 1)

    def index(self, i, a):
        return self.offsets[i] + a

    def check(self, w):
        w = np.asarray(w, dtype=complex)
        if w.shape != (self.length,):
            raise RealStructureMismatch(w.size, self.length)
        return w

    def tau(self, w):
        w = self.check(w)
        out = np.empty_like(w)
        for i, r in enumerate(self.r_list):
            block = w[self.multiplet(i)]
            signs = (-1.0) ** (r + np.arange(2 * r + 1))
            out[self.multiplet(i)] = signs * np.conj(block[::-1])
        return out

    def project(self, w):
        '''
        Nearest tau-real vector, (w + tau w) / 2.
        '''
        return 0.5 * (self.check(w) + self.tau(w))

    def random_real(self, rng, scale=1.0):
        w = rng.standard_normal(self.length) \
            + 1j * rng.standard_normal(self.length)
        return self.project(scale * w)


def is_tau_real(w, rs, atol=None):
    '''
    True iff the involution fixes w to atol per entry.
    '''
    atol = _cfg.tau_atol.value if atol is None else atol
    w = rs.check(w)
    return bool(np.all(np.abs(w - rs.tau(w)) <= atol))


@dataclass(frozen=True)
class ReducibleCurve(object):
    '''
    The curve prod_l P_l(zeta, eta) = 0, kept as its components.
    '''
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, 'components', tuple(self.components))

    @property
    def degrees(self):
        return tuple(c.m for c in self.components)

    def real_structure(self):
        return RealStructure.for_degrees(self.degrees)

    def coefficient_vector(self):
        return np.concatenate([c.coefficient_vector()
                               for c in self.components])

    @classmethod
    def from_vector(cls, w, degrees, d=2):
        w = np.asarray(w, dtype=complex)
        comps, pos = [], 0
        for m in degrees:
            size = sum(d * i + 1 for i in range(1, m + 1))
            comps.append(CurveEq.from_vector(w[pos:pos + size], m, d))
            pos += size
        if pos != len(w):
            raise RealStructureMismatch(len(w), pos)
        return cls(tuple(comps))


def fiber_roots(P, zeta):
    '''
    The m roots in eta of P(zeta, .), with multiplicity.
    '''
    return np.roots(P.eta_coeffs(complex(zeta)))


def _fiber_roots_many(P, zetas):
    '''
    Roots over many zeta at once, via batched companion eigenvalues.
    Shape (len(zetas), m).
    '''
    coeffs = P.eta_coeffs(np.asarray(zetas, dtype=complex))
    m = P.m
    if m == 1:
        return -coeffs[:, 1:]
    comp = np.zeros((len(coeffs), m, m), complex)
    comp[:, 0, :] = -coeffs[:, 1:]
    comp[:, np.arange(1, m), np.arange(m - 1)] = 1.0
    return np.linalg.eigvals(comp)


def sorted_fiber(roots):
    '''
    Canonical sheet order: by real part, then imaginary part.
    '''
    roots = np.asarray(roots)
    return roots[np.lexsort((roots.imag, roots.real))]


@dataclass(frozen=True)
class LinePath(object):
    start: complex
    end: complex
    kind: str = field(default='segment', init=False)

    def point(self, t):
        return self.start + np.asarray(t) * (self.end - self.start)

    def derivative(self, t):
        return np.full(np.shape(t), self.end - self.start, dtype=complex)

    def reversed(self):
        return LinePath(self.end, self.start)

    @property
    def length(self):
        return abs(self.end - self.start)


@dataclass(frozen=True)
class ArcPath(object):
    '''
    zeta(t) = center + radius exp(i (theta0 + t (theta1 - theta0))); the
    sweep theta1 - theta0 may exceed 2 pi in absolute value.
    '''
    center: complex
    radius: float
    theta0: float
    theta1: float
    kind: str = field(default='arc', init=False)

    def _angle(self, t):
        return self.theta0 + np.asarray(t) * (self.theta1 - self.theta0)

    def point(self, t):
        return self.center + self.radius * np.exp(1j * self._angle(t))

    def derivative(self, t):
        return 1j * self.radius * (self.theta1 - self.theta0) \
            * np.exp(1j * self._angle(t))

    def reversed(self):
        return ArcPath(self.center, self.radius, self.theta1, self.theta0)

    @property
    def length(self):
        return abs(self.radius * (self.theta1 - self.theta0))

    @property
    def start(self):
        return complex(self.point(0.0))

    @property
    def end(self):
        return complex(self.point(1.0))


def antipode(zeta, eta=None):
    '''
    The real structure on the twistor space: zeta -> -1/conj(zeta),
    eta -> -conj(eta)/conj(zeta)^2.
    '''
    zb = np.conj(zeta)
    if eta is None:
        return -1.0 / zb
    return -1.0 / zb, -np.conj(eta) / zb ** 2


def _circumcenter(a, b, c):
    d = 2 * (a.real * (b.imag - c.imag) + b.real * (c.imag - a.imag)
             + c.real * (a.imag - b.imag))
    scale = max(abs(b - a), abs(c - a)) ** 2
    if abs(d) <= 1e-12 * scale:
        return None
    aa, bb, cc = abs(a) ** 2, abs(b) ** 2, abs(c) ** 2
    ux = (aa * (b.imag - c.imag) + bb * (c.imag - a.imag)
          + cc * (a.imag - b.imag)) / d
    uy = (aa * (c.real - b.real) + bb * (a.real - c.real)
          + cc * (b.real - a.real)) / d
    return complex(ux, uy)


def tau_path(path, samples=256):
    '''
    Image of a path under zeta -> -1/conj(zeta).  Lines and circles map to
    lines and circles, so the image is rebuilt from sampled points.
    '''
    t = np.linspace(0.0, 1.0, samples + 1)
    z = path.point(t)
    if np.min(np.abs(z)) == 0.0:
        raise CycleError('path through zeta=0 has no finite antipodal image')
    w = antipode(z)
    center = _circumcenter(complex(w[0]), complex(w[samples // 3]),
                           complex(w[2 * samples // 3]))
    if center is None:
        return LinePath(complex(w[0]), complex(w[-1]))
    angles = np.unwrap(np.angle(w - center))
    return ArcPath(center, float(abs(w[0] - center)), float(angles[0]),
                   float(angles[-1]))


@dataclass(frozen=True)
class CycleSegment(object):
    '''
    One piece of a cycle: a zeta-path on component `component`, starting
    on the sheet nearest to `eta` if given, else sheet number `sheet` of the
    sorted fiber, else continuing the previous segment.
    '''
    component: int
    path: object
    sheet: Optional[int] = None
    eta: Optional[complex] = None


@dataclass(frozen=True)
class Loop(object):
    segments: tuple
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'segments', tuple(self.segments))
        if not self.segments:
            raise CycleError('empty loop')


@dataclass(frozen=True)
class Cycle(object):
    '''
    Integer combination of loops; each loop is a chain of segments whose
    consecutive end and start points coincide.  With closed=False the loops
    are chains between intersection points rather than cycles.
    '''
    loops: tuple
    closed: bool = True

    def __post_init__(self):
        loops = tuple(lp if isinstance(lp, Loop) else Loop(tuple(lp))
                      for lp in self.loops)
        object.__setattr__(self, 'loops', loops)

    @classmethod
    def single(cls, segments, closed=True):
        return cls((Loop(tuple(segments)),), closed)

    def reversed(self):
        return Cycle(tuple(Loop(lp.segments, -lp.sign) for lp in self.loops),
                     self.closed)

    def __add__(self, other):
        return Cycle(self.loops + other.loops, self.closed and other.closed)

    def __sub__(self, other):
        return self + other.reversed()

    def tau_image(self, curve):
        '''
        Segment-wise antipodal image; the orientation sign is kept.  Image
        segments carry an eta hint only where the original sheet was chosen
        explicitly (the first segment of a loop, or a segment with its own
        hint); the rest continue from the previous segment.
        '''
        loops = []
        for lp in self.loops:
            segments = []
            for k, seg in enumerate(lp.segments):
                eta = None
                if k == 0 or seg.eta is not None or seg.sheet is not None:
                    P = curve.components[seg.component]
                    roots = sorted_fiber(fiber_roots(P, seg.path.start))
                    sheet = _start_index(seg, roots, None)
                    eta = complex(antipode(seg.path.start, roots[sheet])[1])
                segments.append(CycleSegment(seg.component,
                                             tau_path(seg.path), eta=eta))
            loops.append(Loop(tuple(segments), lp.sign))
        return Cycle(tuple(loops), self.closed)


def anti_invariant_part(c, curve):
    '''
    c - tau_* c, which satisfies tau_* x = -x.
    '''
    return c - c.tau_image(curve)


def invariant_part(c, curve):
    return c + c.tau_image(curve)


class Continuation(NamedTuple):
    roots: np.ndarray
    permutation: Optional[tuple]


def _match(old, new):
    cost = np.abs(old[:, np.newaxis] - new[np.newaxis, :])
    rows, cols = linear_sum_assignment(cost)
    matched = np.empty_like(old)
    matched[rows] = new[cols]
    return matched, float(np.max(np.abs(matched - old)))


def _min_gap(roots):
    if len(roots) < 2:
        return np.inf
    diff = np.abs(roots[:, np.newaxis] - roots[np.newaxis, :])
    return float(np.min(diff[np.triu_indices(len(roots), 1)]))


def _advance(P, path, t0, t1, current, new_roots, floor):
    matched, movement = _match(current, new_roots)
    if movement == 0.0 or _min_gap(current) >= 4.0 * movement:
        return matched
    if t1 - t0 < floor:
        raise PathThroughBranchPoint(complex(path.point(t0)))
    tm = 0.5 * (t0 + t1)
    mid_roots = fiber_roots(P, path.point(tm))
    mid = _advance(P, path, t0, tm, current, mid_roots, floor)
    return _advance(P, path, tm, t1, mid, new_roots, floor)


def track_roots(P, path, ts, start):
    '''
    Continue the ordered fiber `start` (at path.point(ts[0])) through the
    increasing parameters ts.  Returns shape (len(ts), m), column j being
    the analytic continuation of start[j].
    '''
    floor = _cfg.step_floor.value
    ts = np.asarray(ts, dtype=float)
    all_roots = _fiber_roots_many(P, path.point(ts))
    out = np.empty((len(ts), P.m), complex)
    out[0] = current = np.asarray(start, dtype=complex)
    for k in range(1, len(ts)):
        current = _advance(P, path, ts[k - 1], ts[k], current, all_roots[k],
                           floor)
        out[k] = current
    return out


def continue_roots(P, path, start):
    '''
    Analytic continuation of the ordered fiber `start` along the path.  For
    closed paths the monodromy permutation is returned too: the root
    starting at start[j] ends at start[permutation[j]].
    '''
    log = logging.getLogger(__name__)
    steps = _cfg.initial_steps.value
    tracked = track_roots(P, path, np.linspace(0.0, 1.0, steps + 1), start)
    final = tracked[-1]
    perm = None
    start = np.asarray(start, dtype=complex)
    if abs(path.end - path.start) <= 1e-12 * (1.0 + abs(path.start)):
        perm = tuple(int(np.argmin(np.abs(start - f))) for f in final)
    log.debug("continue_roots: permutation=%r", perm)
    return Continuation(final, perm)


def monodromy(P, path):
    '''
    Monodromy permutation of the sorted fiber around a closed path.
    '''
    return continue_roots(
        P, path, sorted_fiber(fiber_roots(P, path.start))).permutation


def branch_points(P):
    disc = P.discriminant()
    return disc.roots(1e-14 * max(1.0, disc.scale()))


@dataclass(frozen=True)
class MonomialSum(object):
    '''
    H(zeta, eta) = sum c * eta^i / zeta^j, stored as ((i, j), c) pairs.
    '''
    terms: tuple

    def __post_init__(self):
        merged = {}
        for (i, j), c in self.terms:
            merged[(int(i), int(j))] = merged.get((int(i), int(j)), 0) \
                + complex(c)
        object.__setattr__(self, 'terms', tuple(sorted(
            (k, v) for k, v in merged.items() if v != 0)))

    @classmethod
    def from_dict(cls, mapping):
        return cls(tuple(mapping.items()))

    def as_dict(self):
        return dict(self.terms)

    def __call__(self, zeta, eta):
        out = np.zeros(np.broadcast(zeta, eta).shape, complex)
        for (i, j), c in self.terms:
            out = out + c * np.asarray(eta) ** i / np.asarray(zeta) ** j
        return out

    def d_eta(self):
        return MonomialSum(tuple(((i - 1, j), c * i)
                                 for (i, j), c in self.terms if i > 0))

    def scaled(self, factor):
        return MonomialSum(tuple((k, c * factor) for k, c in self.terms))

    def max_eta_power(self):
        return max([0] + [i for (i, _), _ in self.terms])


ETA = MonomialSum((((1, 0), 1.0),))


@dataclass(frozen=True)
class Differential(object):
    '''
    Either the holomorphic form omega_rs = zeta^r eta^s dzeta / (dP/deta) or
    a meromorphic G(zeta, eta) dzeta / zeta^2.
    '''
    r: Optional[int] = None
    s: Optional[int] = None
    G: Optional[MonomialSum] = None

    @classmethod
    def holomorphic(cls, r, s):
        return cls(r=r, s=s)

    @classmethod
    def meromorphic(cls, G):
        return cls(G=G)

    @property
    def is_holomorphic(self):
        return self.G is None

    def check(self, P):
        if self.is_holomorphic:
            m = P.m
            if not (0 <= self.s <= m - 2
                    and 0 <= self.r <= 2 * (m - 2) - 2 * self.s):
                raise DifferentialIndexError(self.r, self.s, m)

    def integrand(self, P):
        '''
        f with differential = f(zeta, eta) dzeta on the component P.
        '''
        self.check(P)
        if self.is_holomorphic:
            r, s = self.r, self.s
            return lambda z, e: z ** r * e ** s / P.eta_derivative(z, e)
        G = self.G
        return lambda z, e: G(z, e) / z ** 2


def holomorphic_basis(P):
    '''
    All admissible (r, s); their number is the genus.
    '''
    m = P.m
    return [(r, s) for s in range(0, m - 1)
            for r in range(0, 2 * (m - 2) - 2 * s + 1)]


@functools.lru_cache(maxsize=8)
def _legendre(nodes):
    x, w = roots_legendre(nodes)
    return x, w


def _panel_rule(panels, nodes):
    '''
    Composite Gauss-Legendre nodes/weights on [0, 1].
    '''
    x, w = _legendre(nodes)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, np.newaxis] + half[:, np.newaxis] * x).ravel()
    weights = (half[:, np.newaxis] * w).ravel()
    return t, weights


def _integrate_segment(P, path, start_roots, sheet, f):
    '''
    Adaptive composite Gauss-Legendre integral of f(zeta, eta) dzeta along
    the path on the tracked sheet.  Returns (value, eta at the end).
    '''
    log = logging.getLogger(__name__)
    rtol = _cfg.quad_rtol.value
    nodes = _cfg.quad_nodes.value
    max_panels = _cfg.quad_max_panels.value
    panels, previous, change = 1, None, np.inf
    while panels <= max_panels:
        t, w = _panel_rule(panels, nodes)
        ts = np.concatenate([[0.0], t, [1.0]])
        tracked = track_roots(P, path, ts, start_roots)
        zeta = path.point(t)
        vals = np.asarray(f(zeta, tracked[1:-1, sheet]))
        weighted = (w * path.derivative(t)).reshape(
            (-1,) + (1,) * (vals.ndim - 1)) * vals
        value = weighted.sum(axis=0)
        if previous is not None:
            change = float(np.max(np.abs(value - previous)))
            size = max(float(np.max(np.abs(value))),
                       float(np.max(np.abs(weighted).sum(axis=0))))
            if change <= rtol * size:
                log.debug("segment %r: %d panels, change %.3e", path.kind,
                          panels, change)
                return value, tracked[-1, sheet]
        previous = value
        panels *= 2
    raise QuadratureNotConverged(panels // 2, change)


def _start_index(seg, roots, carried):
    if seg.eta is not None:
        return int(np.argmin(np.abs(roots - seg.eta)))
    if seg.sheet is not None:
        if not 0 <= seg.sheet < len(roots):
            raise CycleError('sheet %d of a degree %d component'
                             % (seg.sheet, len(roots)))
        return int(seg.sheet)
    if carried is not None:
        return int(np.argmin(np.abs(roots - carried)))
    return 0


def _close(a, b, scale=1.0, rtol=1e-9):
    return abs(a - b) <= rtol * (scale + abs(a))


def integrate_chain(curve, c, integrand_for):
    '''
    Integrate integrand_for(l, P_l) -> f(zeta, eta) along every loop of c,
    honouring loop signs.  Returns a complex number or an array when f is
    vector valued.
    '''
    log = logging.getLogger(__name__)
    total = 0.0
    for n_loop, lp in enumerate(c.loops):
        carried, prev, eta_start = None, None, None
        for seg in lp.segments:
            if not 0 <= seg.component < len(curve.components):
                raise CycleError('component %d of a curve with %d components'
                                 % (seg.component, len(curve.components)))
            if prev is not None and not _close(prev.path.end,
                                               seg.path.start):
                raise CycleError('segments do not chain at %r -> %r'
                                 % (prev.path.end, seg.path.start))
            P = curve.components[seg.component]
            roots = sorted_fiber(fiber_roots(P, seg.path.start))
            sheet = _start_index(seg, roots, carried)
            if eta_start is None:
                eta_start = roots[sheet]
            value, carried = _integrate_segment(
                P, seg.path, roots, sheet, integrand_for(seg.component, P))
            total = total + lp.sign * value
            prev = seg
        if c.closed:
            first = lp.segments[0]
            if not _close(prev.path.end, first.path.start):
                raise CycleError('loop %d is open in zeta; mark the cycle as '
                                 'a chain (closed=False) if intended'
                                 % (n_loop,))
            if not _close(carried, eta_start, 1.0, 1e-6):
                raise CycleError('loop %d ends on another sheet (%r != %r)'
                                 % (n_loop, carried, eta_start))
    log.debug("integrate_chain: %d loops -> %r", len(c.loops), total)
    return total


def integrate_cycle(curve, diff, c):
    '''
    Contour integral of a Differential over the cycle c.
    '''
    return complex(integrate_chain(
        curve, c, lambda l, P: diff.integrand(P)))


def check_transfer_points(curve, c):
    '''
    Every change of component along a loop must happen at an intersection
    point: a root of the resultant with a common eta.  Returns the
    transfer zetas.
    '''
    atol = _cfg.transfer_atol.value
    found = []
    for lp in c.loops:
        segs = lp.segments
        pairs = list(zip(segs[:-1], segs[1:]))
        if c.closed:
            pairs.append((segs[-1], segs[0]))
        for a, b in pairs:
            if a.component == b.component:
                continue
            zeta = a.path.end
            Pa, Pb = curve.components[a.component], curve.components[b.component]
            res = resultant_eta(Pa, Pb)
            roots = res.roots(1e-14 * max(1.0, res.scale()))
            if not res.is_zero() and (
                    len(roots) == 0 or
                    np.min(np.abs(roots - zeta)) > atol * (1.0 + abs(zeta))):
                raise CycleError('component change at zeta=%r is not an '
                                 'intersection point' % (zeta,))
            ea, eb = fiber_roots(Pa, zeta), fiber_roots(Pb, zeta)
            gap = np.min(np.abs(ea[:, np.newaxis] - eb[np.newaxis, :]))
            if gap > atol * (1.0 + np.max(np.abs(ea))):
                raise CycleError('components share no point over zeta=%r'
                                 % (zeta,))
            found.append(complex(zeta))
    return found


class Residue(NamedTuple):
    value: complex
    quadrature: complex
    newton: Optional[complex]
    flag: str


def power_sums(P, kmax):
    '''
    p_k(zeta) = sum_j eta_j(zeta)^k for k = 0..kmax as PolyZ, by Newton's
    identities in the curve coefficients.
    '''
    m = P.m
    sums = [PolyZ([m], 0)]
    for k in range(1, kmax + 1):
        acc = PolyZ.zero(P.d * k)
        for t in range(1, min(k - 1, m) + 1):
            acc = acc - P.alphas[t - 1] * sums[k - t]
        if k <= m:
            acc = acc - k * P.alphas[k - 1]
        sums.append(PolyZ(acc.coeffs[:P.d * k + 1], P.d * k))
    return sums


def _residue_newton(P, H):
    sums = power_sums(P, H.max_eta_power())
    return sum(c * sums[i].coefficient(j + 1) for (i, j), c in H.terms)


def zero_fiber_radius(P):
    '''
    Radius of a circle around zeta = 0 enclosing no nonzero branch point.
    '''
    disc = P.discriminant()
    bps = np.abs(disc.roots(1e-14 * max(1.0, disc.scale())))
    return 0.5 * min([1.0] + list(bps[bps > 1e-8]))


def zero_fiber_integral(P, func, radius=None):
    '''
    (1/2 pi i) times the integral of func(zeta, eta) dzeta / zeta^2 around
    all points over zeta = 0, summed over sheets on a small circle.  The
    sheet sum is single valued, so the trapezoidal rule converges
    geometrically.
    '''
    radius = zero_fiber_radius(P) if radius is None else radius
    nodes, previous = 64, None
    while nodes <= 2 ** 16:
        theta = 2 * np.pi * np.arange(nodes) / nodes
        zeta = radius * np.exp(1j * theta)
        roots = _fiber_roots_many(P, zeta)
        g = np.sum(func(zeta[:, np.newaxis], roots), axis=1) / zeta
        value = np.mean(g)
        if previous is not None and abs(value - previous) <= \
                1e-13 * max(1.0, np.mean(np.abs(g))):
            return complex(value)
        previous = value
        nodes *= 2
    raise QuadratureNotConverged(nodes // 2, abs(value - previous))


def residue_at_zero_fiber(P, H):
    '''
    (1/2 pi i) of the integral of H dzeta/zeta^2 around the points over
    zeta = 0, by a small circle summed over sheets and by power sums.
    '''
    log = logging.getLogger(__name__)
    if not H.terms:
        return Residue(0j, 0j, 0j, 'both')
    disc = P.discriminant()
    at_zero = abs(disc.coefficient(0)) <= 1e-12 * max(1.0, disc.scale())
    quad = zero_fiber_integral(P, H)
    if at_zero:
        log.warning("residue_at_zero_fiber: branch point at zeta=0, "
                    "quadrature only")
        return Residue(quad, quad, None, 'quadrature-only')
    newton = complex(_residue_newton(P, H))
    scale = max(1.0, abs(newton))
    if abs(quad - newton) > _cfg.residue_rtol.value * scale:
        log.warning("residue_at_zero_fiber: methods disagree %r vs %r",
                    quad, newton)
    return Residue(newton, quad, newton, 'both')


def g_reality_defect(H, rng, samples=100):
    '''
    Largest relative violation of conj(H(zeta, eta)) = -conj(zeta)^2
    H(-1/conj(zeta), -conj(eta)/conj(zeta)^2) at random points.
    '''
    zeta = rng.standard_normal(samples) + 1j * rng.standard_normal(samples)
    eta = rng.standard_normal(samples) + 1j * rng.standard_normal(samples)
    z_img, eta_img = antipode(zeta, eta)
    lhs = np.conj(H(zeta, eta))
    rhs = -np.conj(zeta) ** 2 * H(z_img, eta_img)
    scale = np.maximum(1.0, np.abs(lhs) + np.abs(rhs))
    return float(np.max(np.abs(lhs - rhs) / scale))


def check_G_reality(H, pointwise=False, seed=0):
    '''
    Whether H dzeta/zeta^2 is real for the real structure: coefficientwise
    conj(c_ij) = -(-1)^(i+j) c_(i, 2i-2-j), or with pointwise=True the
    identity itself at sampled points.
    '''
    if pointwise:
        return g_reality_defect(H, np.random.default_rng(seed)) <= 1e-9
    coeffs = H.as_dict()
    for (i, j), c in coeffs.items():
        partner = coeffs.get((i, 2 * i - 2 - j), 0j)
        if abs(np.conj(c) + (-1) ** (i + j) * partner) > 1e-12 * max(
                1.0, abs(c)):
            return False
    return True
