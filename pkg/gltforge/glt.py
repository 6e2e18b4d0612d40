'''
Created on 18 Oct 2026

@author: gltforge developers

Generalised Legendre transform: a function F of the coefficients w_a^i of
(reducible) spectral curves, the constraints

    F_(w_1^i) = u_i                (u_i + conj(u_i) when r_i = 1)
    F_(w_a^i) = 0,  2 <= a <= 2 r_i - 2

solved for the curve at given (u_i, z_i = w_0^i), and the Kahler potential

    K = F - sum(u_i w_1^i + conj(u_i) conj(w_1^i)).

F is a sum of closed terms (sympy expressions in the coefficients), residue
terms -(1/2 pi i) oint H_l dzeta/zeta^2 around the points over zeta = 0 of
component l, and cycle terms weight * oint_c eta dzeta/zeta^2.
'''
from dataclasses import dataclass, field
import logging
from typing import NamedTuple, Optional

import numpy as np
import sympy as sp

from gltforge import configuration
from gltforge.algebra import PolyZ
from gltforge.configuration import positive, positive_int
from gltforge.curves import (
    ETA, Differential, MonomialSum, RealStructure, ReducibleCurve,
    check_G_reality, integrate_chain, integrate_cycle, is_tau_real,
    zero_fiber_integral)
from gltforge.errors import GltForgeError


_cfg = configuration.getConfig(
    __name__,
    newton_rtol=dict(value=1e-10, validate=positive),
    newton_max_iter=dict(value=50, validate=positive_int),
    cond_max=dict(value=1e12, validate=positive),
    fd_step=dict(value=1e-5, validate=positive),
    nondeg_rtol=dict(value=1e-8, validate=positive),
)

# the differential of every cycle term
CYCLE_DIFFERENTIAL = Differential.meromorphic(ETA)

# eta^2 / zeta: the residue term of the monopole family
MONOPOLE_H = MonomialSum((((2, 1), 1.0),))

ZETA = sp.Symbol('zeta')


class SpecError(GltForgeError):

    def __init__(self, msg):
        super().__init__('Invalid GLT spec: %s' % (msg,))


class NewtonDiverged(GltForgeError):

    def __init__(self, iterations, residual):
        super().__init__('constraint Newton iteration did not converge in '
                         '%d iterations (residual %.3e)'
                         % (iterations, residual))
        self.iterations = iterations
        self.residual = residual


class DegenerateConstraintPoint(GltForgeError):

    def __init__(self, cond):
        super().__init__('degenerate constraint point (Jacobian condition '
                         'number %.3e)' % (cond,))
        self.cond = cond


class DomainError(GltForgeError):

    def __init__(self, expr, value):
        super().__init__('point outside the domain %s > 0 (value %r)'
                         % (expr, value))


def coefficient_symbol(i, a):
    return sp.Symbol('w%d_%d' % (i, a))


def coefficient_symbols(rs):
    '''
    Symbols of the full coefficient vector, in vector order.
    '''
    return [coefficient_symbol(i, a) for i, r in enumerate(rs.r_list)
            for a in range(2 * r + 1)]


def _namespace(rs):
    ns = {str(s): s for s in coefficient_symbols(rs)}
    if rs.r_list and rs.r_list[0] == 1:
        # chart of the first r=1 multiplet: x = w_1, z = w_0, conj(z) = -w_2
        ns.update(x=coefficient_symbol(0, 1), z=coefficient_symbol(0, 0),
                  zbar=-coefficient_symbol(0, 2))
    return ns


def _exact(value):
    value = complex(value)
    out = sp.Rational(value.real)
    if value.imag:
        out += sp.I * sp.Rational(value.imag)
    return out


def parse_closed_term(text, rs):
    '''
    A closed term as a sympy expression in the coefficient symbols.
    '''
    try:
        expr = sp.sympify(text, locals=_namespace(rs))
    except (sp.SympifyError, SyntaxError, TypeError) as e:
        raise SpecError('cannot parse closed term %r: %s' % (text, e))
    unknown = expr.free_symbols - set(coefficient_symbols(rs))
    if unknown:
        raise SpecError('closed term %r uses unknown symbols %s'
                        % (text, sorted(str(s) for s in unknown)))
    return expr


def tilde_h(multiplets, H):
    '''
    -(1/2 pi i) oint H dzeta/zeta^2 over the zero fiber of the component
    whose alpha_i has coefficients w_a^(multiplets[i-1]), as a polynomial in
    those coefficients: power sums of the roots by Newton's identities.
    '''
    m = len(multiplets)
    alphas = [sum(coefficient_symbol(mi, a) * ZETA ** a
                  for a in range(2 * k + 1))
              for k, mi in enumerate(multiplets, start=1)]
    sums = [sp.Integer(m)]
    for k in range(1, H.max_eta_power() + 1):
        acc = -sum((alphas[t - 1] * sums[k - t]
                    for t in range(1, min(k - 1, m) + 1)), sp.Integer(0))
        if k <= m:
            acc -= k * alphas[k - 1]
        sums.append(sp.expand(acc))
    return sp.expand(-sum((_exact(c) * sums[i].coeff(ZETA, j + 1)
                           for (i, j), c in H.terms), sp.Integer(0)))


class _ClosedPart(object):
    '''
    Sum of the closed terms, compiled once: value, gradient and Hessian as
    numpy callables of the coefficient vector.
    '''

    def __init__(self, expr, rs):
        self.expr = sp.expand(expr)
        self.symbols = coefficient_symbols(rs)
        self.trivial = self.expr == 0
        self._value = sp.lambdify(self.symbols, self.expr, 'numpy')
        self._grad = sp.lambdify(
            self.symbols, [sp.diff(self.expr, s) for s in self.symbols],
            'numpy')
        self._hess = sp.lambdify(
            self.symbols, sp.hessian(self.expr, self.symbols), 'numpy')

    def value(self, w):
        return complex(self._value(*w)) if not self.trivial else 0j

    def gradient(self, w):
        if self.trivial:
            return np.zeros(len(self.symbols), complex)
        return np.array([complex(g) for g in self._grad(*w)])

    def hessian(self, w):
        n = len(self.symbols)
        if self.trivial:
            return np.zeros((n, n), complex)
        return np.array(self._hess(*w), dtype=complex).reshape(n, n)


@dataclass(frozen=True)
class ResidueTerm(object):
    component: int
    H: MonomialSum
    weight: float = 1.0


@dataclass(frozen=True)
class CycleTerm(object):
    cycle: object
    weight: float = 1.0


@dataclass(frozen=True, eq=False)
class GltSpec(object):
    '''
    F as closed terms plus contour terms.  Contour terms need the component
    degrees of the curve; the real structure is then the one of the curve
    coefficients.
    '''
    rs: RealStructure
    closed_terms: tuple = ()
    residue_terms: tuple = ()
    cycle_terms: tuple = ()
    degrees: tuple = ()
    domain: Optional[str] = None
    name: str = 'custom'
    closed: _ClosedPart = field(init=False, repr=False)

    def __post_init__(self):
        for name in ('closed_terms', 'residue_terms', 'cycle_terms',
                     'degrees'):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.residue_terms or self.cycle_terms:
            if not self.degrees:
                raise SpecError('contour terms need the curve degrees')
            if self.rs != RealStructure.for_degrees(self.degrees):
                raise SpecError('real structure %r does not match degrees %r'
                                % (self.rs.r_list, self.degrees))
        expr = sp.Integer(0)
        for text in self.closed_terms:
            expr += parse_closed_term(text, self.rs)
        for term in self.residue_terms:
            if not 0 <= term.component < len(self.degrees):
                raise SpecError('residue term on missing component %d'
                                % (term.component,))
            if not check_G_reality(term.H):
                raise SpecError('H=%r on component %d fails the reality '
                                'condition' % (term.H.terms, term.component))
            expr += _exact(term.weight) * tilde_h(
                self.component_multiplets(term.component), term.H)
        for term in self.cycle_terms:
            if complex(term.weight).imag:
                raise SpecError('cycle weights must be real')
        object.__setattr__(self, 'closed', _ClosedPart(expr, self.rs))
        self._check_closed_reality()

    def _check_closed_reality(self, samples=3):
        rng = np.random.default_rng(0)
        for _ in range(samples):
            value = self.closed.value(self.rs.random_real(rng, 0.5))
            if abs(value.imag) > 1e-9 * max(1.0, abs(value.real)):
                raise SpecError('closed part is not real on tau-real points '
                                '(%r)' % (value,))

    def component_multiplets(self, l):
        start = sum(self.degrees[:l])
        return list(range(start, start + self.degrees[l]))

    def component_offset(self, l):
        return sum(sum(2 * i + 1 for i in range(1, m + 1))
                   for m in self.degrees[:l])

    def curve(self, w):
        return ReducibleCurve.from_vector(w, self.degrees)


class GltPoint(NamedTuple):
    '''
    Coefficient vector of a solved (or candidate) point with its chart
    values and the Newton diagnostics.
    '''
    w: np.ndarray
    z: np.ndarray
    u: np.ndarray
    free: tuple
    iterations: int = 0
    residual: float = 0.0
    condition: float = float('nan')


@dataclass(frozen=True)
class SliceSpec(object):
    '''
    Multiplets frozen to fixed tau-real values: the GLT on the preimage of a
    point under the projection onto those multiplets.
    '''
    frozen: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'frozen', tuple(
            (int(i), np.asarray(v, dtype=complex)) for i, v in self.frozen))

    @classmethod
    def freeze_component(cls, spec, l, P):
        '''
        Freeze every multiplet of component l to the coefficients of P.
        '''
        if P.m != spec.degrees[l]:
            raise SpecError('component %d has degree %d, not %d'
                            % (l, spec.degrees[l], P.m))
        return cls(tuple(zip(spec.component_multiplets(l),
                             (a.coeffs for a in P.alphas))))

    def as_dict(self):
        return dict(self.frozen)

    def check(self, rs):
        for i, values in self.frozen:
            block = RealStructure((rs.r_list[i],))
            if not is_tau_real(values, block, 1e-9):
                raise SpecError('frozen multiplet %d is not tau-real' % (i,))


def _cycle_gradient_integrand(spec, l, P):
    '''
    d/dw_a^i of eta dzeta/zeta^2 on component l: -zeta^(a-2) eta^(m-i) / P_eta,
    zero outside the block of component l.
    '''
    m, offset, length = P.m, spec.component_offset(l), spec.rs.length

    def integrand(zeta, eta):
        out = np.zeros(np.shape(zeta) + (length,), complex)
        pe = P.eta_derivative(zeta, eta)
        pos = offset
        for i in range(1, m + 1):
            base = eta ** (m - i) / pe
            for a in range(2 * i + 1):
                out[..., pos] = -zeta ** (a - 2) * base
                pos += 1
        return out
    return integrand


def _cycle_gradient(spec, w):
    grad = np.zeros(spec.rs.length, complex)
    if spec.cycle_terms:
        curve = spec.curve(w)
        for term in spec.cycle_terms:
            grad += term.weight * integrate_chain(
                curve, term.cycle,
                lambda l, P: _cycle_gradient_integrand(spec, l, P))
    return grad


def eval_F_complex(spec, w):
    '''
    F at any (not necessarily tau-real) coefficient vector; holomorphic in w.
    '''
    w = spec.rs.check(w)
    value = spec.closed.value(w)
    if spec.cycle_terms:
        curve = spec.curve(w)
        for term in spec.cycle_terms:
            value += term.weight * integrate_cycle(curve, CYCLE_DIFFERENTIAL,
                                                   term.cycle)
    return complex(value)


def eval_F(spec, w):
    '''
    Real value of F at a tau-real point; a non-negligible imaginary part is
    logged.
    '''
    log = logging.getLogger(__name__)
    value = eval_F_complex(spec, w)
    if abs(value.imag) > 1e-8 * max(1.0, abs(value.real)):
        log.warning("eval_F(%s): imaginary part %.3e of %r", spec.name,
                    value.imag, value.real)
    log.debug("eval_F(%s) = %r", spec.name, value)
    return value.real


def grad_F(spec, w):
    '''
    The vector dF/dw_a^i: closed terms symbolically, cycle terms as contour
    integrals of -zeta^(a-2) eta^(m-i) dzeta / P_eta.
    '''
    w = spec.rs.check(w)
    return spec.closed.gradient(w) + _cycle_gradient(spec, w)


def period_defects(spec, w):
    '''
    dF/dw_a^i for 2 <= a <= 2i-2 as residues minus periods:
    Res_0 (dH/deta omega_(a-2, m-i)) - weight * int_c omega_(a-2, m-i), with
    the residue by small-circle quadrature.  Keys are (multiplet, a).
    '''
    w = spec.rs.check(w)
    curve = spec.curve(w)
    out = {}
    for l, P in enumerate(curve.components):
        m = P.m
        multiplets = spec.component_multiplets(l)
        for i in range(2, m + 1):
            for a in range(2, 2 * i - 1):
                diff = Differential.holomorphic(a - 2, m - i)
                value = 0j
                for term in spec.residue_terms:
                    if term.component != l:
                        continue
                    dH = term.H.d_eta()
                    value += term.weight * zero_fiber_integral(
                        P, lambda z, e, dH=dH, a=a, s=m - i:
                        dH(z, e) * z ** a * e ** s / P.eta_derivative(z, e))
                for term in spec.cycle_terms:
                    value -= term.weight * integrate_chain(
                        curve, term.cycle,
                        lambda k, Pk, l=l, diff=diff:
                        diff.integrand(Pk) if k == l
                        else (lambda z, e: np.zeros(np.shape(z), complex)))
                out[(multiplets[i - 1], a)] = complex(value)
    return out


class _Chart(object):
    '''
    Real unknowns of the constraint solve: for each free multiplet, Re/Im
    of w_1 (only Re when r = 1), Re/Im of w_a for 2 <= a < r, and the real
    w_r.  The w_(2r-a) follow from the real structure.
    '''

    def __init__(self, rs, frozen):
        self.rs = rs
        self.free = tuple(i for i in range(len(rs.r_list)) if i not in frozen)
        params = []
        for i in self.free:
            r = rs.r_list[i]
            if r == 1:
                params.append(('re', i, 1))
                continue
            for a in range(1, r):
                params.extend([('re', i, a), ('im', i, a)])
            params.append(('re', i, r))
        self.params = params
        self.directions = np.array([self._direction(p) for p in params],
                                   dtype=complex).reshape(len(params),
                                                          rs.length)

    def _direction(self, param):
        kind, i, a = param
        r = self.rs.r_list[i]
        e = np.zeros(self.rs.length, complex)
        val = 1.0 if kind == 're' else 1j
        e[self.rs.index(i, a)] += val
        if a != 2 * r - a:
            e[self.rs.index(i, 2 * r - a)] += (-1) ** (r + a) * np.conj(val)
        return e

    def theta(self, w):
        return np.array([w[self.rs.index(i, a)].real if kind == 're'
                         else w[self.rs.index(i, a)].imag
                         for kind, i, a in self.params])

    def base(self, w):
        return w - self.theta(w) @ self.directions

    def point(self, theta, base):
        return base + theta @ self.directions

    def equations(self, grad, u=None):
        eqs = []
        for i in self.free:
            r = self.rs.r_list[i]
            g1 = grad[self.rs.index(i, 1)]
            target = 0j if u is None else complex(u[i])
            if r == 1:
                eqs.append(g1.real - 2.0 * target.real)
                continue
            eqs.extend([g1.real - target.real, g1.imag - target.imag])
            for a in range(2, r):
                g = grad[self.rs.index(i, a)]
                eqs.extend([g.real, g.imag])
            eqs.append(grad[self.rs.index(i, r)].real)
        return np.array(eqs, dtype=float)


def _fd_step(w):
    return _cfg.fd_step.value * (1.0 + float(np.max(np.abs(w))))


def _gradient_derivative(spec, w, e, hessian):
    '''
    d/dt grad_F(w + t e) at t = 0.
    '''
    out = hessian @ e
    if spec.cycle_terms:
        h = _fd_step(w)
        out = out + (_cycle_gradient(spec, w + h * e)
                     - _cycle_gradient(spec, w - h * e)) / (2 * h)
    return out


def _jacobian(spec, chart, w):
    hessian = spec.closed.hessian(w)
    cols = [chart.equations(_gradient_derivative(spec, w, e, hessian))
            for e in chart.directions]
    return np.array(cols).T


def _check_domain(spec, z, u):
    if spec.domain is None:
        return
    names = dict(u=sp.Symbol('u'), ubar=sp.Symbol('ubar'),
                 z=sp.Symbol('z'), zbar=sp.Symbol('zbar'))
    expr = sp.sympify(spec.domain, locals=names)
    value = complex(expr.subs({names['u']: complex(u[0]),
                               names['ubar']: np.conj(complex(u[0])),
                               names['z']: complex(z[0]),
                               names['zbar']: np.conj(complex(z[0]))}))
    if value.real <= 0:
        raise DomainError(spec.domain, value.real)


def default_guess(spec):
    '''
    Zero coefficients except w_1 = 1 on r = 1 multiplets (the positive
    branch of closed examples).
    '''
    w = np.zeros(spec.rs.length, complex)
    for i, r in enumerate(spec.rs.r_list):
        if r == 1:
            w[spec.rs.index(i, 1)] = 1.0
    return w


def solve_constraints(spec, z, u, guess=None, slice=None):
    '''
    Newton iteration on the real unknowns of the free multiplets until the
    constraint residual is below newton_rtol * max(1, |u|).
    '''
    log = logging.getLogger(__name__)
    rs = spec.rs
    count = len(rs.r_list)
    z = np.broadcast_to(np.asarray(z, dtype=complex), (count,)).copy()
    u = np.broadcast_to(np.asarray(u, dtype=complex), (count,)).copy()
    _check_domain(spec, z, u)
    if guess is None:
        w = default_guess(spec)
    else:
        w = rs.check(guess.w if isinstance(guess, GltPoint) else guess).copy()
        if not is_tau_real(w, rs, 1e-9):
            raise SpecError('initial guess is not tau-real')
    frozen = {}
    if slice is not None:
        slice.check(rs)
        frozen = slice.as_dict()
    for i, r in enumerate(rs.r_list):
        block = rs.multiplet(i)
        if i in frozen:
            w[block] = frozen[i]
            z[i] = frozen[i][0]
        else:
            w[rs.index(i, 0)] = z[i]
            w[rs.index(i, 2 * r)] = (-1) ** r * np.conj(z[i])
    chart = _Chart(rs, frozen)
    theta, base = chart.theta(w), chart.base(w)
    scale = max(1.0, float(np.max(np.abs(u[list(chart.free)])))
                if chart.free else 1.0)
    rtol, max_iter = _cfg.newton_rtol.value, _cfg.newton_max_iter.value
    cond, residual = float('nan'), 0.0
    for iteration in range(max_iter + 1):
        current = chart.point(theta, base)
        R = chart.equations(grad_F(spec, current), u)
        residual = float(np.max(np.abs(R))) if len(R) else 0.0
        log.debug("solve_constraints(%s): iteration %d residual %.3e",
                  spec.name, iteration, residual)
        if residual <= rtol * scale:
            return GltPoint(current, z, u, chart.free, iteration, residual,
                            cond)
        if iteration == max_iter:
            break
        J = _jacobian(spec, chart, current)
        cond = float(np.linalg.cond(J))
        if not np.isfinite(cond) or cond > _cfg.cond_max.value:
            raise DegenerateConstraintPoint(cond)
        theta = theta - np.linalg.solve(J, R)
    raise NewtonDiverged(max_iter, residual)


def kahler_potential(spec, solved):
    '''
    K = F - sum over free multiplets of 2 Re(u_i w_1^i).
    '''
    F = eval_F(spec, solved.w)
    return F - sum(2.0 * (solved.u[i] * solved.w[spec.rs.index(i, 1)]).real
                   for i in solved.free)


class TwistorData(NamedTuple):
    multiplet: int
    K_u: complex
    K_z: complex
    U: PolyZ
    Z: PolyZ


def twistor_first_order(spec, solved):
    '''
    dK/du_i = -w_1^i and dK/dz_i = dF/dw_0^i, and the first order twistor
    lines U_i = u_i + K_z zeta, Z_i = z_i - K_u zeta.
    '''
    grad = grad_F(spec, solved.w)
    out = []
    for i in solved.free:
        K_u = -complex(solved.w[spec.rs.index(i, 1)])
        K_z = complex(grad[spec.rs.index(i, 0)])
        out.append(TwistorData(i, K_u, K_z,
                               PolyZ([solved.u[i], K_z], 1),
                               PolyZ([solved.z[i], -K_u], 1)))
    return out


class NondegeneracyReport(NamedTuple):
    verdict: str
    sigma_min: Optional[float]
    sigma_min_printed: Optional[float]
    scale: float
    middle: tuple
    printed: tuple


def _hessian_columns(spec, w, cols):
    hessian = spec.closed.hessian(w)
    out = np.zeros((spec.rs.length, len(cols)), complex)
    for k, col in enumerate(cols):
        e = np.zeros(spec.rs.length, complex)
        e[col] = 1.0
        out[:, k] = _gradient_derivative(spec, w, e, hessian)
    return out


def nondegeneracy(spec, solved):
    '''
    Smallest singular values of [F_(w_a^i w_b^j)] over the middle block
    2 <= a, b <= 2r - 2 (the verdict) and over the block 0 < a < r.
    '''
    log = logging.getLogger(__name__)
    rs = spec.rs
    middle, printed = [], []
    for i in solved.free:
        r = rs.r_list[i]
        if r < 2:
            continue
        middle.extend(rs.index(i, a) for a in range(2, 2 * r - 1))
        printed.extend(rs.index(i, a) for a in range(1, r))
    if not middle:
        return NondegeneracyReport('not applicable', None, None, 1.0, (), ())
    cols = sorted(set(middle) | set(printed))
    H = _hessian_columns(spec, solved.w, cols)
    where = {c: k for k, c in enumerate(cols)}
    block = H[np.ix_(middle, [where[c] for c in middle])]
    block_p = H[np.ix_(printed, [where[c] for c in printed])]
    scale = max(1.0, float(np.max(np.abs(H))))
    smin = float(np.linalg.svd(block, compute_uv=False)[-1])
    smin_p = float(np.linalg.svd(block_p, compute_uv=False)[-1])
    verdict = 'invertible' \
        if smin > _cfg.nondeg_rtol.value * scale else 'degenerate'
    log.debug("nondegeneracy(%s): %s sigma_min=%.3e printed=%.3e",
              spec.name, verdict, smin, smin_p)
    return NondegeneracyReport(verdict, smin, smin_p, scale, tuple(middle),
                               tuple(printed))


def real_h_basis(max_i):
    '''
    Real generators eta^i/zeta^j + eta^i/zeta^(2i-j-2), 0 < j < 2i-2 and
    i + j odd.
    '''
    return [MonomialSum((((i, j), 1.0), ((i, 2 * i - j - 2), 1.0)))
            for i in range(2, max_i + 1) for j in range(1, 2 * i - 2)
            if (i + j) % 2 == 1 and j <= 2 * i - j - 2]


def _need_cycle(name, params):
    cycle = params.get('cycle')
    if cycle is None:
        raise SpecError('built-in spec %r needs a cycle' % (name,))
    return cycle


def builtin_spec(name, **params):
    '''
    Named F families: flat-quartic, cubic-harmonic, monopole (m),
    asymptotic-monopole (degrees), su-n (mu, degrees) and orbit (k).
    '''
    if name == 'flat-quartic':
        return GltSpec(RealStructure((1,)), ('2*x**2 - z*zbar',), name=name)
    if name == 'cubic-harmonic':
        return GltSpec(RealStructure((1,)), ('2*x**3 - 3*x*z*zbar',),
                       domain='u + ubar + 3*z*zbar', name=name)
    if name == 'monopole':
        degrees = (int(params.get('m', 2)),)
        residues = (ResidueTerm(0, MONOPOLE_H),)
        weight = 1.0
    elif name == 'asymptotic-monopole':
        degrees = tuple(int(m) for m in params['degrees'])
        residues = tuple(ResidueTerm(l, MONOPOLE_H)
                         for l in range(len(degrees)))
        weight = 1.0
    elif name == 'su-n':
        mu = [float(x) for x in params['mu']]
        degrees = tuple(int(m) for m in params['degrees'])
        if len(mu) != len(degrees) + 1:
            raise SpecError('su-n needs N masses for N-1 components')
        residues = tuple(ResidueTerm(l, MONOPOLE_H,
                                     0.5 * (mu[l + 1] - mu[l]))
                         for l in range(len(degrees)))
        weight = 0.5
    elif name == 'orbit':
        degrees = tuple(range(1, int(params['k']) + 1))
        residues = ()
        weight = 1.0
    else:
        raise SpecError('unknown built-in spec %r' % (name,))
    cycle = _need_cycle(name, params)
    return GltSpec(RealStructure.for_degrees(degrees),
                   residue_terms=residues,
                   cycle_terms=(CycleTerm(cycle, weight),),
                   degrees=degrees, name=name)
