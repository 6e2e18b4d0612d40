'''
Created on 18 Oct 2026

@author: gltforge developers

Isospectral matrix flows: Nahm's equations and the quadratic system whose
Lax polynomial is A(zeta) = A0 + A1 zeta + A2 zeta^2, in the A-form and in
the T-form of skew-hermitian triples, integrated by an embedded RK 4(5)
pair with every accepted step recorded.
'''
from dataclasses import dataclass
import logging
from typing import NamedTuple, Optional

import numpy as np
from scipy.integrate import RK45

from gltforge import configuration
from gltforge.algebra import MatPoly, ShapeMismatch, char_curve
from gltforge.configuration import positive
from gltforge.errors import GltForgeError


_cfg = configuration.getConfig(
    __name__,
    tol=dict(value=1e-10, validate=positive),
    blowup_factor=dict(value=1e8, validate=positive),
)

SQRT3 = np.sqrt(3.0)

PAULI = np.array([[[0, 1], [1, 0]],
                  [[0, -1j], [1j, 0]],
                  [[1, 0], [0, -1]]], dtype=complex)


class StepUnderflow(GltForgeError):

    def __init__(self, s, message):
        super().__init__('integration stopped at s=%r: %s' % (s, message))
        self.s = s


@dataclass(frozen=True, eq=False)
class FlowState(object):
    '''
    A triple of n x n matrices at flow time s; T-form or A-form depending
    on the caller.
    '''
    T: np.ndarray
    s: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'T', check_triple(self.T))

    @classmethod
    def from_matrices(cls, T1, T2, T3, s=0.0):
        return cls(np.stack([T1, T2, T3]), s)

    @property
    def n(self):
        return self.T.shape[1]

    @property
    def T1(self):
        return self.T[0]

    @property
    def T2(self):
        return self.T[1]

    @property
    def T3(self):
        return self.T[2]


def check_triple(T):
    T = np.asarray(T.T if isinstance(T, FlowState) else T, dtype=complex)
    if T.ndim != 3 or T.shape[0] != 3 or T.shape[1] != T.shape[2]:
        raise ShapeMismatch('need three square matrices of equal size, got %r'
                            % (T.shape,))
    return T


def _comm(X, Y):
    return X @ Y - Y @ X


def rhs_eta2(A):
    '''
    The A-form quadratic system (A0, A1, A2) -> d/ds.
    '''
    A0, A1, A2 = check_triple(A)
    A1sq = A1 @ A1
    dA0 = 0.5 * _comm(A0, A1sq) + 0.5 * _comm(A0 @ A0, A2)
    dA2 = 0.5 * _comm(A0, A2 @ A2) + 0.5 * _comm(A1sq, A2)
    dA1 = A0 @ A1 @ A2 - A2 @ A1 @ A0 \
        + 0.5 * (A0 @ A2 @ A1 - A1 @ A2 @ A0 + A1 @ A0 @ A2 - A2 @ A0 @ A1)
    return np.stack([dA0, dA1, dA2])


def rhs_eta2_T(T):
    '''
    rhs_eta2 pulled back through A0 = T2 + i T3, A1 = i sqrt(3) T1,
    A2 = T2 - i T3.
    '''
    T1, T2, T3 = check_triple(T)
    dT1 = 1j * (2 * T3 @ T1 @ T2 - 2 * T2 @ T1 @ T3 + T3 @ T2 @ T1
                - T2 @ T3 @ T1 + T1 @ T3 @ T2 - T1 @ T2 @ T3)
    T1sq = T1 @ T1
    dT2 = 1j * _comm(T3, T2 @ T2) - 1.5j * _comm(T3, T1sq)
    dT3 = 1j * _comm(T3 @ T3, T2) - 1.5j * _comm(T1sq, T2)
    return np.stack([dT1, dT2, dT3])


def rhs_eta2_T_printed(T):
    '''
    The T-form as usually printed; it differs from the pull-back of
    rhs_eta2 and is kept for comparison only.
    '''
    T1, T2, T3 = check_triple(T)
    dT1 = 1j * (T3 @ T1 @ T2 - T2 @ T1 @ T3 + T3 @ T2 @ T1
                - T1 @ T2 @ T3 + T1 @ T3 @ T2 - T2 @ T3 @ T1)
    T1sq = T1 @ T1
    dT2 = 1.5j * _comm(T3, T2 @ T2 - T1sq)
    dT3 = 1.5j * _comm(T3 @ T3 - T1sq, T2)
    return np.stack([dT1, dT2, dT3])


def rhs_nahm(T):
    T1, T2, T3 = check_triple(T)
    return np.stack([_comm(T2, T3), _comm(T3, T1), _comm(T1, T2)])


def a_from_t(T, kind='eta2'):
    '''
    Coefficients (A0, A1, A2) of the Lax polynomial of a T-triple.
    '''
    T1, T2, T3 = check_triple(T)
    if kind == 'eta2':
        return np.stack([T2 + 1j * T3, 1j * SQRT3 * T1, T2 - 1j * T3])
    if kind == 'nahm':
        return np.stack([T1 + 1j * T2, 2j * T3, T1 - 1j * T2])
    raise ValueError('unknown flow kind %r' % (kind,))


def t_from_a(A, kind='eta2'):
    A0, A1, A2 = check_triple(A)
    if kind == 'eta2':
        return np.stack([A1 / (1j * SQRT3), 0.5 * (A0 + A2),
                         (A0 - A2) / 2j])
    if kind == 'nahm':
        return np.stack([0.5 * (A0 + A2), (A0 - A2) / 2j, A1 / 2j])
    raise ValueError('unknown flow kind %r' % (kind,))


def lax_pair(A, kind='eta2'):
    '''
    (A(zeta), B(zeta)) as MatPolys with dA/ds = [A, B] for A-form
    coefficients.
    '''
    A0, A1, A2 = check_triple(A)
    if kind == 'eta2':
        B = np.stack([0.5 * (A1 @ A1 + A0 @ A2 + A2 @ A0),
                      A1 @ A2 + A2 @ A1, A2 @ A2])
    elif kind == 'nahm':
        B = -np.stack([0.5 * A1, A2])
    else:
        raise ValueError('unknown flow kind %r' % (kind,))
    return MatPoly(np.stack([A0, A1, A2])), MatPoly(B)


def lax_commutator(A, kind='eta2'):
    '''
    Coefficients of [A(zeta), B(zeta)], zeta^0 upwards.
    '''
    L, B = lax_pair(A, kind)
    return L.commutator(B).mats


def lax_residual(T, kind='eta2'):
    '''
    Largest entry of the (A-form) flow minus the Lax commutator, including
    the commutator coefficients above zeta^2, which must vanish.
    '''
    A = a_from_t(T, kind)
    rhs = rhs_eta2(A) if kind == 'eta2' else a_from_t(rhs_nahm(T), kind)
    comm = lax_commutator(A, kind)
    residual = np.abs(comm[:3] - rhs).max()
    if len(comm) > 3:
        residual = max(residual, np.abs(comm[3:]).max())
    return float(residual)


RHS = dict(eta2=rhs_eta2_T, nahm=rhs_nahm)


def spectral_invariants(T, kind='eta2'):
    '''
    Coefficients of det(eta - A(zeta)) for the Lax polynomial of T,
    flattened.
    '''
    return char_curve(MatPoly(a_from_t(T, kind))).coefficient_vector()


def hermiticity_drift(T):
    '''
    Largest |T_i + T_i^*|: zero for skew-hermitian triples.
    '''
    T = check_triple(T)
    return float(np.abs(T + np.conj(np.transpose(T, (0, 2, 1)))).max())


def skew_hermitian(M):
    return 0.5 * (M - np.conj(np.swapaxes(M, -1, -2)))


def random_skew_triple(rng, n, scale=1.0):
    '''
    Ginibre triple skew-hermitianised by (M - M^*)/2.
    '''
    shape = (3, n, n)
    M = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) \
        / np.sqrt(2.0)
    return scale * skew_hermitian(M)


def su2_triple(f):
    '''
    T_i = (f_i / 2i) sigma_i.
    '''
    return np.stack([f[i] / 2j * PAULI[i] for i in range(3)])


def euler_top(f):
    '''
    df_1/ds = f_2 f_3 and cyclic: the su(2) reduction of rhs_nahm.
    '''
    f1, f2, f3 = f
    return np.array([f2 * f3, f3 * f1, f1 * f2])


class Trajectory(NamedTuple):
    '''
    Accepted steps of one integration.  blowup is the (s_prev, s) bracket
    where the norm crossed the threshold, diagnosis is 'complete',
    'blow-up' or the failure message of the stepper.
    '''
    s: np.ndarray
    states: np.ndarray
    kind: Optional[str]
    blowup: Optional[tuple]
    diagnosis: str

    @property
    def final(self):
        return FlowState(self.states[-1], float(self.s[-1]))

    def invariant_drift(self):
        '''
        Per-step max |I(s) - I(0)| / max(1, |I(0)|) of the spectral
        invariants.
        '''
        if self.kind is None:
            return np.zeros(len(self.s))
        ref = spectral_invariants(self.states[0], self.kind)
        scale = max(1.0, float(np.max(np.abs(ref))))
        return np.array([np.max(np.abs(spectral_invariants(T, self.kind)
                                       - ref)) / scale
                         for T in self.states])

    def records(self):
        '''
        One JSON-ready dict per accepted step.
        '''
        drift = self.invariant_drift()
        for s, T, d in zip(self.s, self.states, drift):
            yield dict(s=float(s), T1=T[0], T2=T[1], T3=T[2],
                       invariant_drift=float(d),
                       hermiticity_drift=hermiticity_drift(T))


def integrate(rhs, state0, s_span, tol=None, kind=None):
    '''
    Adaptive Dormand-Prince integration of dT/ds = rhs(T) over s_span
    (backwards when s_span is decreasing) with rtol = atol = tol.  Stops
    early, with a bracket, once the norm exceeds blowup_factor times the
    initial norm.
    '''
    log = logging.getLogger(__name__)
    tol = _cfg.tol.value if tol is None else tol
    T0 = check_triple(state0)
    shape = T0.shape
    s0, s1 = float(s_span[0]), float(s_span[1])
    norm0 = float(np.linalg.norm(T0))
    limit = _cfg.blowup_factor.value * (norm0 if norm0 > 0 else 1.0)
    s_out, states = [s0], [T0]
    if s1 == s0:
        return Trajectory(np.array(s_out), np.array(states), kind, None,
                          'complete')
    solver = RK45(lambda s, y: rhs(y.reshape(shape)).ravel(), s0,
                  T0.ravel(), s1, rtol=tol, atol=tol)
    blowup, diagnosis = None, 'complete'
    while solver.status == 'running':
        message = solver.step()
        if solver.status == 'failed':
            diagnosis = str(message)
            log.warning("integrate: %s at s=%r", diagnosis, solver.t)
            if len(s_out) == 1:
                raise StepUnderflow(solver.t, diagnosis)
            break
        state = solver.y.reshape(shape).copy()
        s_out.append(float(solver.t))
        states.append(state)
        if np.linalg.norm(state) > limit:
            blowup = (s_out[-2], s_out[-1])
            diagnosis = 'blow-up'
            log.warning("integrate: blow-up between s=%r and s=%r", *blowup)
            break
    log.debug("integrate: %d accepted steps, %s", len(s_out) - 1, diagnosis)
    return Trajectory(np.array(s_out), np.array(states), kind, blowup,
                      diagnosis)


def run_flow(T0, kind, s_span, tol=None):
    '''
    Integrate the T-form of the named flow.
    '''
    if kind not in RHS:
        raise ValueError('unknown flow kind %r' % (kind,))
    return integrate(RHS[kind], T0, s_span, tol, kind)
