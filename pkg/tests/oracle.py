"""Dense reference implementation on the <=2-photon Fock space of 8 modes.

First-quantized: a two-photon state is a symmetric vector in C^8 (x) C^8 and a
passive element acts as M (x) M.  Nothing here calls into the sparse code
except to read/write occupation tuples.
"""

import itertools
import math

import numpy as np

from nqi_sim.fock import NUM_MODES, PhotonState

N = NUM_MODES

# canonical index: (R,u,+) (R,u,-) (R,l,+) (R,l,-) (L,u,+) (L,u,-) (L,l,+) (L,l,-)
RU, RL, LU, LL = 0, 2, 4, 6  # first slot of each port

BASIS = [()] + [(i,) for i in range(N)] + list(itertools.combinations_with_replacement(range(N), 2))
INDEX = {b: k for k, b in enumerate(BASIS)}
DIM = len(BASIS)  # 1 + 8 + 36


def occ_of(modes):
    occ = [0] * N
    for i in modes:
        occ[i] += 1
    return tuple(occ)


def modes_of(occ):
    return tuple(i for i, n in enumerate(occ) for _ in range(n))


def to_dense(state: PhotonState) -> np.ndarray:
    v = np.zeros(DIM, dtype=complex)
    for occ, amp in state.terms.items():
        v[INDEX[modes_of(occ)]] = amp
    return v


def from_dense(v, modes) -> PhotonState:
    return PhotonState({occ_of(BASIS[k]): a for k, a in enumerate(v) if abs(a) > 0}, modes)


def _first_quantized(b):
    """Unit vector of basis state ``b`` in C^(8^len(b))."""
    if len(b) == 0:
        return np.ones(1, dtype=complex)
    if len(b) == 1:
        v = np.zeros(N, dtype=complex)
        v[b[0]] = 1
        return v
    i, j = b
    ei, ej = np.eye(N)[i], np.eye(N)[j]
    if i == j:
        return np.kron(ei, ei).astype(complex)
    return ((np.kron(ei, ej) + np.kron(ej, ei)) / math.sqrt(2)).astype(complex)


def dense_operator(single: np.ndarray) -> np.ndarray:
    """Matrix of the passive map with single-photon matrix ``single`` on the 45-dim space."""
    single = np.asarray(single, dtype=complex)
    lifts = {0: np.ones((1, 1), dtype=complex), 1: single, 2: np.kron(single, single)}
    out = np.zeros((DIM, DIM), dtype=complex)
    for col, b in enumerate(BASIS):
        image = lifts[len(b)] @ _first_quantized(b)
        for row, c in enumerate(BASIS):
            if len(c) == len(b):
                out[row, col] = np.vdot(_first_quantized(c), image)
    return out


def bs_single_photon_matrix() -> np.ndarray:
    """Beam splitter written straight from the reflection rule: +i for right movers, -i for left."""
    m = np.zeros((N, N), dtype=complex)
    s = 1 / math.sqrt(2)
    for upper, lower, r in ((RU, RL, 1j), (LU, LL, -1j)):
        for pol in (0, 1):
            u, l = upper + pol, lower + pol
            # a_l -> (a_u + r a_l)/sqrt2 ; a_u -> (a_l + r a_u)/sqrt2
            m[u, l], m[l, l] = s, r * s
            m[l, u], m[u, u] = s, r * s
    return m


def circular_to_linear_matrix() -> np.ndarray:
    """a_+ = -(a_x + i a_y)/sqrt2, a_- = (a_x - i a_y)/sqrt2 on every port (slot 0 -> x, slot 1 -> y)."""
    m = np.zeros((N, N), dtype=complex)
    s = 1 / math.sqrt(2)
    for port in (RU, RL, LU, LL):
        plus, minus = port, port + 1
        x, y = port, port + 1
        m[x, plus], m[y, plus] = -s, -1j * s
        m[x, minus], m[y, minus] = s, -1j * s
    return m


def random_dense_state(rng: np.random.Generator, photons=None) -> np.ndarray:
    """Random normalized vector; ``photons`` restricts to a fixed photon number."""
    v = rng.normal(size=DIM) + 1j * rng.normal(size=DIM)
    if photons is not None:
        mask = np.array([len(b) == photons for b in BASIS])
        v = np.where(mask, v, 0)
    return v / np.linalg.norm(v)


def random_state(rng: np.random.Generator, photons=None, modes=None) -> PhotonState:
    from nqi_sim.fock import CIRCULAR_MODES

    return from_dense(random_dense_state(rng, photons), modes or CIRCULAR_MODES)


def random_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / abs(np.diag(r)))


def global_phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - e^{i phi} b| after choosing phi to align the largest component."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    k = int(np.argmax(abs(b)))
    if abs(b[k]) == 0:
        return float(np.max(abs(a)))
    phase = a[k] / b[k]
    if abs(phase) == 0:
        return float(np.max(abs(a - b)))
    phase /= abs(phase)
    return float(np.max(abs(a - phase * b)))
