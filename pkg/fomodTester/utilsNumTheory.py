"""
Integer arithmetic used by the compiler and the tester: gcd/lcm of
weight sets, congruence systems with arbitrary moduli, Frobenius
multiples and conical decompositions.

Weights are plain python ints so nothing overflows.
"""

import heapq
import logging
from dataclasses import dataclass
from functools import reduce
from math import gcd

from .utilsErrors import ArgumentError, check_guard

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


@dataclass(frozen=True)
class Congruence:
    """
    x = residue (mod modulus), with 0 <= residue < modulus.
    """
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ArgumentError('Congruence modulus must be positive, got ' + str(self.modulus))
        if not 0 <= self.residue < self.modulus:
            raise ArgumentError('Congruence residue ' + str(self.residue) +
                                ' out of range for modulus ' + str(self.modulus))

    def holds(self, x):
        return x % self.modulus == self.residue


def _check_weights(ws):
    ws = [int(w) for w in ws]
    if len(ws) == 0:
        raise ArgumentError('Weight set must be nonempty.')
    if min(ws) < 1:
        raise ArgumentError('Weights must be positive, got ' + str(ws))
    return ws


def gcd_many(ws):
    return reduce(gcd, _check_weights(ws))


def lcm_many(ws):
    return reduce(lambda a, b: a // gcd(a, b) * b, _check_weights(ws))


def _combine(c1, c2):
    """
    Merge two congruences. Moduli need not be coprime. Returns None when
    the residues disagree on a shared factor.
    """
    g = gcd(c1.modulus, c2.modulus)
    if (c2.residue - c1.residue) % g != 0:
        return None
    m1 = c1.modulus // g
    m2 = c2.modulus // g
    # x = r1 + m1*g*t with m1*t = (r2-r1)/g (mod m2)
    t = ((c2.residue - c1.residue) // g * pow(m1, -1, m2)) % m2 if m2 > 1 else 0
    modulus = c1.modulus * m2
    return Congruence((c1.residue + c1.modulus * t) % modulus, modulus)


def crt_solve(cs):
    """
    Solve a system of congruences with possibly non-coprime moduli.

    Parameters
    ----------

    cs : sequence of Congruence
        Nonempty.

    Returns
    -------

    Congruence with modulus the lcm of the input moduli, or None when the
    system is inconsistent.
    """
    cs = list(cs)
    if len(cs) == 0:
        raise ArgumentError('crt_solve needs at least one congruence.')
    result = cs[0]
    for this_c in cs[1:]:
        result = _combine(result, this_c)
        if result is None:
            return None
    return result


def _residue_table(ws):
    """
    Shortest-path dynamic program over residues modulo the smallest
    weight a: dist[r] is the least conical combination of ws that is
    congruent to r mod a, pred[r] = (previous residue, weight index).
    """
    a = min(ws)
    dist = [None] * a
    pred = [None] * a
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        this_d, r = heapq.heappop(heap)
        if this_d != dist[r]:
            continue
        for i, w in enumerate(ws):
            r2 = (r + w) % a
            nd = this_d + w
            if dist[r2] is None or nd < dist[r2]:
                dist[r2] = nd
                pred[r2] = (r, i)
                heapq.heappush(heap, (nd, r2))
    return a, dist, pred


def frobenius_multiple(ws, guard=10**6):
    """
    Largest multiple of g = gcd(ws) that is not a conical combination of
    ws. Returns -g when every nonnegative multiple of g is expressible.
    """
    ws = _check_weights(ws)
    g = gcd_many(ws)
    reduced = [w // g for w in ws]
    check_guard(max(reduced), guard, 'frobenius_guard',
                'largest reduced weight too big for the residue table')
    a, dist, _ = _residue_table(reduced)
    # gcd of reduced weights is 1, so every residue is reachable
    return g * (max(dist) - a)


def frobenius_two(a1, a2):
    """
    Closed form for two coprime weights.
    """
    if gcd(a1, a2) != 1:
        raise ArgumentError('frobenius_two needs coprime weights.')
    return a1 * a2 - a1 - a2


def conical_decompose(target, ws, guard=10**7):
    """
    Find naturals b with sum(b[i]*ws[i]) == target.

    Returns a tuple of coefficients or None when target is not a conical
    combination of ws.
    """
    ws = _check_weights(ws)
    target = int(target)
    if target < 0:
        raise ArgumentError('conical_decompose target must be nonnegative.')
    if target == 0:
        return tuple(0 for _ in ws)
    g = gcd_many(ws)
    if target % g != 0:
        return None
    reduced = [w // g for w in ws]
    check_guard(min(reduced), guard, 'decompose_guard')
    t = target // g
    a, dist, pred = _residue_table(reduced)
    r = t % a
    if dist[r] is None or dist[r] > t:
        return None
    coeffs = [0] * len(ws)
    smallest = reduced.index(a)
    coeffs[smallest] += (t - dist[r]) // a
    while r != 0:
        prev, i = pred[r]
        coeffs[i] += 1
        r = prev
    return tuple(coeffs)
