"""Stabilizers of encoded states: S_{f,pi} = X_pi Z_{f o pi - f}.

A complete set uses one d-cycle per site; its simultaneous +1 eigenspace is
one-dimensional, which is verified here by exact sparse elimination over
Q(omega_d) on the stacked (S - I) constraints.
"""
from __future__ import annotations

import itertools

from .cyclo import CyclotomicInt, CyclotomicRat
from .fpops import FPElement
from .ring import (
    ArityError,
    PermutationError,
    check_permutation,
    compose_index_maps,
    invert_permutation,
    site_permutation_as_global,
)

FIXED_SPACE_BUDGET = 256


def is_full_cycle(perm):
    """True iff the permutation of Z_d is a single cycle of length d."""
    perm = tuple(perm)
    seen = 1
    k = perm[0]
    while k != 0:
        k = perm[k]
        seen += 1
        if seen > len(perm):
            return False
    return seen == len(perm)


def plus_cycle(d):
    """The canonical d-cycle k -> k+1 mod d."""
    return tuple((k + 1) % d for k in range(d))


class CycleSpec:
    """Per-site d-cycles, optionally with conjugation witnesses
    kappa_i = pi_i^(-1) o kappa_plus o pi_i."""

    __slots__ = ("d", "cycles", "witnesses")

    def __init__(self, d, cycles, witnesses=None):
        cycles = tuple(check_permutation(c, d) for c in cycles)
        for c in cycles:
            if not is_full_cycle(c):
                raise PermutationError(f"not a single d-cycle: {c}")
        if witnesses is not None:
            witnesses = tuple(check_permutation(w, d) for w in witnesses)
            if len(witnesses) != len(cycles):
                raise ArityError("one witness per site required")
            plus = plus_cycle(d)
            for c, w in zip(cycles, witnesses):
                conj = tuple(invert_permutation(w)[plus[w[k]]] for k in range(d))
                if conj != c:
                    raise PermutationError(
                        "witness does not conjugate the +1 cycle to kappa"
                    )
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "cycles", cycles)
        object.__setattr__(self, "witnesses", witnesses)

    def __setattr__(self, name, value):
        raise AttributeError("CycleSpec is immutable")

    @classmethod
    def plus_cycles(cls, d, n):
        return cls(d, [plus_cycle(d)] * n)


class StabilizerSet:
    __slots__ = ("base", "cycles", "elements")

    def __init__(self, base, cycles, elements):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "cycles", cycles)
        object.__setattr__(self, "elements", tuple(elements))

    def __setattr__(self, name, value):
        raise AttributeError("StabilizerSet is immutable")


def make_stabilizer(f, perm):
    """S_{f,pi} = X_pi Z_{f o pi - f}; stabilizes |f> with zero phase."""
    perm = check_permutation(perm, len(f.values))
    return FPElement(0, perm, f.compose_global_permutation(perm) - f)


def complete_set(f, cycles):
    """One stabilizer per site from the given d-cycles."""
    d, n = f.d, f.n
    if len(cycles.cycles) != n or cycles.d != d:
        raise ArityError("cycle spec shape does not match the function")
    elements = []
    for i, kappa in enumerate(cycles.cycles):
        elements.append(make_stabilizer(f, site_permutation_as_global(d, n, i, kappa)))
    return StabilizerSet(f, cycles, elements)


def unique_fixed_space_dim(stab_set):
    """Exact dimension of the simultaneous +1 eigenspace of the stabilizers.

    Each operator row of (S - I) has at most two nonzero entries, so sparse
    Gaussian elimination over Q(omega_d) stays cheap; the dimension is
    d^n - rank of the stacked constraints.
    """
    base = stab_set.base
    d = base.d
    size = d**base.n
    if size > FIXED_SPACE_BUDGET:
        raise ArityError(f"fixed-space budget exceeded: d^n = {size} > {FIXED_SPACE_BUDGET}")
    one = CyclotomicRat.one(d)
    rows = []
    for el in stab_set.elements:
        if el.phase:
            raise ArityError("stabilizer elements must carry zero global phase")
        h = el.phase_fn
        # S|x> = omega^{h(x)} |pi(x)>: one constraint per input index x
        for x in range(size):
            y = el.perm[x]
            coeff = CyclotomicRat(CyclotomicInt.root_power(d, h.values[x]))
            if y == x:
                diag = coeff - one
                if not diag.is_zero():
                    rows.append({x: diag})
            else:
                rows.append({x: coeff, y: -one})
    pivots = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            if col not in pivots:
                inv = row[col].inverse()
                pivots[col] = {c: v * inv for c, v in row.items()}
                rank += 1
                break
            factor = row[col]
            for c, v in pivots[col].items():
                acc = row.get(c, CyclotomicRat.zero(d)) - factor * v
                if acc.is_zero():
                    row.pop(c, None)
                else:
                    row[c] = acc
        # fully reduced rows drop out
    return size - rank


def internally_commutes(f, i, kappa):
    """True iff f o kappa_i - f does not depend on x_i (the commuting
    criterion for the X and Z parts of S_{f,kappa_i})."""
    d, n = f.d, f.n
    diff = f.compose_site_permutation(i, kappa) - f
    for x in itertools.product(range(d), repeat=n):
        base = diff.eval(x)
        for k in range(d):
            if diff.eval(x[:i] + (k,) + x[i + 1:]) != base:
                return False
    return True


def internally_commuting_set_exists_for(f, witnesses):
    """Verify the witness tuple: with kappa_i = pi_i^(-1) o kappa_plus o pi_i
    every site must pass the internal-commutativity criterion."""
    d = f.d
    plus = plus_cycle(d)
    for i, w in enumerate(witnesses):
        w = check_permutation(w, d)
        w_inv = invert_permutation(w)
        kappa = tuple(w_inv[plus[w[k]]] for k in range(d))
        if not internally_commutes(f, i, kappa):
            return False
    return True


def continuous_symmetry_predicate(f, sigma, sites=(0, 1)):
    """True iff f(sigma(a), sigma^(-1)(b), tail) = f(sigma(b), sigma^(-1)(a), tail)
    for all a, b and tail assignments; the hypothesis for a continuous
    stabilizer family on the two given sites."""
    d, n = f.d, f.n
    if n < 2:
        raise ArityError("predicate needs at least two sites")
    i, j = sites
    sigma = check_permutation(sigma, d)
    sigma_inv = invert_permutation(sigma)
    tails = itertools.product(range(d), repeat=n - 2)
    other = [k for k in range(n) if k not in (i, j)]
    for tail in tails:
        for a in range(d):
            for b in range(d):
                x = [0] * n
                for k, t in zip(other, tail):
                    x[k] = t
                x[i], x[j] = sigma[a], sigma_inv[b]
                lhs = f.eval(tuple(x))
                x[i], x[j] = sigma[b], sigma_inv[a]
                rhs = f.eval(tuple(x))
                if lhs != rhs:
                    return False
    return True
