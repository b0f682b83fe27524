"""The finite-function-encoding Pauli group and its local subgroup.

Elements are stored in the canonical X-then-Z order omega^c X_pi Z_h, where
pi permutes Z_d^n and h is a phase function.  The defining relations are
Z_f Z_g = Z_{f+g} and X_pi Z_{h o pi} = Z_h X_pi, giving the product rule
(X_pi Z_h)(X_sigma Z_g) = X_{pi o sigma} Z_{h o sigma + g} and the action
X_pi Z_h |g> = omega^c |(g+h) o pi^(-1)>.
"""
from __future__ import annotations

import itertools
import json
import random

from .ring import (
    ArityError,
    FiniteFunction,
    check_permutation,
    compose_index_maps,
    invert_permutation,
    site_permutation_as_global,
)


class FPElement:
    """omega^phase * X_perm * Z_phase_fn acting on functions Z_d^n -> Z_d."""

    __slots__ = ("phase", "perm", "phase_fn")

    def __init__(self, phase, perm, phase_fn):
        perm = check_permutation(perm, len(phase_fn.values))
        object.__setattr__(self, "phase", phase % phase_fn.d)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "phase_fn", phase_fn)

    def __setattr__(self, name, value):
        raise AttributeError("FPElement is immutable")

    @property
    def d(self):
        return self.phase_fn.d

    @property
    def n(self):
        return self.phase_fn.n

    @classmethod
    def identity(cls, d, n):
        return cls(0, range(d**n), FiniteFunction.zero(d, n))

    @classmethod
    def z_element(cls, h):
        return cls(0, range(len(h.values)), h)

    @classmethod
    def x_element(cls, d, n, perm):
        return cls(0, perm, FiniteFunction.zero(d, n))

    def apply(self, g):
        """Action on an encoded function: returns (image function, phase)."""
        if (g.d, g.n) != (self.d, self.n):
            raise ArityError("shape mismatch in FP action")
        moved = (g + self.phase_fn).compose_global_permutation(
            invert_permutation(self.perm)
        )
        return moved, self.phase

    def multiply(self, other):
        """Canonical product, normalizing back to X-then-Z order."""
        if (self.d, self.n) != (other.d, other.n):
            raise ArityError("shape mismatch in FP product")
        perm = compose_index_maps(self.perm, other.perm)
        phase_fn = self.phase_fn.compose_global_permutation(other.perm) + other.phase_fn
        return FPElement(self.phase + other.phase, perm, phase_fn)

    def inverse(self):
        inv = invert_permutation(self.perm)
        return FPElement(
            -self.phase, inv, -self.phase_fn.compose_global_permutation(inv)
        )

    def __eq__(self, other):
        return (
            isinstance(other, FPElement)
            and (self.phase, self.perm, self.phase_fn)
            == (other.phase, other.perm, other.phase_fn)
        )

    def __hash__(self):
        return hash((self.phase, self.perm, self.phase_fn))

    def __repr__(self):
        return f"FPElement(phase={self.phase}, perm={self.perm}, phase_fn={self.phase_fn!r})"


class LFPElement:
    """Local FP element: per-site permutation and single-variable phase."""

    __slots__ = ("d", "sites", "global_phase")

    def __init__(self, d, sites, global_phase=0):
        parsed = []
        for perm, phases in sites:
            parsed.append(
                (check_permutation(perm, d), tuple(v % d for v in phases))
            )
            if len(parsed[-1][1]) != d:
                raise ArityError("site phase function must have d values")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "sites", tuple(parsed))
        object.__setattr__(self, "global_phase", global_phase % d)

    def __setattr__(self, name, value):
        raise AttributeError("LFPElement is immutable")

    @property
    def n(self):
        return len(self.sites)

    @classmethod
    def identity(cls, d, n):
        ident = tuple(range(d))
        return cls(d, [(ident, (0,) * d)] * n)

    def lift(self):
        """The global FP element: product permutation, summed phases."""
        d, n = self.d, self.n
        perm = tuple(range(d**n))
        for i, (site_perm, _) in enumerate(self.sites):
            perm = compose_index_maps(
                perm, site_permutation_as_global(d, n, i, site_perm)
            )
        values = []
        for x in itertools.product(range(d), repeat=n):
            values.append(sum(self.sites[i][1][x[i]] for i in range(n)))
        return FPElement(self.global_phase, perm, FiniteFunction(d, n, values))

    def multiply(self, other):
        # the product of local elements is local: the lifted product has a
        # per-site permutation and a phase function that is a sum of
        # single-variable functions, so it splits back losslessly.
        return _local_from_lift(self.lift().multiply(other.lift()))

    def to_json(self):
        return json.dumps(
            {
                "sites": [
                    {"perm": list(p), "phase": list(h)} for p, h in self.sites
                ],
                "global_phase": self.global_phase,
            }
        )

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(
            len(obj["sites"][0]["perm"]),
            [(s["perm"], s["phase"]) for s in obj["sites"]],
            obj.get("global_phase", 0),
        )

    def __eq__(self, other):
        return (
            isinstance(other, LFPElement)
            and (self.d, self.sites, self.global_phase)
            == (other.d, other.sites, other.global_phase)
        )

    def __hash__(self):
        return hash((self.d, self.sites, self.global_phase))

    def __repr__(self):
        return f"LFPElement(d={self.d}, sites={self.sites}, global_phase={self.global_phase})"


def _local_from_lift(el):
    """Split a lifted local element back into per-site data."""
    d, n = el.d, el.n

    def point_of_index(idx):
        out = []
        for _ in range(n):
            out.append(idx % d)
            idx //= d
        return tuple(reversed(out))

    # recover each site permutation by probing single-site unit points
    sites = []
    for i in range(n):
        perm = []
        for k in range(d):
            x = tuple(k if j == i else 0 for j in range(n))
            idx = 0
            for c in x:
                idx = idx * d + c
            perm.append(point_of_index(el.perm[idx])[i])
        sites.append(perm)
    h = el.phase_fn
    h0 = h.values[0]
    phases = []
    for i in range(n):
        vals = []
        for k in range(d):
            x = tuple(k if j == i else 0 for j in range(n))
            vals.append((h.eval(x) - h0) % d)
        phases.append(tuple(vals))
    # distribute the constant h0 into the first site's phase function
    phases[0] = tuple((v + h0) % d for v in phases[0])
    return LFPElement(el.d, list(zip(sites, phases)), el.phase)


class DephasedForm:
    """Dephased representative together with the local correction reaching it."""

    __slots__ = ("representative", "correction")

    def __init__(self, representative, correction):
        object.__setattr__(self, "representative", representative)
        object.__setattr__(self, "correction", correction)

    def __setattr__(self, name, value):
        raise AttributeError("DephasedForm is immutable")


def dephase(f):
    """Remove axis phases: for n=2 the representative has zero first row and
    column of the image matrix; for n>=3 only the axes are zeroed; for n=1
    the value at 0 is zeroed."""
    d, n = f.d, f.n
    ident = tuple(range(d))
    if n == 1:
        c = f.values[0]
        rep = f.add_constant(-c)
        corr = LFPElement(d, [(ident, tuple((-c) % d for _ in range(d)))])
        return DephasedForm(rep, corr)
    zero = (0,) * n
    axis = []
    for i in range(n):
        axis.append(
            tuple(
                f.eval(tuple(k if j == i else 0 for j in range(n)))
                for k in range(d)
            )
        )
    f0 = f.values[0]
    site_phases = []
    for i in range(n):
        vals = [-(axis[i][k] - f0) % d for k in range(d)]
        site_phases.append(vals)
    # absorb the residual constant so the representative vanishes at 0
    site_phases[0] = [(v - f0) % d for v in site_phases[0]]
    corr = LFPElement(d, [(ident, tuple(p)) for p in site_phases])
    rep, phase = corr.lift().apply(f)
    assert phase == 0
    return DephasedForm(rep, corr)


def is_dephased(f):
    d, n = f.d, f.n
    if n == 1:
        return f.values[0] == 0
    for i in range(n):
        for k in range(f.d):
            if f.eval(tuple(k if j == i else 0 for j in range(n))):
                return False
    return True


def image_matrix_row_col_ops(f, row_perm=None, col_perm=None, row_phases=None, col_phases=None):
    """Concrete bipartite LFP action on the image matrix: permute rows and
    columns and add constants to rows and columns."""
    if f.n != 2:
        raise ArityError("row/column operations defined for n=2")
    d = f.d
    row_perm = check_permutation(row_perm if row_perm is not None else range(d), d)
    col_perm = check_permutation(col_perm if col_perm is not None else range(d), d)
    row_phases = tuple(row_phases) if row_phases is not None else (0,) * d
    col_phases = tuple(col_phases) if col_phases is not None else (0,) * d
    vals = [
        f.values[row_perm[x] * d + col_perm[y]] + row_phases[x] + col_phases[y]
        for x in range(d)
        for y in range(d)
    ]
    return FiniteFunction(d, 2, vals)


def random_lfp(d, n, seed):
    """Deterministic pseudo-random LFP element, uniform per component."""
    rng = random.Random(seed)
    sites = []
    for _ in range(n):
        perm = list(range(d))
        rng.shuffle(perm)
        phases = [rng.randrange(d) for _ in range(d)]
        sites.append((perm, phases))
    return LFPElement(d, sites, rng.randrange(d))
