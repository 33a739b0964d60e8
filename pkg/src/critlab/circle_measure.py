"""Probability measures on the unit circle.

A measure is described by its angular law on ``[0, 1)`` (angles are
fractions of a full turn).  Four families are supported: ``uniform``,
``atomic`` (finitely many point masses), ``arc`` (uniform on a sub-arc)
and ``mixture`` (a finite convex combination of the other three).

Sampling uses numpy's counter-based ``Philox`` bit generator, keyed by a
64-bit seed through ``numpy.random.SeedSequence``.  Both are specified
algorithms, so a given ``(measure, n, seed)`` produces the same bytes on
every platform.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .exceptions import MeasureError

KINDS = ("uniform", "atomic", "arc", "mixture")
SEED_MASK = (1 << 64) - 1

_WEIGHT_TOL = 1e-9
_SHRINK = np.nextafter(1.0, 0.0)
_QUARTER = np.array([1.0 + 0.0j, 0.0 + 1.0j, -1.0 + 0.0j, 0.0 - 1.0j])


def turns_to_points(theta):
    """Map angles in turns to points ``exp(2*pi*i*theta)`` on the circle.

    Quarter turns are returned exactly (``0.5 -> -1+0j`` rather than
    ``-1+1.2e-16j``) so that symmetric atoms stay exactly symmetric, and
    ``abs(z) <= 1`` holds for every returned point.
    """
    theta = np.asarray(theta, dtype=float)
    z = np.exp(2j * np.pi * theta)
    # about 6% of exp values round to modulus 1 + 2.2e-16; pull them back so
    # that every point lies in the closed unit disc
    over = np.abs(z) > 1.0
    while np.any(over):
        z = np.where(over, z * _SHRINK, z)
        over = np.abs(z) > 1.0
    q = 4.0 * theta
    exact = q == np.round(q)
    if np.any(exact):
        z = np.array(z, dtype=complex, copy=True)
        z[exact] = _QUARTER[np.mod(q[exact], 4).astype(int)]
    return z


def points_to_turns(z):
    """Angles of complex points as fractions of a turn, in ``[0, 1)``."""
    t = np.angle(np.asarray(z, dtype=complex)) / (2 * np.pi)
    t = np.where(t < 0, t + 1.0, t)
    # -tiny + 1.0 rounds to 1.0
    return np.where(t >= 1.0, 0.0, t)


def make_generator(seed: int) -> np.random.Generator:
    """Philox4x64 generator keyed by a 64-bit unsigned seed."""
    seed = int(seed)
    if seed < 0 or seed > SEED_MASK:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def derive_seed(seed: int, *keys: int) -> int:
    """Derive an independent 64-bit seed from ``seed`` and integer keys.

    The keys are folded in through ``SeedSequence`` hashing, so derived
    streams do not depend on the order in which they are requested.
    """
    ss = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class CircleMeasure:
    """Law of ``Z = exp(2*pi*i*theta)`` on the unit circle.

    Use the classmethod constructors rather than the raw fields.
    """

    kind: str
    atoms: tuple = ()
    weights: tuple = ()
    arc_bounds: tuple | None = None
    components: tuple = field(default=())

    @classmethod
    def uniform(cls) -> "CircleMeasure":
        return cls("uniform")

    @classmethod
    def atomic(cls, atoms: Sequence[float], weights: Sequence[float] | None = None) -> "CircleMeasure":
        atoms = tuple(float(a) for a in atoms)
        if weights is None:
            weights = [1.0 / len(atoms)] * len(atoms)
        return validate(cls("atomic", atoms=atoms, weights=tuple(float(w) for w in weights)))

    @classmethod
    def arc(cls, a: float, b: float) -> "CircleMeasure":
        return validate(cls("arc", arc_bounds=(float(a), float(b))))

    @classmethod
    def mixture(cls, components: Sequence["CircleMeasure"], weights: Sequence[float]) -> "CircleMeasure":
        return validate(cls("mixture", weights=tuple(float(w) for w in weights),
                            components=tuple(components)))

    @property
    def is_uniform(self) -> bool:
        if self.kind == "uniform":
            return True
        if self.kind == "arc":
            return self.arc_bounds == (0.0, 1.0)
        if self.kind == "mixture":
            return all(c.is_uniform for c in self.components)
        return False

    def describe(self) -> str:
        """Short deterministic text tag, e.g. ``atomic(0:0.5,0.5:0.5)``."""
        if self.kind == "uniform":
            return "uniform"
        if self.kind == "atomic":
            body = ",".join(f"{a!r}:{w!r}" for a, w in zip(self.atoms, self.weights))
            return f"atomic({body})"
        if self.kind == "arc":
            a, b = self.arc_bounds
            return f"arc({a!r},{b!r})"
        body = ",".join(f"{w!r}*{c.describe()}" for w, c in zip(self.weights, self.components))
        return f"mixture({body})"

    def __str__(self) -> str:
        return self.describe()


@dataclass(frozen=True)
class RootSample:
    """``n`` i.i.d. draws from a measure, as points and as angles."""

    points: np.ndarray
    angles: np.ndarray
    seed: int
    measure_tag: str

    def __len__(self) -> int:
        return len(self.points)


def _check_weights(weights, what):
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise MeasureError(f"{what}: at least one weight is required")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise MeasureError(f"{what}: weights must be positive, got {list(weights)}")
    total = float(w.sum())
    if abs(total - 1.0) > _WEIGHT_TOL:
        raise MeasureError(f"{what}: weights sum to {total:.12g}, not 1")
    if total != 1.0:
        w = w / total
    if np.any(w > 1.0):
        raise MeasureError(f"{what}: weights must lie in (0, 1]")
    return tuple(float(x) for x in w)


def validate(m: CircleMeasure) -> CircleMeasure:
    """Check a measure and return it, renormalizing weights off by at most 1e-9.

    Raises
    ------
    MeasureError
        Unknown kind, bad weights, duplicate or out-of-range atoms, an
        empty arc, or mixtures nested deeper than one level.
    """
    if m.kind not in KINDS:
        raise MeasureError(f"unknown measure kind {m.kind!r}; expected one of {KINDS}")
    if m.kind == "uniform":
        return m
    if m.kind == "atomic":
        if len(m.atoms) != len(m.weights):
            raise MeasureError("atomic: atoms and weights differ in length")
        atoms = np.asarray(m.atoms, dtype=float)
        if np.any(~np.isfinite(atoms)) or np.any(atoms < 0) or np.any(atoms >= 1):
            raise MeasureError(f"atomic: angles must lie in [0, 1), got {list(m.atoms)}")
        if len(set(m.atoms)) != len(m.atoms):
            raise MeasureError(f"atomic: duplicate atoms in {list(m.atoms)}")
        return replace(m, weights=_check_weights(m.weights, "atomic"))
    if m.kind == "arc":
        if m.arc_bounds is None or len(m.arc_bounds) != 2:
            raise MeasureError("arc: arc_bounds must be a pair (a, b)")
        a, b = (float(x) for x in m.arc_bounds)
        if not (0.0 <= a < b <= 1.0):
            raise MeasureError(f"arc: need 0 <= a < b <= 1, got ({a}, {b})")
        return m
    # mixture
    if len(m.components) != len(m.weights) or not m.components:
        raise MeasureError("mixture: components and weights differ in length")
    comps = []
    for c in m.components:
        if not isinstance(c, CircleMeasure):
            raise MeasureError("mixture: components must be CircleMeasure instances")
        if c.kind == "mixture":
            raise MeasureError("mixture: nesting depth is capped at 1")
        comps.append(validate(c))
    return replace(m, components=tuple(comps), weights=_check_weights(m.weights, "mixture"))


def moment(m: CircleMeasure, k: int) -> complex:
    """Exact ``E[Z**k]`` for ``k >= 1``."""
    if int(k) != k or k < 1:
        raise ValueError(f"moment order must be a positive integer, got {k}")
    k = int(k)
    if m.kind == "uniform":
        return 0j
    if m.kind == "atomic":
        angles = np.mod(k * np.asarray(m.atoms), 1.0)
        return complex(np.dot(m.weights, turns_to_points(angles)))
    if m.kind == "arc":
        a, b = m.arc_bounds
        if (a, b) == (0.0, 1.0):
            return 0j
        ea, eb = turns_to_points(np.mod([k * a, k * b], 1.0))
        return complex((eb - ea) / (2j * np.pi * k * (b - a)))
    return complex(sum(w * moment(c, k) for w, c in zip(m.weights, m.components)))


def moments(m: CircleMeasure, kmax: int) -> np.ndarray:
    """``c_1 .. c_kmax`` as a complex array."""
    return np.array([moment(m, k) for k in range(1, int(kmax) + 1)], dtype=complex)


def _sample_angles(m: CircleMeasure, n: int, rng: np.random.Generator):
    """Angles plus (for atomic draws) the indices of the chosen atoms."""
    if m.kind == "uniform":
        return rng.random(n)
    if m.kind == "arc":
        a, b = m.arc_bounds
        t = a + (b - a) * rng.random(n)
        # a + (b-a)*u can round up to b
        return np.where(t >= b, np.nextafter(b, a), t)
    if m.kind == "atomic":
        cdf = np.cumsum(m.weights)
        idx = np.searchsorted(cdf, rng.random(n), side="right")
        idx = np.minimum(idx, len(m.atoms) - 1)
        return np.asarray(m.atoms, dtype=float)[idx]
    cdf = np.cumsum(m.weights)
    label = np.minimum(np.searchsorted(cdf, rng.random(n), side="right"), len(m.components) - 1)
    out = np.empty(n)
    for c, comp in enumerate(m.components):
        sel = label == c
        count = int(sel.sum())
        if count:
            out[sel] = _sample_angles(comp, count, rng)
    return out


def sample(m: CircleMeasure, n: int, seed: int) -> RootSample:
    """Draw ``n`` i.i.d. points from ``m``.

    Point masses always reuse the exact stored angle, so two draws of the
    same atom are bit-identical complex numbers.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"sample size must be positive, got {n}")
    angles = _sample_angles(m, n, make_generator(seed))
    # one evaluation per distinct angle keeps repeated atoms bit-equal
    distinct, inverse = np.unique(angles, return_inverse=True)
    points = turns_to_points(distinct)[inverse.reshape(-1)]
    return RootSample(points=points, angles=angles,
                      seed=int(seed), measure_tag=m.describe())


def _cdf(m: CircleMeasure, t: np.ndarray, left: bool) -> np.ndarray:
    if m.kind == "uniform":
        return t.copy()
    if m.kind == "arc":
        a, b = m.arc_bounds
        return np.clip((t - a) / (b - a), 0.0, 1.0)
    if m.kind == "atomic":
        atoms = np.asarray(m.atoms)
        w = np.asarray(m.weights)
        hit = atoms[None, :] < t[:, None] if left else atoms[None, :] <= t[:, None]
        return np.minimum(hit @ w, 1.0)
    return sum(w * _cdf(c, t, left) for w, c in zip(m.weights, m.components))


def angle_cdf(m: CircleMeasure, t):
    """Right-continuous CDF ``nu([0, t])`` of the angular law.

    Accepts a scalar or an array of ``t`` values in ``[0, 1]``.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(arr > 1) or np.any(np.isnan(arr)):
        raise ValueError("angle_cdf: t must lie in [0, 1]")
    out = _cdf(m, np.atleast_1d(arr), left=False)
    out = np.where(np.atleast_1d(arr) >= 1.0, 1.0, out)
    return float(out[0]) if arr.ndim == 0 else out


def angle_cdf_left(m: CircleMeasure, t):
    """Left limit ``nu([0, t))`` of the angular CDF."""
    arr = np.asarray(t, dtype=float)
    out = _cdf(m, np.atleast_1d(arr), left=True)
    return float(out[0]) if arr.ndim == 0 else out
