"""Near-identity coordinate changes and the numeric flow-conjugacy check

A normal form is related to its source by y = map_1(map_2(...map_m(x))),
each map_i being the time-one flow of a recorded generator, truncated as a
polynomial map.  :func:`flow_check` integrates the source field from y(0) and
the normal form from x(0) with classical RK4, maps the second trajectory
through the coordinate change and records the largest discrepancy.  The
discrepancy should scale like |x(0)|^(N+2) for truncation order N.
"""
from typing import List, Optional, Sequence, Union
import dataclasses
import logging
import math

import numpy as np

from . import defaults
from .equivariant import QuasilinearField
from .errors import DimensionError
from .normalform import NormalFormResult
from .polyvf import PolyVectorField, near_identity_map

logger = logging.getLogger(__name__)


class NearIdentityMap:
    """Time-one flow of a generator as a truncated polynomial map"""
    def __init__(self, generator: PolyVectorField, max_grade: int):
        self._generator = generator
        self._max_grade = max_grade
        self._map = None

    def __str__(self):
        return 'exp(L_h) with h of grades {}'.format(self._generator.grades())

    @property
    def map(self) -> PolyVectorField:
        """The map components, built on first use"""
        if self._map is None:
            self._map = near_identity_map(self._generator, self._max_grade)
        return self._map

    def __call__(self, x):
        return self.map.evaluate(x)


class CoordinateChange:
    """Composition y = map_1 o map_2 o ... o map_m (x) of near-identity maps

    Generators are added in the order they were applied during normalisation;
    the last one added acts first on x.
    """
    def __init__(self, dim: int, max_grade: int):
        self._dim = dim
        self._max_grade = max_grade
        self._operations = []

    def __len__(self):
        return len(self._operations)

    def __str__(self):
        return ' o '.join(str(op) for op in reversed(self._operations)) or 'identity'

    def generator(self, h: Union[PolyVectorField, QuasilinearField]):
        """Add the time-one flow of ``h`` as the new innermost map"""
        if isinstance(h, QuasilinearField):
            h = h.expand()
        if h.dim != self._dim:
            raise DimensionError('generator of dimension {} for a coordinate change of dimension {}'.format(h.dim, self._dim))
        self._operations.insert(0, NearIdentityMap(h, self._max_grade))
        return self

    def transform(self, x) -> np.ndarray:
        """Map points of shape (n,) or (n, P) from normal-form coordinates"""
        y = np.asarray(x, dtype=float)
        for op in self._operations:
            y = op(y)
        return y

    def __call__(self, x) -> np.ndarray:
        return self.transform(x)

    @classmethod
    def from_result(cls, result: NormalFormResult) -> 'CoordinateChange':
        change = cls(result.nf.dim, result.truncation_order)
        for g in result.generators:
            change.generator(g.field)
        return change


def rk4(field: PolyVectorField, x0, horizon: float, steps: int) -> np.ndarray:
    """Classical fixed-step RK4.

    Parameters
    ----------
    field : PolyVectorField
    x0 : numpy.ndarray
        Initial points, shape (n,) or (n, P).
    horizon : float
        Integration time T.
    steps : int
        Number of steps; h = T/steps.

    Returns
    -------
    numpy.ndarray
        Trajectory of shape (steps+1,) + x0.shape.
    """
    h = horizon/steps
    x = np.asarray(x0, dtype=float)
    trajectory = np.empty((steps + 1,) + x.shape)
    trajectory[0] = x
    with np.errstate(over='ignore', invalid='ignore'):
        for i in range(steps):
            k1 = field.evaluate(x)
            k2 = field.evaluate(x + 0.5*h*k1)
            k3 = field.evaluate(x + 0.5*h*k2)
            k4 = field.evaluate(x + h*k3)
            x = x + (h/6.0)*(k1 + 2.0*k2 + 2.0*k3 + k4)
            trajectory[i + 1] = x
    return trajectory


def initial_directions(dim: int, count: int=None, seed: int=None) -> np.ndarray:
    """(1,..,1)/sqrt(n) followed by ``count`` seeded random unit vectors, as columns"""
    count = defaults.random_directions if count is None else count
    seed = defaults.direction_seed if seed is None else seed
    rng = np.random.default_rng(seed)
    random = rng.standard_normal((dim, count))
    directions = np.hstack([np.ones((dim, 1))/math.sqrt(dim), random/np.linalg.norm(random, axis=0)])
    return directions


@dataclasses.dataclass
class FlowCheckReport:
    radii: List[float]
    errors: List[Optional[float]]
    fitted_order: float
    horizon: float
    steps: int
    blowups: List[float] = dataclasses.field(default_factory=list)

    def to_dict(self) -> dict:
        def number(v):
            if v is None or math.isnan(v):
                return None
            return 'inf' if math.isinf(v) else v
        return {'radii': list(self.radii), 'errors': [number(e) for e in self.errors],
                'fitted_order': number(self.fitted_order), 'horizon': self.horizon,
                'steps': self.steps, 'blowups': list(self.blowups)}


def fitted_order(radii: Sequence[float], errors: Sequence[Optional[float]]) -> float:
    """Slope of log(error) against log(radius).

    Radii with no error (blow-up) or zero error are left out.  All-zero errors
    give ``inf``; fewer than two usable points give ``nan``.
    """
    usable = [(r, e) for r, e in zip(radii, errors) if e is not None]
    positive = [(r, e) for r, e in usable if e > 0]
    if usable and not positive:
        return math.inf
    if len(positive) < 2:
        return math.nan
    r, e = np.array(positive).T
    return float(np.polyfit(np.log(r), np.log(e), 1)[0])


def flow_check(original: PolyVectorField, result: NormalFormResult, radii: Sequence[float]=None,
               T: float=None, steps: int=None) -> FlowCheckReport:
    """Compare the flows of a field and its normal form through the coordinate change.

    Parameters
    ----------
    original : PolyVectorField
        Source field, in y coordinates.
    result : NormalFormResult
        Normal form and generators computed from ``original``.
    radii : sequence of float, optional
        Strictly decreasing initial-condition norms.
    T : float, optional
        Time horizon.
    steps : int, optional
        RK4 steps over [0, T].

    Returns
    -------
    FlowCheckReport
    """
    radii = list(defaults.radii if radii is None else radii)
    T = defaults.horizon if T is None else T
    steps = defaults.rk4_steps if steps is None else steps
    if any(r <= 0 for r in radii) or any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError('radii must be positive and strictly decreasing')
    n = original.dim
    normal = result.nf.expand()
    change = CoordinateChange.from_result(result)

    directions = initial_directions(n)
    ndir = directions.shape[1]
    x0 = np.hstack([r*directions for r in radii])
    xs = rk4(normal, x0, T, steps)
    ys = rk4(original, change(x0), T, steps)
    flat = xs.transpose(1, 0, 2).reshape(n, -1)
    with np.errstate(over='ignore', invalid='ignore'):
        mapped = change(flat).reshape(n, steps + 1, -1).transpose(1, 0, 2)
        gap = np.linalg.norm(mapped - ys, axis=1)
        size = np.maximum(np.linalg.norm(xs, axis=1), np.linalg.norm(ys, axis=1))

    errors = []
    blowups = []
    for i, r in enumerate(radii):
        cols = slice(i*ndir, (i + 1)*ndir)
        if not np.all(np.isfinite(gap[:, cols])) or np.max(size[:, cols]) > defaults.blowup_norm:
            logger.warning('integration blew up at radius %g', r)
            errors.append(None)
            blowups.append(r)
        else:
            errors.append(float(np.max(gap[:, cols])))
    order = fitted_order(radii, errors)
    logger.info('flow check: errors %s, fitted order %.3f', errors, order)
    return FlowCheckReport(radii, errors, order, T, steps, blowups)
