"""Elimination by resultants and simultaneous root finding."""

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as npp

from ._config import DEFAULT_TOLERANCES
from ._poly import AXES, MPoly, UPoly, axis_index
from ._utils import QuarticFlexError

logger = logging.getLogger(__name__)


_EPS = np.finfo(float).eps


class ZeroPolynomial(QuarticFlexError):
    """Raised when an operation needs a polynomial that isn't identically zero."""


class DegenerateLeadingCoefficient(QuarticFlexError):
    """Raised when an elimination can't see every common solution.

    Either the leading coefficient in the eliminated variable vanishes
    identically, or a chart lacks the pure power of the eliminated variable
    so that solutions escape to infinity. Callers should switch charts.
    """


class AllCoefficientsBelowTolerance(QuarticFlexError):
    """Raised when every Taylor coefficient is negligible."""


class NonConvergence(QuarticFlexError):
    """Raised when simultaneous iteration doesn't settle on every root.

    Attributes
    ----------
    best : numpy.ndarray
        The last iterate.
    residuals : numpy.ndarray
        Backward errors of `best`.
    iterations : int
    """

    def __init__(self, msg, *, best, residuals, iterations):
        super().__init__(msg)
        self.best = best
        self.residuals = residuals
        self.iterations = iterations


@dataclass(frozen=True, slots=True)
class SylvesterMatrix:
    """Sylvester matrix of two univariate polynomials.

    The first ``deg q`` rows carry the coefficients of ``p`` (highest power
    first), each shifted one column to the right of the previous one, the
    remaining ``deg p`` rows carry ``q`` in the same way.

    Examples
    --------
    >>> S = sylvester_matrix(UPoly((-1, 1)), UPoly((1, 1)))
    >>> S.entries.real
    array([[ 1., -1.],
           [ 1.,  1.]])
    >>> S.determinant()
    (2+0j)
    """

    entries: np.ndarray = field(compare=False)
    degrees: tuple[int, int]

    @property
    def dimension(self):
        return sum(self.degrees)

    def determinant(self):
        if self.dimension == 0:
            return 1 + 0j
        return complex(np.linalg.det(self.entries))


def _highest_first(poly, degree):
    coeffs = np.zeros(degree + 1, dtype=complex)
    values = poly.to_numpy()
    if len(values) > degree + 1:
        msg = f"polynomial of degree {poly.degree()} exceeds the formal degree {degree}"
        raise ValueError(msg)
    coeffs[: len(values)] = values
    return coeffs[::-1]


def sylvester_matrix(p, q, *, degrees=None):
    """Build the Sylvester matrix of `p` and `q`.

    Parameters
    ----------
    p, q : UPoly
    degrees : tuple[int, int], optional
        Formal degrees of `p` and `q`. Leading coefficients beyond the actual
        degree are zero, so the matrix keeps its size when a leading
        coefficient vanishes at a particular evaluation.

    Returns
    -------
    matrix : SylvesterMatrix

    Examples
    --------
    >>> S = sylvester_matrix(UPoly((1,)), UPoly((1, 1)), degrees=(1, 1))
    >>> S.determinant().real
    -1.0
    """
    if degrees is None:
        if p.is_zero or q.is_zero:
            msg = "the Sylvester matrix of a zero polynomial is undefined"
            raise ZeroPolynomial(msg)
        degrees = (p.degree(), q.degree())
    m, n = degrees
    entries = np.zeros((m + n, m + n), dtype=complex)
    p_row = _highest_first(p, m)
    q_row = _highest_first(q, n)
    for r in range(n):
        entries[r, r : r + m + 1] = p_row
    for r in range(m):
        entries[n + r, r : r + n + 1] = q_row
    return SylvesterMatrix(entries, (m, n))


def resultant_univariate(p, q):
    """Resultant of two univariate polynomials.

    Parameters
    ----------
    p, q : UPoly

    Returns
    -------
    resultant : complex

    Raises
    ------
    ZeroPolynomial

    Examples
    --------
    >>> resultant_univariate(UPoly((-1, 1)), UPoly((1, 1)))
    (2+0j)
    """
    return sylvester_matrix(p, q).determinant()


def _bivariate_axes(p, q, eliminate):
    eliminated = AXES[axis_index(eliminate)]
    present = set(p.variables()) | set(q.variables())
    others = sorted(present - {eliminated}, key=AXES.index)
    if len(others) > 1:
        msg = (
            f"expected bivariate inputs, found variables {sorted(present)} "
            f"besides the eliminated {eliminated!r}"
        )
        raise ValueError(msg)
    if others:
        return eliminated, others[0]
    return eliminated, next(axis for axis in AXES if axis != eliminated)


def leading_coefficient_scale(poly, axis, degree):
    """Largest coefficient modulus among the terms with ``axis**degree``.

    Examples
    --------
    >>> x, y = MPoly.variable("x"), MPoly.variable("y")
    >>> leading_coefficient_scale(3 * x * y - 2 * x + 1, "x", 1)
    3.0
    """
    i = axis_index(axis)
    return max(
        (abs(c) for monomial, c in poly.terms if monomial[i] == degree), default=0.0
    )


def resultant_bivariate(p, q, eliminate, *, radius=1.3, leading_tol=1e-10):
    """Eliminate a variable from two bivariate polynomials.

    The eliminant is interpolated from numeric Sylvester determinants at
    ``deg p · deg q + 1`` nodes on a circle of `radius` in the surviving
    variable. The Sylvester matrices keep the degrees of `p` and `q` in the
    eliminated variable at every node, so leading coefficients that depend
    on the surviving variable are fine.

    Parameters
    ----------
    p, q : MPoly
        Polynomials in the eliminated and one surviving variable.
    eliminate : {"x", "y", "z"}
    radius : float, optional
        Radius of the circle carrying the interpolation nodes.
    leading_tol : float, optional
        Relative size below which every coefficient of the leading
        coefficient in the eliminated variable counts as zero.

    Returns
    -------
    eliminant : UPoly
        Polynomial in the surviving variable.

    Raises
    ------
    ZeroPolynomial
    DegenerateLeadingCoefficient

    Examples
    --------
    >>> x, y = MPoly.variable("x"), MPoly.variable("y")
    >>> R = resultant_bivariate(y - x, y + x, "y")
    >>> R.var, R.degree()
    ('x', 1)
    >>> complex(np.round(R.coeffs[1], 12))
    (2+0j)
    >>> R = resultant_bivariate(x * y - 1, y - x, "y")
    >>> R.degree(), round(R(0.5).real, 12)
    (2, 0.75)
    """
    if p.is_zero or q.is_zero:
        msg = "can't eliminate from a zero polynomial"
        raise ZeroPolynomial(msg)
    eliminated, surviving = _bivariate_axes(p, q, eliminate)
    i = axis_index(eliminated)
    m, n = p.degree_in(i), q.degree_in(i)
    if m < 1 or n < 1:
        msg = f"both inputs need positive degree in {eliminated!r}"
        raise ValueError(msg)

    for name, poly, degree in (("first", p, m), ("second", q, n)):
        leading = leading_coefficient_scale(poly, eliminated, degree)
        if leading <= leading_tol * poly.scale:
            msg = (
                f"the coefficient of {eliminated}^{degree} in the {name} input "
                f"vanishes identically (scale {leading:.3g}), switch charts"
            )
            raise DegenerateLeadingCoefficient(msg)

    bound = p.degree() * q.degree()
    count = bound + 1
    nodes = radius * np.exp(2j * np.pi * np.arange(count) / count)
    values = np.empty(count, dtype=complex)
    for k, node in enumerate(nodes):
        p_at = p.restrict(**{surviving: node}).to_upoly(eliminated)
        q_at = q.restrict(**{surviving: node}).to_upoly(eliminated)
        values[k] = sylvester_matrix(p_at, q_at, degrees=(m, n)).determinant()

    scaled = np.fft.fft(values) / count
    # Coefficients dominated by rounding noise at the top are not part of R
    noise = 1e-11 * np.max(np.abs(scaled))
    top = len(scaled)
    while top > 1 and abs(scaled[top - 1]) <= noise:
        top -= 1
    coeffs = scaled[:top] / radius ** np.arange(top)
    eliminant = UPoly(coeffs, var=surviving)
    logger.debug(
        "eliminated %s: eliminant of degree %i (Bézout bound %i)",
        eliminated,
        eliminant.degree(),
        bound,
    )
    return eliminant


def backward_error(p, value):
    """Return ``|p(z)| / Σ |c_k| |z|^k``, 0 when the denominator vanishes.

    Examples
    --------
    >>> backward_error(UPoly((-1, 1)), 1)
    0.0
    """
    coeffs = p.to_numpy()
    denominator = npp.polyval(abs(value), np.abs(coeffs)).real
    if denominator == 0:
        return 0.0
    return float(abs(npp.polyval(value, coeffs)) / denominator)


def aberth_ehrlich(
    coeffs, *, max_iters=200, step_tol=1e-13, start=None, accept_residual=None
):
    """Approximate all roots of a polynomial simultaneously.

    Parameters
    ----------
    coeffs : array_like
        Coefficients, lowest power first, with a nonzero last entry.
    max_iters : int, optional
    step_tol : float, optional
        A root is frozen once its Aberth step falls below
        ``step_tol * max(1, |z|)``, or once ``|p(z)|`` reaches the rounding
        bound of Horner evaluation.
    start : array_like, optional
        Initial approximations, by default points on a circle of the Cauchy
        radius.
    accept_residual : float, optional
        Roots still moving after `max_iters` are accepted if their backward
        error is at most this. Approximations of a multiple root converge
        only linearly and may never meet `step_tol`.

    Returns
    -------
    approximations : numpy.ndarray
    iterations : int

    Raises
    ------
    NonConvergence

    Examples
    --------
    >>> roots, _ = aberth_ehrlich([-2, 0, 1])
    >>> np.sort(roots.real).round(8)
    array([-1.41421356,  1.41421356])
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    degree = len(coeffs) - 1
    if degree < 1 or coeffs[-1] == 0:
        msg = "expected a polynomial of positive degree with nonzero leading coefficient"
        raise ValueError(msg)
    derivative = npp.polyder(coeffs)
    magnitudes = np.abs(coeffs)

    if start is None:
        cauchy = 1 + np.max(np.abs(coeffs[:-1] / coeffs[-1]))
        angles = 2 * np.pi * np.arange(degree) / degree + 0.4
        # Alternating radii keep the start free of the symmetries of the input
        radii = cauchy * np.where(np.arange(degree) % 2, 0.9, 1.0)
        z = radii * np.exp(1j * angles)
    else:
        z = np.array(start, dtype=complex)
        if z.shape != (degree,):
            msg = f"expected {degree} initial approximations, got shape {z.shape}"
            raise ValueError(msg)
    active = np.ones(degree, dtype=bool)

    iterations = 0
    for iterations in range(1, max_iters + 1):
        index = np.flatnonzero(active)
        if not index.size:
            break
        current = z[index]
        value = npp.polyval(current, coeffs)
        slope = npp.polyval(current, derivative)
        rounding = 4 * degree * _EPS * npp.polyval(np.abs(current), magnitudes).real
        at_rounding = np.abs(value) <= rounding

        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = value / slope
            differences = current[:, None] - z[None, :]
            differences[np.arange(len(index)), index] = np.inf
            repulsion = np.sum(1 / differences, axis=1)
            step = ratio / (1 - ratio * repulsion)
        stuck = ~np.isfinite(step)
        step[stuck] = 1e-3 * np.maximum(1, np.abs(current[stuck]))
        step[at_rounding] = 0

        z[index] = current - step
        settled = at_rounding | (
            (np.abs(step) <= step_tol * np.maximum(1, np.abs(current))) & ~stuck
        )
        active[index[settled]] = False

    if active.any():
        polynomial = UPoly(coeffs)
        residuals = np.array([backward_error(polynomial, v) for v in z])
        if accept_residual is not None:
            small = active & (residuals <= accept_residual)
            if small.any():
                logger.debug(
                    "accepted %i moving roots with backward error at most %.3g",
                    int(small.sum()),
                    residuals[small].max(),
                )
            active &= ~small
    if active.any():
        msg = (
            f"Aberth-Ehrlich iteration left {int(active.sum())} of {degree} roots "
            f"unsettled after {max_iters} iterations "
            f"(max backward error {residuals.max():.3g})"
        )
        raise NonConvergence(msg, best=z, residuals=residuals, iterations=max_iters)

    logger.debug("Aberth-Ehrlich settled %i roots in %i iterations", degree, iterations)
    return z, iterations


@dataclass(frozen=True, slots=True)
class RootCluster:
    value: complex
    members: tuple[complex, ...]
    diameter: float

    @property
    def multiplicity(self):
        return len(self.members)


def cluster_roots(values, tol):
    """Merge approximations closer than ``tol * max(1, |z|)`` transitively.

    Parameters
    ----------
    values : Sequence[complex]
    tol : float

    Returns
    -------
    clusters : list[RootCluster]
        Sorted by the real, then imaginary part of the cluster means.

    Examples
    --------
    >>> clusters = cluster_roots([2, 2 + 1e-9, -1], tol=1e-6)
    >>> [(round(c.value.real, 6), c.multiplicity) for c in clusters]
    [(-1.0, 1), (2.0, 2)]
    """
    values = [complex(v) for v in values]
    parent = list(range(len(values)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, u in enumerate(values):
        for j in range(i + 1, len(values)):
            v = values[j]
            if abs(u - v) <= tol * max(1.0, abs(u), abs(v)):
                parent[find(j)] = find(i)

    groups = {}
    for i, v in enumerate(values):
        groups.setdefault(find(i), []).append(v)

    clusters = []
    for members in groups.values():
        diameter = max((abs(u - v) for u in members for v in members), default=0.0)
        mean = complex(np.mean(members))
        if diameter > tol * max(1.0, abs(mean)):
            logger.warning(
                "merged a chain of %i roots near %s with diameter %.3g",
                len(members),
                mean,
                diameter,
            )
        clusters.append(RootCluster(mean, tuple(members), diameter))
    clusters.sort(key=lambda c: (c.value.real, c.value.imag))
    return clusters


def _approximate(coeffs, tolerances, max_iters):
    try:
        return aberth_ehrlich(
            coeffs, max_iters=max_iters, accept_residual=tolerances.residual
        )
    except NonConvergence as error:
        logger.info("%s, restarting from companion matrix eigenvalues", error)
    start = npp.polyroots(coeffs).astype(complex)
    # Exactly repeated eigenvalues would cancel in the Aberth correction
    start *= 1 + 1e-10 * np.exp(2j * np.pi * np.arange(len(start)) / len(start))
    return aberth_ehrlich(
        coeffs, max_iters=max_iters, start=start, accept_residual=tolerances.residual
    )


def merge_split_roots(p, clusters, *, tolerances=DEFAULT_TOLERANCES):
    """Merge clusters approximating one multiple root of `p`.

    Noise of relative size ``η`` in the coefficients splits a root of
    multiplicity ``m`` into approximations about ``η^(1/m)`` apart, well
    beyond the ``cluster`` radius. Clusters within ``√cluster`` of each
    other are merged if the common root, refined on the derivative of `p`,
    has a backward error of at most ``residual``.

    Parameters
    ----------
    p : UPoly
    clusters : list[RootCluster]
    tolerances : Tolerances, optional

    Returns
    -------
    clusters : list[RootCluster]

    Examples
    --------
    >>> p = UPoly.from_roots([1, 1, -2]) + 1e-11
    >>> clusters = cluster_roots(np.roots(p.to_numpy()[::-1]), 1e-6)
    >>> [c.multiplicity for c in clusters]
    [1, 1, 1]
    >>> [c.multiplicity for c in merge_split_roots(p, clusters)]
    [1, 2]
    """
    radius = math.sqrt(tolerances.cluster)
    clusters = list(clusters)
    rejected = set()
    while True:
        pairs = sorted(
            (abs(u.value - v.value), i, j)
            for (i, u), (j, v) in itertools.combinations(enumerate(clusters), 2)
            if abs(u.value - v.value) <= radius * max(1.0, abs(u.value), abs(v.value))
            and (u.members, v.members) not in rejected
        )
        if not pairs:
            break
        _, i, j = pairs[0]
        u, v = clusters[i], clusters[j]
        members = u.members + v.members
        diameter = max(abs(s - t) for s in members for t in members)
        joined = RootCluster(complex(np.mean(members)), members, diameter)
        value = _polish(p, joined)
        if backward_error(p, value) > tolerances.residual:
            rejected.add((u.members, v.members))
            continue
        logger.debug(
            "merged roots %s and %s split by %.3g into one of multiplicity %i",
            u.value,
            v.value,
            abs(u.value - v.value),
            joined.multiplicity,
        )
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append(RootCluster(value, members, diameter))
    clusters.sort(key=lambda c: (c.value.real, c.value.imag))
    return clusters


def _polish(p, cluster, steps=8):
    """Newton on ``p^(m-1)`` starting from the cluster mean."""
    target = p.derivative(cluster.multiplicity - 1)
    slope = target.derivative()
    z = cluster.value
    radius = max(10 * cluster.diameter, 1e-12 * max(1.0, abs(z)))
    for _ in range(steps):
        d = slope(z)
        if d == 0:
            break
        step = target(z) / d
        if not np.isfinite(step) or abs(z - step - cluster.value) > radius:
            break
        z -= step
        if abs(step) <= _EPS * max(1.0, abs(z)):
            break
    if backward_error(target, z) <= backward_error(target, cluster.value):
        return z
    return cluster.value


@dataclass(frozen=True, slots=True)
class RootSet:
    """All roots of a univariate polynomial grouped by multiplicity.

    Attributes
    ----------
    roots :
        Pairs ``(value, multiplicity)``, sorted by real then imaginary part.
    residuals :
        Backward error of each root value.
    diameters :
        Spread of the approximations merged into each root.
    iterations :
        Aberth-Ehrlich iterations spent.
    """

    roots: tuple[tuple[complex, int], ...]
    residuals: tuple[float, ...]
    diameters: tuple[float, ...] = ()
    iterations: int = 0

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def values(self):
        return tuple(value for value, _ in self.roots)

    @property
    def multiplicities(self):
        return tuple(multiplicity for _, multiplicity in self.roots)

    @property
    def total_multiplicity(self):
        return sum(self.multiplicities)

    def expanded(self):
        """Every root repeated according to its multiplicity."""
        return tuple(v for v, m in self.roots for _ in range(m))


def all_roots(p, *, tolerances=DEFAULT_TOLERANCES, max_iters=200):
    """Find all complex roots of `p` with their multiplicities.

    Parameters
    ----------
    p : UPoly
        Polynomial of positive degree.
    tolerances : Tolerances, optional
        Uses ``cluster`` to merge approximations into multiple roots and
        ``residual`` as the largest accepted backward error.
    max_iters : int, optional

    Returns
    -------
    root_set : RootSet

    Raises
    ------
    ZeroPolynomial
    NonConvergence

    Examples
    --------
    >>> roots = all_roots(UPoly.from_roots([2, 2, -1]))
    >>> [(round(v.real, 6), m) for v, m in roots]
    [(-1.0, 1), (2.0, 2)]
    """
    if p.is_zero:
        msg = "can't find the roots of the zero polynomial"
        raise ZeroPolynomial(msg)
    if p.degree() < 1:
        msg = f"expected a polynomial of positive degree, got degree {p.degree()}"
        raise ValueError(msg)

    coeffs = p.to_numpy()
    at_zero = int(np.argmax(coeffs != 0))
    deflated = coeffs[at_zero:]

    clusters = []
    iterations = 0
    if len(deflated) > 1:
        approximations, iterations = _approximate(deflated, tolerances, max_iters)
        clusters = cluster_roots(approximations, tolerances.cluster)
        clusters = merge_split_roots(p, clusters, tolerances=tolerances)

    roots, residuals, diameters = [], [], []
    for cluster in clusters:
        value = _polish(p, cluster)
        roots.append((complex(value), cluster.multiplicity))
        residuals.append(backward_error(p, value))
        diameters.append(cluster.diameter)
    if at_zero:
        roots.append((0j, at_zero))
        residuals.append(0.0)
        diameters.append(0.0)

    order = sorted(range(len(roots)), key=lambda k: (roots[k][0].real, roots[k][0].imag))
    root_set = RootSet(
        roots=tuple(roots[k] for k in order),
        residuals=tuple(residuals[k] for k in order),
        diameters=tuple(diameters[k] for k in order),
        iterations=iterations,
    )

    worst = max(root_set.residuals)
    if worst > tolerances.residual:
        msg = (
            f"roots of a degree {p.degree()} polynomial have backward error "
            f"{worst:.3g} above tolerance {tolerances.residual:.3g}"
        )
        raise NonConvergence(
            msg,
            best=np.array(root_set.expanded()),
            residuals=np.array(root_set.residuals),
            iterations=iterations,
        )
    return root_set


def vanishing_order(p, at, tol):
    """Order of vanishing of `p` at a point.

    Parameters
    ----------
    p : UPoly
    at : complex
    tol : float
        Taylor coefficients at most ``tol`` times the coefficient scale of
        `p`, its largest coefficient modulus, count as zero.

    Returns
    -------
    order : int

    Raises
    ------
    AllCoefficientsBelowTolerance

    Examples
    --------
    >>> vanishing_order(UPoly((0, 0, 0, -1, 1)), 0, 1e-6)
    3
    >>> vanishing_order(UPoly((0, 1e-9, 1)), 0, 1e-6)
    2
    """
    taylor = np.abs(p.taylor_coefficients(at))
    scale = p.scale
    significant = np.flatnonzero(taylor > tol * scale)
    if scale == 0 or not significant.size:
        msg = f"every Taylor coefficient of {p} at {at} is negligible"
        raise AllCoefficientsBelowTolerance(msg)
    return int(significant[0])
