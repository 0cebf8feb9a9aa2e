"""Finite groups of projective transformations acting on plane curves."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._config import DEFAULT_TOLERANCES
from ._geometry import ProjPoint
from ._solve import all_roots
from ._utils import QuarticFlexError

logger = logging.getLogger(__name__)


class NotAGroup(QuarticFlexError):
    """Raised when a set of transformations isn't closed under composition."""


class NonInvariantCurve(QuarticFlexError):
    """Raised when a curve isn't mapped to itself by every group element."""


class MixedWeightOrbit(QuarticFlexError):
    """Raised when the flexes of one orbit don't share their contact order."""


def _canonical_matrix(matrix):
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (3, 3):
        msg = f"expected a 3x3 matrix, got shape {matrix.shape}"
        raise ValueError(msg)
    det = np.linalg.det(matrix)
    scale = np.max(np.abs(matrix))
    if scale == 0 or abs(det) <= 1e-10 * scale**3:
        msg = f"transformation is not invertible (det = {det:.3g})"
        raise ValueError(msg)
    flat = matrix.ravel()
    moduli = np.abs(flat)
    pivot = np.flatnonzero(moduli >= moduli.max() * (1 - 1e-12))[-1]
    return matrix / flat[pivot]


@dataclass(frozen=True, slots=True, eq=False)
class Transform:
    """Projective transformation, stored up to scale.

    The matrix is scaled so that its largest entry (the last one among ties)
    equals 1. Transforms compare equal if their canonical matrices agree.

    Examples
    --------
    >>> sigma = Transform.diagonal(-1, 1, 1)
    >>> print(sigma(ProjPoint((1, 2, 1))))
    [-0.5:1:0.5]
    >>> sigma @ sigma == Transform.identity()
    True
    >>> Transform(2 * np.eye(3)) == Transform.identity()
    True
    """

    matrix: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _canonical_matrix(self.matrix))

    @classmethod
    def identity(cls):
        return cls(np.eye(3), name="id")

    @classmethod
    def diagonal(cls, *entries, name=""):
        return cls(np.diag(np.asarray(entries, dtype=complex)), name=name)

    def __matmul__(self, other):
        if not isinstance(other, Transform):
            return NotImplemented
        name = "".join(n for n in (self.name, other.name) if n and n != "id")
        return Transform(self.matrix @ other.matrix, name=name or "id")

    def __eq__(self, other):
        if not isinstance(other, Transform):
            return NotImplemented
        return bool(np.allclose(self.matrix, other.matrix, rtol=0, atol=1e-9))

    __hash__ = None

    def inverse(self):
        return Transform(np.linalg.inv(self.matrix), name=self.name)

    def is_identity(self):
        return self == Transform.identity()

    def apply(self, point):
        """Image of `point`, renormalized."""
        return ProjPoint(self.matrix @ np.asarray(point, dtype=complex))

    __call__ = apply

    def __repr__(self):
        return f"<{type(self).__name__} {self.name or '?'}>"


def apply(transform, point):
    return transform.apply(point)


@dataclass(frozen=True, slots=True)
class GroupAction:
    """A finite group of projective transformations.

    Examples
    --------
    >>> H = klein_four()
    >>> len(H), [g.name for g in H]
    (4, ['id', 'σ', 'τ', 'στ'])
    """

    elements: tuple[Transform, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        self._validate()

    def _validate(self):
        if not any(g.is_identity() for g in self.elements):
            msg = "group has no identity element"
            raise NotAGroup(msg)
        for g in self.elements:
            if g.inverse() not in self.elements:
                msg = f"inverse of {g!r} is missing"
                raise NotAGroup(msg)
            for h in self.elements:
                if g @ h not in self.elements:
                    msg = f"{g!r} @ {h!r} is not an element"
                    raise NotAGroup(msg)

    @classmethod
    def generated_by(cls, *generators, max_order=1024):
        """Close a set of generators under composition.

        Raises
        ------
        NotAGroup
            If the closure exceeds `max_order` elements.
        """
        elements = [Transform.identity()]
        frontier = list(elements)
        while frontier:
            new = []
            for g in frontier:
                for s in generators:
                    candidate = g @ s
                    if candidate not in elements and candidate not in new:
                        new.append(candidate)
            elements.extend(new)
            frontier = new
            if len(elements) > max_order:
                msg = f"generated group exceeds {max_order} elements"
                raise NotAGroup(msg)
        logger.debug("generated a group of order %i", len(elements))
        return cls(tuple(elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def order(self):
        return len(self.elements)


def klein_four():
    """The sign flip group generated by ``σ = diag(-1, 1, 1)`` and ``τ = diag(1, -1, 1)``."""
    sigma = Transform.diagonal(-1, 1, 1, name="σ")
    tau = Transform.diagonal(1, -1, 1, name="τ")
    return GroupAction.generated_by(sigma, tau)


@dataclass(frozen=True, slots=True)
class Orbit:
    """Images of a point under a group.

    Attributes
    ----------
    points :
        Distinct images, the first one is the representative.
    stabilizer_order :
        ``|G| / len(points)``.
    """

    points: tuple[ProjPoint, ...]
    stabilizer_order: int

    @property
    def size(self):
        return len(self.points)

    @property
    def representative(self):
        return self.points[0]

    def __contains__(self, point):
        return any(point.isclose(p) for p in self.points)


def orbit(G, point, *, tol=DEFAULT_TOLERANCES.point_merge):
    """Orbit of `point` under `G`.

    Examples
    --------
    >>> H = klein_four()
    >>> orbit(H, ProjPoint((0, 0.5, 1))).size
    2
    >>> orbit(H, ProjPoint((0.3, 0.5, 1))).size
    4
    >>> orbit(H, ProjPoint((0, 0, 1))).stabilizer_order
    4
    """
    point = point if isinstance(point, ProjPoint) else ProjPoint(point)
    images = []
    for g in G:
        image = g(point)
        if not any(image.isclose(other, tol=tol) for other in images):
            images.append(image)
    if len(G) % len(images):
        msg = f"orbit of size {len(images)} in a group of order {len(G)}"
        raise NotAGroup(msg)
    return Orbit(points=tuple(images), stabilizer_order=len(G) // len(images))


def stabilizer(G, point, *, tol=DEFAULT_TOLERANCES.point_merge):
    """Elements of `G` fixing `point`.

    Examples
    --------
    >>> [g.name for g in stabilizer(klein_four(), ProjPoint((0, 0.5, 1)))]
    ['id', 'σ']
    """
    point = point if isinstance(point, ProjPoint) else ProjPoint(point)
    return [g for g in G if g(point).isclose(point, tol=tol)]


def is_invariant(F, G, *, rel_tol=1e-10):
    """Whether ``F ∘ g`` is a multiple of `F` for every element ``g``.

    Examples
    --------
    >>> from quarticflex._poly import parse_polynomial
    >>> is_invariant(parse_polynomial("x^4 + y^4 + z^4 + 3*x^2*y^2"), klein_four())
    True
    >>> is_invariant(parse_polynomial("x^3*y + z^4"), klein_four())
    False
    """
    if F.is_zero:
        return True
    (monomial, coefficient), *_ = F.terms
    for g in G:
        image = F.substitute_linear(g.matrix)
        ratio = image.coefficient(monomial) / coefficient
        if ratio == 0 or not image.isclose(F * ratio, rel_tol=rel_tol):
            return False
    return True


def _eigenspaces(matrix, tol=1e-9):
    eigenvalues = np.linalg.eigvals(matrix)
    distinct = []
    for value in eigenvalues:
        if not any(abs(value - other) <= tol * max(1.0, abs(other)) for other in distinct):
            distinct.append(value)
    spaces = []
    for value in distinct:
        _, singular, vh = np.linalg.svd(matrix - value * np.eye(3))
        rank = int(np.sum(singular > tol * max(1.0, singular.max())))
        spaces.append(vh[rank:].conj())
    return spaces


def _fixed_points_on_curve(F, matrix, tolerances):
    found = []
    for basis in _eigenspaces(matrix):
        if len(basis) == 1:
            candidate = ProjPoint(basis[0])
            if abs(F(candidate.to_numpy())) <= tolerances.on_curve * max(1.0, F.scale):
                found.append(candidate)
        elif len(basis) == 2:
            u, v = basis
            binary = F.along_line(u, v)
            if binary.degree() >= 1:
                roots = all_roots(binary, tolerances=tolerances)
                found.extend(ProjPoint(u + t * v) for t in roots.values)
            if binary.degree() < F.degree():
                found.append(ProjPoint(v))
    return found


def fixed_locus(G, F, *, tolerances=DEFAULT_TOLERANCES):
    """Points of the curve ``F = 0`` with a nontrivial stabilizer, as orbits.

    Every element of `G` is diagonalized: each of its fixed lines meets the
    curve in the roots of a binary form, each isolated fixed point is kept if
    it lies on the curve.

    Parameters
    ----------
    G : GroupAction
    F : MPoly
    tolerances : Tolerances, optional

    Returns
    -------
    orbits : list[Orbit]
        Sorted by representative, the smallest point of each orbit.

    Raises
    ------
    NonInvariantCurve
    """
    if not is_invariant(F, G):
        msg = "the curve is not invariant under the group"
        raise NonInvariantCurve(msg)

    points = []
    for g in G:
        if g.is_identity():
            continue
        for point in _fixed_points_on_curve(F, g.matrix, tolerances):
            if not any(point.isclose(p, tol=tolerances.point_merge) for p in points):
                points.append(point)

    orbits = _partition(G, points, tolerances)
    logger.debug(
        "fixed locus: %i points in orbits of sizes %s",
        len(points),
        [o.size for o in orbits],
    )
    return orbits


def _partition(G, points, tolerances):
    orbits = []
    for point in sorted(points, key=ProjPoint.sort_key):
        if any(point in o for o in orbits):
            continue
        orbits.append(orbit(G, point, tol=tolerances.point_merge))
    return orbits


class FlexOrbit(NamedTuple):
    orbit: Orbit
    contact_order: int
    weight: int


def orbit_decomposition(G, flexes, *, tolerances=DEFAULT_TOLERANCES):
    """Partition the flexes of a `G`-invariant curve into orbits.

    Parameters
    ----------
    G : GroupAction
    flexes : list[FlexRecord]
        All flexes of the curve.
    tolerances : Tolerances, optional

    Returns
    -------
    orbits : list[FlexOrbit]

    Raises
    ------
    MixedWeightOrbit
        If an image of a flex is not a flex or has another contact order.
    """
    by_point = sorted(flexes, key=lambda r: r.point.sort_key())
    assigned = [False] * len(by_point)
    decomposition = []
    for i, record in enumerate(by_point):
        if assigned[i]:
            continue
        current = orbit(G, record.point, tol=tolerances.point_merge)
        for image in current.points:
            matches = [
                j
                for j, other in enumerate(by_point)
                if image.isclose(other.point, tol=tolerances.point_merge)
            ]
            if not matches:
                msg = f"image {image} of the flex {record.point} is not a flex"
                raise MixedWeightOrbit(msg)
            other = by_point[matches[0]]
            if other.contact_order != record.contact_order:
                msg = (
                    f"flexes {record.point} and {other.point} lie in one orbit but "
                    f"have contact orders {record.contact_order} and "
                    f"{other.contact_order}"
                )
                raise MixedWeightOrbit(msg)
            assigned[matches[0]] = True
        decomposition.append(FlexOrbit(current, record.contact_order, record.weight))
    return decomposition


def shape_of(orbits):
    """Render orbit sizes as ``count_size`` groups by ascending size.

    Examples
    --------
    >>> H = klein_four()
    >>> shape_of([orbit(H, (0, 0.5, 1)), orbit(H, (0.2, 0.5, 1)), orbit(H, (0, 2, 1))])
    '2_2, 1_4'
    >>> shape_of([])
    ''
    """
    counts = Counter(o.size for o in orbits)
    return ", ".join(f"{counts[size]}_{size}" for size in sorted(counts))


def orbit_shape(flex_orbits, *, empty=""):
    """Orbit shape of a flex decomposition, ordinary part first.

    Returns
    -------
    ordinary : str
    hyperflex : str
    combined : str
        The nonempty parts joined by ``" + "``.
    """
    ordinary = shape_of([fo.orbit for fo in flex_orbits if fo.contact_order == 3])
    hyper = shape_of([fo.orbit for fo in flex_orbits if fo.contact_order == 4])
    combined = " + ".join(part for part in (ordinary, hyper) if part)
    return ordinary or empty, hyper or empty, combined or empty
