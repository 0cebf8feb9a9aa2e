"""Flexes of smooth plane quartics.

Flexes are the common points of a quartic ``F`` and its Hessian curve. They
are located by eliminating one affine coordinate with a resultant, lifted
back to the curve, refined with Newton's method in projective coordinates
and finally classified by the contact order of their tangent line.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ._config import DEFAULT_TOLERANCES
from ._poly import AXES, MPoly, axis_index
from ._solve import (
    DegenerateLeadingCoefficient,
    all_roots,
    resultant_bivariate,
    vanishing_order,
)
from ._utils import QuarticFlexError, format_complex

logger = logging.getLogger(__name__)


#: Gap sequences of 1-Weierstrass points on a smooth quartic, by contact order
GAP_SEQUENCES = {3: (1, 2, 4), 4: (1, 2, 5)}


class NotHomogeneous(QuarticFlexError):
    """Raised when a form mixes terms of different total degree."""


class NotQuartic(QuarticFlexError):
    """Raised when a form isn't of degree four."""


class SingularPoint(QuarticFlexError):
    """Raised when the gradient of the curve vanishes at a point."""


class WeightSumMismatch(QuarticFlexError):
    """Raised when the flex weights don't add up to the expected count.

    Attributes
    ----------
    diagnostics : dict
    """

    def __init__(self, msg, *, diagnostics):
        super().__init__(msg)
        self.diagnostics = diagnostics


def _normalized(coords):
    coords = np.asarray(coords, dtype=complex)
    if coords.shape != (3,):
        msg = f"expected three homogeneous coordinates, got shape {coords.shape}"
        raise ValueError(msg)
    moduli = np.abs(coords)
    largest = moduli.max()
    if largest == 0 or not np.isfinite(largest):
        msg = f"invalid homogeneous coordinates {coords!r}"
        raise ValueError(msg)
    # Ties go to the last index
    pivot = np.flatnonzero(moduli >= largest * (1 - 1e-12))[-1]
    normalized = coords / coords[pivot]
    normalized[pivot] = 1
    return tuple(complex(c) for c in normalized)


def chordal_distance(p, q):
    """Sine of the angle between two points of the projective plane.

    Parameters
    ----------
    p, q : ProjPoint or array_like

    Returns
    -------
    distance : float
        In ``[0, 1]``, 0 iff `p` and `q` are the same projective point.

    Examples
    --------
    >>> chordal_distance([1, 2, 3], [2, 4, 6])
    0.0
    >>> round(chordal_distance([1, 0, 0], [0, 1, 0]), 12)
    1.0
    """
    u = np.asarray(p, dtype=complex)
    v = np.asarray(q, dtype=complex)
    # |u ∧ v| through Lagrange's identity, valid for complex vectors
    gram = np.vdot(u, u).real * np.vdot(v, v).real
    wedge = max(gram - abs(np.vdot(u, v)) ** 2, 0.0)
    return float(np.sqrt(wedge / gram))


@dataclass(frozen=True, slots=True, eq=False)
class ProjPoint:
    """Point of the complex projective plane.

    The coordinate of largest modulus is scaled to 1 (the last one if
    several tie). Points compare equal if their chordal distance is below
    the default `point_merge` tolerance.

    Examples
    --------
    >>> p = ProjPoint((0, 2, 4))
    >>> p
    ProjPoint(coords=(0j, (0.5+0j), (1+0j)))
    >>> p == ProjPoint((0, 1, 2 + 1e-9))
    True
    >>> print(ProjPoint((1, 1j, 1)))
    [1:1i:1]
    """

    coords: tuple[complex, complex, complex]

    def __post_init__(self):
        object.__setattr__(self, "coords", _normalized(self.coords))

    def __array__(self, dtype=None, copy=None):
        return np.array(self.coords, dtype=dtype or complex)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return 3

    def __getitem__(self, index):
        return self.coords[index]

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def isclose(self, other, *, tol=DEFAULT_TOLERANCES.point_merge):
        return chordal_distance(self, other) <= tol

    def to_numpy(self):
        return np.array(self.coords, dtype=complex)

    def sort_key(self):
        return tuple(part for c in self.coords for part in (c.real, c.imag))

    def is_on_axis_line(self, axis, *, tol=DEFAULT_TOLERANCES.point_merge):
        """Whether the `axis` coordinate vanishes, e.g. ``axis="x"`` for x = 0."""
        return abs(self.coords[axis_index(axis)]) <= tol

    def __str__(self):
        rendered = ":".join(format_complex(_rounded(c)) for c in self.coords)
        return f"[{rendered}]"


def _rounded(value, digits=6):
    value = complex(round(value.real, digits), round(value.imag, digits))
    # Drop negative zeros left over by rounding
    return complex(value.real + 0.0, value.imag + 0.0)


@dataclass(frozen=True, slots=True)
class TangentLine:
    """Tangent line ``u·x + v·y + w·z = 0`` at a point of a curve.

    Attributes
    ----------
    coeffs :
        ``(u, v, w)``, the gradient of the curve at `base_point`.
    base_point :
    direction :
        A second point of the line, distinct from `base_point`.
    """

    coeffs: tuple[complex, complex, complex]
    base_point: ProjPoint
    direction: ProjPoint

    def __call__(self, point):
        return complex(np.dot(self.coeffs, np.asarray(point, dtype=complex)))

    def as_form(self):
        return MPoly.linear_form(self.coeffs)

    def parametrization(self, F):
        """Return ``t ↦ F(base_point + t·direction)``."""
        return F.along_line(self.base_point.to_numpy(), self.direction.to_numpy())


@dataclass(frozen=True, slots=True, kw_only=True)
class FlexRecord:
    """A classified 1-Weierstrass point of a smooth quartic.

    Examples
    --------
    >>> record = FlexRecord.from_contact_order(ProjPoint((0, 1, 1j)), 4)
    >>> record.weight, record.flex_order, record.gap_sequence
    (2, 2, (1, 2, 5))
    """

    point: ProjPoint
    contact_order: int
    flex_order: int
    weight: int
    gap_sequence: tuple[int, int, int]

    def __post_init__(self):
        if self.contact_order not in GAP_SEQUENCES:
            msg = f"a flex has contact order 3 or 4, got {self.contact_order}"
            raise ValueError(msg)
        expected = (
            self.contact_order - 2,
            self.contact_order - 2,
            GAP_SEQUENCES[self.contact_order],
        )
        if (self.flex_order, self.weight, tuple(self.gap_sequence)) != expected:
            msg = (
                f"inconsistent flex record for contact order {self.contact_order}: "
                f"flex order {self.flex_order}, weight {self.weight}, "
                f"gap sequence {self.gap_sequence}"
            )
            raise ValueError(msg)

    @classmethod
    def from_contact_order(cls, point, contact_order):
        return cls(
            point=point,
            contact_order=contact_order,
            flex_order=contact_order - 2,
            weight=contact_order - 2,
            gap_sequence=GAP_SEQUENCES.get(contact_order, ()),
        )

    @property
    def is_hyperflex(self):
        return self.contact_order == 4

    def to_dict(self):
        return {
            "point": [[c.real, c.imag] for c in self.point.coords],
            "contact_order": self.contact_order,
            "weight": self.weight,
            "gap_sequence": list(self.gap_sequence),
        }


def _check_form(F, *, degree=None):
    if F.is_zero or not F.is_homogeneous():
        msg = "expected a nonzero homogeneous form"
        raise NotHomogeneous(msg)
    if degree is not None and F.degree() != degree:
        msg = f"expected a form of degree {degree}, got degree {F.degree()}"
        raise NotQuartic(msg)


def hessian(F):
    """Determinant of the matrix of second partial derivatives of `F`.

    Parameters
    ----------
    F : MPoly
        Homogeneous form.

    Returns
    -------
    H : MPoly

    Raises
    ------
    NotHomogeneous

    Examples
    --------
    >>> from quarticflex._poly import parse_polynomial
    >>> hessian(parse_polynomial("x^4 + y^4 + z^4")).as_dict()
    {(2, 2, 2): (1728+0j)}
    """
    _check_form(F)
    first = F.gradient()
    m = [[first[i].partial(j) for j in AXES] for i in range(3)]
    H = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    logger.debug("Hessian of a degree %i form has %i terms", F.degree(), len(H.terms))
    return H


def gradient_at(F, point):
    """Values of the three partial derivatives of `F` at `point`."""
    point = np.asarray(point, dtype=complex)
    return np.array([partial(point) for partial in F.gradient()])


def tangent_at(F, point, *, tolerances=DEFAULT_TOLERANCES):
    """Tangent line of the curve ``F = 0`` at `point`.

    Parameters
    ----------
    F : MPoly
    point : ProjPoint
    tolerances : Tolerances, optional

    Returns
    -------
    line : TangentLine

    Raises
    ------
    SingularPoint
        If the gradient is negligible at `point`.

    Examples
    --------
    >>> from quarticflex._poly import parse_polynomial
    >>> F = parse_polynomial("x^4 + y^4 + z^4")
    >>> line = tangent_at(F, ProjPoint((1, 0, np.exp(1j * np.pi / 4))))
    >>> abs(line(line.base_point)) < 1e-12, abs(line(line.direction)) < 1e-12
    (True, True)
    """
    point = point if isinstance(point, ProjPoint) else ProjPoint(point)
    base = point.to_numpy()
    scale = max(1.0, F.scale)
    value = abs(F(base))
    if value > tolerances.on_curve * scale:
        msg = f"point {point} is not on the curve (|F| = {value:.3g})"
        raise ValueError(msg)

    gradient = gradient_at(F, base)
    if np.linalg.norm(gradient) <= tolerances.smoothness * scale:
        msg = f"the curve is singular at {point}"
        raise SingularPoint(msg)

    # g·(g × p̄) = 0 while g ∥ p̄ is impossible on the curve, so the direction
    # is a second point of the line
    direction = np.cross(gradient, base.conj())
    return TangentLine(
        coeffs=tuple(complex(c) for c in gradient),
        base_point=point,
        direction=ProjPoint(direction),
    )


def contact_order(F, line, *, tolerances=DEFAULT_TOLERANCES):
    """Intersection multiplicity of `line` and the curve at its base point.

    Parameters
    ----------
    F : MPoly
    line : TangentLine
    tolerances : Tolerances, optional
        ``contact`` decides when a Taylor coefficient counts as zero.

    Returns
    -------
    order : int
        2 for an ordinary point, 3 for an ordinary flex, 4 for a hyperflex.
    """
    restricted = line.parametrization(F)
    return vanishing_order(restricted, 0, tolerances.contact)


def expected_count(g, q=1):
    """Number of q-Weierstrass points of a genus `g` curve, counted with weights.

    Examples
    --------
    >>> expected_count(3, 1), expected_count(2, 1), expected_count(3, 2)
    (24, 6, 108)
    """
    if g < 2 or q < 1:
        msg = f"expected genus >= 2 and q >= 1, got g={g}, q={q}"
        raise ValueError(msg)
    if q == 1:
        return g * (g**2 - 1)
    return (2 * q - 1) ** 2 * (g - 1) ** 2 * g


def _householder(vector):
    v = np.asarray(vector, dtype=complex)
    return np.eye(3) - 2 * np.outer(v, v.conj()) / np.vdot(v, v).real


#: Unitary changes of coordinates putting flexes in general position, tried in
#: turn until the flex weights add up
GENERAL_POSITIONS = (
    _householder([1, 0.37 + 0.61j, -0.53 + 0.29j]),
    _householder([0.41 - 0.22j, 1, 0.67 + 0.48j]),
    _householder([-0.58 + 0.31j, 0.26 - 0.71j, 1]),
)


@dataclass(slots=True)
class _Search:
    """Settings and bookkeeping of one flex search."""

    F: MPoly
    H: MPoly
    tolerances: object
    max_iters: int
    radius: float
    newton_iters: int
    transform: np.ndarray = field(default_factory=lambda: GENERAL_POSITIONS[0])
    stats: dict = field(default_factory=dict)

    def candidates(self, chart):
        """Solutions of ``F = H = 0`` in the transformed coordinates."""
        G = self.F.substitute_linear(self.transform)
        K = self.H.substitute_linear(self.transform)
        c = axis_index(chart)
        surviving, eliminated = (axis for axis in AXES if axis != chart)
        s, e = axis_index(surviving), axis_index(eliminated)

        g, h = G.restrict(**{chart: 1}), K.restrict(**{chart: 1})
        _require_pure_powers(g, h, eliminated)
        eliminant = resultant_bivariate(g, h, eliminated, radius=self.radius)
        self.stats["eliminant_degree"] = eliminant.degree()

        found = []
        if eliminant.degree() >= 1:
            roots = all_roots(
                eliminant, tolerances=self.tolerances, max_iters=self.max_iters
            )
            self.stats["eliminant_residual"] = max(roots.residuals)
            self.stats["eliminant_iterations"] = roots.iterations
            self.stats["eliminant_multiple_roots"] = sum(m > 1 for m in roots.multiplicities)
            for value, multiplicity in roots:
                lifts = self._lift(g, h, surviving, eliminated, value, multiplicity)
                for lifted in lifts:
                    q = np.zeros(3, dtype=complex)
                    q[c], q[s], q[e] = 1, value, lifted
                    found.append(q)

        # The line at infinity of the chart
        at_infinity = G.restrict(**{chart: 0, eliminated: 1})
        if at_infinity.degree() >= 1:
            for value, _ in all_roots(
                at_infinity, tolerances=self.tolerances, max_iters=self.max_iters
            ):
                q = np.zeros(3, dtype=complex)
                q[s], q[e] = value, 1
                found.append(q)
        if at_infinity.degree() < G.degree():
            q = np.zeros(3, dtype=complex)
            q[s] = 1
            found.append(q)
        self.stats["candidates"] = len(found)
        return [self.transform @ q for q in found]

    def _lift(self, g, h, surviving, eliminated, value, multiplicity=1):
        """Points of ``g = 0`` over `value` where `h` nearly vanishes.

        A multiple root of the eliminant may stand for several flexes with
        almost the same surviving coordinate, so it keeps more of the fiber.
        """
        fiber = g.restrict(**{surviving: value}).to_upoly(eliminated)
        if fiber.degree() < 1:
            return []
        values = all_roots(
            fiber, tolerances=self.tolerances, max_iters=self.max_iters
        ).values
        scale = max(1.0, h.scale)
        mismatch = [
            abs(_evaluate_pair(h, surviving, value, eliminated, e))
            / (scale * max(1.0, abs(value), abs(e)) ** h.degree())
            for e in values
        ]
        slack = 1e-4 if multiplicity == 1 else 1e-2
        best = min(mismatch)
        return [e for e, m in zip(values, mismatch, strict=True) if m <= max(best, slack)]

    def refine(self, point):
        """Projective Newton on ``F = H = 0`` with a moving affine normalization."""
        equations = (self.F * (1 / self.F.scale), self.H * (1 / self.H.scale))
        gradients = [eq.gradient() for eq in equations]
        p = np.asarray(point, dtype=complex)
        p = p / p[np.argmax(np.abs(p))]
        anchor = p.conj() / np.vdot(p, p).real
        for _ in range(self.newton_iters):
            residual = np.array([eq(p) for eq in equations] + [anchor @ p - 1])
            jacobian = np.array(
                [[d(p) for d in grad] for grad in gradients] + [anchor]
            )
            step = np.linalg.lstsq(jacobian, residual, rcond=None)[0]
            p = p - step
            if np.linalg.norm(step) <= 1e-15 * np.linalg.norm(p):
                break
        return ProjPoint(p)

    def accept(self, point):
        p = point.to_numpy()
        on_curve = abs(self.F(p)) / max(1.0, self.F.scale)
        on_hessian = abs(self.H(p)) / max(1.0, self.H.scale)
        accepted = (
            on_curve <= self.tolerances.on_curve
            and on_hessian <= self.tolerances.hessian
        )
        if not accepted:
            logger.debug(
                "discarded candidate %s (|F| = %.3g, |H| = %.3g)",
                point,
                on_curve,
                on_hessian,
            )
        return accepted

    def polish_hyperflex(self, point, steps=12, h=1e-6):
        """Gauss-Newton on ``F = 0`` and vanishing tangent terms of order 2 and 3.

        Both curves of ``F = H = 0`` touch at a hyperflex, where the Newton
        steps of :meth:`refine` converge only linearly. The hyperflex is a
        regular solution of the system used here.

        Returns
        -------
        polished : ProjPoint or None
            ``None`` if the iteration doesn't reach a hyperflex close to `point`.
        """
        F = self.F * (1 / self.F.scale)
        gradient = F.gradient()
        p = point.to_numpy()
        p = p / p[np.argmax(np.abs(p))]
        anchor = p.conj() / np.vdot(p, p).real
        # Constant, so that the residual stays holomorphic in q
        reference = p.conj()

        def residual(q):
            direction = np.cross([d(q) for d in gradient], reference)
            terms = np.zeros(5, dtype=complex)
            values = F.along_line(q, direction).to_numpy()
            terms[: len(values)] = values
            return np.array([terms[0], terms[2], terms[3], anchor @ q - 1])

        for _ in range(steps):
            jacobian = np.empty((4, 3), dtype=complex)
            for j in range(3):
                shift = np.zeros(3, dtype=complex)
                shift[j] = h
                jacobian[:, j] = (residual(p + shift) - residual(p - shift)) / (2 * h)
            step = np.linalg.lstsq(jacobian, residual(p), rcond=None)[0]
            if not np.all(np.isfinite(step)):
                return None
            p = p - step
            if np.linalg.norm(step) <= 1e-15 * np.linalg.norm(p):
                break

        polished = ProjPoint(p)
        if chordal_distance(polished, point) > 1e-3 or not self.accept(polished):
            return None
        line = tangent_at(self.F, polished, tolerances=self.tolerances)
        if contact_order(self.F, line, tolerances=self.tolerances) != 4:
            return None
        return polished

    def classify(self, point):
        line = tangent_at(self.F, point, tolerances=self.tolerances)
        restricted = line.parametrization(self.F)
        order = contact_order(self.F, line, tolerances=self.tolerances)
        terms = np.abs(restricted.to_numpy())
        near_hyperflex = len(terms) > 3 and terms[3] <= 1e-3 * terms.max()
        if order == 4 or (order == 3 and near_hyperflex):
            polished = self.polish_hyperflex(point)
            if polished is not None:
                if order == 3:
                    logger.debug("refined %s to the hyperflex %s", point, polished)
                point, order = polished, 4
        if order < 3:
            logger.debug("discarded %s, contact order %i", point, order)
            return None
        if order > 4:
            msg = f"contact order {order} at {point} exceeds the degree of the curve"
            raise WeightSumMismatch(msg, diagnostics=dict(self.stats))
        return FlexRecord.from_contact_order(point, order)

    def run(self, chart):
        points = []
        for candidate in self.candidates(chart):
            point = self.refine(candidate)
            if not self.accept(point):
                continue
            if any(point.isclose(other, tol=self.tolerances.point_merge) for other in points):
                continue
            points.append(point)

        records = []
        for record in map(self.classify, points):
            if record:
                _add_record(records, record, tol=self.tolerances.point_merge)
        records.sort(key=lambda r: r.point.sort_key())
        self.stats["weight_sum"] = sum(r.weight for r in records)
        self.stats["chart"] = chart
        return records


def _add_record(records, record, *, tol):
    """Append `record` unless its point is known, keeping the higher contact order."""
    for k, other in enumerate(records):
        if record.point.isclose(other.point, tol=tol):
            if record.contact_order > other.contact_order:
                records[k] = record
            return
    records.append(record)


def _require_pure_powers(g, h, eliminated):
    """Raise unless `g` and `h` contain the top pure power of `eliminated`.

    Otherwise common solutions escape to infinity along `eliminated` and the
    eliminant of the chart misses them.
    """
    i = axis_index(eliminated)
    for name, poly in (("curve", g), ("Hessian", h)):
        exponents = [0, 0, 0]
        exponents[i] = poly.degree()
        leading = abs(poly.coefficient(exponents))
        if leading <= 1e-10 * poly.scale:
            msg = (
                f"the {name} has no {eliminated}^{poly.degree()} term "
                f"(|coefficient| = {leading:.3g}), switch charts"
            )
            raise DegenerateLeadingCoefficient(msg)


def _evaluate_pair(poly, first_axis, first, second_axis, second):
    point = [0j, 0j, 0j]
    point[axis_index(first_axis)] = first
    point[axis_index(second_axis)] = second
    return poly(point)


def find_flexes(
    F,
    *,
    tolerances=DEFAULT_TOLERANCES,
    chart=None,
    max_iters=200,
    interpolation_radius=1.3,
    newton_iters=60,
    stats=None,
):
    """Find and classify all flexes of a smooth plane quartic.

    Parameters
    ----------
    F : MPoly
        Homogeneous quartic form of a smooth curve.
    tolerances : Tolerances, optional
    chart : {"z", "y", "x"}, optional
        Affine chart used for the elimination. By default the charts are
        tried in this order until one has a usable leading coefficient.
        Each of the coordinate changes in `GENERAL_POSITIONS` is searched in
        turn and the flexes found are merged, until their weights add up.
    max_iters : int, optional
        Iteration limit of the root finder.
    interpolation_radius : float, optional
    newton_iters : int, optional
        Newton steps when refining a candidate.
    stats : dict, optional
        Updated in place with diagnostics of the search.

    Returns
    -------
    flexes : list[FlexRecord]
        Sorted by the real and imaginary parts of the normalized coordinates.

    Raises
    ------
    NotHomogeneous
    NotQuartic
    DegenerateLeadingCoefficient
        If no chart is usable.
    WeightSumMismatch
        If the weights don't add up to 24, even after a retry with
        tightened tolerances.

    Examples
    --------
    >>> from quarticflex._poly import parse_polynomial
    >>> flexes = find_flexes(parse_polynomial("x^4 + y^4 + z^4"))
    >>> len(flexes), {r.contact_order for r in flexes}
    (12, {4})
    """
    _check_form(F, degree=4)
    H = hessian(F)
    stats = {} if stats is None else stats
    charts = [chart] if chart is not None else ["z", "y", "x"]
    expected = expected_count(3)

    attempts = [(tolerances, newton_iters), (tolerances.tightened(4), 2 * newton_iters)]
    weight = 0
    for attempt, (current, iterations) in enumerate(attempts):
        records = []
        for k, transform in enumerate(GENERAL_POSITIONS):
            search = _Search(
                F=F,
                H=H,
                tolerances=current,
                max_iters=max_iters,
                radius=interpolation_radius,
                newton_iters=iterations,
                transform=transform,
            )
            for record in _run_in_charts(search, charts):
                _add_record(records, record, tol=100 * current.point_merge)
            weight = sum(r.weight for r in records)
            stats.update(search.stats, weight_sum=weight, transforms=k + 1, attempt=attempt)
            if weight >= expected:
                break

        if weight == expected:
            records.sort(key=lambda r: r.point.sort_key())
            logger.info(
                "found %i flexes (%i hyperflexes) in chart %s",
                len(records),
                sum(r.is_hyperflex for r in records),
                stats["chart"],
            )
            return records
        logger.warning(
            "flex weights add up to %i instead of %i, retrying with tighter tolerances",
            weight,
            expected,
        )

    msg = f"flex weights add up to {weight} instead of {expected}"
    raise WeightSumMismatch(msg, diagnostics=dict(stats))


def _run_in_charts(search, charts):
    for chart in charts:
        try:
            return search.run(chart)
        except DegenerateLeadingCoefficient as error:
            logger.info("chart %s=1 unusable: %s", chart, error)
            last_error = error
    raise last_error
