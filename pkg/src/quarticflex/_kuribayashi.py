"""The three parameter Kuribayashi quartics.

``C(a, b, c): x⁴ + y⁴ + z⁴ + a·x²y² + b·x²z² + c·y²z² = 0``

The family is invariant under the sign flips of the coordinates. Its flexes
on the coordinate lines are governed by the special loci

- ``P1 = a² + b² - abc`` for the line x = 0,
- ``P2 = a² + c² - abc`` for the line y = 0,
- ``P3 = b² + c² - abc`` for the line z = 0,

and the number of vanishing loci decides which classification table
applies.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._config import DEFAULT_TOLERANCES
from ._geometry import (
    ProjPoint,
    chordal_distance,
    contact_order,
    expected_count,
    find_flexes,
    hessian,
    tangent_at,
)
from ._group import klein_four, orbit_decomposition, orbit_shape
from ._poly import MPoly
from ._solve import ZeroPolynomial, all_roots, resultant_univariate
from ._utils import QuarticFlexError, format_complex

logger = logging.getLogger(__name__)


#: Constant of the resultant identities for the determinant Hessian, ``72**4``
RESULTANT_CONSTANT = 72**4

#: Constant printed with the resultant identities in the literature
PRINTED_RESULTANT_CONSTANT = 2985984


class NotSmooth(QuarticFlexError):
    """Raised for parameters of a singular curve.

    Attributes
    ----------
    factors : tuple[str, ...]
        Names of the vanishing factors of the smoothness condition.
    """

    def __init__(self, msg, *, factors):
        super().__init__(msg)
        self.factors = factors


class TableMismatch(QuarticFlexError):
    """Raised when a classification contradicts every row of its table.

    Attributes
    ----------
    report : ClassificationReport
    """

    def __init__(self, msg, *, report):
        super().__init__(msg)
        self.report = report


def _parameter_scale(a, b, c):
    return abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + 1


@dataclass(frozen=True, slots=True)
class Params:
    """Parameters ``(a, b, c)`` of a Kuribayashi quartic.

    Examples
    --------
    >>> Params(1, 0, 0).smooth()
    False
    >>> Params(0, 0, 0).smooth()
    True
    >>> print(Params(3, 3, 0).permuted((2, 1, 0)))
    (0, 3, 3)
    """

    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    @property
    def scale(self):
        """``|a|² + |b|² + |c|² + 1``, the scale of the locus decisions."""
        return _parameter_scale(self.a, self.b, self.c)

    def smoothness_factors(self):
        """Values of the factors of the smoothness condition."""
        a, b, c = self
        return {
            "a^2-1": a**2 - 1,
            "b^2-1": b**2 - 1,
            "c^2-1": c**2 - 1,
            "a^2-4": a**2 - 4,
            "b^2-4": b**2 - 4,
            "c^2-4": c**2 - 4,
            "a^2+b^2+c^2-abc-4": a**2 + b**2 + c**2 - a * b * c - 4,
        }

    def vanishing_factors(self, tol=DEFAULT_TOLERANCES.smoothness):
        return tuple(
            name
            for name, value in self.smoothness_factors().items()
            if abs(value) <= tol * self.scale
        )

    def smooth(self, tol=DEFAULT_TOLERANCES.smoothness):
        return not self.vanishing_factors(tol)

    def check_smooth(self, tol=DEFAULT_TOLERANCES.smoothness):
        """Raise :class:`NotSmooth` naming the vanishing factors, if any."""
        factors = self.vanishing_factors(tol)
        if factors:
            msg = f"curve {self} is singular: factor {', '.join(factors)} vanishes"
            raise NotSmooth(msg, factors=factors)

    def permuted(self, order):
        """Parameters of ``F(x[order[0]], x[order[1]], x[order[2]])``."""
        permuted = build_curve(self, check=False).substitute_linear(
            permutation_matrix(order)
        )
        return Params(
            permuted.coefficient((2, 2, 0)),
            permuted.coefficient((2, 0, 2)),
            permuted.coefficient((0, 2, 2)),
        )

    def to_dict(self):
        return {name: [value.real, value.imag] for name, value in zip("abc", self)}

    def __str__(self):
        return "({})".format(", ".join(format_complex(v) for v in self))


def permutation_matrix(order):
    """Matrix ``P`` with ``(P·v)[i] = v[order[i]]``."""
    if sorted(order) != [0, 1, 2]:
        msg = f"expected a permutation of (0, 1, 2), got {order!r}"
        raise ValueError(msg)
    return np.eye(3)[list(order)]


def build_curve(params, *, check=True, tol=DEFAULT_TOLERANCES.smoothness):
    """Quartic form of ``C(a, b, c)``.

    Examples
    --------
    >>> build_curve(Params(3, 3, 0)).to_text()
    '(1.0+0.0i)*x^4 + (3.0+0.0i)*x^2*y^2 + (3.0+0.0i)*x^2*z^2 + (1.0+0.0i)*y^4 + (1.0+0.0i)*z^4'
    >>> build_curve(Params(1, 0, 0))
    Traceback (most recent call last):
      ...
    quarticflex._kuribayashi.NotSmooth: curve (1, 0, 0) is singular: factor a^2-1 vanishes
    """
    params = params if isinstance(params, Params) else Params(*params)
    if check:
        params.check_smooth(tol)
    a, b, c = params
    return MPoly(
        {
            (4, 0, 0): 1,
            (0, 4, 0): 1,
            (0, 0, 4): 1,
            (2, 2, 0): a,
            (2, 0, 2): b,
            (0, 2, 2): c,
        }
    )


class Slice(NamedTuple):
    """A coordinate line and the data governing flexes on it."""

    name: str
    #: Coordinate vanishing on the line
    axis: str
    #: Coordinate set to 1 in the affine chart of the line
    chart: str
    locus: str
    #: Parameter of the quartic ``t⁴ + s·t² + 1`` cut out on the line
    quadratic: str


SLICES = (
    Slice("x=0", "x", "z", "P1", "c"),
    Slice("y=0", "y", "z", "P2", "b"),
    Slice("z=0", "z", "y", "P3", "a"),
)


def special_loci_values(params):
    a, b, c = params
    return {
        "P1": a**2 + b**2 - a * b * c,
        "P2": a**2 + c**2 - a * b * c,
        "P3": b**2 + c**2 - a * b * c,
    }


@dataclass(frozen=True, slots=True, kw_only=True)
class SpecialLoci:
    """Values of the special loci and the resulting case.

    Examples
    --------
    >>> SpecialLoci.from_params(Params(6, 0, 0)).case
    'I'
    >>> SpecialLoci.from_params(Params(1.2, 6 / 5**0.5, 6 / 5**0.5)).case
    'II'
    >>> SpecialLoci.from_params(Params(3, 3, 0)).case
    'IV'
    """

    P1: complex
    P2: complex
    P3: complex
    vanishing: tuple[str, ...]
    case: str

    @classmethod
    def from_params(cls, params, *, tolerances=DEFAULT_TOLERANCES):
        values = special_loci_values(params)
        threshold = tolerances.locus * params.scale
        vanishing = tuple(name for name, value in values.items() if abs(value) <= threshold)
        zero_params = sum(abs(v) <= threshold for v in params)

        if zero_params >= 2:
            case = "I"
        elif len(vanishing) >= 2:
            case = "II"
        elif len(vanishing) == 1:
            case = "III"
        else:
            case = "IV"

        for name, value in values.items():
            if name not in vanishing and abs(value) <= 1e-4 * params.scale:
                logger.warning(
                    "%s = %s is small but above the locus tolerance, "
                    "treated as nonzero",
                    name,
                    format_complex(value),
                )
        return cls(**values, vanishing=vanishing, case=case)

    def near_misses(self, scale, *, tolerances=DEFAULT_TOLERANCES):
        """Names of loci close to zero without vanishing."""
        return tuple(
            name
            for name in ("P1", "P2", "P3")
            if name not in self.vanishing
            and abs(getattr(self, name)) <= 1e-4 * scale
        )

    def to_dict(self):
        return {
            name: [getattr(self, name).real, getattr(self, name).imag]
            for name in ("P1", "P2", "P3")
        }


def _principal_sqrt(value):
    return complex(np.sqrt(complex(value)))


def hyperflex_branch_parameters(b, c):
    """Both values of ``a`` with ``P1 = a² + b² - abc = 0``.

    The first one puts hyperflexes at ``[0:±β:1]``, the second one at
    ``[0:±1/β:1]``, where ``β² = (-c - √(c² - 4)) / 2`` with the principal
    square root.

    Examples
    --------
    >>> first, second = hyperflex_branch_parameters(3, 4)
    >>> round(first.real, 6), round(second.real, 6)
    (0.803848, 11.196152)
    """
    b, c = complex(b), complex(c)
    root = _principal_sqrt(c**2 - 4)
    return (b * c - b * root) / 2, (b * c + b * root) / 2


def _slice_roots_squared(s):
    """``(β², 1/β²)`` for the quartic ``t⁴ + s·t² + 1``."""
    root = _principal_sqrt(s**2 - 4)
    return (-s - root) / 2, (-s + root) / 2


def _branch_formulas(params, slice_):
    """Closed form conditions for hyperflexes on a coordinate line.

    Every formula is ``(label, lhs, rhs)``, the condition holds when both
    sides agree.
    """
    a, b, c = params
    r = _principal_sqrt
    if slice_.name == "x=0":
        return [
            ("a = (bc - b√(c²-4))/2", a, (b * c - b * r(c**2 - 4)) / 2),
            ("a = (bc + b√(c²-4))/2", a, (b * c + b * r(c**2 - 4)) / 2),
        ]
    if slice_.name == "y=0":
        return [
            ("a = (bc - c√(b²-4))/2", a, (b * c - c * r(b**2 - 4)) / 2),
            ("a = (bc + c√(b²-4))/2", a, (b * c + c * r(b**2 - 4)) / 2),
        ]
    # Two closed forms are in use for z = 0, the first one actually solves P2
    return [
        ("a = (bc - c√(b²-4))/2", a, (b * c - c * r(b**2 - 4)) / 2),
        ("a = (bc + c√(b²-4))/2", a, (b * c + c * r(b**2 - 4)) / 2),
        ("b = (ac - c√(a²-4))/2", b, (a * c - c * r(a**2 - 4)) / 2),
        ("b = (ac + c√(a²-4))/2", b, (a * c + c * r(a**2 - 4)) / 2),
    ]


@dataclass(frozen=True, slots=True, kw_only=True)
class SliceReport:
    """Hyperflexes on one coordinate line.

    Attributes
    ----------
    slice :
        ``"x=0"``, ``"y=0"`` or ``"z=0"``.
    locus :
        Name of the special locus governing the line.
    value :
        Value of the special locus.
    vanishes :
        Whether the locus vanishes within tolerance.
    branch :
        ``"beta"`` or ``"inverse_beta"``: the orbit hit by the hyperflexes,
        decided by membership, ``None`` if the line carries no flex.
    matched_formulas :
        Closed form conditions satisfied by the parameters.
    points :
        Flexes on the line.
    contact_orders :
        Contact orders at `points`.
    """

    slice: str
    locus: str
    value: complex
    vanishes: bool
    branch: str | None
    matched_formulas: tuple[str, ...]
    points: tuple[ProjPoint, ...]
    contact_orders: tuple[int, ...]

    @property
    def positive(self):
        return bool(self.points)

    def to_dict(self):
        return {
            "slice": self.slice,
            "locus": self.locus,
            "value": [self.value.real, self.value.imag],
            "vanishes": self.vanishes,
            "branch": self.branch,
            "matched_formulas": list(self.matched_formulas),
            "points": [[[c.real, c.imag] for c in p.coords] for p in self.points],
            "contact_orders": list(self.contact_orders),
        }


def _slice_points(F, slice_, tolerances):
    """Points of the curve on a coordinate line, in the chart of the line."""
    free = next(axis for axis in "xyz" if axis not in (slice_.axis, slice_.chart))
    binary = F.restrict(**{slice_.axis: 0, slice_.chart: 1})
    points = []
    for value in all_roots(binary, tolerances=tolerances).values:
        coords = {slice_.axis: 0, slice_.chart: 1, free: value}
        points.append((value, ProjPoint([coords[axis] for axis in "xyz"])))
    return points


def special_flex_conditions(params, *, tolerances=DEFAULT_TOLERANCES):
    """Decide for every coordinate line whether it carries hyperflexes.

    Parameters
    ----------
    params : Params
    tolerances : Tolerances, optional

    Returns
    -------
    reports : tuple[SliceReport, SliceReport, SliceReport]
        For the lines x = 0, y = 0 and z = 0.

    Examples
    --------
    >>> first, _ = hyperflex_branch_parameters(3, 4)
    >>> x0, y0, z0 = special_flex_conditions(Params(first, 3, 4))
    >>> x0.vanishes, x0.branch, x0.contact_orders
    (True, 'beta', (4, 4))
    >>> y0.positive, z0.positive
    (False, False)
    """
    params.check_smooth(tolerances.smoothness)
    F = build_curve(params)
    loci = special_loci_values(params)
    threshold = tolerances.locus * params.scale
    reports = []
    for slice_ in SLICES:
        value = loci[slice_.locus]
        hits, orders = [], []
        beta_squared, inverse_squared = _slice_roots_squared(getattr(params, slice_.quadratic))
        branches = set()
        for coordinate, point in _slice_points(F, slice_, tolerances):
            line = tangent_at(F, point, tolerances=tolerances)
            order = contact_order(F, line, tolerances=tolerances)
            if order < 3:
                continue
            hits.append(point)
            orders.append(order)
            square = coordinate**2
            if abs(square - beta_squared) <= abs(square - inverse_squared):
                branches.add("beta")
            else:
                branches.add("inverse_beta")

        vanishes = abs(value) <= threshold
        if vanishes != bool(hits):
            logger.warning(
                "%s = %s but the line %s carries %i flexes",
                slice_.locus,
                format_complex(value),
                slice_.name,
                len(hits),
            )
        matched = tuple(
            label
            for label, lhs, rhs in _branch_formulas(params, slice_)
            if abs(lhs - rhs) <= 1e-6 * math.sqrt(params.scale)
        )
        reports.append(
            SliceReport(
                slice=slice_.name,
                locus=slice_.locus,
                value=value,
                vanishes=vanishes,
                branch=" + ".join(sorted(branches)) if branches else None,
                matched_formulas=matched if hits else (),
                points=tuple(hits),
                contact_orders=tuple(orders),
            )
        )
    return tuple(reports)


class TableRow(NamedTuple):
    case: str
    ordinary: int
    hyperflex: int
    ordinary_shape: str
    hyperflex_shape: str
    condition: str = ""

    @property
    def label(self):
        text = f"{self.case}: {self.ordinary}/{self.hyperflex}"
        return f"{text} ({self.condition})" if self.condition else text


#: Number and orbit shape of ordinary flexes and hyperflexes per case
CLASSIFICATION_TABLES = {
    "I": (
        TableRow("I", 0, 12, "", "2_2, 2_4", "a = 0, 6"),
        TableRow("I", 16, 4, "4_4", "2_2", "otherwise"),
    ),
    "II": (
        TableRow("II", 16, 4, "4_4", "2_2"),
        TableRow("II", 8, 8, "2_4", "2_2, 1_4"),
        TableRow("II", 0, 12, "", "2_2, 2_4"),
    ),
    "III": (
        TableRow("III", 20, 2, "5_4", "1_2"),
        TableRow("III", 12, 6, "3_4", "1_2, 1_4"),
        TableRow("III", 4, 10, "1_4", "1_2, 2_4"),
    ),
    "IV": (
        TableRow("IV", 24, 0, "6_4", ""),
        TableRow("IV", 16, 4, "4_4", "1_4"),
        TableRow("IV", 8, 8, "2_4", "2_4"),
        TableRow("IV", 0, 12, "", "3_4"),
    ),
}

UNMATCHED = "unmatched"


@dataclass(frozen=True, slots=True, kw_only=True)
class ClassificationReport:
    """Flexes of one Kuribayashi quartic and the table row they realize."""

    params: Params
    case: str
    ordinary_count: int
    hyperflex_count: int
    ordinary_shape: str
    hyperflex_shape: str
    orbit_shape: str
    flexes: tuple
    orbits: tuple
    table_row: str
    loci: SpecialLoci
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        weight = self.ordinary_count + 2 * self.hyperflex_count
        if weight != expected_count(3):
            msg = f"flex weights add up to {weight}"
            raise ValueError(msg)

    @property
    def matched(self):
        return self.table_row != UNMATCHED

    def raise_for_mismatch(self):
        """Raise :class:`TableMismatch` if no table row matches."""
        if not self.matched:
            reason = self.diagnostics.get("mismatch", "")
            msg = (
                f"classification of {self.params} (case {self.case}: "
                f"{self.ordinary_count}/{self.hyperflex_count}, "
                f"{self.orbit_shape or '—'}) matches no table row. {reason}"
            ).strip()
            raise TableMismatch(msg, report=self)
        return self

    def to_dict(self):
        return {
            "params": self.params.to_dict(),
            "case": self.case,
            "ordinary": self.ordinary_count,
            "hyperflex": self.hyperflex_count,
            "orbit_shape": self.orbit_shape,
            "table_row": self.table_row,
            "flexes": [record.to_dict() for record in self.flexes],
            "diagnostics": self.diagnostics,
        }


def _match_row(case, ordinary, hyperflex, ordinary_shape, hyperflex_shape):
    """Return the matching row label and, if none matches, the reason."""
    rows = CLASSIFICATION_TABLES[case]
    counted = [r for r in rows if (r.ordinary, r.hyperflex) == (ordinary, hyperflex)]
    for row in counted:
        if (row.ordinary_shape, row.hyperflex_shape) == (ordinary_shape, hyperflex_shape):
            return row.label, None
    if counted:
        expected = ", ".join(
            f"{r.ordinary_shape or '—'} + {r.hyperflex_shape or '—'}" for r in counted
        )
        return UNMATCHED, (
            f"counts match row {counted[0].label} but the orbit shape "
            f"{ordinary_shape or '—'} + {hyperflex_shape or '—'} differs from {expected}"
        )
    return UNMATCHED, f"no row of case {case} has {ordinary}/{hyperflex} flexes"


def classify(params, *, tolerances=DEFAULT_TOLERANCES, **solver_options):
    """Classify the flexes of a Kuribayashi quartic.

    Parameters
    ----------
    params : Params or tuple of complex
    tolerances : Tolerances, optional
    **solver_options
        Forwarded to :func:`~quarticflex._geometry.find_flexes`.

    Returns
    -------
    report : ClassificationReport

    Raises
    ------
    NotSmooth
    WeightSumMismatch
    MixedWeightOrbit
    """
    params = params if isinstance(params, Params) else Params(*params)
    F = build_curve(params, tol=tolerances.smoothness)
    stats = {}
    flexes = find_flexes(F, tolerances=tolerances, stats=stats, **solver_options)
    flex_orbits = orbit_decomposition(klein_four(), flexes, tolerances=tolerances)
    ordinary_shape, hyperflex_shape, combined = orbit_shape(flex_orbits)

    loci = SpecialLoci.from_params(params, tolerances=tolerances)
    ordinary = sum(not r.is_hyperflex for r in flexes)
    hyperflex = sum(r.is_hyperflex for r in flexes)
    row, reason = _match_row(loci.case, ordinary, hyperflex, ordinary_shape, hyperflex_shape)

    diagnostics = {
        "ordinary_shape": ordinary_shape,
        "hyperflex_shape": hyperflex_shape,
        "loci": loci.to_dict(),
        "vanishing_loci": list(loci.vanishing),
        "near_loci": list(loci.near_misses(params.scale, tolerances=tolerances)),
        "orbits": [
            {
                "size": fo.orbit.size,
                "stabilizer_order": fo.orbit.stabilizer_order,
                "contact_order": fo.contact_order,
                "weight": fo.weight,
                "representative": [[c.real, c.imag] for c in fo.orbit.representative],
            }
            for fo in flex_orbits
        ],
        "search": {key: stats[key] for key in sorted(stats)},
    }
    if reason:
        diagnostics["mismatch"] = reason
        logger.warning("%s: %s", params, reason)

    report = ClassificationReport(
        params=params,
        case=loci.case,
        ordinary_count=ordinary,
        hyperflex_count=hyperflex,
        ordinary_shape=ordinary_shape,
        hyperflex_shape=hyperflex_shape,
        orbit_shape=combined,
        flexes=tuple(flexes),
        orbits=tuple(flex_orbits),
        table_row=row,
        loci=loci,
        diagnostics=diagnostics,
    )
    logger.info(
        "%s: case %s, %i ordinary + %i hyperflexes, %s",
        params,
        report.case,
        ordinary,
        hyperflex,
        row,
    )
    return report


class ResultantCheck(NamedTuple):
    """Numeric resultant of a coordinate line against its closed form."""

    slice: str
    numeric: complex
    closed_form: complex
    relative_error: float
    #: ``numeric`` divided by the value built with the printed constant
    printed_ratio: complex | None


def verify_resultant_identities(params):
    """Compare the resultants on the coordinate lines with their closed forms.

    On the line x = 0 this is ``Res_y(F(0,y,1), H(0,y,1)) = 72⁴·P1²·(c²-4)⁴``,
    the lines y = 0 and z = 0 follow by symmetry. Works for singular
    parameters too.

    Returns
    -------
    checks : tuple[ResultantCheck, ResultantCheck, ResultantCheck]

    Examples
    --------
    >>> checks = verify_resultant_identities(Params(3, 3, 0))
    >>> max(check.relative_error for check in checks) < 1e-9
    True
    >>> round(checks[0].printed_ratio.real, 9)
    9.0
    """
    params = params if isinstance(params, Params) else Params(*params)
    F = build_curve(params, check=False)
    H = hessian(F)
    loci = special_loci_values(params)
    checks = []
    for slice_ in SLICES:
        pinned = {slice_.axis: 0, slice_.chart: 1}
        try:
            numeric = resultant_univariate(F.restrict(**pinned), H.restrict(**pinned))
        except ZeroPolynomial:
            numeric = 0j
        parameter = getattr(params, slice_.quadratic)
        shape = loci[slice_.locus] ** 2 * (parameter**2 - 4) ** 4
        closed = RESULTANT_CONSTANT * shape
        floor = (
            1e-12
            * RESULTANT_CONSTANT
            * params.scale**2
            * (abs(parameter) ** 2 + 4) ** 4
        )
        denominator = max(abs(closed), abs(numeric), floor)
        printed = PRINTED_RESULTANT_CONSTANT * shape
        checks.append(
            ResultantCheck(
                slice=slice_.name,
                numeric=numeric,
                closed_form=closed,
                relative_error=abs(numeric - closed) / denominator,
                printed_ratio=numeric / printed if printed != 0 else None,
            )
        )
    return tuple(checks)


def random_params(rng, *, bound=4.0, tolerances=DEFAULT_TOLERANCES):
    """Draw smooth parameters with real and imaginary parts in ``[-bound, bound]``.

    Singular draws are rejected and drawn again.
    """
    while True:
        values = rng.uniform(-bound, bound, size=6)
        params = Params(*(complex(values[i], values[i + 1]) for i in (0, 2, 4)))
        if params.smooth(tolerances.smoothness):
            return params
        logger.debug("rejected singular parameters %s", params)


def sweep_resultant_identities(
    samples,
    *,
    seed=0,
    threshold=1e-8,
    tolerances=DEFAULT_TOLERANCES,
):
    """Check the resultant identities and the hyperflex criterion at random.

    For every sample the three resultant identities are compared with their
    closed forms. The parameter ``a`` is then moved onto both branches of
    ``P1 = 0``, where the two points of the curve on x = 0 must be
    hyperflexes.

    Parameters
    ----------
    samples : int
    seed : int, optional
    threshold : float, optional
        Largest accepted relative error.
    tolerances : Tolerances, optional

    Returns
    -------
    summary : dict
        Plain data, see :func:`~quarticflex._report.render_verification`.
    """
    if samples == 0:
        logger.warning("no samples drawn, the verification passes vacuously")
    rng = np.random.default_rng(seed)
    max_error = 0.0
    ratios = []
    contact_checks = contact_failures = 0
    for index in range(samples):
        params = random_params(rng, tolerances=tolerances)
        for check in verify_resultant_identities(params):
            max_error = max(max_error, check.relative_error)
            if check.printed_ratio is not None:
                ratios.append(check.printed_ratio)

        for branch in hyperflex_branch_parameters(params.b, params.c):
            on_locus = Params(branch, params.b, params.c)
            if not on_locus.smooth(tolerances.smoothness):
                continue
            contact_checks += 1
            x0 = special_flex_conditions(on_locus, tolerances=tolerances)[0]
            if x0.contact_orders != (4, 4):
                contact_failures += 1
                logger.warning(
                    "sample %i: contact orders %s on x=0 for %s",
                    index,
                    x0.contact_orders,
                    on_locus,
                )

    printed_ratio = float(np.median(np.real(ratios))) if ratios else 0.0
    return {
        "samples": samples,
        "seed": seed,
        "identities": 3,
        "max_relative_error": max_error,
        "threshold": threshold,
        "printed_ratio": printed_ratio,
        "contact_checks": contact_checks,
        "contact_failures": contact_failures,
        "passed": max_error <= threshold and contact_failures == 0,
    }


@dataclass(frozen=True, slots=True, kw_only=True)
class TwoParameterReport:
    """Classification of ``C(a, b, b)`` against the two parameter tables."""

    report: ClassificationReport
    P: complex
    block: str
    consistent: bool

    def to_dict(self):
        data = self.report.to_dict()
        data["diagnostics"] = {
            **data["diagnostics"],
            "P": [self.P.real, self.P.imag],
            "block": self.block,
            "consistent": self.consistent,
        }
        return data


#: Allowed (ordinary, hyperflex) counts of ``C(a, b, b)``
TWO_PARAMETER_TABLES = {
    "b=0": ((0, 12), (16, 4)),
    "P=0": ((16, 4), (8, 8), (0, 12)),
    "P!=0": ((24, 0), (16, 4), (8, 8), (0, 12)),
}


def two_parameter_reduction(a, b, *, tolerances=DEFAULT_TOLERANCES, **solver_options):
    """Classify ``C(a, b, b)`` and check it against the tables of ``P(a, b)``.

    ``P(a, b) = a² + b² - ab²`` is the common value of ``P1`` and ``P2`` when
    ``b = c``.

    Returns
    -------
    report : TwoParameterReport
    """
    a, b = complex(a), complex(b)
    params = Params(a, b, b)
    report = classify(params, tolerances=tolerances, **solver_options)
    P = a**2 + b**2 - a * b**2
    threshold = tolerances.locus * params.scale
    if abs(b) <= threshold:
        block = "b=0"
    elif abs(P) <= threshold:
        block = "P=0"
    else:
        block = "P!=0"
    counts = (report.ordinary_count, report.hyperflex_count)
    consistent = counts in TWO_PARAMETER_TABLES[block]
    if block == "P=0":
        consistent = consistent and report.hyperflex_count > 0
    if not consistent:
        logger.warning(
            "C(a, b, b) with %s has %i/%i flexes, not in its table",
            block,
            *counts,
        )
    return TwoParameterReport(report=report, P=P, block=block, consistent=consistent)


@dataclass(frozen=True, slots=True, kw_only=True)
class WorkedExample:
    """A published parameter set with its stated flexes.

    ``None`` marks what the publication leaves unstated.
    """

    name: str
    params: Params
    ordinary: int | None = None
    hyperflex: int | None = None
    ordinary_shape: str | None = None
    hyperflex_shape: str | None = None
    representatives: tuple[tuple[complex, complex, complex], ...] = ()
    discrepancy: str | None = None


def worked_examples():
    """Catalogue of published examples, one or more per case.

    Examples
    --------
    >>> [example.name for example in worked_examples()][:3]
    ['I(a=0)', 'I(a=6)', 'II(1)']
    """
    sqrt = _principal_sqrt
    return (
        WorkedExample(
            name="I(a=0)",
            params=Params(0, 0, 0),
            ordinary=0,
            hyperflex=12,
            ordinary_shape="",
            hyperflex_shape="2_2, 2_4",
            discrepancy=(
                "the twelve hyperflexes of the Fermat quartic all lie on the "
                "coordinate lines, so they form six orbits of size 2 (6_2)"
            ),
        ),
        WorkedExample(
            name="I(a=6)",
            params=Params(6, 0, 0),
            ordinary=0,
            hyperflex=12,
            ordinary_shape="",
            hyperflex_shape="2_2, 2_4",
        ),
        WorkedExample(
            name="II(1)",
            params=Params(3, 3, 1.5 * (3 - math.sqrt(5))),
            ordinary=16,
            hyperflex=4,
            ordinary_shape="4_4",
            hyperflex_shape="2_2",
            representatives=(
                (-0.618034j, 0, 1),
                (-0.618034j, 1, 0),
                (-0.765842 - 0.868419j, -0.12504 + 0.992152j, 1),
                (-0.765842 + 0.868419j, -0.12504 - 0.992152j, 1),
                (0.521157 - 0.432432j, 0.184489 + 0.982835j, 1),
                (0.521157 + 0.432432j, -0.184489 - 0.982835j, 1),
            ),
            discrepancy=(
                "the real part of y in the fifth representative has the wrong "
                "sign; the parameters are real, so the flex meant is the complex "
                "conjugate of the sixth, (0.521157-0.432432i, -0.184489+0.982835i, 1)"
            ),
        ),
        WorkedExample(
            name="II(2)",
            params=Params(
                3 / 8 * (5 + 1j * math.sqrt(7)),
                -sqrt(27 / 8 + 9j / (8 * math.sqrt(7))),
                -1.5 * sqrt((21 + 1j * math.sqrt(7)) / 14),
            ),
            ordinary=8,
            hyperflex=8,
            ordinary_shape="2_4",
            hyperflex_shape="2_2, 1_4",
            representatives=(
                (0, 0.91156 - 0.196214j, 1),
                (-0.91156 + 0.196214j, 0, 1),
                (0.651994 + 0.0981069j, -0.651994 - 0.0981069j, 1),
                (0.530835 + 0.40233j, -1.24444 + 0.212546j, 1),
                (-1.24444 + 0.212546j, 0.530835 + 0.40233j, 1),
            ),
        ),
        WorkedExample(
            name="II(3)",
            params=Params(6 / 5, 6 / math.sqrt(5), 6 / math.sqrt(5)),
            ordinary=0,
            hyperflex=12,
        ),
        WorkedExample(
            name="III(1)",
            params=Params(3, 6 - 3 * math.sqrt(3), 4),
            ordinary=20,
            hyperflex=2,
            ordinary_shape="5_4",
            hyperflex_shape="1_2",
            representatives=(
                (3.72978, 2.2488j, 1),
                (0.225851 + 1.28153j, 1.14986 - 1.07474j, 1),
                (0.225851 - 1.28153j, 1.14986 + 1.07474j, 1),
                (0.334413 - 1.0111j, -0.471629 + 0.349376j, 1),
                (0.334413 + 1.0111j, -0.471629 - 0.349376j, 1),
                (0, 0.517638j, 1),
            ),
        ),
        WorkedExample(
            name="IV(1)",
            params=Params(3, 3, 0),
            ordinary=24,
            hyperflex=0,
            ordinary_shape="6_4",
            hyperflex_shape="",
            representatives=(
                (-1.75642j, -3.01936, 1),
                (-0.581718j, -0.33119, 1),
                (-0.91777 + 1.15085j, -0.22252 - 0.97492j, 1),
                (-0.91777 - 1.15085j, -0.22252 + 0.97492j, 1),
                (-0.59367 + 0.39822j, -0.37935 + 0.92525j, 1),
                (-0.593675 - 0.39822j, -0.37935 - 0.92525j, 1),
            ),
        ),
        WorkedExample(
            name="IV(2)",
            params=Params(math.sqrt(5) * 1j, 3, 0),
            discrepancy=(
                "published as 16 flexes in 2_2 hyperflex and 2_2 ordinary orbits, "
                "which contradicts the weight sum 24; moreover a² + b² + c² - abc "
                "- 4 vanishes, the curve splits into two conics"
            ),
        ),
        WorkedExample(
            name="IV(3)",
            params=Params(0, 3 * math.sqrt(2 / 5), 3 * math.sqrt(2 / 5)),
            representatives=(
                (0.562341j, 0.562341j, 1),
                (0.204102 - 1.15107j, 0.301675 - 0.269467j, 1),
                (0.301675 - 0.269467j, 0.204102 - 1.15107j, 1),
                (0.204102 + 1.15107j, 0.301675 + 0.269467j, 1),
                (0.301675 + 0.269467j, 0.204102 + 1.15107j, 1),
            ),
        ),
        WorkedExample(
            name="IV(4)",
            params=Params(3, 3, 3),
            ordinary=0,
            hyperflex=12,
        ),
    )


@dataclass(frozen=True, slots=True, kw_only=True)
class ExampleCheck:
    example: WorkedExample
    #: ``None`` if the published parameters give a singular curve
    report: ClassificationReport | None
    counts_match: bool | None
    shapes_match: bool | None
    unmatched_representatives: tuple
    #: Vanishing smoothness factors of the published parameters
    singular: tuple[str, ...] = ()

    @property
    def reproduced(self):
        return (
            not self.singular
            and self.counts_match is not False
            and self.shapes_match is not False
            and not self.unmatched_representatives
        )

    @property
    def passed(self):
        """Reproduced, or not reproduced in the documented way."""
        return self.reproduced or self.example.discrepancy is not None


def reproduce_example(
    example, *, tolerances=DEFAULT_TOLERANCES, match_tol=1e-4, **solver_options
):
    """Classify a worked example and compare with what was published.

    Parameters
    ----------
    example : WorkedExample
    tolerances : Tolerances, optional
    match_tol : float, optional
        Chordal distance within which a published representative counts as
        matched by a computed flex.

    Returns
    -------
    check : ExampleCheck
        Without a report if the published parameters are singular.
    """
    singular = example.params.vanishing_factors(tolerances.smoothness)
    if singular:
        log = logger.info if example.discrepancy else logger.warning
        log("example %s is singular: %s vanishes", example.name, ", ".join(singular))
        return ExampleCheck(
            example=example,
            report=None,
            counts_match=None,
            shapes_match=None,
            unmatched_representatives=example.representatives,
            singular=singular,
        )

    report = classify(example.params, tolerances=tolerances, **solver_options)

    counts_match = None
    if example.ordinary is not None:
        counts_match = (report.ordinary_count, report.hyperflex_count) == (
            example.ordinary,
            example.hyperflex,
        )
    shapes_match = None
    if example.ordinary_shape is not None:
        shapes_match = (report.ordinary_shape, report.hyperflex_shape) == (
            example.ordinary_shape,
            example.hyperflex_shape,
        )
    unmatched = tuple(
        point
        for point in example.representatives
        if min(chordal_distance(point, r.point) for r in report.flexes) > match_tol
    )

    check = ExampleCheck(
        example=example,
        report=report,
        counts_match=counts_match,
        shapes_match=shapes_match,
        unmatched_representatives=unmatched,
    )
    if not check.reproduced:
        log = logger.info if example.discrepancy else logger.warning
        log(
            "example %s not reproduced (counts %s, shapes %s, %i unmatched points)",
            example.name,
            counts_match,
            shapes_match,
            len(unmatched),
        )
    return check
