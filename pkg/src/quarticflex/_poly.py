"""Sparse trivariate and dense univariate polynomials with complex coefficients."""

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from numbers import Number
from pathlib import Path

import lark
import lark.visitors
import numpy as np
import numpy.polynomial.polynomial as npp

from ._utils import QuarticFlexError

logger = logging.getLogger(__name__)


here = Path(__file__).parent
grammar_path = here / "polynomial.lark"


with grammar_path.open() as file:
    _grammar = file.read()

_lark = lark.Lark(_grammar, propagate_positions=True)


AXES = ("x", "y", "z")

# Relative size below which a coefficient left over by cancellation is dropped
GHOST_THRESHOLD = 1e-14


class PolynomialSyntaxError(QuarticFlexError):
    """Raised when a coefficient in polynomial text can't be interpreted."""


def axis_index(axis):
    """Return the position of a variable in ``(x, y, z)``.

    Parameters
    ----------
    axis : {"x", "y", "z", 0, 1, 2}

    Returns
    -------
    index : int

    Examples
    --------
    >>> axis_index("y")
    1
    >>> axis_index(2)
    2
    """
    if isinstance(axis, str) and axis in AXES:
        return AXES.index(axis)
    if isinstance(axis, int) and not isinstance(axis, bool) and 0 <= axis < 3:
        return axis
    msg = f"unknown axis {axis!r}, expected one of {AXES}"
    raise ValueError(msg)


def _grlex_key(monomial):
    """Graded lexicographic order, largest monomial first."""
    return (-sum(monomial), -monomial[0], -monomial[1], -monomial[2])


def _canonical_terms(items):
    accumulated = {}
    for monomial, coefficient in items:
        monomial = tuple(int(e) for e in monomial)
        if len(monomial) != 3 or min(monomial) < 0:
            msg = f"expected a triple of non-negative exponents, got {monomial!r}"
            raise ValueError(msg)
        accumulated[monomial] = accumulated.get(monomial, 0j) + complex(coefficient)

    if not accumulated:
        return ()
    scale = max(abs(c) for c in accumulated.values())
    kept = [
        (monomial, coefficient)
        for monomial, coefficient in accumulated.items()
        if coefficient != 0 and abs(coefficient) >= GHOST_THRESHOLD * scale
    ]
    return tuple(sorted(kept, key=lambda term: _grlex_key(term[0])))


def _power_table(values, degree):
    table = np.ones((len(values), degree + 1), dtype=complex)
    for exponent in range(1, degree + 1):
        table[:, exponent] = table[:, exponent - 1] * values
    return table


def _format_coefficient(value):
    return f"({value.real!r}{value.imag:+}i)"


@dataclass(frozen=True, slots=True)
class MPoly:
    """Polynomial in x, y, z stored as a sparse map of exponent triples.

    Coefficients are kept in canonical form: no zero coefficients, no
    cancellation ghosts below ``GHOST_THRESHOLD`` times the largest modulus,
    terms sorted in graded lexicographic order.

    Examples
    --------
    >>> x, y = MPoly.variable("x"), MPoly.variable("y")
    >>> ((x + y) * (x - y)).as_dict()
    {(2, 0, 0): (1+0j), (0, 2, 0): (-1+0j)}
    >>> (x**4 - x**4).is_zero
    True
    """

    terms: tuple[tuple[tuple[int, int, int], complex], ...] = ()

    _exponents: np.ndarray = field(init=False, repr=False, compare=False)
    _coefficients: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        items = self.terms.items() if isinstance(self.terms, Mapping) else self.terms
        terms = _canonical_terms(items)
        object.__setattr__(self, "terms", terms)
        exponents = np.array([m for m, _ in terms], dtype=int).reshape(-1, 3)
        coefficients = np.array([c for _, c in terms], dtype=complex)
        object.__setattr__(self, "_exponents", exponents)
        object.__setattr__(self, "_coefficients", coefficients)

    @classmethod
    def constant(cls, value):
        return cls({(0, 0, 0): value})

    @classmethod
    def variable(cls, axis):
        exponents = [0, 0, 0]
        exponents[axis_index(axis)] = 1
        return cls({tuple(exponents): 1})

    @classmethod
    def linear_form(cls, coefficients):
        """Return ``u*x + v*y + w*z`` for ``coefficients = (u, v, w)``."""
        u, v, w = coefficients
        return cls({(1, 0, 0): u, (0, 1, 0): v, (0, 0, 1): w})

    @property
    def is_zero(self):
        return not self.terms

    @property
    def scale(self):
        """Largest coefficient modulus, 0 for the zero polynomial."""
        if self.is_zero:
            return 0.0
        return float(np.max(np.abs(self._coefficients)))

    def as_dict(self):
        return dict(self.terms)

    def coefficient(self, exponents):
        return self.as_dict().get(tuple(exponents), 0j)

    def degree(self):
        """Total degree, -1 for the zero polynomial.

        Examples
        --------
        >>> MPoly({(2, 1, 0): 1, (0, 0, 1): 3}).degree()
        3
        >>> MPoly().degree()
        -1
        """
        if self.is_zero:
            return -1
        return max(sum(m) for m, _ in self.terms)

    def degree_in(self, axis):
        """Degree in a single variable, -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        i = axis_index(axis)
        return max(m[i] for m, _ in self.terms)

    def variables(self):
        """Names of the variables that occur in some term."""
        return tuple(
            axis for i, axis in enumerate(AXES) if any(m[i] for m, _ in self.terms)
        )

    def is_homogeneous(self):
        return len({sum(m) for m, _ in self.terms}) <= 1

    def __add__(self, other):
        other = _as_mpoly(other)
        if other is NotImplemented:
            return NotImplemented
        return MPoly(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        other = _as_mpoly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return MPoly(tuple((m, c * other) for m, c in self.terms))
        if not isinstance(other, MPoly):
            return NotImplemented
        products = [
            ((m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]), c1 * c2)
            for m1, c1 in self.terms
            for m2, c2 in other.terms
        ]
        return MPoly(products)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = MPoly.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def partial(self, axis):
        """Formal partial derivative along `axis`.

        Examples
        --------
        >>> F = MPoly({(4, 0, 0): 1, (0, 4, 0): 1, (2, 2, 0): 3})
        >>> F.partial("x").as_dict()
        {(3, 0, 0): (4+0j), (1, 2, 0): (6+0j)}
        >>> MPoly.constant(5).partial("z").is_zero
        True
        """
        i = axis_index(axis)
        derived = []
        for monomial, coefficient in self.terms:
            if monomial[i] == 0:
                continue
            lowered = list(monomial)
            lowered[i] -= 1
            derived.append((tuple(lowered), coefficient * monomial[i]))
        return MPoly(derived)

    def gradient(self):
        return tuple(self.partial(axis) for axis in AXES)

    def evaluate(self, point):
        """Evaluate at a point of C³, summing terms in graded lexicographic order.

        Examples
        --------
        >>> fermat = MPoly({(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1})
        >>> fermat.evaluate((1, 1j, 0))
        (2+0j)
        """
        values = np.asarray(point, dtype=complex)
        if values.shape != (3,):
            msg = f"expected a point with three coordinates, got shape {values.shape}"
            raise ValueError(msg)
        if self.is_zero:
            return 0j
        table = _power_table(values, self.degree())
        exps = self._exponents
        monomials = table[0, exps[:, 0]] * table[1, exps[:, 1]] * table[2, exps[:, 2]]
        return complex(np.sum(self._coefficients * monomials))

    __call__ = evaluate

    def restrict(self, **pinned):
        """Substitute constants for some of the variables.

        Parameters
        ----------
        **pinned : complex
            Values for the pinned variables, keyed by ``x``, ``y`` or ``z``.

        Returns
        -------
        restricted : MPoly or UPoly
            A univariate polynomial in the remaining variable if two variables
            were pinned, otherwise an :class:`MPoly` in which the pinned
            variables no longer occur.

        Examples
        --------
        >>> F = MPoly({(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1, (2, 0, 2): 3})
        >>> F.restrict(y=0, z=1)
        UPoly(coeffs=((1+0j), 0j, (3+0j), 0j, (1+0j)), var='x')
        >>> F.restrict(z=0).as_dict()
        {(4, 0, 0): (1+0j), (0, 4, 0): (1+0j)}
        """
        values = {axis_index(axis): complex(value) for axis, value in pinned.items()}
        restricted = []
        for monomial, coefficient in self.terms:
            lowered = list(monomial)
            for i, value in values.items():
                coefficient *= value ** monomial[i]
                lowered[i] = 0
            restricted.append((tuple(lowered), coefficient))
        restricted = MPoly(restricted)

        if len(values) == 2:
            (free,) = set(range(3)) - set(values)
            return restricted.to_upoly(AXES[free])
        return restricted

    def to_upoly(self, axis):
        """Convert a polynomial in the single variable `axis` to :class:`UPoly`."""
        i = axis_index(axis)
        others = [j for j in range(3) if j != i]
        if any(m[j] for m, _ in self.terms for j in others):
            msg = f"polynomial depends on variables other than {AXES[i]!r}"
            raise ValueError(msg)
        coeffs = np.zeros(max(self.degree_in(i), 0) + 1, dtype=complex)
        for monomial, coefficient in self.terms:
            coeffs[monomial[i]] += coefficient
        return UPoly(coeffs, var=AXES[i])

    def substitute_linear(self, matrix):
        """Return the form ``v ↦ p(M·v)`` for a 3×3 matrix ``M``.

        Examples
        --------
        >>> F = MPoly({(4, 0, 0): 1, (0, 4, 0): 1, (2, 2, 0): 3})
        >>> sigma = [[-1, 0, 0], [0, 1, 0], [0, 0, 1]]
        >>> F.substitute_linear(sigma) == F
        True
        """
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (3, 3):
            msg = f"expected a 3x3 matrix, got shape {matrix.shape}"
            raise ValueError(msg)
        if self.is_zero:
            return self
        degree = self.degree()
        forms = [MPoly.linear_form(row) for row in matrix]
        powers = []
        for form in forms:
            row = [MPoly.constant(1)]
            for _ in range(degree):
                row.append(row[-1] * form)
            powers.append(row)

        collected = []
        for (i, j, k), coefficient in self.terms:
            product = powers[0][i] * powers[1][j] * powers[2][k]
            collected.extend((m, coefficient * c) for m, c in product.terms)
        return MPoly(collected)

    def along_line(self, base, direction):
        """Return the univariate polynomial ``t ↦ p(base + t·direction)``.

        Examples
        --------
        >>> x = MPoly.variable("x")
        >>> (x**3).along_line((0, 0, 1), (1, 0, 0)).coeffs
        (0j, 0j, 0j, (1+0j))
        """
        base = np.asarray(base, dtype=complex)
        direction = np.asarray(direction, dtype=complex)
        if self.is_zero:
            return UPoly((), var="t")
        degree = self.degree()
        powers = []
        for b, d in zip(base, direction, strict=True):
            row = [np.ones(1, dtype=complex)]
            for _ in range(degree):
                row.append(np.convolve(row[-1], [b, d]))
            powers.append(row)

        coeffs = np.zeros(degree + 1, dtype=complex)
        for (i, j, k), coefficient in self.terms:
            product = np.convolve(np.convolve(powers[0][i], powers[1][j]), powers[2][k])
            coeffs[: len(product)] += coefficient * product
        return UPoly(coeffs, var="t")

    def isclose(self, other, *, rel_tol=1e-12):
        """Compare coefficient-wise, relative to the larger coefficient scale."""
        scale = max(self.scale, other.scale, 1e-300)
        difference = self - other
        return difference.is_zero or difference.scale <= rel_tol * scale

    def to_text(self):
        """Serialize in the text grammar read by :func:`parse_polynomial`.

        Examples
        --------
        >>> MPoly({(4, 0, 0): 1, (0, 2, 2): -2.5j}).to_text()
        '(1.0+0.0i)*x^4 + (0.0-2.5i)*y^2*z^2'
        """
        if self.is_zero:
            return _format_coefficient(0j)
        rendered = []
        for monomial, coefficient in self.terms:
            factors = [_format_coefficient(coefficient)]
            factors.extend(
                axis if exponent == 1 else f"{axis}^{exponent}"
                for axis, exponent in zip(AXES, monomial, strict=True)
                if exponent
            )
            rendered.append("*".join(factors))
        return " + ".join(rendered)

    def __str__(self):
        return self.to_text()


def _as_mpoly(value):
    if isinstance(value, MPoly):
        return value
    if isinstance(value, Number):
        return MPoly.constant(value)
    return NotImplemented


@dataclass(frozen=True, slots=True)
class UPoly:
    """Dense univariate polynomial, ``coeffs[k]`` belongs to ``var**k``.

    Examples
    --------
    >>> p = UPoly((1, 0, 1), var="y")
    >>> p.degree()
    2
    >>> p(1j)
    0j
    """

    coeffs: tuple[complex, ...] = ()
    var: str = field(default="t", compare=False)

    def __post_init__(self):
        coeffs = [complex(c) for c in np.ravel(np.asarray(self.coeffs, dtype=complex))]
        scale = max((abs(c) for c in coeffs), default=0.0)
        while coeffs and (
            coeffs[-1] == 0 or abs(coeffs[-1]) < GHOST_THRESHOLD * scale
        ):
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def from_roots(cls, roots, *, leading=1, var="t"):
        """Return ``leading · ∏ (var - root)``.

        Examples
        --------
        >>> UPoly.from_roots([1, -1]) == UPoly((-1, 0, 1))
        True
        """
        highest_first = np.poly(np.asarray(roots, dtype=complex)) * leading
        return cls(highest_first[::-1], var=var)

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0j

    @property
    def scale(self):
        return max((abs(c) for c in self.coeffs), default=0.0)

    def degree(self):
        return len(self.coeffs) - 1

    def to_numpy(self):
        return np.array(self.coeffs, dtype=complex)

    def __call__(self, value):
        coeffs = self.to_numpy() if self.coeffs else np.zeros(1, dtype=complex)
        result = npp.polyval(value, coeffs)
        return complex(result) if np.ndim(result) == 0 else result

    def derivative(self, order=1):
        if self.degree() < order:
            return UPoly((), var=self.var)
        return UPoly(npp.polyder(self.to_numpy(), order), var=self.var)

    def taylor_coefficients(self, at):
        """Coefficients of ``p(at + s)`` as a polynomial in ``s``.

        Examples
        --------
        >>> UPoly((0, 0, 1)).taylor_coefficients(1)
        array([1.+0.j, 2.+0.j, 1.+0.j])
        """
        coeffs = self.to_numpy()
        taylor = np.zeros(len(coeffs), dtype=complex)
        for k in range(len(coeffs)):
            taylor[k] = npp.polyval(at, coeffs) / math.factorial(k)
            coeffs = npp.polyder(coeffs) if len(coeffs) > 1 else np.zeros(1)
        return taylor

    def __add__(self, other):
        if isinstance(other, Number):
            other = UPoly((other,))
        if not isinstance(other, UPoly):
            return NotImplemented
        return UPoly(npp.polyadd(self.to_numpy(), other.to_numpy()), var=self.var)

    __radd__ = __add__

    def __neg__(self):
        return UPoly(tuple(-c for c in self.coeffs), var=self.var)

    def __sub__(self, other):
        if isinstance(other, Number):
            other = UPoly((other,))
        if not isinstance(other, UPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Number):
            return UPoly(tuple(c * other for c in self.coeffs), var=self.var)
        if not isinstance(other, UPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return UPoly((), var=self.var)
        return UPoly(np.convolve(self.to_numpy(), other.to_numpy()), var=self.var)

    __rmul__ = __mul__

    def __str__(self):
        terms = [
            f"{_format_coefficient(c)}*{self.var}^{k}" if k else _format_coefficient(c)
            for k, c in enumerate(self.coeffs)
            if c != 0
        ]
        return " + ".join(reversed(terms)) or _format_coefficient(0j)


@lark.visitors.v_args(tree=True)
class PolynomialTransformer(lark.visitors.Transformer):
    """Transformer turning polynomial text into :class:`MPoly`.

    Examples
    --------
    >>> transformer = PolynomialTransformer()
    >>> poly = transformer.text_to_polynomial("1*x^4 + 1*y^4 + 1*z^4")
    >>> poly.degree(), len(poly.terms)
    (4, 3)
    >>> transformer.text_to_polynomial("x*y - (2-1i)*z^2").as_dict()
    {(1, 1, 0): (1+0j), (0, 0, 2): (-2+1j)}
    """

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        self.stats = {"grammar_errors": 0, "parsed": 0}

    def text_to_polynomial(self, text):
        """Parse polynomial text.

        Parameters
        ----------
        text : str

        Returns
        -------
        polynomial : MPoly

        Raises
        ------
        lark.exceptions.LexError, lark.exceptions.ParseError
            If `text` doesn't follow the grammar.
        PolynomialSyntaxError
            If a parenthesized coefficient isn't a complex number.
        """
        try:
            tree = _lark.parse(text)
            polynomial = self.transform(tree)
        except (lark.exceptions.LexError, lark.exceptions.ParseError):
            self.stats["grammar_errors"] += 1
            raise
        except lark.visitors.VisitError as error:
            self.stats["grammar_errors"] += 1
            raise error.orig_exc from error
        self.stats["parsed"] += 1
        logger.debug("parsed polynomial with %i terms", len(polynomial.terms))
        return polynomial

    def polynomial(self, tree):
        result = MPoly()
        sign = 1
        for child in tree.children:
            if isinstance(child, lark.Token) and child.type == "SIGN":
                sign = -1 if child == "-" else 1
                continue
            result = result + sign * child
            sign = 1
        return result

    def term(self, tree):
        result = MPoly.constant(1)
        for child in tree.children:
            if isinstance(child, lark.Token):
                child = self._coefficient(child)
            result = result * child
        return result

    def power(self, tree):
        variable, *exponent = tree.children
        exponents = [0, 0, 0]
        exponents[axis_index(str(variable))] = int(exponent[0]) if exponent else 1
        return MPoly({tuple(exponents): 1})

    @staticmethod
    def _coefficient(token):
        if token.type == "REAL":
            return complex(float(token))
        body = token.value[1:-1].replace(" ", "")
        try:
            return complex(body.replace("i", "j"))
        except ValueError as error:
            msg = f"invalid complex coefficient {token.value!r}"
            raise PolynomialSyntaxError(msg) from error


def parse_polynomial(text):
    """Parse polynomial text into :class:`MPoly`.

    Examples
    --------
    >>> parse_polynomial("(1.5+0i)*x^2*y^2 - 2*z^4").as_dict()
    {(2, 2, 0): (1.5+0j), (0, 0, 4): (-2+0j)}
    """
    return PolynomialTransformer().text_to_polynomial(text)
