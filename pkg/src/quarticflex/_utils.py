import dataclasses
import re
from pathlib import Path
from textwrap import indent

import click


class QuarticFlexError(Exception):
    """An error raised by quarticflex."""


class ComplexLiteralError(QuarticFlexError):
    """Raised when a command line complex literal can't be parsed."""


_REAL = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_LITERAL = re.compile(
    rf"""
    ^(?P<real>[+-]?{_REAL})?
    (?:(?P<imag>(?(real)[+-]|[+-]?)(?:{_REAL})?)i)?$
    """,
    re.VERBOSE,
)


def parse_complex_literal(text):
    """Parse a complex number written as `RE`, `IMi`, `RE+IMi` or `RE-IMi`.

    Parameters
    ----------
    text : str

    Returns
    -------
    value : complex

    Examples
    --------
    >>> parse_complex_literal("3")
    (3+0j)
    >>> parse_complex_literal("-0.5i")
    -0.5j
    >>> parse_complex_literal("1.5-2i")
    (1.5-2j)
    >>> parse_complex_literal("i")
    1j
    >>> parse_complex_literal("3 + 2i")
    Traceback (most recent call last):
      ...
    quarticflex._utils.ComplexLiteralError: invalid complex literal '3 + 2i', ...
    """
    match = _COMPLEX_LITERAL.match(text.strip()) if text else None
    if not match or not (match["real"] or match["imag"] is not None):
        msg = (
            f"invalid complex literal {text!r}, "
            "expected RE, IMi, RE+IMi or RE-IMi without spaces"
        )
        raise ComplexLiteralError(msg)

    real = float(match["real"]) if match["real"] else 0.0
    imag = 0.0
    if match["imag"] is not None:
        digits = match["imag"]
        if digits in ("", "+", "-"):
            digits += "1"
        imag = float(digits)
    return complex(real, imag)


def format_complex(value):
    """Format a complex number the way :func:`parse_complex_literal` reads it.

    Examples
    --------
    >>> format_complex(3)
    '3'
    >>> format_complex(-0.581718j)
    '-0.581718i'
    >>> format_complex(complex(1.5, -2))
    '1.5-2i'
    """
    value = complex(value)
    real, imag = value.real, value.imag
    if imag == 0:
        return f"{real:g}" if real != 0 else "0"
    if real == 0:
        return f"{imag:g}i"
    return f"{real:g}{imag:+g}i"


@dataclasses.dataclass(kw_only=True, slots=True, frozen=True)
class SourceContext:
    """Position in a polynomial file that a message refers to.

    Examples
    --------
    >>> ctx = SourceContext(path=Path("curves/fermat.txt"), line=3)
    >>> ctx.format_message("unexpected end of input")
    'curves...fermat.txt:3: unexpected end of input'
    >>> ctx.print_message("bad term", details="x^4 +\\n     ^")
    curves...fermat.txt:3: bad term
        x^4 +
             ^
    """

    path: Path
    line: int | None = None
    column: int | None = None

    def __post_init__(self):
        if not isinstance(self.path, Path):
            msg = f"expected `path` to be of type `Path`, got {type(self.path)!r}"
            raise TypeError(msg)

    @classmethod
    def from_error(cls, path, error):
        """Context of a lark parse error, positions below 1 are dropped."""
        line = getattr(error, "line", None)
        column = getattr(error, "column", None)
        if not line or line < 1:
            return cls(path=path)
        if not column or column < 1:
            column = None
        return cls(path=path, line=line, column=column)

    @property
    def location(self):
        parts = [str(self.path)]
        if self.line:
            parts.append(str(self.line))
            if self.column:
                parts.append(str(self.column))
        return ":".join(parts)

    def format_message(self, short, *, details=None, ansi_styles=False):
        location = self.location
        if ansi_styles:
            location = click.style(location, bold=True)
        message = f"{location}: {short}"
        if details:
            message += "\n" + indent(details, "    ", predicate=lambda _: True)
        return message

    def print_message(self, short, *, details=None, err=False):
        message = self.format_message(short, details=details, ansi_styles=True)
        click.echo(message, err=err)
