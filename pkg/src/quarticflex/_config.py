import dataclasses
import logging
from pathlib import Path
from typing import ClassVar

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib


logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, slots=True, kw_only=True)
class Tolerances:
    """Numeric thresholds shared by the solver and geometry pipeline.

    Attributes
    ----------
    on_curve :
        Maximal ``|F(p)|`` for a normalized point to count as lying on the curve.
    hessian :
        Maximal ``|H_F(p)|`` accepted for a flex (the Hessian has larger
        coefficients than the curve).
    cluster :
        Radius, relative to the root scale, for merging roots into clusters.
    residual :
        Maximal backward error of a refined polynomial root.
    locus :
        Threshold for deciding that a special locus polynomial vanishes,
        relative to ``|a|² + |b|² + |c|² + 1``.
    point_merge :
        Chordal distance below which two projective points are identified.
    contact :
        Relative threshold for Taylor coefficients when measuring vanishing
        orders and contact orders.
    smoothness :
        Relative threshold below which a smoothness factor counts as zero.
    """

    on_curve: float = 1e-8
    hessian: float = 1e-6
    cluster: float = 1e-6
    residual: float = 1e-8
    locus: float = 1e-9
    point_merge: float = 1e-6
    contact: float = 1e-6
    smoothness: float = 1e-9

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not isinstance(value, int | float) or isinstance(value, bool):
                msg = f"tolerance {field.name!r} must be a real number, got {value!r}"
                raise TypeError(msg)
            if not value > 0:
                msg = f"tolerance {field.name!r} must be strictly positive, got {value}"
                raise ValueError(msg)

    def scaled(self, factor):
        """Return a copy with every tolerance multiplied by `factor`.

        Examples
        --------
        >>> Tolerances().scaled(2).cluster
        2e-06
        """
        if not factor > 0:
            msg = f"tolerance scale must be strictly positive, got {factor}"
            raise ValueError(msg)
        kwargs = {
            field.name: getattr(self, field.name) * factor
            for field in dataclasses.fields(self)
        }
        return type(self)(**kwargs)

    def tightened(self, factor):
        """Return a copy with every tolerance divided by `factor`."""
        return self.scaled(1 / factor)


DEFAULT_TOLERANCES = Tolerances()


@dataclasses.dataclass(frozen=True, slots=True, kw_only=True)
class Config:
    DEFAULT_CONFIG_PATH: ClassVar[Path] = Path(__file__).parent / "default_config.toml"

    tolerances: dict[str, float] = dataclasses.field(default_factory=dict)
    solver: dict[str, float | int] = dataclasses.field(default_factory=dict)
    verify: dict[str, float | int] = dataclasses.field(default_factory=dict)
    output: dict[str, str] = dataclasses.field(default_factory=dict)

    _source: tuple[Path, ...] = ()

    @classmethod
    def from_toml(cls, path: Path | str) -> "Config":
        """Return configuration options in local TOML file if they exist."""
        path = Path(path)
        with open(path, "rb") as fp:
            raw = tomllib.load(fp)
        config = cls(**raw.get("tool", {}).get("quarticflex", {}), _source=(path,))
        logger.debug("created Config from %s", path)
        return config

    @classmethod
    def from_default(cls):
        config = cls.from_toml(cls.DEFAULT_CONFIG_PATH)
        return config

    def merge(self, other):
        """Merge contents with other and return a new Config instance.

        Values in `other` take precedence.
        """
        if not isinstance(other, type(self)):
            return NotImplemented
        new = Config(
            tolerances=self.tolerances | other.tolerances,
            solver=self.solver | other.solver,
            verify=self.verify | other.verify,
            output=self.output | other.output,
            _source=self._source + other._source,
        )
        logger.debug("merged Config from %s", new._source)
        return new

    def to_dict(self):
        return dataclasses.asdict(self)

    def to_tolerances(self, *, scale=1.0):
        """Build the :class:`Tolerances` described by this configuration.

        Parameters
        ----------
        scale : float, optional
            Factor applied to every tolerance.

        Returns
        -------
        tolerances : Tolerances
        """
        known = {field.name for field in dataclasses.fields(Tolerances)}
        unknown = set(self.tolerances) - known
        if unknown:
            msg = f"unknown tolerances in configuration: {', '.join(sorted(unknown))}"
            raise ValueError(msg)
        tolerances = Tolerances(**self.tolerances)
        if scale != 1.0:
            tolerances = tolerances.scaled(scale)
        return tolerances

    @property
    def max_iters(self):
        return int(self.solver.get("max_iters", 200))

    @property
    def interpolation_radius(self):
        return float(self.solver.get("interpolation_radius", 1.3))

    @property
    def newton_iters(self):
        return int(self.solver.get("newton_iters", 60))

    @property
    def samples(self):
        return int(self.verify.get("samples", 100))

    @property
    def seed(self):
        return int(self.verify.get("seed", 0))

    @property
    def max_relative_error(self):
        return float(self.verify.get("max_relative_error", 1e-8))

    @property
    def output_format(self):
        return str(self.output.get("format", "table"))

    def __post_init__(self):
        for name in ("tolerances", "solver", "verify", "output"):
            if not isinstance(getattr(self, name), dict):
                raise TypeError(f"{name} must be a dict")

    def __repr__(self):
        sources = " | ".join(str(s) for s in self._source)
        formatted = f"<{type(self).__name__}: {sources}>"
        return formatted
