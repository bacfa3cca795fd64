"""Run configuration and algebra specs of the form FAMILY:PARAMS."""

from dataclasses import asdict, dataclass, field

from .curvature import Budget

MATRIX_FAMILIES = ("sl_real", "sp_real", "su", "so")
ALIASES = {"g2_split": ("chevalley", ("G2",))}
# exact kernels on the E-series are far outside the default budgets
GATED = ("E6", "E7", "E8")


class ConfigError(ValueError):
    pass


def parse_algebra(spec):
    """'sl_real:3' -> ('sl_real', (3,)); 'chevalley:F4' -> ('chevalley', ('F4',))."""
    spec = spec.strip()
    if spec in ALIASES:
        return ALIASES[spec]
    family, _, rest = spec.partition(":")
    if family in MATRIX_FAMILIES:
        try:
            params = tuple(int(x) for x in rest.split(",") if x)
        except ValueError:
            raise ConfigError(f"bad parameters in {spec!r}") from None
        want = 2 if family in ("su", "so") else 1
        if len(params) != want:
            raise ConfigError(f"{family} takes {want} integer parameter(s), got {spec!r}")
        return family, params
    if family == "chevalley":
        kind = rest.strip().upper()
        if not kind:
            raise ConfigError("chevalley needs a type, e.g. chevalley:G2")
        return family, (kind,)
    raise ConfigError(f"unknown algebra family {family!r}")


def build_algebra(spec, allow_large=False):
    from .liecore.chevalley import chevalley_algebra
    from .liecore.matrix_forms import matrix_form
    from .rootsys import build_root_system, normalize_kind
    family, params = parse_algebra(spec)
    try:
        if family == "chevalley":
            kind, rank = normalize_kind(params[0])
            if kind in GATED and not allow_large:
                raise ConfigError(f"{spec} is gated; pass allow_large to build it")
            L = chevalley_algebra(build_root_system(kind, rank))
        else:
            L = matrix_form(family, *params)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if spec in ALIASES:
        L.name = spec
    return L


@dataclass
class RunConfig:
    command: str = "report"
    algebra: str = "sp_real:2"
    a: str = None
    seed: int = 0
    eps_sweep: tuple = (1e-2, 5e-3, 2.5e-3)
    samples: int = 10000
    path_steps: int = 1000
    step: float = 1e-3
    budget: Budget = field(default_factory=Budget)
    retract_tol: float = 1e-12
    assert_tol: float = 1e-9
    out: str = None
    cache: str = None
    allow_large: bool = False

    def validate(self):
        parse_algebra(self.algebra)
        if self.budget.max_V <= 0 or self.budget.max_h <= 0:
            raise ConfigError("budgets must be positive")
        for name in ("retract_tol", "assert_tol"):
            v = getattr(self, name)
            if not 0 < v < 1e-3:
                raise ConfigError(f"{name} must lie in (0, 1e-3), got {v}")
        if not self.eps_sweep or any(e <= 0 for e in self.eps_sweep) or len(self.eps_sweep) < 2:
            raise ConfigError("eps sweep needs at least two positive values")
        if self.samples <= 0 or self.path_steps < 0 or self.step <= 0:
            raise ConfigError("sample counts and step must be positive")
        if self.command == "flow" and not self.a:
            raise ConfigError("flow needs --a")
        return self

    def echo(self):
        """Config as it appears in reports (output path and cache dir excluded)."""
        d = asdict(self)
        d.pop("out")
        d.pop("cache")
        d["eps_sweep"] = list(self.eps_sweep)
        return d
