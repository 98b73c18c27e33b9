"""Run configuration: flat dotted-key text files with flag overrides.

The format is one ``key = value`` pair per line (``#`` comments allowed),
with dotted namespaces such as ``params.alpha`` or ``grid.n``.  Unknown
keys are rejected; every diagnostic names the offending key.  Environment
variables are never consulted, so a config file plus ``--set`` overrides
fully determines a run.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import DomainError, Params
from .solver import SolveOptions

COMMANDS = (
    "solve",
    "scalar",
    "sweep",
    "thresholds",
    "regimes",
    "limit",
    "asymptotics",
    "selftest",
)
FORMATS = ("csv", "json", "svg")


class ConfigError(ValueError):
    """Invalid key, value, or parameter constraint in a run configuration."""


@dataclass
class RunConfig:
    command: str = "solve"
    # params namespace
    alpha: float = 0.0
    omega: float = 2.0
    omega_tilde: float = 1.0
    beta: float = 1.0
    interaction: str = "point"
    # grid namespace (r_max = 0 means the omega-adapted default)
    n: int = 4096
    r_max: float = 0.0
    grading: float = 2.0
    # solve namespace
    max_iters: int = 20000
    grad_tol: float = 1e-7
    step_init: float = 1.0
    shrink: float = 0.5
    armijo: float = 1e-4
    restarts: int = 1
    seed: int = 0
    # output namespace
    directory: str = "."
    formats: tuple[str, ...] = ("csv", "json")
    # command-specific knobs
    scalar_component: str = "u"
    sweep_betas: tuple[float, ...] = (0.0, 0.5, 1.0, 2.0, 4.0)
    bracket: tuple[float, float] = (0.0, 30.0)
    bisect_tol: float = 1e-2
    margin: float = 1e-4
    omega_tilde_factors: tuple[float, ...] = (0.6, 1.0, 1.6)
    beta_offset: float = 0.2
    asym_betas: tuple[float, ...] = (25.0, 50.0, 100.0)

    def params(self) -> Params:
        try:
            return Params(
                alpha=self.alpha,
                omega=self.omega,
                omega_tilde=self.omega_tilde,
                beta=self.beta,
                interaction=self.interaction,
            )
        except DomainError as exc:
            raise ConfigError(f"params: {exc}") from exc

    def solve_options(self) -> SolveOptions:
        return SolveOptions(
            max_iters=self.max_iters,
            grad_tol=self.grad_tol,
            step_init=self.step_init,
            shrink=self.shrink,
            armijo=self.armijo,
            restarts=self.restarts,
            seed=self.seed,
        )


def _parse_float_tuple(key: str, text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: expected comma-separated numbers, got {text!r}") from exc


# key -> (attribute, parser, formatter)
_SCHEMA: dict[str, tuple[str, object, object]] = {
    "command": ("command", str, str),
    "params.alpha": ("alpha", float, lambda v: format(v, ".17g")),
    "params.omega": ("omega", float, lambda v: format(v, ".17g")),
    "params.omega_tilde": ("omega_tilde", float, lambda v: format(v, ".17g")),
    "params.beta": ("beta", float, lambda v: format(v, ".17g")),
    "params.interaction": ("interaction", str, str),
    "grid.n": ("n", int, str),
    "grid.r_max": ("r_max", float, lambda v: format(v, ".17g")),
    "grid.grading": ("grading", float, lambda v: format(v, ".17g")),
    "solve.max_iters": ("max_iters", int, str),
    "solve.grad_tol": ("grad_tol", float, lambda v: format(v, ".17g")),
    "solve.step_init": ("step_init", float, lambda v: format(v, ".17g")),
    "solve.shrink": ("shrink", float, lambda v: format(v, ".17g")),
    "solve.armijo": ("armijo", float, lambda v: format(v, ".17g")),
    "solve.restarts": ("restarts", int, str),
    "solve.seed": ("seed", int, str),
    "output.directory": ("directory", str, str),
    "output.formats": (
        "formats",
        lambda s: tuple(tok.strip() for tok in s.split(",") if tok.strip()),
        lambda v: ",".join(v),
    ),
    "scalar.component": ("scalar_component", str, str),
    "sweep.betas": (
        "sweep_betas",
        lambda s: _parse_float_tuple("sweep.betas", s),
        lambda v: ",".join(format(x, ".17g") for x in v),
    ),
    "thresholds.bracket": (
        "bracket",
        lambda s: tuple(_parse_float_tuple("thresholds.bracket", s)),
        lambda v: ",".join(format(x, ".17g") for x in v),
    ),
    "thresholds.tol": ("bisect_tol", float, lambda v: format(v, ".17g")),
    "thresholds.margin": ("margin", float, lambda v: format(v, ".17g")),
    "regimes.omega_tilde_factors": (
        "omega_tilde_factors",
        lambda s: _parse_float_tuple("regimes.omega_tilde_factors", s),
        lambda v: ",".join(format(x, ".17g") for x in v),
    ),
    "regimes.beta_offset": ("beta_offset", float, lambda v: format(v, ".17g")),
    "asymptotics.betas": (
        "asym_betas",
        lambda s: _parse_float_tuple("asymptotics.betas", s),
        lambda v: ",".join(format(x, ".17g") for x in v),
    ),
}


def _validate(cfg: RunConfig) -> RunConfig:
    if cfg.command not in COMMANDS:
        raise ConfigError(f"command: {cfg.command!r} is not one of {', '.join(COMMANDS)}")
    if cfg.interaction not in ("point", "none"):
        raise ConfigError("params.interaction: must be 'point' or 'none'")
    if cfg.n < 16:
        raise ConfigError("grid.n: need at least 16 nodes")
    if cfg.r_max < 0.0:
        raise ConfigError("grid.r_max: must be positive (or 0 for the default)")
    if cfg.grading < 1.0:
        raise ConfigError("grid.grading: exponent must be >= 1")
    for fmt in cfg.formats:
        if fmt not in FORMATS:
            raise ConfigError(f"output.formats: {fmt!r} is not one of {', '.join(FORMATS)}")
    if cfg.scalar_component not in ("u", "v"):
        raise ConfigError("scalar.component: must be 'u' or 'v'")
    if len(cfg.bracket) != 2 or not 0.0 <= cfg.bracket[0] < cfg.bracket[1]:
        raise ConfigError("thresholds.bracket: need 'lo,hi' with 0 <= lo < hi")
    if cfg.bisect_tol <= 0.0:
        raise ConfigError("thresholds.tol: must be positive")
    if list(cfg.sweep_betas) != sorted(cfg.sweep_betas):
        raise ConfigError("sweep.betas: must be sorted ascending")
    if cfg.command != "selftest":
        cfg.params()  # parameter constraints (e.g. omega > omega_alpha)
    cfg.solve_options()
    return cfg


def parse_config(text: str) -> RunConfig:
    """Parse key = value lines into a validated RunConfig with defaults."""
    cfg = RunConfig()
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        apply_override(cfg, key, value)
        if key in seen:
            raise ConfigError(f"{key}: duplicate key")
        seen.add(key)
    return _validate(cfg)


def apply_override(cfg: RunConfig, key: str, value: str) -> None:
    """Set one dotted key on the config (used for --set flags); no validation."""
    if key not in _SCHEMA:
        raise ConfigError(f"{key}: unknown configuration key")
    attr, parser, _ = _SCHEMA[key]
    try:
        setattr(cfg, attr, parser(value))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: cannot parse {value!r} ({exc})") from exc


def validate(cfg: RunConfig) -> RunConfig:
    """Re-run constraint validation (after --set overrides)."""
    return _validate(cfg)


def emit_config(cfg: RunConfig) -> str:
    """Serialize a config so that parse_config(emit_config(cfg)) == cfg."""
    lines = []
    for key, (attr, _, formatter) in _SCHEMA.items():
        lines.append(f"{key} = {formatter(getattr(cfg, attr))}")
    return "\n".join(lines) + "\n"
