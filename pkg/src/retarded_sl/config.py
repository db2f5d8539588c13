"""Reading problem configuration files.

The format is a flat INI dialect::

    # comment
    [problem]
    a1 = 1
    b = pi/2              # constant expressions are allowed for reals
    q_left = "cos(x)"     # expressions are quoted

    [numerics]
    n_max = 40

Unknown sections or keys, duplicates and missing ``problem`` keys are
errors that name the offending line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError, RetardedSLError
from .expr import eval_expr, is_constant, parse_expr
from .problem import COEFFICIENT_KEYS, EXPRESSION_KEYS

__all__ = ["Numerics", "ProblemConfig", "load_config", "parse_config"]


@dataclass(frozen=True)
class Numerics:
    grid_points: int = 4096
    quad_points: int = 2048
    scan_step: float = 0.05
    root_tol: float = 1e-12
    n_max: int = 40


_NUMERIC_TYPES = {f.name: f.type for f in fields(Numerics)}


@dataclass(frozen=True)
class ProblemConfig:
    problem: dict = field(default_factory=dict)
    numerics: Numerics = Numerics()
    source: str = "<string>"

    def with_numerics(self, **changes) -> "ProblemConfig":
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, numerics=replace(self.numerics, **changes))


def _unquote(raw: str) -> tuple[str, bool]:
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        return raw[1:-1], True
    return raw, False


def _strip_comment(line: str) -> str:
    # '#' starts a comment unless it sits inside quotes
    quote = None
    for i, ch in enumerate(line):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            return line[:i]
    return line


def _real(text: str, where: str) -> float:
    try:
        value = float(text)
    except ValueError:
        try:
            e = parse_expr(text)
            if not is_constant(e):
                raise ConfigError(f"{where}: expected a real constant, got {text!r}")
            value = eval_expr(e, 0.0)
        except RetardedSLError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{where}: cannot read {text!r} as a real number ({exc})") from exc
    if not math.isfinite(value):
        raise ConfigError(f"{where}: value must be finite")
    return value


def parse_config(text: str, source: str = "<string>") -> ProblemConfig:
    section = None
    problem: dict = {}
    numerics: dict = {}
    seen: dict[tuple[str, str], int] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw_line).strip()
        if not line:
            continue
        where = f"{source}, line {lineno}"
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"{where}: malformed section header {line!r}")
            section = line[1:-1].strip()
            if section not in ("problem", "numerics"):
                raise ConfigError(f"{where}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if section is None:
            raise ConfigError(f"{where}: key {key} outside of any section")
        if (section, key) in seen:
            raise ConfigError(f"{where}: duplicate key {key} (first set on line {seen[section, key]})")
        seen[section, key] = lineno
        value, quoted = _unquote(value)
        if section == "problem":
            if key in COEFFICIENT_KEYS:
                problem[key] = _real(value, f"{where}, key {key}")
            elif key in EXPRESSION_KEYS:
                if not value.strip():
                    raise ConfigError(f"{where}, key {key}: empty expression")
                problem[key] = value
            else:
                raise ConfigError(f"{where}: unknown key {key}")
        else:
            if key not in _NUMERIC_TYPES:
                raise ConfigError(f"{where}: unknown key {key}")
            number = _real(value, f"{where}, key {key}")
            if _NUMERIC_TYPES[key] in (int, "int"):
                if number != int(number):
                    raise ConfigError(f"{where}, key {key}: expected an integer")
                number = int(number)
            numerics[key] = number
    missing = [k for k in COEFFICIENT_KEYS + EXPRESSION_KEYS if k not in problem]
    if missing:
        raise ConfigError(f"{source}: missing key {missing[0]} in [problem]"
                          + (f" (also missing: {', '.join(missing[1:])})" if missing[1:] else ""))
    return ProblemConfig(problem, Numerics(**numerics), source)


def load_config(path) -> ProblemConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_config(text, str(path))
