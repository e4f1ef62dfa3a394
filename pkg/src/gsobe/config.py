"""Flat ``key = value`` run configuration.

Values are resolved with the precedence command line > config file > defaults.
Keys may be written with ``-`` or ``_``; ``#`` starts a comment.  Any unknown
key or unparsable value raises :class:`ConfigError` naming the key.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

COMMANDS = ("simulate", "linear", "picard", "derive", "estimates", "lemmas")


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"config key {key!r}: {message}")
        self.key = key


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _int_list(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        out = tuple(int(v) for v in text)
    else:
        out = tuple(int(v) for v in str(text).replace(" ", "").split(",") if v)
    if not out:
        raise ValueError("expected a comma-separated list of integers")
    return out


def _optional_float(text):
    if text is None or str(text).strip().lower() in ("", "none", "default"):
        return None
    return float(text)


def _positive(kind):
    def parse(text):
        v = kind(text)
        if not v > 0:
            raise ValueError(f"must be positive, got {v}")
        return v
    return parse


def _choice(*options):
    def parse(text):
        t = str(text).strip()
        if t not in options:
            raise ValueError(f"must be one of {', '.join(options)}; got {t!r}")
        return t
    return parse


def _k(text):
    v = int(text)
    if v not in (-1, 1):
        raise ValueError(f"must be -1 or 1, got {v}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise ValueError(f"must be >= 0, got {v}")
    return v


def _even_grid(text):
    v = int(text)
    if v < 8 or v % 2:
        raise ValueError(f"must be an even integer >= 8, got {v}")
    return v


def _lattice_sizes(text):
    sizes = _int_list(text)
    for n in sizes:
        if n < 2 or n % 2:
            raise ValueError(f"lattice sizes must be even integers >= 2, got {n}")
    return sizes


#: key -> (parser, default, help)
SCHEMA: dict[str, tuple[Callable[[Any], Any], Any, str]] = {
    "seed": (_nonneg_int, 0, "root seed for every random draw"),
    "out": (str, ".", "output directory"),
    "k": (_k, -1, "sign of the fourth-order term"),
    "s": (_optional_float, None, "Sobolev exponent (estimates: preset default)"),
    "b": (_optional_float, None, "modulation exponent (estimates: preset default)"),
    "grid_n": (_even_grid, 64, "spatial grid points"),
    "domain_length": (_positive(float), 40.0, "periodic domain length"),
    "data": (_choice("gaussian", "random", "zero"), "gaussian", "initial data family"),
    "amplitude": (float, 1e-2, "initial data amplitude"),
    "width": (_positive(float), 1.0, "gaussian width"),
    "T": (_positive(float), 1.0, "final time (picard: cutoff scale, at most 1)"),
    "dt": (_positive(float), 1e-3, "time step"),
    "save_every": (_positive(int), 10, "steps between saved states"),
    "n_out": (_positive(int), 101, "saved times for the linear flow"),
    "n_iter": (_positive(int), 6, "Picard iterations"),
    "nl": (str, "1,1,1,1", "weights of (u^2)_xx, (u^2)_xxxx, (u u_xx)_xx, (u^3)_xx"),
    "binary": (_bool, False, "also write the binary trajectory dump"),
    "target": (_choice("corrected", "printed"), "corrected", "derivation target"),
    "abcd": (str, "default", "default | symbolic | random | a,b,c,d[,a1,b1,c1,d1]"),
    "preset": (str, "bi1", "estimate preset"),
    "lattice_n": (_lattice_sizes, (32, 64, 128), "lattice sizes for sweeps"),
    "n_samples": (_positive(int), 100, "random samples per sweep or lemma"),
}


def normalise_key(key: str) -> str:
    k = key.strip().replace("-", "_")
    if k.lower() == "t":
        return "T"
    return k


def parse_value(key: str, value):
    key = normalise_key(key)
    if key not in SCHEMA:
        raise ConfigError(key, f"unknown key; known keys are {', '.join(sorted(SCHEMA))}")
    parser = SCHEMA[key][0]
    try:
        return parser(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(key, str(exc)) from None


def read_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line, f"{source}:{lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        out[normalise_key(key)] = parse_value(key, value)
    return out


def read_config_file(path) -> dict[str, Any]:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {p}: {exc.strerror}") from None
    return read_config_text(text, str(p))


@dataclass(frozen=True)
class RunConfig:
    command: str
    values: Mapping[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.values[normalise_key(key)]

    @property
    def out_dir(self) -> Path:
        return Path(self.values["out"])

    def lines(self) -> list[str]:
        """Resolved configuration as ``key = value`` lines, sorted by key."""
        def fmt(v):
            if isinstance(v, float):
                return format(v, ".17g")
            if isinstance(v, tuple):
                return ",".join(str(x) for x in v)
            return str(v)
        return [f"command = {self.command}"] + [f"{k} = {fmt(v)}" for k, v in sorted(self.values.items())]


def resolve(command: str, file_values: Mapping[str, Any] | None = None,
            cli_values: Mapping[str, Any] | None = None) -> RunConfig:
    """Merge defaults, file values and command-line values (highest last)."""
    if command not in COMMANDS:
        raise ConfigError("command", f"must be one of {', '.join(COMMANDS)}")
    values = {k: spec[1] for k, spec in SCHEMA.items()}
    for layer in (file_values or {}, cli_values or {}):
        for key, value in layer.items():
            if value is None:
                continue
            values[normalise_key(key)] = parse_value(key, value)
    return RunConfig(command, values)
