"""Experiment configuration: one dataclass shared by every command."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field

__all__ = ["ExperimentConfig", "ConfigError", "COMMANDS", "parse_schedule", "parse_floats"]

COMMANDS = ("converge", "pvm", "jordan", "poly", "variation", "histories", "continuum", "selftest")
CONTINUUM_TASKS = ("weyl", "heatkernel", "dirichlet")


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name
        self.message = message


def parse_floats(text: str) -> list[float]:
    return [float(s) for s in text.split(",") if s.strip()]


def parse_schedule(text: str) -> list[int]:
    """Parse "1,2,4,...,256" (geometric or arithmetic continuation) or "1,2,8"."""
    tokens = [s.strip() for s in text.split(",") if s.strip()]
    out: list[int] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "...":
            if len(out) < 2 or i + 1 >= len(tokens):
                raise ValueError("'...' needs two leading values and an end value")
            end = int(tokens[i + 1])
            x0, x1 = out[-2], out[-1]
            if x0 > 0 and x1 % x0 == 0 and x1 // x0 > 1:
                r = x1 // x0
                nxt = x1 * r
                while nxt <= end:
                    out.append(nxt)
                    nxt *= r
            else:
                d = x1 - x0
                if d <= 0:
                    raise ValueError("cannot continue a non-increasing schedule")
                out.extend(range(x1 + d, end + 1, d))
            if out[-1] != end:
                out.append(end)
            i += 2
            continue
        out.append(int(tok))
        i += 1
    return out


@dataclass
class ExperimentConfig:
    """Fully resolved settings for one command.

    Fields not used by a command keep their defaults and still appear in
    the report header, so every output records its complete configuration.
    """

    command: str
    pair: str = "pauli"
    A: str | None = None
    B: str | None = None
    a: float = 1.0
    b: float = 1.0
    function: str = "gaussian:width=1"
    schedule: list = field(default_factory=lambda: [1, 2, 4, 8, 16, 32, 64, 128, 256])
    route: str = "auto"
    order: str = "AB"
    seed: int | None = None
    output: str | None = None
    # pvm
    alpha: float = 0.0
    beta: float = 3.0
    eps: list = field(default_factory=lambda: [4.0 ** -k for k in range(6)])
    variant: str = "mollifier"
    # poly
    coeffs: str = "1,1,1"
    # variation
    example: str = "pauli"
    N_max: int = 8
    # histories
    samples: int = 100000
    N: int = 2
    # continuum
    task: str = "weyl"
    t: float = 0.5
    k: int = 512
    L: float = 20.0
    tau: float = 1.0
    n_list: list = field(default_factory=lambda: [4, 16, 64, 256])

    def validate(self) -> "ExperimentConfig":
        from .altint import ROUTES  # local import keeps config light

        if self.command not in COMMANDS:
            raise ConfigError("command", f"must be one of {COMMANDS}")
        for name in ("A", "B"):
            path = getattr(self, name)
            if path is not None and not os.path.isfile(path):
                raise ConfigError(name, f"file {path!r} does not exist")
        if self.route not in ROUTES:
            raise ConfigError("route", f"must be one of {ROUTES}")
        if self.order not in ("AB", "BA"):
            raise ConfigError("order", "must be AB or BA")
        s = list(self.schedule)
        if not s or any(n < 1 for n in s) or any(y <= x for x, y in zip(s, s[1:])):
            raise ConfigError("schedule", f"must be positive and strictly increasing, got {s}")
        if self.command == "pvm":
            if self.variant not in ("mollifier", "atom", "bump"):
                raise ConfigError("variant", "must be mollifier, atom or bump")
            if self.variant != "atom" and not self.alpha < self.beta:
                raise ConfigError("beta", "must exceed alpha")
            if self.variant != "bump" and (not self.eps or any(e <= 0 for e in self.eps)):
                raise ConfigError("eps", "must be a nonempty list of positive values")
        if self.command == "histories":
            if self.seed is None:
                raise ConfigError("seed", "histories needs an explicit --seed")
            if self.samples < 1:
                raise ConfigError("samples", "must be positive")
            if self.N < 1:
                raise ConfigError("N", "must be positive")
        if self.command == "variation" and self.N_max < 1:
            raise ConfigError("N_max", "must be positive")
        if self.command == "continuum":
            if self.task not in CONTINUUM_TASKS:
                raise ConfigError("task", f"must be one of {CONTINUUM_TASKS}")
            if self.k < 8 or self.k & (self.k - 1):
                raise ConfigError("k", "must be a power of two >= 8")
            if not self.L > 0:
                raise ConfigError("L", "must be positive")
        return self

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)
