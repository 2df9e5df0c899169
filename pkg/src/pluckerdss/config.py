"""Configuration files: INI-style key = value pairs in two sections.

    [system]
    field = gf(16)          # gf(q), q prime or 2^m
    modulus = 13            # optional, hex bit-vector of the GF(2^m) modulus
    b = 4
    seed = 7                # optional, default 0
    node_budget = 16384     # optional cap on n

    [assignment]
    strategy = full | generator | partition | explicit
    path = fixture:resilient7.txt   # generator / explicit; relative to this file
    basis = units                 # partition: 'units' or a matrix file
    c = 2                         # partition group size
    locality_cap = 2              # optional

Errors name the file and, when it can be determined, the offending line.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field as dc_field, replace
from pathlib import Path

from .assignment import (
    DEFAULT_NODE_BUDGET,
    Assignment,
    fixture_path,
    from_generator_matrix,
    full_assignment,
    load_matrix,
    locality_partition_assignment,
    projective_size,
)
from .codec import SystemConfig
from .errors import ConfigError
from .field import FieldSpec, parse_field
from .plucker import NodeVector

STRATEGIES = ("full", "generator", "partition", "explicit")


@dataclass(frozen=True)
class ConfigFile:
    field: str
    b: int | None
    strategy: str
    modulus: str | None = None
    seed: int = 0
    node_budget: int = DEFAULT_NODE_BUDGET
    params: dict = dc_field(default_factory=dict)
    path: str | None = None
    base_dir: str = "."
    lines: dict = dc_field(default_factory=dict, compare=False)

    def line_of(self, key):
        return self.lines.get(key)

    def with_overrides(self, field=None, b=None, seed=None) -> ConfigFile:
        changes = {}
        if field is not None:
            changes["field"] = field
            changes["modulus"] = None
        if b is not None:
            changes["b"] = b
        if seed is not None:
            changes["seed"] = seed
        return replace(self, **changes)

    def _fail(self, msg, key=None):
        raise ConfigError(msg, self.path, self.line_of(key) if key else None)

    def field_spec(self) -> FieldSpec:
        try:
            return parse_field(self.field, self.modulus)
        except ValueError as exc:
            self._fail(str(exc), "field")

    def _resolve(self, value: str) -> Path:
        if value.startswith("fixture:"):
            return fixture_path(value[len("fixture:"):])
        p = Path(value)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def build(self) -> tuple:
        """Parse into (SystemConfig, Assignment), validating everything."""
        F = self.field_spec()
        p = self.params
        try:
            if self.strategy == "full":
                b = self._need_b()
                if projective_size(F.q, b) > self.node_budget:
                    self._fail(f"full assignment needs {projective_size(F.q, b)} nodes "
                               f"> node_budget {self.node_budget}", "strategy")
                assignment = full_assignment(F, b, self.node_budget)
            elif self.strategy == "generator":
                G = load_matrix(self._resolve(self._param("path")))
                assignment = from_generator_matrix(F, G)
            elif self.strategy == "explicit":
                rows = load_matrix(self._resolve(self._param("path")))
                assignment = Assignment(tuple(NodeVector.normalized(F, r) for r in rows))
            elif self.strategy == "partition":
                b = self._need_b()
                c = int(self._param("c"))
                basis_spec = p.get("basis", "units")
                if basis_spec == "units":
                    basis = [tuple(int(i == k) for i in range(b)) for k in range(b)]
                else:
                    basis = load_matrix(self._resolve(basis_spec))
                assignment = locality_partition_assignment(F, basis, c)
            else:
                self._fail(f"unknown strategy {self.strategy!r}; pick one of {STRATEGIES}", "strategy")
        except ConfigError:
            raise
        except (ValueError, OSError) as exc:
            self._fail(str(exc), "strategy")
        if self.b is not None and assignment.b != self.b:
            self._fail(f"assignment vectors have length {assignment.b} but b = {self.b}", "b")
        if len(assignment) > self.node_budget:
            self._fail(f"{len(assignment)} nodes exceed node_budget {self.node_budget}", "node_budget")
        try:
            config = SystemConfig(F, assignment.b, len(assignment))
        except ValueError as exc:
            self._fail(str(exc), "b")
        return config, assignment

    @property
    def locality_cap(self) -> int | None:
        v = self.params.get("locality_cap")
        return int(v) if v is not None else None

    def _need_b(self) -> int:
        if self.b is None:
            self._fail(f"strategy {self.strategy!r} needs b in [system]", "strategy")
        return self.b

    def _param(self, key):
        if key not in self.params:
            self._fail(f"strategy {self.strategy!r} needs '{key}' in [assignment]", "strategy")
        return self.params[key]


_SECTION = re.compile(r"^\s*\[([^\]]+)\]")
_KEY = re.compile(r"^\s*([A-Za-z_][\w.-]*)\s*[=:]")


def _key_lines(text):
    lines = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        m = _SECTION.match(raw)
        if m:
            section = m.group(1).strip()
            continue
        m = _KEY.match(raw)
        if m and section is not None:
            lines.setdefault(m.group(1).lower(), lineno)
    return lines


def parse_config(text: str, path=None, base_dir=".") -> ConfigFile:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=str(path or "<config>"))
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r}", path, exc.lineno) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section {exc.section!r}", path, exc.lineno) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("expected a [section] header first", path, exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("cannot parse line", path, lineno) from None
    lines = _key_lines(text)
    for section in cp.sections():
        if section not in ("system", "assignment"):
            raise ConfigError(f"unknown section [{section}]", path)
    if not cp.has_section("system"):
        raise ConfigError("missing [system] section", path)
    system = cp["system"]
    for key in system:
        if key not in ("field", "modulus", "b", "seed", "node_budget"):
            raise ConfigError(f"unknown key {key!r} in [system]", path, lines.get(key))

    def as_int(section, key, default=None):
        if key not in section:
            return default
        try:
            return int(section[key], 0)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {section[key]!r}", path,
                              lines.get(key)) from None

    if "field" not in system:
        raise ConfigError("missing 'field' in [system]", path)
    assignment = cp["assignment"] if cp.has_section("assignment") else {}
    params = {k: v for k, v in assignment.items() if k != "strategy"}
    for key in params:
        if key not in ("path", "basis", "c", "locality_cap"):
            raise ConfigError(f"unknown key {key!r} in [assignment]", path, lines.get(key))
    strategy = assignment.get("strategy", "full")
    if strategy not in STRATEGIES:
        raise ConfigError(f"unknown strategy {strategy!r}; pick one of {STRATEGIES}", path,
                          lines.get("strategy"))
    return ConfigFile(
        field=system["field"],
        b=as_int(system, "b"),
        strategy=strategy,
        modulus=system.get("modulus"),
        seed=as_int(system, "seed", 0),
        node_budget=as_int(system, "node_budget", DEFAULT_NODE_BUDGET),
        params=params,
        path=str(path) if path else None,
        base_dir=str(base_dir),
        lines=lines,
    )


def load_config(path) -> ConfigFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(exc), str(path)) from None
    return parse_config(text, str(path), path.parent)
