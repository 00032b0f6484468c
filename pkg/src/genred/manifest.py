"""Run manifests: flat ``key = value`` files that pin down a batch run."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .freegroup import ENUM_VERSION
from .growth import GrowthFunction, growth_by_name

MODES = ("sound", "unchecked")


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class RunManifest:
    command: str
    mode: str = "unchecked"
    g_name: str = "n^2"
    enum_version: str = ENUM_VERSION
    seed: int = 0
    params: Mapping[str, str] = field(default_factory=dict)

    @property
    def g(self) -> GrowthFunction:
        return growth_by_name(self.g_name)

    def get(self, key: str, default: str | None = None) -> str:
        if key in self.params:
            return self.params[key]
        if default is None:
            raise ManifestError(f"manifest lacks required key {key!r}")
        return default

    def get_int(self, key: str, default: int | None = None) -> int:
        raw = self.get(key, None if default is None else str(default))
        try:
            return int(raw)
        except ValueError:
            raise ManifestError(f"{key} must be an integer, got {raw!r}") from None

    def get_list(self, key: str, default: str | None = None) -> list[str]:
        return [t.strip() for t in self.get(key, default).split(",") if t.strip()]

    def to_text(self) -> str:
        lines = [f"command = {self.command}", f"mode = {self.mode}", f"g = {self.g_name}",
                 f"enum = {self.enum_version}", f"seed = {self.seed}"]
        lines.extend(f"{k} = {v}" for k, v in sorted(self.params.items()))
        return "\n".join(lines) + "\n"


def parse_manifest(text: str) -> RunManifest:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ManifestError(f"line {lineno}: expected key = value")
        if key in raw:
            raise ManifestError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value.strip()
    if "command" not in raw:
        raise ManifestError("manifest lacks a command")
    mode = raw.pop("mode", "unchecked")
    if mode not in MODES:
        raise ManifestError(f"mode must be one of {', '.join(MODES)}")
    g_name = raw.pop("g", "n^2")
    try:
        growth_by_name(g_name)
    except ValueError as exc:
        raise ManifestError(str(exc)) from None
    enum = raw.pop("enum", ENUM_VERSION)
    if enum != ENUM_VERSION:
        raise ManifestError(f"enumeration version {enum!r} is not supported")
    try:
        seed = int(raw.pop("seed", "0"))
    except ValueError:
        raise ManifestError("seed must be an integer") from None
    command = raw.pop("command")
    return RunManifest(command, mode, g_name, enum, seed, raw)


def load_manifest(path: str) -> RunManifest:
    with open(path, encoding="utf-8") as fh:
        return parse_manifest(fh.read())
