"""Domain types, the default materials table, and config-file ingestion.

Stacks are described by single-pass phase thickness at a reference vacuum
wavevector ``k0``; physical thickness is derived as ``eta0 / (n * k0)``.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import jsonschema

__all__ = [
    "ConfigError",
    "Material",
    "Layer",
    "CoatingStack",
    "BeamSubstrate",
    "EigenmodeSpec",
    "StackSpec",
    "Config",
    "VACUUM",
    "DEFAULT_MATERIALS",
    "DEFAULT_WAVELENGTH",
    "build_stack",
    "parse_config",
    "load_config",
    "config_to_dict",
]

DEFAULT_WAVELENGTH = 1.064e-6


class ConfigError(ValueError):
    """Invalid configuration: bad schema, unresolved name, or broken invariant."""


@dataclass(frozen=True)
class Material:
    """Optical and elastic constants of one homogeneous, isotropic medium.

    ``E`` and ``sigma`` may be left as None for media that only enter the
    optical calculation; the thermal-noise routines reject such materials.
    """

    name: str
    n: float
    p12: float = 0.0
    E: float | None = None
    sigma: float | None = None
    phi_s: float = 0.0
    density: float | None = None

    def __post_init__(self):
        if not self.n >= 1.0:
            raise ConfigError(f"material {self.name!r}: n must be >= 1, got {self.n}")
        if self.sigma is not None and not 0.0 <= self.sigma < 0.5:
            raise ConfigError(
                f"material {self.name!r}: sigma must satisfy 0 <= sigma < 0.5, got {self.sigma}"
            )
        if not self.phi_s >= 0.0:
            raise ConfigError(f"material {self.name!r}: phi_s must be >= 0, got {self.phi_s}")
        if self.E is not None and not self.E > 0.0:
            raise ConfigError(f"material {self.name!r}: E must be > 0, got {self.E}")
        if self.density is not None and not self.density > 0.0:
            raise ConfigError(f"material {self.name!r}: density must be > 0, got {self.density}")


VACUUM = Material("vacuum", 1.0)

# External constants, not from the source analysis. Room-temperature
# literature values; every field can be overridden from a config file.
DEFAULT_MATERIALS: dict[str, Material] = {
    "vacuum": VACUUM,
    # fused silica: p12 from the standard Pockels coefficients (p11=0.121, p12=0.270)
    "SiO2": Material("SiO2", n=1.45, p12=0.27, E=72e9, sigma=0.17, phi_s=1e-6, density=2200.0),
    # no reliable photoelastic data for amorphous tantala; p12 left at zero
    "Ta2O5": Material("Ta2O5", n=2.03, p12=0.0, E=140e9, sigma=0.23, phi_s=2.4e-4, density=6850.0),
    # sapphire along c, isotropic approximation
    "sapphire": Material("sapphire", n=1.75, p12=-0.03, E=400e9, sigma=0.29, phi_s=3e-9, density=3980.0),
}


@dataclass(frozen=True)
class Layer:
    material: Material
    eta0: float  # single-pass phase at k0, radians

    def __post_init__(self):
        if not self.eta0 > 0.0:
            raise ValueError(f"layer phase thickness must be > 0, got {self.eta0}")

    def thickness(self, k0: float) -> float:
        """Physical thickness in meters."""
        return self.eta0 / (self.material.n * k0)


@dataclass(frozen=True)
class CoatingStack:
    """Layers between an ambient medium and a substrate, listed from the ambient side."""

    layers: tuple[Layer, ...]
    substrate: Material
    k0: float
    ambient: Material = VACUUM

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.k0 > 0.0:
            raise ValueError(f"k0 must be > 0, got {self.k0}")

    def __len__(self):
        return len(self.layers)

    @property
    def thickness(self) -> float:
        return sum(layer.thickness(self.k0) for layer in self.layers)

    def check_thin(self, w0: float, ratio: float = 0.1) -> bool:
        """Warn unless the coating is thin compared with the beam radius."""
        ok = self.thickness < ratio * w0
        if not ok:
            warnings.warn(
                f"coating thickness {self.thickness:.3g} m is not small compared with w0={w0:.3g} m",
                stacklevel=2,
            )
        return ok


@dataclass(frozen=True)
class BeamSubstrate:
    w0: float  # 1/e^2 intensity radius, m
    substrate: Material
    temperature: float = 300.0

    def __post_init__(self):
        if not self.w0 > 0.0:
            raise ConfigError(f"w0 must be > 0, got {self.w0}")
        if not self.temperature > 0.0:
            raise ConfigError(f"temperature must be > 0, got {self.temperature}")

    def with_sigma(self, sigma: float) -> "BeamSubstrate":
        return replace(self, substrate=replace(self.substrate, sigma=sigma))


@dataclass(frozen=True)
class EigenmodeSpec:
    omega0: float  # rad/s
    M0: float  # effective mass, kg
    zeta: float  # axial strain per unit surface displacement, 1/m

    def __post_init__(self):
        if not self.omega0 > 0.0:
            raise ConfigError(f"omega0 must be > 0, got {self.omega0}")
        if not self.M0 > 0.0:
            raise ConfigError(f"M0 must be > 0, got {self.M0}")


def build_stack(
    p: int,
    l: int,
    j: int,
    eta_fp: float,
    low: Material,
    high: Material,
    substrate: Material,
    k0: float,
    ambient: Material = VACUUM,
) -> CoatingStack:
    """Quarter-wave reflector with an embedded low-index Fabry-Perot layer.

    From the ambient side: ``l`` (low, high) quarter-wave pairs, one
    quarter-wave low layer, the low-index cavity layer of phase
    ``j * eta_fp``, then ``p - l`` further pairs and the substrate.
    The result always has ``2 * p + 2`` layers.
    """
    if not 0 <= l <= p:
        raise ValueError(f"need 0 <= l <= p, got l={l}, p={p}")
    if j < 1:
        raise ValueError(f"mode order j must be >= 1, got {j}")
    if not eta_fp > 0.0:
        raise ValueError(f"eta_fp must be > 0, got {eta_fp}")
    quarter = math.pi / 2
    pair = (Layer(low, quarter), Layer(high, quarter))
    layers = pair * l + (Layer(low, quarter), Layer(low, j * eta_fp)) + pair * (p - l)
    return CoatingStack(layers, substrate, k0, ambient)


# --------------------------------------------------------------------------
# config files

_NUM = {"type": "number"}

CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "wavelength_m": {"type": "number", "exclusiveMinimum": 0},
        "materials": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "n"],
                "properties": {
                    "name": {"type": "string"},
                    "n": _NUM,
                    "p12": _NUM,
                    "E": _NUM,
                    "sigma": _NUM,
                    "phi_s": _NUM,
                    "density": _NUM,
                },
                "additionalProperties": False,
            },
        },
        "stacks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "p", "l", "j", "eta_fp_over_pi", "low", "high", "substrate"],
                "properties": {
                    "name": {"type": "string"},
                    "p": {"type": "integer", "minimum": 0},
                    "l": {"type": "integer", "minimum": 0},
                    "j": {"type": "integer", "minimum": 1},
                    "eta_fp_over_pi": {"type": "number", "exclusiveMinimum": 0},
                    "low": {"type": "string"},
                    "high": {"type": "string"},
                    "substrate": {"type": "string"},
                    "ambient": {"type": "string"},
                    "wavelength_m": {"type": "number", "exclusiveMinimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "beam": {
            "type": "object",
            "required": ["w0_m", "substrate"],
            "properties": {
                "w0_m": _NUM,
                "substrate": {"type": "string"},
                "temperature_K": _NUM,
            },
            "additionalProperties": False,
        },
        "modes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "omega0_rad_s", "M0_kg", "zeta_per_m"],
                "properties": {
                    "name": {"type": "string"},
                    "omega0_rad_s": _NUM,
                    "M0_kg": _NUM,
                    "zeta_per_m": _NUM,
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


@dataclass(frozen=True)
class StackSpec:
    """The parameters a named stack was built from, kept for serialization."""

    name: str
    p: int
    l: int
    j: int
    eta_fp_over_pi: float
    low: str
    high: str
    substrate: str
    ambient: str = "vacuum"
    wavelength_m: float | None = None


@dataclass(frozen=True)
class Config:
    materials: dict[str, Material]
    stack_specs: dict[str, StackSpec]
    stacks: dict[str, CoatingStack]
    beam: BeamSubstrate | None = None
    modes: dict[str, EigenmodeSpec] = field(default_factory=dict)
    wavelength_m: float = DEFAULT_WAVELENGTH


def _where(path) -> str:
    return "/".join(str(p) for p in path) or "<root>"


def _material_from(entry: dict, where: str) -> Material:
    # omitted constants fall back to the default table entry of the same name
    base = DEFAULT_MATERIALS.get(entry["name"])
    values = {}
    for key in ("p12", "E", "sigma", "phi_s", "density"):
        if key in entry:
            values[key] = float(entry[key])
        elif base is not None:
            values[key] = getattr(base, key)
    try:
        return Material(entry["name"], float(entry["n"]), **values)
    except ConfigError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_config(doc: dict) -> Config:
    """Validate a config document (already decoded from JSON) and build records."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(f"schema violation at {_where(err.absolute_path)}: {err.message}")

    materials: dict[str, Material] = {"vacuum": VACUUM}
    for i, entry in enumerate(doc.get("materials", [])):
        materials[entry["name"]] = _material_from(entry, f"materials/{i}")

    def resolve(name: str, where: str) -> Material:
        try:
            return materials[name]
        except KeyError:
            raise ConfigError(f"{where}: unresolved material name {name!r}") from None

    wavelength = float(doc.get("wavelength_m", DEFAULT_WAVELENGTH))
    specs: dict[str, StackSpec] = {}
    stacks: dict[str, CoatingStack] = {}
    for i, entry in enumerate(doc.get("stacks", [])):
        where = f"stacks/{i}"
        ss = StackSpec(
            name=entry["name"],
            p=entry["p"],
            l=entry["l"],
            j=entry["j"],
            eta_fp_over_pi=float(entry["eta_fp_over_pi"]),
            low=entry["low"],
            high=entry["high"],
            substrate=entry["substrate"],
            ambient=entry.get("ambient", "vacuum"),
            wavelength_m=entry.get("wavelength_m"),
        )
        if ss.l > ss.p:
            raise ConfigError(f"{where}/l: front pair count {ss.l} exceeds p={ss.p}")
        lam = ss.wavelength_m or wavelength
        stacks[ss.name] = build_stack(
            ss.p,
            ss.l,
            ss.j,
            ss.eta_fp_over_pi * math.pi,
            resolve(ss.low, f"{where}/low"),
            resolve(ss.high, f"{where}/high"),
            resolve(ss.substrate, f"{where}/substrate"),
            2 * math.pi / lam,
            ambient=resolve(ss.ambient, f"{where}/ambient"),
        )
        specs[ss.name] = ss

    beam = None
    if "beam" in doc:
        b = doc["beam"]
        try:
            beam = BeamSubstrate(
                float(b["w0_m"]),
                resolve(b["substrate"], "beam/substrate"),
                float(b.get("temperature_K", 300.0)),
            )
        except ConfigError as exc:
            raise ConfigError(f"beam: {exc}") from None

    modes: dict[str, EigenmodeSpec] = {}
    for i, m in enumerate(doc.get("modes", [])):
        try:
            modes[m["name"]] = EigenmodeSpec(
                float(m["omega0_rad_s"]), float(m["M0_kg"]), float(m["zeta_per_m"])
            )
        except ConfigError as exc:
            raise ConfigError(f"modes/{i}: {exc}") from None

    return Config(materials, specs, stacks, beam, modes, wavelength)


def load_config(path) -> Config:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(doc)


def config_to_dict(config: Config) -> dict:
    """Inverse of :func:`parse_config`; re-parsing the result gives equal records."""

    def material(m: Material) -> dict:
        out = {"name": m.name, "n": m.n, "p12": m.p12, "phi_s": m.phi_s}
        for key in ("E", "sigma", "density"):
            if getattr(m, key) is not None:
                out[key] = getattr(m, key)
        return out

    doc: dict[str, Any] = {
        "wavelength_m": config.wavelength_m,
        "materials": [material(m) for name, m in config.materials.items() if name != "vacuum"],
        "stacks": [],
        "modes": [
            {"name": name, "omega0_rad_s": m.omega0, "M0_kg": m.M0, "zeta_per_m": m.zeta}
            for name, m in config.modes.items()
        ],
    }
    for ss in config.stack_specs.values():
        entry = {
            "name": ss.name,
            "p": ss.p,
            "l": ss.l,
            "j": ss.j,
            "eta_fp_over_pi": ss.eta_fp_over_pi,
            "low": ss.low,
            "high": ss.high,
            "substrate": ss.substrate,
            "ambient": ss.ambient,
        }
        if ss.wavelength_m is not None:
            entry["wavelength_m"] = ss.wavelength_m
        doc["stacks"].append(entry)
    if config.beam is not None:
        doc["beam"] = {
            "w0_m": config.beam.w0,
            "substrate": config.beam.substrate.name,
            "temperature_K": config.beam.temperature,
        }
    return doc
