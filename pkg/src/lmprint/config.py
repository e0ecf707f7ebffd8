"""JSON run configuration -> Environment.

Every section is optional (defaults are the shipped GaIn24.5 / PVC-film
setup); unknown keys anywhere are rejected so a typo cannot silently fall
back to a default. Substrates and inks may be named presets or inline
records.
"""

from __future__ import annotations

import json

from .core import (DEFAULT_BEAD, GAIN245, SUBSTRATE_PRESETS, BeadGeometry,
                   InkProperties, MachineLimits, PressureCalibration,
                   SpeedCalibration, SubstrateProperties)
from .environment import CornerPolicy, Environment
from .errors import ConfigError
from .flux import FluxModelParams

_TOP_KEYS = {"ink", "substrate", "bead", "limits", "speed_calibration",
             "pressure_calibration", "flux", "policy", "simulation"}

INK_PRESETS = {"gain24.5": GAIN245}


def _require_keys(section: str, obj: dict, allowed: set[str]):
    if not isinstance(obj, dict):
        raise ConfigError(f"config section {section!r} must be an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {section!r}: {sorted(unknown)}")


def _number(section: str, obj: dict, key: str, default):
    value = obj.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number")
    return float(value)


def _ink(spec) -> InkProperties:
    if spec is None:
        return GAIN245
    if isinstance(spec, str):
        try:
            return INK_PRESETS[spec.lower()]
        except KeyError:
            raise ConfigError(
                f"unknown ink preset {spec!r}; known: {sorted(INK_PRESETS)}")
    _require_keys("ink", spec, {"name", "density", "kinematic_viscosity",
                                "surface_tension_lm_air", "melting_point"})
    for key in ("density", "kinematic_viscosity", "surface_tension_lm_air"):
        if key not in spec:
            raise ConfigError(f"inline ink needs {key!r}")
    return InkProperties(
        name=str(spec.get("name", "custom")),
        density=_number("ink", spec, "density", None),
        kinematic_viscosity=_number("ink", spec, "kinematic_viscosity", None),
        surface_tension_lm_air=_number("ink", spec,
                                       "surface_tension_lm_air", None),
        melting_point=_number("ink", spec, "melting_point", 15.5),
    )


def _substrate(spec) -> SubstrateProperties:
    if spec is None:
        return SUBSTRATE_PRESETS["pvc-film"]
    if isinstance(spec, str):
        try:
            return SUBSTRATE_PRESETS[spec.lower()]
        except KeyError:
            raise ConfigError(f"unknown substrate preset {spec!r}; known: "
                              f"{sorted(SUBSTRATE_PRESETS)}")
    _require_keys("substrate", spec,
                  {"name", "youngs_modulus", "poisson_ratio",
                   "friction_coefficient", "gamma_sub_air", "gamma_sub_lm",
                   "angle_table"})
    missing = {"youngs_modulus", "poisson_ratio", "friction_coefficient",
               "gamma_sub_air", "gamma_sub_lm", "angle_table"} - set(spec)
    if missing:
        raise ConfigError(f"inline substrate needs {sorted(missing)}")
    table = spec["angle_table"]
    if (not isinstance(table, list) or
            any(not isinstance(r, list) or len(r) != 2 for r in table)):
        raise ConfigError("substrate.angle_table must be [[force_n, deg],...]")
    return SubstrateProperties(
        name=str(spec.get("name", "custom")),
        youngs_modulus=_number("substrate", spec, "youngs_modulus", None),
        poisson_ratio=_number("substrate", spec, "poisson_ratio", None),
        friction_coefficient=_number("substrate", spec,
                                     "friction_coefficient", None),
        gamma_sub_air=_number("substrate", spec, "gamma_sub_air", None),
        gamma_sub_lm=_number("substrate", spec, "gamma_sub_lm", None),
        angle_table=tuple((float(f), float(a)) for f, a in table),
    )


def _bead(spec) -> BeadGeometry:
    if spec is None:
        return DEFAULT_BEAD
    _require_keys("bead", spec, {"bead_radius_m", "gap_width_m",
                                 "channel_width_m", "channel_length_m"})
    return BeadGeometry(
        bead_radius=_number("bead", spec, "bead_radius_m",
                            DEFAULT_BEAD.bead_radius),
        gap_width=_number("bead", spec, "gap_width_m",
                          DEFAULT_BEAD.gap_width),
        channel_width_eff=_number("bead", spec, "channel_width_m", None),
        channel_length_eff=_number("bead", spec, "channel_length_m", None),
    )


def _limits(spec) -> MachineLimits:
    if spec is None:
        return MachineLimits()
    _require_keys("limits", spec, {"max_speed_mm_s", "preferred_max_speed_mm_s",
                                   "max_pressure_g"})
    base = MachineLimits()
    return MachineLimits(
        max_speed=_number("limits", spec, "max_speed_mm_s", base.max_speed),
        preferred_max_speed=_number("limits", spec, "preferred_max_speed_mm_s",
                                    base.preferred_max_speed),
        max_pressure=_number("limits", spec, "max_pressure_g",
                             base.max_pressure),
    )


def _policy(spec) -> CornerPolicy:
    if spec is None:
        return CornerPolicy()
    _require_keys("policy", spec, {"threshold_angle_deg", "strategy",
                                   "slowdown_factor", "fillet_radius_mm"})
    base = CornerPolicy()
    return CornerPolicy(
        threshold_angle=_number("policy", spec, "threshold_angle_deg",
                                base.threshold_angle),
        strategy=str(spec.get("strategy", base.strategy)),
        slowdown_factor=_number("policy", spec, "slowdown_factor",
                                base.slowdown_factor),
        fillet_radius_mm=_number("policy", spec, "fillet_radius_mm",
                                 base.fillet_radius_mm),
    )


def load_config(data: bytes | str | None) -> Environment:
    """Build an Environment from config JSON (None -> all defaults)."""
    if data is None:
        return Environment()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    _require_keys("config", doc, _TOP_KEYS)

    ink = _ink(doc.get("ink"))
    substrate = _substrate(doc.get("substrate"))
    bead = _bead(doc.get("bead"))
    limits = _limits(doc.get("limits"))
    policy = _policy(doc.get("policy"))

    speed_cal = SpeedCalibration()
    if "speed_calibration" in doc:
        spec = doc["speed_calibration"]
        _require_keys("speed_calibration", spec, {"mm_s_per_unit"})
        speed_cal = SpeedCalibration(
            mm_s_per_unit=_number("speed_calibration", spec, "mm_s_per_unit",
                                  speed_cal.mm_s_per_unit))

    pressure_cal = PressureCalibration()
    if "pressure_calibration" in doc:
        spec = doc["pressure_calibration"]
        _require_keys("pressure_calibration", spec, {"anchors"})
        anchors = spec.get("anchors")
        if anchors is not None:
            if (not isinstance(anchors, list) or
                    any(not isinstance(r, list) or len(r) != 2
                        for r in anchors)):
                raise ConfigError("pressure_calibration.anchors must be "
                                  "[[setting, grams], ...]")
            pressure_cal = PressureCalibration(
                anchors=tuple((float(s), float(g)) for s, g in anchors))

    flux_params = None
    if "flux" in doc and doc["flux"] is not None:
        spec = doc["flux"]
        _require_keys("flux", spec, {"kappa_pressure", "kappa_couette"})
        if {"kappa_pressure", "kappa_couette"} - set(spec):
            raise ConfigError("flux section needs kappa_pressure and "
                              "kappa_couette")
        flux_params = FluxModelParams(
            kappa_pressure=_number("flux", spec, "kappa_pressure", None),
            kappa_couette=_number("flux", spec, "kappa_couette", None))

    sim = doc.get("simulation") or {}
    _require_keys("simulation", sim,
                  {"pressure_drop_pa", "tangential_angle_rad", "dwell_s",
                   "s_max", "chord_tolerance_mm", "max_raster_pixels",
                   "resistivity_ohm_m"})
    base = Environment()
    max_px = sim.get("max_raster_pixels", base.max_raster_pixels)
    if isinstance(max_px, bool) or not isinstance(max_px, int):
        raise ConfigError("simulation.max_raster_pixels must be an integer")

    return Environment(
        ink=ink, substrate=substrate, bead=bead, flux_params=flux_params,
        limits=limits, speed_calibration=speed_cal,
        pressure_calibration=pressure_cal, policy=policy,
        pressure_drop=_number("simulation", sim, "pressure_drop_pa",
                              base.pressure_drop),
        tangential_angle=_number("simulation", sim, "tangential_angle_rad",
                                 base.tangential_angle),
        dwell_s=_number("simulation", sim, "dwell_s", base.dwell_s),
        s_max=_number("simulation", sim, "s_max", base.s_max),
        chord_tolerance_mm=_number("simulation", sim, "chord_tolerance_mm",
                                   base.chord_tolerance_mm),
        max_raster_pixels=max_px,
        resistivity_ohm_m=_number("simulation", sim, "resistivity_ohm_m",
                                  base.resistivity_ohm_m),
    )


def load_config_file(path) -> Environment:
    with open(path, "rb") as fh:
        return load_config(fh.read())
