"""Thermal phase noise of interferometer mirrors and schemes that compensate it."""
from .model import (
    BeamSubstrate,
    CoatingStack,
    ConfigError,
    EigenmodeSpec,
    Layer,
    Material,
    build_stack,
    load_config,
    parse_config,
)
from .tmm import StrainModel

__version__ = "0.1.0"
