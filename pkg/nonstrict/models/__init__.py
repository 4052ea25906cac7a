"""Model catalog."""

from nonstrict.models.catalog import (
    MODEL_SCHEMAS,
    ModelEntry,
    build,
    list_models,
    pressure_from_E,
    stratified_dimensionless,
)

__all__ = [
    'MODEL_SCHEMAS',
    'ModelEntry',
    'build',
    'list_models',
    'pressure_from_E',
    'stratified_dimensionless',
]
