"""Catalog listing."""

from nonstrict.commands.base_command import BaseCommand
from nonstrict.models.catalog import list_models


class ModelsCommand(BaseCommand):
    """Write the model catalog with parameter schemas."""

    name = 'models'
    needs_model = False
    needs_profile = False

    def execute(self) -> None:
        listing = list_models()
        self.writer.write_report(self.report_name, {'models': listing})
        self.stats = {'models_listed': len(listing)}
