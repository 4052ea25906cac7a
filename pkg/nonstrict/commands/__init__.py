"""Command-line commands."""

from nonstrict.commands.analyze import AnalyzeCommand
from nonstrict.commands.base_command import BaseCommand, build_profile, command_name
from nonstrict.commands.models import ModelsCommand
from nonstrict.commands.montecarlo import MonteCarloCommand
from nonstrict.commands.simulate import SimulateCommand
from nonstrict.commands.travelingwave import TravelingWaveCommand

COMMANDS = {
    cls.name: cls
    for cls in (AnalyzeCommand, SimulateCommand, TravelingWaveCommand, MonteCarloCommand, ModelsCommand)
}

__all__ = [
    'AnalyzeCommand',
    'BaseCommand',
    'COMMANDS',
    'ModelsCommand',
    'MonteCarloCommand',
    'SimulateCommand',
    'TravelingWaveCommand',
    'build_profile',
    'command_name',
]
