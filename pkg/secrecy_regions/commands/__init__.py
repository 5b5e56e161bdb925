from .base import BaseCommand, CommandFailure, CommandResult
from .collection import CommandCollection
from .covering import CoveringCommand
from .permutation import PermutationCommand
from .region import RegionCommand
from .sweep import SweepCommand

__ALL__ = [
    BaseCommand,
    CommandCollection,
    CommandFailure,
    CommandResult,
    CoveringCommand,
    PermutationCommand,
    RegionCommand,
    SweepCommand,
]


def default_collection() -> CommandCollection:
    return CommandCollection(RegionCommand(), SweepCommand(), CoveringCommand(), PermutationCommand())
