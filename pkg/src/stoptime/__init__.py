"""Desk-scale experiments with stopping-time complexity on finite binary trees."""

from .tree import depth_max, is_prefix, are_compatible, check_prefix_free, NotPrefixFreeError
from .modes import DescriptionMode, make_mode, validate_mode, complexity_monotone, complexity_plain
from .machines import StoppingMachine, Action, machine_from_enumerator, stop_set
from .coloring import ColoringGame
from .oracle import max_over_extensions
from .beating import run_beating_game, prefix_stable_extension
from .allocation import AllocatorConfig, Allocator, run_adversary, minimal_in_class

__version__ = "0.1.0"
