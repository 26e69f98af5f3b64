"""Module execution hook: python -m qvrf <subcommand> ..."""

from .cli import main_entry

main_entry()
