"""
Commands Package
"""
from . import rate as rate_command
from . import sample as sample_command
from . import verify as verify_command
from . import volume as volume_command
from . import thinshell as thinshell_command

COMMANDS = (rate_command, sample_command, verify_command, volume_command, thinshell_command)

__all__ = [
    "rate_command",
    "sample_command",
    "verify_command",
    "volume_command",
    "thinshell_command",
    "COMMANDS",
]
