from .config_loader import ConfigLoader
from .argument_parser import build_parser, COMMANDS
from .cli_runner import CliRunner, HANDLERS
