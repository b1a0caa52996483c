from .cli import build_parser, main
from .config import ConfigError, WorkspaceConfig
from .io import atomic_write
