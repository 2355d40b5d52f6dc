"""Command-line components: parser and coordinator, command logic, run config, tables and figures."""
from .simulator import Simulator, build_parser
from .sim_state import RunConfig

__all__ = ['Simulator', 'build_parser', 'RunConfig']
