"""
Slit Simulator Utilities
------------------------
Support classes shared by the physics library and the command-line tool.

Main components:
- SlitSimError and subclasses: error hierarchy with CLI exit codes
- OutputManager: output folder checks and serialized async file writes
- RunMonitor: resource usage and wall time of a run
"""
from .errors import SlitSimError, DomainError, UsageError, NumericError, OutputError
from .monitoring import RunMonitor
from .output_manager import OutputManager

__all__ = ['SlitSimError', 'DomainError', 'UsageError', 'NumericError', 'OutputError', 'RunMonitor', 'OutputManager']

# Additional metadata
__version__ = '0.1.0'
__description__ = 'Utility package for the slit decoherence simulator'
