import argparse
import logging
from typing import List

from utils.errors import SlitSimError
from utils.monitoring import RunMonitor
from utils.output_manager import OutputManager
from .figures import FigureBuilder
from .sim_commands import SimCommands
from .sim_state import COMMANDS, FORMATS, RunConfig
from .sim_tables import Table


def build_parser() -> argparse.ArgumentParser:
    """One flag per model and grid field; flags left unset fall back to config.json"""
    parser = argparse.ArgumentParser(
        prog='slitsim',
        description='Double-slit which-path measurement, decoherence and dephasing data',
    )
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--L', type=float, help='half slit separation in slit widths')
    parser.add_argument('--sigma', type=float, nargs='+', help="measurement precision(s); 'inf' means no measurement")
    parser.add_argument('--t', type=float, nargs='+', help='time(s) after the slits')
    parser.add_argument('--gamma', type=float, help='width of the Gaussian phase distribution')
    parser.add_argument('--grid-n', dest='grid_n', type=int, help='output grid points')
    parser.add_argument('--x-max', dest='x_max', type=float, help='output grid half width')
    parser.add_argument('--seed', type=int, help='Monte Carlo and screen-sampling seed')
    parser.add_argument('--samples', type=int, help='Monte Carlo trials')
    parser.add_argument('--tol', type=float, help='absolute quadrature tolerance')
    parser.add_argument('--format', choices=FORMATS, help='output format')
    parser.add_argument('--out', help='output folder')
    parser.add_argument('--figure', type=int, help='figure to reproduce (2, 3, 4 or 5)')
    parser.add_argument('--gnuplot', action='store_true', help='also write a gnuplot script per csv file')
    parser.add_argument('--config', help='alternative config.json')
    return parser


class Simulator:
    """Main command component that coordinates all simulator parts"""
    def __init__(self, config: RunConfig):
        self.config = config

        # Initialize components
        self.monitor = RunMonitor(config.command)
        self.output = OutputManager(config.out)
        self.sim_commands = SimCommands(config, self.output, self.monitor)
        self.figures = FigureBuilder(self.sim_commands)

        self.handlers = {
            'free-evolve': self.sim_commands.free_evolve,
            'measure': self.sim_commands.measure,
            'apparatus': self.sim_commands.apparatus,
            'info-curve': self.sim_commands.info_curve,
            'dephase': self.sim_commands.dephase,
            'reproduce-fig': self.figures.reproduce,
        }

    async def load(self):
        """Called before any command runs"""
        await self.output.ensure_output_folder()

    async def run(self) -> List[Table]:
        command = self.config.command
        logging.info(f"Running {command} with L={self.config.L}")
        try:
            await self.load()
            tables = await self.handlers[command]()
        except SlitSimError as e:
            logging.error(f"Error in {command}: {e}")
            raise
        self.monitor.log_stats()
        logging.info(f"{command} finished: {len(self.output.written)} files written to {self.config.out}")
        return tables
