import os
import sys
import json
import asyncio
import logging
from datetime import datetime

from dotenv import load_dotenv

from commands.simulator import Simulator, build_parser
from commands.sim_state import RunConfig
from utils.errors import SlitSimError, UsageError

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config.json')


# Set up logging
def setup_logging(folder='logs', level='INFO'):
    if not os.path.exists(folder):
        os.makedirs(folder)

    log_file = os.path.join(folder, f'slitsim_{datetime.now().strftime("%Y%m%d_%H%M%S")}.log')

    logging.basicConfig(
        level=level,
        format='%(asctime)s [%(levelname)s] %(message)s',
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler()
        ]
    )


class SlitSimulator:
    def __init__(self, config_path=DEFAULT_CONFIG):
        # Load config
        try:
            with open(config_path, 'r') as f:
                self.config = json.load(f)
        except FileNotFoundError:
            logging.error(f"{config_path} not found!")
            raise
        except json.JSONDecodeError:
            logging.error(f"{config_path} is invalid!")
            raise

    async def run(self, args):
        run_config = RunConfig.from_sources(self.config, args)
        simulator = Simulator(run_config)
        return await simulator.run()


def main(argv=None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    config_path = args.config or os.getenv('SLITSIM_CONFIG', DEFAULT_CONFIG)

    try:
        app = SlitSimulator(config_path)
        log_config = app.config.get('logging', {})
        setup_logging(
            log_config.get('folder', 'logs'),
            os.getenv('SLITSIM_LOG_LEVEL', log_config.get('level', 'INFO')).upper(),
        )
        asyncio.run(app.run(args))
    except SlitSimError as e:
        logging.critical(f"Fatal error: {e}")
        return e.exit_code
    except (FileNotFoundError, json.JSONDecodeError) as e:
        logging.critical(f"Fatal error: {e}")
        return UsageError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
