import math
import logging
from dataclasses import asdict, dataclass, field
from typing import Optional, Tuple

from physics.info_metrics import default_sigma_grid
from physics.numeric_oracle import GridSpec
from physics.wavepacket import ModelParams, default_grid
from utils.errors import DomainError, UsageError

COMMANDS = ('free-evolve', 'measure', 'apparatus', 'info-curve', 'dephase', 'reproduce-fig')
FORMATS = ('csv', 'json')
FIGURES = (2, 3, 4, 5)

# Values printed in the figure captions; anything else a figure needs is a tool choice
CAPTION_L = 5.0
CAPTION_FIG3_SIGMA = 4.0
CAPTION_FIG4_T = 30.0
CAPTION_FIG5_SIGMA_RANGE = (0.01, 50.0)
FIG3_SIGMA_FAMILY = (CAPTION_FIG3_SIGMA, 0.0, 1.5, 15.0, math.inf)
MIN_GRID_POINTS = 16


def _first(*values):
    """First value that is not None"""
    for value in values:
        if value is not None:
            return value
    return None


def _floats(values) -> Tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class RunConfig:
    """Effective settings of one command run: config.json overlaid with CLI flags"""
    command: str
    params: ModelParams
    times: Tuple[float, ...]
    sigmas: Tuple[float, ...]
    grid_n: int = 4096
    x_max: Optional[float] = None
    oracle: GridSpec = field(default_factory=GridSpec)
    out: str = './output'
    fmt: str = 'csv'
    seed: int = 0
    samples: int = 100000
    chunk_size: int = 256
    tol: float = 1e-10
    quad_limit: int = 200
    t_min_tol: float = 1e-6
    normalization_tol: float = 1e-6
    screen_hits: int = 2000
    figure: Optional[int] = None
    gnuplot: bool = False
    tool_chosen: Tuple[str, ...] = ()
    marker_sigmas: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"Unknown command '{self.command}', expected one of {', '.join(COMMANDS)}")
        if self.fmt not in FORMATS:
            raise UsageError(f"Unknown format '{self.fmt}', expected csv or json")
        if not self.times:
            raise UsageError("Time list is empty; pass at least one value with --t")
        if not self.sigmas:
            raise UsageError("Sigma list is empty; pass at least one value with --sigma")
        if self.command == 'reproduce-fig' and self.figure not in FIGURES:
            raise UsageError(
                f"Figure {self.figure} has no data to reproduce; choose one of {', '.join(map(str, FIGURES))}"
            )
        for t in self.times:
            if not math.isfinite(t) or t < 0:
                raise DomainError(f"Time must be finite and non-negative, got t={t}")
        for sigma in self.sigmas:
            if math.isnan(sigma) or sigma < 0:
                raise DomainError(f"Measurement precision must be >= 0, got sigma={sigma}")
        if self.grid_n < MIN_GRID_POINTS:
            raise DomainError(f"Grid needs at least {MIN_GRID_POINTS} points, got {self.grid_n}")
        if self.x_max is not None and not self.x_max > 0:
            raise DomainError(f"--x-max must be positive, got {self.x_max}")
        if self.samples < 1:
            raise DomainError(f"Monte Carlo needs at least one sample, got {self.samples}")
        if self.chunk_size < 1:
            raise DomainError(f"Chunk size must be positive, got {self.chunk_size}")
        if not self.tol > 0:
            raise DomainError(f"Quadrature tolerance must be positive, got {self.tol}")

    @property
    def L(self) -> float:
        return self.params.L

    def grid_for(self, t: float) -> Tuple[float, float, int]:
        """Output grid for time t: symmetric [-x_max, x_max] if given, else the spread-aware default"""
        if self.x_max is not None:
            return -self.x_max, self.x_max, self.grid_n
        return default_grid(self.L, t, self.grid_n)

    def to_dict(self) -> dict:
        data = asdict(self)
        data['params'] = self.params.to_dict()
        data['times'] = list(self.times)
        data['sigmas'] = list(self.sigmas)
        data['tool_chosen'] = list(self.tool_chosen)
        data['marker_sigmas'] = list(self.marker_sigmas)
        return data

    @classmethod
    def from_sources(cls, config: dict, args) -> "RunConfig":
        """Merge config.json sections with parsed flags; flags left at None fall back to config"""
        command = args.command
        model = config['model']
        grid = config['grid']
        tolerances = config['tolerances']
        info = config['info_curve']
        dephase = config['dephase']
        output = config['output']
        figure = getattr(args, 'figure', None)
        tool_chosen = []
        marker_sigmas = ()

        L = float(_first(args.L, model['L']))
        config_t = [float(model['t'])]
        config_sigma = [float(model['sigma'])]

        if command == 'free-evolve':
            times = args.t or config['free_evolve']['times']
            sigmas = args.sigma or config_sigma
        elif command == 'measure':
            times = args.t or config_t
            sigmas = args.sigma or config['measure']['sigmas']
        elif command == 'info-curve':
            times = args.t or config_t
            sigmas = args.sigma or default_sigma_grid(
                L, int(info['points']), float(info['sigma_min']), float(info['sigma_max_factor']),
                include_limits=True,
            )
        elif command == 'reproduce-fig':
            L = float(_first(args.L, CAPTION_L))
            times, sigmas = cls._figure_defaults(figure, config, args, L, tool_chosen)
            if figure == 5:
                marker_sigmas = _floats(config['measure']['sigmas'])
                tool_chosen.append('marker_sigmas: figure 5 triangles reuse the figure 4 sigma set')
        else:
            times = args.t or config_t
            sigmas = args.sigma or config_sigma

        times, sigmas = _floats(times), _floats(sigmas)
        if not times or not sigmas:
            raise UsageError("Time and sigma lists must not be empty")
        params = ModelParams(L=L, sigma=sigmas[0], t=times[0], gamma=float(_first(args.gamma, model['gamma'])))
        oracle = GridSpec(-float(grid['oracle_x_max']), float(grid['oracle_x_max']), int(grid['oracle_n']))

        run_config = cls(
            command=command,
            params=params,
            times=times,
            sigmas=sigmas,
            grid_n=int(_first(args.grid_n, grid['n'])),
            x_max=_first(args.x_max, grid.get('x_max')),
            oracle=oracle,
            out=str(_first(args.out, output['folder'])),
            fmt=_first(args.format, output['format']),
            seed=int(_first(args.seed, dephase['seed'])),
            samples=int(_first(args.samples, dephase['samples'])),
            chunk_size=int(dephase['chunk_size']),
            tol=float(_first(args.tol, tolerances['quad_tol'])),
            quad_limit=int(tolerances['quad_limit']),
            t_min_tol=float(tolerances['t_min_tol']),
            normalization_tol=float(tolerances['normalization_tol']),
            screen_hits=int(config.get('reproduce_fig', {}).get('screen_hits', 2000)),
            figure=figure,
            gnuplot=bool(args.gnuplot or output.get('gnuplot', False)),
            tool_chosen=tuple(tool_chosen),
            marker_sigmas=marker_sigmas,
        )
        logging.debug(f"Effective run config: {run_config.to_dict()}")
        return run_config

    @staticmethod
    def _figure_defaults(figure, config, args, L, tool_chosen):
        """Times and sigmas a figure uses unless overridden, recording tool-chosen values"""
        if figure == 2:
            if not args.t:
                tool_chosen.append('times: figure 2 panel times are not given in the caption; tool default')
            return args.t or config['free_evolve']['times'], args.sigma or [math.inf]
        if figure == 3:
            if not args.sigma:
                tool_chosen.append('sigmas: figure 3(b) curves beyond sigma=4 are a tool-chosen family')
            return args.t or [0.0], args.sigma or FIG3_SIGMA_FAMILY
        if figure == 4:
            if not args.sigma:
                tool_chosen.append('sigmas: figure 4 middle values are not given in the caption; tool default')
            return args.t or [CAPTION_FIG4_T], args.sigma or config['measure']['sigmas']
        if figure == 5:
            if args.sigma:
                return args.t or [0.0], args.sigma
            low, high = CAPTION_FIG5_SIGMA_RANGE
            points = int(config['info_curve']['points'])
            if points != 200:
                tool_chosen.append(f'info_curve.points={points}')
            sigmas = default_sigma_grid(L, points, low, high / L, include_limits=False)
            return args.t or [0.0], sigmas
        raise UsageError(f"Figure {figure} has no data to reproduce; choose one of {', '.join(map(str, FIGURES))}")
