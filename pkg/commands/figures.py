"""Data behind each reproducible figure, written with a manifest that pins every input."""
import json
import logging
from datetime import datetime
from typing import List

from physics import __version__
from physics.dephasing import sample_screen_hits
from physics.measurement import MeasurementModel, coarse_grained_projectors, conditional_states_approx, conditional_states_exact
from physics.wavepacket import SampledFunction, evaluate_terms, initial_wavefunction
from utils.errors import UsageError
from .sim_commands import (
    SimCommands,
    free_evolve_table,
    grid_params,
    info_curve_table,
    measure_table,
    summary_table,
)
from .sim_state import FIGURES
from .sim_tables import Table, file_tag, json_value

FIG5_COLUMNS = ['sigma', 'I_exact_dots', 'I_approx_line', 'V', 'sigma_star']


def figure3_tables(cfg) -> List[Table]:
    """Panel (a): Psi and the conditional states at t=0 for the first sigma; panel (b): m^2 for every sigma"""
    sigma = cfg.sigmas[0]
    model = MeasurementModel(sigma, cfg.L)
    grid = cfg.grid_for(0.0)
    terms = initial_wavefunction(cfg.L)
    psi = SampledFunction.from_terms(terms, *grid)
    exact = conditional_states_exact(psi, model)
    approx = conditional_states_approx(model)
    x = psi.x
    params = {'figure': 3, 'version': __version__, 'L': cfg.L, 'sigma': sigma, 't': 0.0, **grid_params(grid)}

    states = Table.from_columns('fig3a_states', {
        'x': x,
        'Psi': psi.values.real,
        'Psi_L': exact.psi_left.values.real,
        'Psi_R': exact.psi_right.values.real,
        'Psi_L_approx': evaluate_terms(approx.psi_left, x).real,
        'Psi_R_approx': evaluate_terms(approx.psi_right, x).real,
    }, params=params, density=True)

    curves = {'x': x}
    for s in cfg.sigmas:
        f_left, f_right = coarse_grained_projectors(x, s)
        curves[f"m_L_sq_sigma{file_tag(s)}"] = f_left
        curves[f"m_R_sq_sigma{file_tag(s)}"] = f_right
    functions = Table.from_columns('fig3b_measurement_functions', curves, params={
        'figure': 3, 'version': __version__, 'L': cfg.L, 'sigmas': ' '.join(file_tag(s) for s in cfg.sigmas),
        **grid_params(grid),
    }, density=True)
    return [states, functions]


def figure4_tables(cfg, sigma: float, index: int) -> tuple:
    """Density at t for one sigma plus a simulated detection screen drawn from it"""
    t = cfg.times[0]
    table, row = measure_table(cfg, sigma, t, name=f"fig4_sigma{file_tag(sigma)}")
    table.params['figure'] = 4
    x_min, x_max = float(table.rows[0, 0]), float(table.rows[-1, 0])
    density = SampledFunction(x_min, x_max, table.column('P'))
    seed = cfg.seed + index
    hits = sample_screen_hits(density, cfg.screen_hits, seed=seed)
    screen = Table.from_columns(f"fig4_sigma{file_tag(sigma)}_hits", {'x_hit': hits},
                                params={'figure': 4, 'sigma': sigma, 't': t, 'hits': cfg.screen_hits, 'seed': seed})
    return table, screen, row


class FigureBuilder:
    """Builds and writes the data files of one figure together with its manifest"""
    def __init__(self, commands: SimCommands):
        self.commands = commands
        self.config = commands.config

    async def build(self, number: int) -> List[Table]:
        cfg = self.config
        if number == 2:
            return await self.commands.run_jobs(
                [(free_evolve_table, (cfg, t, f"fig2_t{file_tag(t)}")) for t in cfg.times]
            )
        if number == 3:
            return (await self.commands.run_jobs([(figure3_tables, (cfg,))]))[0]
        if number == 4:
            results = await self.commands.run_jobs(
                [(figure4_tables, (cfg, sigma, i)) for i, sigma in enumerate(cfg.sigmas)]
            )
            tables = []
            for density, screen, _ in results:
                tables.extend([density, screen])
            tables.append(summary_table(cfg, [row for *_, row in results], 'fig4_summary'))
            return tables
        if number == 5:
            rows = await self.commands.info_curve_rows(cfg.sigmas)
            tables = [info_curve_table(cfg, rows, name='fig5_info_curve', columns=FIG5_COLUMNS)]
            if cfg.marker_sigmas:
                # triangles: the figure 4 sigma set placed on the same curve
                markers = await self.commands.info_curve_rows(cfg.marker_sigmas)
                tables.append(info_curve_table(cfg, markers, name='fig5_triangles', columns=FIG5_COLUMNS))
            return tables
        raise UsageError(f"Figure {number} has no data to reproduce; choose one of {', '.join(map(str, FIGURES))}")

    def manifest(self, number: int, files: List[str]) -> dict:
        """Everything needed to rerun this figure exactly"""
        cfg = self.config
        return {
            'figure': number,
            'version': __version__,
            'created': datetime.now().isoformat(timespec='seconds'),
            'config': cfg.to_dict(),
            'tolerances': {
                'quad_tol': cfg.tol,
                'quad_limit': cfg.quad_limit,
                't_min_tol': cfg.t_min_tol,
                'normalization_tol': cfg.normalization_tol,
            },
            'tool_chosen_parameters': list(cfg.tool_chosen),
            'files': files,
            'runtime': self.commands.monitor.get_run_stats(),
        }

    async def reproduce(self) -> List[Table]:
        number = self.config.figure
        logging.info(f"Reproducing figure {number}")
        tables = await self.build(number)
        files = await self.commands.write_tables(tables)
        manifest = self.manifest(number, files)
        await self.commands.output.write_text(
            f"fig{number}_manifest.json", json.dumps(json_value(manifest), indent=2) + '\n'
        )
        return tables
