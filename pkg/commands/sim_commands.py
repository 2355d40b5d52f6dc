import os
import math
import asyncio
import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from physics import __version__
from physics.dephasing import PhaseEnsemble, dephased_density_analytic, dephased_density_monte_carlo
from physics.info_metrics import (
    ObserverChain,
    info_visibility_curve,
    sigma_star,
    system_spectrum,
    von_neumann_entropy,
)
from physics.measurement import (
    MeasurementModel,
    apparatus_state_approx,
    apparatus_state_exact,
    asymptotic_visibility,
    conditional_states_approx,
    conditional_states_exact,
    evolved_conditional_wavefunctions,
    measured_density,
    visibility,
    visibility_t_min,
)
from physics.numeric_oracle import hermitian_2x2_eigenvalues
from physics.wavepacket import evaluate_terms, free_density, initial_wavefunction
from utils.errors import ApproximationDomainError, DomainError
from utils.monitoring import RunMonitor
from utils.output_manager import OutputManager
from .sim_state import RunConfig
from .sim_tables import Table, file_tag, gnuplot_stub, render

Job = Tuple[Callable, tuple]


def grid_params(grid) -> dict:
    x_min, x_max, n = grid
    return {'x_min': x_min, 'x_max': x_max, 'grid_n': n}


def check_normalization(table: Table, column: str, tol: float) -> float:
    """Warn when a density column does not integrate to one on its own grid"""
    total = table.integral(column)
    if abs(total - 1.0) > tol:
        logging.warning(f"{table.name}: column {column} integrates to {total:.10f} (tolerance {tol:g}); widen the grid")
    return total


def free_evolve_table(cfg: RunConfig, t: float, name: Optional[str] = None) -> Table:
    """(x, P) of the unmeasured particle at time t"""
    grid = cfg.grid_for(t)
    x = np.linspace(*grid)
    table = Table.from_columns(
        name or f"free_evolve_t{file_tag(t)}",
        {'x': x, 'P': free_density(cfg.L, t)(x)},
        params={'command': 'free-evolve', 'version': __version__, 'L': cfg.L, 't': t, **grid_params(grid)},
        density=True,
    )
    check_normalization(table, 'P', cfg.normalization_tol)
    return table


def _finite_time_visibility(model: MeasurementModel, t: float, tol: float) -> float:
    try:
        return visibility(model, t, tol)
    except DomainError as e:
        logging.warning(f"sigma={model.sigma}: {e}")
        return math.nan


def measure_table(cfg: RunConfig, sigma: float, t: float, name: Optional[str] = None) -> Tuple[Table, list]:
    """(x, P_sigma, |Psi^L|^2/2, |Psi^R|^2/2) at time t plus one summary row"""
    model = MeasurementModel(sigma, cfg.L)
    grid = cfg.grid_for(t)
    x = np.linspace(*grid)
    density = measured_density(model, t)(x)
    psi_left, psi_right = evolved_conditional_wavefunctions(model, t)
    pair = conditional_states_approx(model)

    beta_value = model.beta
    v_asymptotic = asymptotic_visibility(beta_value, cfg.L)
    v_t = _finite_time_visibility(model, t, cfg.t_min_tol) if t > 0 else math.nan
    t_min = visibility_t_min(model, cfg.t_min_tol)
    overlap = pair.overlap().real

    table = Table.from_columns(
        name or f"measure_t{file_tag(t)}_sigma{file_tag(sigma)}",
        {
            'x': x,
            'P': density,
            'P_L': 0.5 * np.abs(evaluate_terms(psi_left, x)) ** 2,
            'P_R': 0.5 * np.abs(evaluate_terms(psi_right, x)) ** 2,
        },
        params={
            'command': 'measure', 'version': __version__, 'L': cfg.L, 'sigma': sigma, 't': t,
            'beta': beta_value, 'V_asymptotic': v_asymptotic, 'V_t': v_t, 't_min': t_min,
            **grid_params(grid),
        },
        density=True,
    )
    check_normalization(table, 'P', cfg.normalization_tol)
    return table, [sigma, t, beta_value, overlap, v_asymptotic, v_t, t_min]


SUMMARY_COLUMNS = ['sigma', 't', 'beta', 'overlap', 'V_asymptotic', 'V_t', 't_min']


def summary_table(cfg: RunConfig, rows: Sequence[list], name: str) -> Table:
    return Table(name, list(SUMMARY_COLUMNS), np.array(rows, dtype=float),
                 params={'command': 'measure', 'version': __version__, 'L': cfg.L})


APPARATUS_COLUMNS = [
    'sigma',
    'exact_rho_LL', 'exact_rho_LR_re', 'exact_rho_LR_im', 'exact_rho_RR',
    'exact_lambda_1', 'exact_lambda_2', 'exact_H', 'exact_I_SA', 'exact_I_SO', 'exact_error_estimate',
    'approx_rho_LR', 'approx_lambda_1', 'approx_lambda_2', 'approx_H', 'approx_I_SA',
    'grid_rho_LR', 'system_lambda_1', 'system_lambda_2',
]


def apparatus_row(cfg: RunConfig, sigma: float) -> list:
    """Exact (quadrature), closed-form and grid apparatus states for one sigma"""
    model = MeasurementModel(sigma, cfg.L)
    exact = apparatus_state_exact(initial_wavefunction(cfg.L), model, tol=cfg.tol, limit=cfg.quad_limit)
    exact_chain = ObserverChain(hermitian_2x2_eigenvalues(exact))

    try:
        approx = apparatus_state_approx(model)
        approx_spec = hermitian_2x2_eigenvalues(approx)
        approx_part = [approx.rho_lr.real, *approx_spec.eigenvalues,
                       von_neumann_entropy(approx_spec), 2.0 * von_neumann_entropy(approx_spec)]
    except ApproximationDomainError as e:
        logging.warning(f"Closed-form apparatus state skipped: {e}")
        approx_part = [math.nan] * 5

    # grid cross-check on the oracle grid; Schmidt: rho_S and rho_A share a spectrum
    psi0 = cfg.oracle.sample(lambda x: evaluate_terms(initial_wavefunction(cfg.L), x))
    on_grid = apparatus_state_exact(psi0, model)
    system = system_spectrum(conditional_states_exact(psi0, model))

    return [
        sigma,
        exact.rho_ll.real, exact.rho_lr.real, exact.rho_lr.imag, exact.rho_rr.real,
        *exact_chain.spectrum.eigenvalues, exact_chain.entropy_system,
        exact_chain.mutual_info_system_apparatus, exact_chain.mutual_info_system_observer,
        exact.error_estimate,
        *approx_part,
        on_grid.rho_lr.real, *system.eigenvalues,
    ]


def apparatus_table(cfg: RunConfig, rows: Sequence[list]) -> Table:
    return Table('apparatus', list(APPARATUS_COLUMNS), np.array(rows, dtype=float),
                 params={'command': 'apparatus', 'version': __version__, 'L': cfg.L,
                         'quad_tol': cfg.tol, 'quad_limit': cfg.quad_limit,
                         'oracle_n': cfg.oracle.n, 'oracle_x_max': cfg.oracle.x_max})


INFO_COLUMNS = ['sigma', 'I_exact', 'I_approx', 'V', 'sigma_star']


def info_curve_rows(cfg: RunConfig, sigmas: Sequence[float]) -> List[list]:
    star = sigma_star(cfg.L)
    return [[row.sigma, row.info_exact, row.info_approx, row.visibility, star]
            for row in info_visibility_curve(cfg.L, sigmas, cfg.tol)]


def info_curve_table(cfg: RunConfig, rows: Sequence[list], name: str = 'info_curve',
                     columns: Optional[List[str]] = None) -> Table:
    return Table(name, list(columns or INFO_COLUMNS), np.array(rows, dtype=float),
                 params={'command': 'info-curve', 'version': __version__, 'L': cfg.L,
                         'sigma_star': sigma_star(cfg.L), 'quad_tol': cfg.tol})


def dephase_table(cfg: RunConfig, t: float, name: Optional[str] = None) -> Table:
    """(x, P_analytic, P_mc, stderr) for the configured gamma, sample count and seed"""
    gamma = cfg.params.gamma
    grid = cfg.grid_for(t)
    ensemble = PhaseEnsemble(gamma, cfg.samples, cfg.seed)
    mc = dephased_density_monte_carlo(cfg.L, ensemble, t, grid, cfg.chunk_size)
    x = mc.density.x
    table = Table.from_columns(
        name or f"dephase_t{file_tag(t)}_gamma{file_tag(gamma)}",
        {'x': x, 'P_analytic': dephased_density_analytic(cfg.L, gamma, t)(x),
         'P_mc': mc.density.values, 'stderr': mc.stderr},
        params={'command': 'dephase', 'version': __version__, 'L': cfg.L, 't': t, 'gamma': gamma,
                'damping': math.exp(-0.5 * gamma * gamma), 'samples': cfg.samples, 'seed': cfg.seed,
                **grid_params(grid)},
        density=True,
    )
    check_normalization(table, 'P_analytic', cfg.normalization_tol)
    return table


class SimCommands:
    """Runs each command: numerics off the event loop, results written in request order"""
    def __init__(self, config: RunConfig, output: OutputManager, monitor: RunMonitor):
        self.config = config
        self.output = output
        self.monitor = monitor

    async def run_jobs(self, jobs: Sequence[Job]) -> list:
        """Run independent jobs in worker threads; results come back in job order"""
        return list(await asyncio.gather(*(asyncio.to_thread(func, *args) for func, args in jobs)))

    def data_manifest(self) -> dict:
        return {'version': __version__, 'command': self.config.command, 'seed': self.config.seed}

    async def write_table(self, table: Table) -> List[str]:
        """Write a table in the configured format, plus a gnuplot stub when asked"""
        ext = 'json' if self.config.fmt == 'json' else 'csv'
        filename = f"{table.name}.{ext}"
        paths = [await self.output.write_text(filename, render(table, self.config.fmt, self.data_manifest()))]
        if self.config.gnuplot:
            if ext == 'csv':
                paths.append(await self.output.write_text(f"{table.name}.gp", gnuplot_stub(table, filename)))
            else:
                logging.warning(f"Skipping gnuplot stub for {filename}: gnuplot reads the csv format only")
        return paths

    async def write_tables(self, tables: Sequence[Table]) -> List[str]:
        paths = []
        for table in tables:
            paths.extend(await self.write_table(table))
        return paths

    async def free_evolve(self) -> List[Table]:
        cfg = self.config
        tables = await self.run_jobs([(free_evolve_table, (cfg, t)) for t in cfg.times])
        await self.write_tables(tables)
        return tables

    async def measure(self) -> List[Table]:
        cfg = self.config
        tables = []
        for t in cfg.times:
            results = await self.run_jobs([(measure_table, (cfg, sigma, t)) for sigma in cfg.sigmas])
            tables.extend(table for table, _ in results)
            tables.append(summary_table(cfg, [row for _, row in results], f"measure_summary_t{file_tag(t)}"))
        await self.write_tables(tables)
        return tables

    async def apparatus(self) -> List[Table]:
        cfg = self.config
        rows = await self.run_jobs([(apparatus_row, (cfg, sigma)) for sigma in cfg.sigmas])
        tables = [apparatus_table(cfg, rows)]
        await self.write_tables(tables)
        return tables

    async def info_curve_rows(self, sigmas: Sequence[float]) -> List[list]:
        """Curve rows computed in contiguous sigma blocks, concatenated in grid order"""
        sigmas = sorted(sigmas)
        blocks = [list(block) for block in np.array_split(sigmas, min(len(sigmas), os.cpu_count() or 1)) if len(block)]
        results = await self.run_jobs([(info_curve_rows, (self.config, block)) for block in blocks])
        return [row for block_rows in results for row in block_rows]

    async def info_curve(self) -> List[Table]:
        rows = await self.info_curve_rows(self.config.sigmas)
        tables = [info_curve_table(self.config, rows)]
        await self.write_tables(tables)
        return tables

    async def dephase(self) -> List[Table]:
        cfg = self.config
        tables = await self.run_jobs([(dephase_table, (cfg, t)) for t in cfg.times])
        await self.write_tables(tables)
        return tables
