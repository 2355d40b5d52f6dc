import numpy as np
import pytest

from main import main
from physics.measurement import MeasurementModel
from physics.numeric_oracle import GridSpec
from physics.wavepacket import SampledFunction, evaluate_terms, initial_wavefunction

L5 = 5.0


@pytest.fixture
def model4():
    """The standard sigma=4, L=5 measurement"""
    return MeasurementModel(4.0, L5)


@pytest.fixture
def oracle_grid():
    return GridSpec()


@pytest.fixture
def psi0_on_oracle_grid(oracle_grid):
    return oracle_grid.sample(lambda x: evaluate_terms(initial_wavefunction(L5), x))


@pytest.fixture
def psi0_on_slit_grid():
    return SampledFunction.from_terms(initial_wavefunction(L5), -13.0, 13.0, 4097)


@pytest.fixture
def read_csv():
    """Parse a data file into ({param: text}, columns, 2-D array)"""
    def read(path):
        params, lines = {}, []
        with open(path) as f:
            for line in f.read().splitlines():
                if line.startswith('#'):
                    key, _, value = line[1:].strip().partition('=')
                    params[key] = value
                else:
                    lines.append(line)
        columns = lines[0].split(',')
        data = np.loadtxt(lines[1:], delimiter=',', ndmin=2)
        return params, columns, data
    return read


@pytest.fixture
def run_cli(tmp_path, monkeypatch):
    """Run main() with logs and output kept under tmp_path; returns (exit code, output folder)"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv('SLITSIM_CONFIG', raising=False)

    def run(*argv, out='out'):
        folder = tmp_path / out
        return main([*argv, '--out', str(folder)]), folder
    return run
