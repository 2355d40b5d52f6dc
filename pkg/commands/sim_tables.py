import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy.integrate import simpson

FLOAT_FORMAT = '%.17g'


def format_value(value) -> str:
    """Lossless text form of a number; inf and nan spelled out"""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    return str(value)


def json_value(value):
    """JSON has no inf/nan: inf becomes the string 'inf', nan becomes null"""
    if isinstance(value, dict):
        return {k: json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_value(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
    return value


def file_tag(value: float) -> str:
    """Short parameter tag for file names, e.g. 30, 1.5, inf"""
    return '%g' % value


@dataclass
class Table:
    """One output data set: named columns of floats plus the parameters that produced them"""
    name: str
    columns: List[str]
    rows: np.ndarray
    params: Dict = field(default_factory=dict)
    density: bool = False  # first column is x, the others are functions of x

    def __post_init__(self):
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if self.rows.size and self.rows.shape[1] != len(self.columns):
            raise ValueError(f"Table {self.name} has {len(self.columns)} columns but rows of width {self.rows.shape[1]}")

    @classmethod
    def from_columns(cls, name: str, columns: Dict[str, np.ndarray], params: Optional[Dict] = None,
                     density: bool = False) -> "Table":
        names = list(columns)
        rows = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
        return cls(name, names, rows, dict(params or {}), density)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def integral(self, name: str) -> float:
        """Simpson integral of a density column over the table's own x grid"""
        x = self.rows[:, 0]
        return float(simpson(self.column(name), x=x))


def render_csv(table: Table) -> str:
    """'#' parameter lines, a header row, then rows with 17 significant digits"""
    buf = io.StringIO()
    for key, value in table.params.items():
        buf.write(f"# {key}={format_value(value)}\n")
    buf.write(','.join(table.columns) + '\n')
    np.savetxt(buf, table.rows, fmt=FLOAT_FORMAT, delimiter=',')
    return buf.getvalue()


def render_json(table: Table, manifest: Optional[Dict] = None) -> str:
    """{params, columns, data, manifest}; density columns become [x, value] pairs"""
    if table.density:
        x = table.rows[:, 0]
        data = {name: np.column_stack([x, table.rows[:, i]]).tolist()
                for i, name in enumerate(table.columns) if i > 0}
    else:
        data = table.rows.tolist()
    document = {
        'params': table.params,
        'columns': table.columns,
        'data': data,
        'manifest': manifest or {},
    }
    return json.dumps(json_value(document), indent=2) + '\n'


def render(table: Table, fmt: str, manifest: Optional[Dict] = None) -> str:
    if fmt == 'json':
        return render_json(table, manifest)
    return render_csv(table)


def gnuplot_stub(table: Table, data_filename: str) -> str:
    """Minimal gnuplot script plotting every column against the first"""
    lines = [
        f"# gnuplot script for {data_filename}",
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        f"set xlabel '{table.columns[0]}'",
    ]
    if table.name.startswith('fig5') or table.columns[0] == 'sigma':
        lines.append("set logscale x")
    series = [f"'{data_filename}' using 1:{i + 1} with lines" if i == 1 else f"'' using 1:{i + 1} with lines"
              for i in range(1, len(table.columns))]
    lines.append('plot ' + ', \\\n     '.join(series))
    return '\n'.join(lines) + '\n'
