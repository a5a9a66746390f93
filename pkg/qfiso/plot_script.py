"""Emission of standalone matplotlib scripts for sweep CSVs"""

import os
from pathlib import Path
from string import Template
from typing import Optional

from qfiso.logger import SUB_LOGGER
from qfiso.sweep import read_sweep_csv

LOGGER = SUB_LOGGER('plot_script')

SCRIPT = Template('''\
#!/usr/bin/env python3
"""Log-log plot of |1 - Q^dagger Q|_2 against the mass, one curve per basis and grid.

Generated by qfiso from $csv_name; run it from any directory.
"""

import csv
import os.path
import sys

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
CSV_PATH = os.path.join(HERE, $csv_relative)
OUTPUT = os.path.splitext(os.path.abspath(__file__))[0] + '.pdf'


def load(path):
    curves = {}
    with open(path, newline='', encoding='utf-8') as handle:
        rows = csv.DictReader(line for line in handle if not line.startswith('#'))
        for row in rows:
            key = (int(row['dim']), row['n_basis'], int(row['grid_points']))
            curves.setdefault(key, []).append((float(row['mass']), float(row['hs_1mQdQ'])))
    return {key: sorted(points) for key, points in sorted(curves.items())}


def main():
    curves = load(CSV_PATH)
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    for (dim, n_basis, grid_points), points in curves.items():
        masses = [p[0] for p in points]
        norms = [p[1] for p in points]
        ax.loglog(masses, norms, marker='o', label=f'd={dim}, n={n_basis}, M={grid_points}')
    if not curves:
        print(f'{CSV_PATH}: no data rows', file=sys.stderr)
    ax.set_xlabel('mass m')
    ax.set_ylabel(r'$$\\|1 - Q^\\dagger Q\\|_2$$')
    ax.spines['right'].set_visible(False)
    ax.spines['top'].set_visible(False)
    if curves:
        ax.legend(fontsize='small')
    fig.savefig(OUTPUT, bbox_inches='tight')
    print(f'wrote {OUTPUT}')


if __name__ == '__main__':
    main()
''')


def emit_plot(csv_path: str, script_path: Optional[str] = None) -> Path:
    """Write a plotting script for a sweep CSV; ConfigError on a malformed header.

    The script sits next to the CSV by default and refers to it by relative path.
    """
    csv_file = Path(csv_path)
    with open(csv_file, newline='', encoding='utf-8') as handle:
        records = read_sweep_csv(handle)
    target = Path(script_path) if script_path else csv_file.with_name(f'plot_{csv_file.stem}.py')
    relative = os.path.relpath(csv_file.resolve(), target.resolve().parent)
    target.write_text(SCRIPT.substitute(csv_name=csv_file.name, csv_relative=repr(relative)),
                      encoding='utf-8')
    LOGGER.info('plot script %s for %d rows of %s', target, len(records), csv_file)
    if not records:
        LOGGER.warning('%s has no data rows, the plot will be empty', csv_file)
    return target
