"""JSON spec files: {"dim": N, "vectors": [["a+bi", ...], ...]}"""

import json

import numpy as np

from qfiso.loader import Loader, SubspaceSpec, parse_complex


def _entry(value) -> complex:
    if isinstance(value, str):
        return parse_complex(value)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f'bad vector entry {value!r}')


class JsonLoader(Loader, registered_types=['json']):
    """Json spec file loader plugin"""

    @classmethod
    def load(cls, file: str) -> SubspaceSpec:
        with open(file, encoding='utf-8') as handle:
            data = json.load(handle)
        if not isinstance(data, dict) or 'dim' not in data or 'vectors' not in data:
            raise ValueError(f"{file}: expected an object with 'dim' and 'vectors'")
        dim = int(data['dim'])
        rows = [[_entry(v) for v in row] for row in data['vectors']]
        if any(len(row) != dim for row in rows):
            raise ValueError(f'{file}: every vector needs {dim} entries')
        vectors = np.array(rows, dtype=complex).reshape(len(rows), dim).T
        return SubspaceSpec(dim=dim, vectors=vectors, source=file)
