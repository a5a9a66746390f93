"""Plain text spec files.

    # comment
    N
    v_11, v_12, ..., v_1N
    ...

Every data line after N is one generator of exactly N complex numbers in
'a+bi' form; 'j' is accepted for 'i'.
"""

import numpy as np

from qfiso.loader import Loader, SubspaceSpec, parse_complex


def parse_text(text: str, source: str = '<string>') -> SubspaceSpec:
    """SubspaceSpec from the text grammar; ValueError with the line number on errors"""
    dim = None
    rows = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if dim is None:
            try:
                dim = int(line)
            except ValueError as ex:
                raise ValueError(f'{source}:{number}: expected the dimension, got {line!r}') from ex
            if dim < 1:
                raise ValueError(f'{source}:{number}: dimension must be positive, got {dim}')
            continue
        parts = line.split(',')
        if len(parts) != dim:
            raise ValueError(f'{source}:{number}: expected {dim} entries, got {len(parts)}')
        try:
            rows.append([parse_complex(part) for part in parts])
        except ValueError as ex:
            raise ValueError(f'{source}:{number}: {ex}') from ex
    if dim is None:
        raise ValueError(f'{source}: no dimension line')
    vectors = np.array(rows, dtype=complex).reshape(len(rows), dim).T
    return SubspaceSpec(dim=dim, vectors=vectors, source=source)


class TextLoader(Loader, registered_types=['text', 'txt']):
    """Text spec file loader plugin"""

    @classmethod
    def load(cls, file: str) -> SubspaceSpec:
        with open(file, encoding='utf-8') as handle:
            return parse_text(handle.read(), source=file)
