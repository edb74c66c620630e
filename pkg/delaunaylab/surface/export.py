"""Writers for mesh geometry: OBJ, binary PLY and CSV."""
from enum import Enum
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
from loguru import logger

from delaunaylab.surface.mesh import SurfaceMesh
from delaunaylab.utils.errors import ExportError

FLOAT_FORMAT = '%.15g'


class MeshFormat(Enum):
    OBJ = 'obj'
    PLY = 'ply'
    CSV = 'csv'


def _obj_text(mesh: SurfaceMesh) -> str:
    lines = [f'# {mesh.vertex_count} vertices, {len(mesh.faces)} quads']
    lines += ['v ' + ' '.join(FLOAT_FORMAT % c for c in v) for v in mesh.vertices]
    lines += ['vn ' + ' '.join(FLOAT_FORMAT % c for c in n) for n in mesh.normals]
    lines += ['f ' + ' '.join(f'{i}//{i}' for i in face + 1) for face in mesh.faces]
    return '\n'.join(lines) + '\n'


def _ply_bytes(mesh: SurfaceMesh) -> bytes:
    header = '\n'.join(
        [
            'ply',
            'format binary_little_endian 1.0',
            f'element vertex {mesh.vertex_count}',
            'property double x',
            'property double y',
            'property double z',
            'property double nx',
            'property double ny',
            'property double nz',
            f'element face {len(mesh.faces)}',
            'property list uchar int vertex_indices',
            'end_header',
        ]
    )
    vertex_type = np.dtype([(name, '<f8') for name in ('x', 'y', 'z', 'nx', 'ny', 'nz')])
    vertices = np.empty(mesh.vertex_count, dtype=vertex_type)
    for i, name in enumerate(('x', 'y', 'z')):
        vertices[name] = mesh.vertices[:, i]
        vertices['n' + name] = mesh.normals[:, i]
    face_type = np.dtype([('count', 'u1'), ('indices', '<i4', (mesh.faces.shape[1],))])
    faces = np.empty(len(mesh.faces), dtype=face_type)
    faces['count'] = mesh.faces.shape[1]
    faces['indices'] = mesh.faces
    return (header + '\n').encode('ascii') + vertices.tobytes() + faces.tobytes()


def mesh_frame(mesh: SurfaceMesh) -> pd.DataFrame:
    data = np.hstack([mesh.vertices, mesh.normals, mesh.param_coords])
    return pd.DataFrame(data, columns=['x', 'y', 'z', 'nx', 'ny', 'nz', 't', 'theta'])


def export_mesh(mesh: SurfaceMesh, path: Union[str, Path], fmt: MeshFormat = MeshFormat.OBJ) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt is MeshFormat.OBJ:
            path.write_text(_obj_text(mesh))
        elif fmt is MeshFormat.PLY:
            path.write_bytes(_ply_bytes(mesh))
        else:
            mesh_frame(mesh).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    except OSError as e:
        raise ExportError(f'cannot write {fmt.value.upper()} mesh to {path}: {e}') from e
    logger.info(f'Wrote {mesh.vertex_count} vertices to {path}')
    return path
