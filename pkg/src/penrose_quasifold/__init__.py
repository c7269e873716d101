"""Penrose rhombus tilings in exact quasilattice coordinates, and the
symplectic quasifolds attached to their tiles by the generalized Delzant
construction."""

__version__ = "0.1.0"

from .golden import GoldenExt, GoldenRat, PHI, RHO, gf_arith, gf_sign, gx_arith, gx_sign
from .quasilattice import (
    GoldenQuasiPoint,
    QuasiPoint,
    QVector,
    cross,
    inner,
    inv_phi_scale,
    pair,
    phi_scale,
    walk_sum,
)
from .tiling import (
    Chirality,
    Patch,
    RhombusTile,
    RobinsonTriangle,
    TileKind,
    TriangleType,
    classify,
    deflate,
    deflate_patch,
    generate,
    merge_rhombi,
    seed,
    validate,
)
from .delzant import (
    ChartData,
    NDescriptor,
    PolytopeSpec,
    QuasifoldDescriptor,
    SymmetryOp,
    canonical_rotation,
    chart_groups,
    chart_slice_check,
    group_N,
    invariants_report,
    kernel_basis,
    moment_image,
    normalized_descriptor,
    polytope_of_tile,
    polytope_vertices,
    reduced_space,
)
from .io import deserialize, serialize

__all__ = [name for name in dir() if not name.startswith("_")]
