"""Small precubical sets used by the verification suite and the tests."""
from __future__ import annotations

from .presheaf import PrecubicalSet, boundary, grid, standard_cube, tensor

# squares removed from the 3x3 grid; each hole leaves two non-homotopic
# routes between its corners
FLAG_HOLES = ((1, 0), (1, 2))


def square() -> PrecubicalSet:
    return standard_cube(2)


def hollow_square() -> PrecubicalSet:
    return boundary(standard_cube(2), 2)


def cube3() -> PrecubicalSet:
    return standard_cube(3)


def edge_tensor_cube() -> PrecubicalSet:
    """The 3-fold tensor product of the interval."""
    I = standard_cube(1)
    return tensor(tensor(I, I), I)


def truncated_tensor(k: int) -> PrecubicalSet:
    return boundary(edge_tensor_cube(), k)


def flag_grid() -> PrecubicalSet:
    return grid(3, 3, FLAG_HOLES)


def corpus() -> dict[str, PrecubicalSet]:
    return {
        "square": square(),
        "hollow_square": hollow_square(),
        "cube3": cube3(),
        "tensor3_boundary": truncated_tensor(3),
        "tensor3_edges": truncated_tensor(2),
        "flag_grid": flag_grid(),
    }


def vertex_pairs(K: PrecubicalSet) -> list[tuple[str, str]]:
    vs = K.cells(0)
    return [(a, b) for a in vs for b in vs]
