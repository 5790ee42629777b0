"""Free-space management under the overlapping maximal-space representation.

A placed block splits its host space into three overlapping residuals (the
right, front and top slabs); every other space intersecting the block is
replaced by its maximal-slab subtraction, and spaces contained in another
are pruned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import kernels
from .model import Pool


@dataclass(frozen=True)
class Space:
    x: int
    y: int
    z: int
    sl: int
    sw: int
    sh: int

    def __post_init__(self):
        if self.sl <= 0 or self.sw <= 0 or self.sh <= 0:
            raise ValueError(f"space dims must be positive: {self}")

    @property
    def volume(self) -> int:
        return self.sl * self.sw * self.sh

    def as_tuple(self) -> Tuple[int, int, int, int, int, int]:
        return (self.x, self.y, self.z, self.sl, self.sw, self.sh)


def pool_space(pool: Pool) -> Space:
    return Space(0, 0, 0, pool.length, pool.width, pool.height)


def fits(block_dims: Tuple[int, int, int], space: Space) -> bool:
    bl, bw, bh = block_dims
    return bl <= space.sl and bw <= space.sw and bh <= space.sh


def select_space(spaces: Sequence[Space]) -> Optional[Space]:
    """The space with the lowest position and the farthest left.

    Lexicographic (z, x, y); remaining ties broken by volume descending,
    then insertion order. Returns None for an empty list.
    """
    if not spaces:
        return None
    idx = kernels.select_space_index([s.as_tuple() for s in spaces])
    return spaces[idx]


def residual_spaces(space: Space, block_dims: Tuple[int, int, int]) -> List[Space]:
    """The three overlapping residuals of placing a block at the space anchor."""
    bl, bw, bh = block_dims
    if not fits(block_dims, space):
        raise ValueError(f"block {block_dims} does not fit space {space}")
    out = []
    if space.sl > bl:
        out.append(Space(space.x + bl, space.y, space.z, space.sl - bl, space.sw, space.sh))
    if space.sw > bw:
        out.append(Space(space.x, space.y + bw, space.z, space.sl, space.sw - bw, space.sh))
    if space.sh > bh:
        out.append(Space(space.x, space.y, space.z + bh, space.sl, space.sw, space.sh - bh))
    return out


def subtract_block(space: Space, region: Tuple[int, int, int, int, int, int]) -> List[Space]:
    """Maximal residual cuboids of space minus an intersecting block region.

    Returns [space] unchanged when the interiors are disjoint; otherwise up
    to six full-extent slabs (left/right in x, back/front in y, bottom/top
    in z), zero-dimension slabs omitted.
    """
    from . import _purepy
    out = _purepy._subtract(space.as_tuple(), tuple(int(v) for v in region))
    return [Space(*p) for p in out]


def contains(a: Space, b: Space) -> bool:
    return (a.x <= b.x and a.y <= b.y and a.z <= b.z and
            a.x + a.sl >= b.x + b.sl and
            a.y + a.sw >= b.y + b.sw and
            a.z + a.sh >= b.z + b.sh)


def update_spaces(spaces: Sequence[Space], chosen: Space,
                  block_dims: Tuple[int, int, int], min_dim: int = 0) -> List[Space]:
    """Space list after placing block_dims at chosen's anchor.

    Removes the chosen space (its subtraction is exactly its residuals),
    subtracts the placed region from every other intersecting space, and
    prunes any space contained in another. min_dim > 0 additionally drops
    slabs too thin for any remaining box (disable for coverage checks).
    """
    tuples = [s.as_tuple() for s in spaces]
    try:
        idx = tuples.index(chosen.as_tuple())
    except ValueError:
        raise ValueError("chosen space is not in the list") from None
    bl, bw, bh = block_dims
    if not fits(block_dims, chosen):
        raise ValueError(f"block {block_dims} does not fit chosen space {chosen}")
    kept, _ = kernels.update_space_list(tuples, idx, bl, bw, bh, min_dim)
    return [Space(*t) for t in kept]
