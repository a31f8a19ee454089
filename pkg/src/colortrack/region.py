"""Region description: initial-run scan plus counter-clockwise contour walk."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .segmentation import PackedBinaryMask

# Moore neighborhood in counter-clockwise visual order (y grows downward):
# E, NE, N, NW, W, SW, S, SE
_DX = (1, 1, 0, -1, -1, -1, 0, 1)
_DY = (0, -1, -1, -1, 0, 1, 1, 1)


@dataclass(frozen=True)
class RegionDescriptor:
    """Limits and center of one detected group of contiguous pixels."""

    top: int
    bottom: int
    left: int
    right: int
    center_x: int
    center_y: int
    contour_length: int
    pixel_count: Optional[int] = None
    centroid_x: Optional[float] = None
    centroid_y: Optional[float] = None

    def csv_row(self) -> str:
        return "%d,%d,%d,%d,%d,%d,%d" % (
            self.top, self.bottom, self.left, self.right,
            self.center_x, self.center_y, self.contour_length)

    def report_line(self) -> str:
        return ("region: x %d..%d, y %d..%d, center (%d, %d), contour %d px"
                % (self.left, self.right, self.top, self.bottom,
                   self.center_x, self.center_y, self.contour_length))


@dataclass(frozen=True)
class ScanParams:
    """min_width filters out narrow noise runs during the initial scan."""

    min_width: int = 3

    def __post_init__(self):
        if self.min_width < 1:
            raise ValueError("min_width must be >= 1")


def find_initial_run(mask: PackedBinaryMask,
                     params: ScanParams) -> Optional[tuple[int, int, int]]:
    """First horizontal run of set pixels with length >= min_width.

    Scans from the top-left corner, rightward then downward. Returns
    (row, left_x, right_x) or None.
    """
    bits = mask.to_bool()
    for y in range(mask.height):
        cols = np.flatnonzero(bits[y])
        if cols.size == 0:
            continue
        breaks = np.flatnonzero(np.diff(cols) > 1)
        for run in np.split(cols, breaks + 1):
            if run.size >= params.min_width:
                return y, int(run[0]), int(run[-1])
    return None


def trace_contour(mask: PackedBinaryMask, start: tuple[int, int], *,
                  stop_rule: str = "jacob",
                  fill_count: bool = False) -> RegionDescriptor:
    """Counter-clockwise Moore-neighborhood boundary walk from a set pixel.

    stop_rule "jacob" stops when the start pixel is re-entered from the same
    direction as the first departure; this survives one-pixel-wide spurs,
    where the naive "start" rule (stop on any return to the start pixel)
    can cut the walk short. Out-of-bounds neighbors are treated as unset.
    """
    if stop_rule not in ("jacob", "start"):
        raise ValueError(f"unknown stop rule: {stop_rule!r}")
    bits = mask.to_bool()
    sx, sy = start
    if not bits[sy, sx]:
        raise ValueError(f"contour start ({sx}, {sy}) is not a set pixel")

    h, w = bits.shape

    def is_set(x, y):
        return 0 <= x < w and 0 <= y < h and bits[y, x]

    left = right = sx
    top = bottom = sy
    length = 1
    # The start pixel is the rightmost of a horizontal run, so its eastern
    # neighbor is unset; the walk backtracks from there.
    cx, cy = sx, sy
    back = 0  # direction index from current pixel toward the backtrack cell
    first_move = None
    cap = 4 * w * h
    steps = 0
    while True:
        # CCW sweep of the 3x3 neighborhood, starting just past the backtrack
        # cell; the first set pixel found is the next contour pixel.
        move = None
        d = (back + 1) % 8
        for _ in range(8):
            if is_set(cx + _DX[d], cy + _DY[d]):
                move = d
                break
            d = (d + 1) % 8
        if move is None:
            break  # isolated pixel, one-pixel region
        if (cx, cy) == (sx, sy):
            if first_move is None:
                first_move = move
            elif move == first_move:
                break  # the walk state has cycled back to its initial state
        cx += _DX[move]
        cy += _DY[move]
        # The cell examined just before the move (direction move-1 from the
        # old pixel) is unset; seen from the new pixel it lies at:
        back = (2 * (move // 2) + 6) % 8
        left = min(left, cx)
        right = max(right, cx)
        top = min(top, cy)
        bottom = max(bottom, cy)
        if (cx, cy) == (sx, sy):
            if stop_rule == "start":
                break
        else:
            length += 1
        steps += 1
        if steps > cap:
            raise RuntimeError("contour walk exceeded the step cap")

    pixel_count = None
    centroid = (None, None)
    if fill_count:
        pixel_count, centroid = _flood_stats(bits, sx, sy)
    return RegionDescriptor(
        top=top, bottom=bottom, left=left, right=right,
        center_x=int((left + right) / 2), center_y=int((top + bottom) / 2),
        contour_length=length, pixel_count=pixel_count,
        centroid_x=centroid[0], centroid_y=centroid[1])


def _flood_stats(bits: np.ndarray, sx: int, sy: int):
    """8-connected flood fill: pixel count and mean-position centroid."""
    h, w = bits.shape
    seen = np.zeros_like(bits)
    stack = [(sx, sy)]
    seen[sy, sx] = True
    n = 0
    sum_x = sum_y = 0
    while stack:
        x, y = stack.pop()
        n += 1
        sum_x += x
        sum_y += y
        for dx, dy in zip(_DX, _DY):
            nx, ny = x + dx, y + dy
            if 0 <= nx < w and 0 <= ny < h and bits[ny, nx] and not seen[ny, nx]:
                seen[ny, nx] = True
                stack.append((nx, ny))
    return n, (sum_x / n, sum_y / n)


def locate(mask: PackedBinaryMask, params: ScanParams = ScanParams(), *,
           stop_rule: str = "jacob",
           fill_count: bool = False) -> Optional[RegionDescriptor]:
    """Scan for the first qualifying run and trace its contour."""
    run = find_initial_run(mask, params)
    if run is None:
        return None
    row, _, right_x = run
    return trace_contour(mask, (right_x, row), stop_rule=stop_rule,
                         fill_count=fill_count)
