"""Plain-PBM and SVG pictures of visibility grids.

Images are drawn in first-quadrant orientation: r runs left to right and
the top image row is s = height.  By default invisible points are black.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .visibility import VisibilityGrid

FORMATS = ("pbm", "svg")


@dataclass(frozen=True)
class RenderSpec:
    format: str
    N: int
    b: int
    invert: bool = False

    def __post_init__(self) -> None:
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}; expected pbm or svg")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")


def _image(grid: VisibilityGrid, invert: bool) -> np.ndarray:
    # image[y, x] with y = 0 the top row (s = height) and x = r - 1
    img = grid.to_array().T[::-1]
    return ~img if invert else img


def render_grid(grid: VisibilityGrid, spec: RenderSpec) -> bytes:
    if (grid.width, grid.height) != (spec.N, spec.N) or grid.b != spec.b:
        raise ValueError(
            f"grid is b={grid.b}, {grid.width}x{grid.height} but render spec "
            f"asks for b={spec.b}, {spec.N}x{spec.N}"
        )
    img = _image(grid, spec.invert)
    if spec.format == "pbm":
        return to_pbm(img)
    return to_svg(img)


def to_pbm(img: np.ndarray) -> bytes:
    height, width = img.shape
    lines = ["P1", f"{width} {height}"]
    lines.extend(" ".join("1" if v else "0" for v in row) for row in img)
    return ("\n".join(lines) + "\n").encode("ascii")


def to_svg(img: np.ndarray) -> bytes:
    height, width = img.shape
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width * 8}" height="{height * 8}" '
        f'viewBox="0 0 {width} {height}" shape-rendering="crispEdges">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    ys, xs = np.nonzero(img)
    out.extend(f'<rect x="{x}" y="{y}" width="1" height="1"/>' for y, x in zip(ys.tolist(), xs.tolist()))
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("ascii")


def parse_pbm(data: bytes | str, b: int, invert: bool = False) -> VisibilityGrid:
    """Inverse of the PBM renderer; b is not stored in the image."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    # plain PBM allows '#' comments anywhere
    tokens = " ".join(line.split("#", 1)[0] for line in data.splitlines()).split()
    if not tokens or tokens[0] != "P1":
        raise ValueError("not a plain PBM (P1) image")
    width, height = int(tokens[1]), int(tokens[2])
    body = "".join(tokens[3:])
    if len(body) != width * height or set(body) - {"0", "1"}:
        raise ValueError(f"expected {width * height} bits, got {len(body)}")
    img = np.frombuffer(body.encode("ascii"), dtype=np.uint8).reshape(height, width) == ord("1")
    if invert:
        img = ~img
    return VisibilityGrid.from_array(b, img[::-1].T)
