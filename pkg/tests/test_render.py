import pytest

from lattice_sight.render import RenderSpec, parse_pbm, render_grid
from lattice_sight.visibility import count_invisible, sieve_grid


def pbm(b, n, invert=False):
    return render_grid(sieve_grid(b, n), RenderSpec("pbm", n, b, invert)).decode()


def test_pbm_2x2():
    assert pbm(1, 2) == "P1\n2 2\n0 1\n0 0\n"


def test_pbm_1x1():
    assert pbm(1, 1) == "P1\n1 1\n0\n"


def test_pbm_orientation():
    lines = pbm(2, 8).splitlines()
    # top image row is s = 8: (2, 8), (4, 8), (6, 8), (8, 8) are 2-invisible
    assert lines[2].split() == ["0", "1", "0", "1", "0", "1", "0", "1"]
    # bottom row is s = 1: all visible
    assert set(lines[-1].split()) == {"0"}


@pytest.mark.parametrize("b", [1, 2, 3, 4])
def test_pbm_bit_count_matches_density(b):
    text = pbm(b, 50)
    ones = sum(line.split().count("1") for line in text.splitlines()[2:])
    assert ones == count_invisible(b, 50, "brute")


def test_pbm_399():
    assert sum(tok == "1" for tok in pbm(2, 50).split()[3:]) == 399


@pytest.mark.parametrize("b, n", [(1, 1), (1, 17), (2, 50), (3, 33)])
def test_pbm_round_trip(b, n):
    grid = sieve_grid(b, n)
    data = render_grid(grid, RenderSpec("pbm", n, b))
    assert parse_pbm(data, b) == grid
    inv = render_grid(grid, RenderSpec("pbm", n, b, invert=True))
    assert parse_pbm(inv, b, invert=True) == grid
    assert inv != data


def test_parse_pbm_comments():
    grid = parse_pbm("P1\n# comment\n2 2\n0 1\n0 0\n", 1)
    assert grid == sieve_grid(1, 2)


def test_svg_one_square_per_invisible_point():
    svg = render_grid(sieve_grid(1, 10), RenderSpec("svg", 10, 1)).decode()
    assert svg.startswith("<svg")
    squares = svg.count('width="1" height="1"')
    assert squares == count_invisible(1, 10, "sieve")
    # (2, 2) sits at column x = 1 and image row y = 10 - 2
    assert '<rect x="1" y="8" width="1" height="1"/>' in svg


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        render_grid(sieve_grid(1, 10), RenderSpec("pbm", 11, 1))
    with pytest.raises(ValueError):
        render_grid(sieve_grid(1, 10), RenderSpec("pbm", 10, 2))
    with pytest.raises(ValueError):
        render_grid(sieve_grid(1, 10, 12), RenderSpec("pbm", 10, 1))


def test_spec_validation():
    with pytest.raises(ValueError):
        RenderSpec("png", 10, 1)
    with pytest.raises(ValueError):
        RenderSpec("pbm", 0, 1)
