import numpy as np
import pytest

from wordmaps.matfile import MatrixFormatError, dumps, loads, read_matrix, write_matrix
from wordmaps.witness import haar_random_su


@pytest.mark.parametrize("n", [1, 2, 5])
def test_round_trip_exact(tmp_path, n):
    g = haar_random_su(n, n)
    path = tmp_path / "g.mat"
    write_matrix(path, g)
    assert np.array_equal(read_matrix(path), g)


def test_format():
    text = dumps(np.eye(2))
    assert text.splitlines() == ["2", "1+0j 0+0j", "0+0j 1+0j"]


@pytest.mark.parametrize("text", [
    "",
    "two\n1 0\n0 1\n",
    "2\n1+0j 0+0j\n",
    "2\n1+0j\n0+0j 1+0j\n",
    "2\n1+0j x\n0+0j 1+0j\n",
    "2\n2+0j 0+0j\n0+0j 0.5+0j\n",
    "2\n1j 0\n0 1j\n",
])
def test_malformed(text):
    with pytest.raises(MatrixFormatError):
        loads(text)


def test_unchecked_load():
    assert np.array_equal(loads("1\n2+0j\n", require_su=False), [[2]])
